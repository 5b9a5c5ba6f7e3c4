#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "equidist/discrepancy.hpp"
#include "equidist/sequences.hpp"
#include "oracles.hpp"

using namespace equidist;

namespace {

PointSet gen(GeneratorKind k, std::size_t n, std::uint64_t seed = 1) {
  GeneratorSpec s;
  s.kind = k;
  s.seed = seed;
  return generate(s, n);
}

std::vector<double> vec(const PointSet& p) { return {p.values().begin(), p.values().end()}; }

} // namespace

TEST(ArcDiscrepancy, MatchesExhaustiveSearch) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t n = 1 + seed % 40;
    const PointSet p = gen(GeneratorKind::uniform_random, n, seed);
    EXPECT_EQ(arc_discrepancy(p).d_n, oracle::discrepancy(vec(p))) << seed;
  }
}

TEST(ArcDiscrepancy, MatchesExhaustiveSearchWithTies) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 g(seed);
    std::vector<double> x;
    for (int i = 0; i < 20; ++i)
      x.push_back(static_cast<double>(g() % 16) / 16.0);
    EXPECT_EQ(arc_discrepancy(PointSet(x)).d_n, oracle::discrepancy(x));
  }
  const PointSet dup = gen(GeneratorKind::duplicated, 30, 4);
  EXPECT_EQ(arc_discrepancy(dup).d_n, oracle::discrepancy(vec(dup)));
}

TEST(ArcDiscrepancy, NoRandomArcExceedsIt) {
  const PointSet p = gen(GeneratorKind::uniform_random, 25, 77);
  const double d = arc_discrepancy(p).d_n;
  std::mt19937_64 g(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 20000; ++k) {
    const double a = u(g), len = u(g), b = a + len;
    std::size_t c = 0;
    for (double x : p.values())
      c += (x >= a && x <= b) || (x + 1.0 >= a && x + 1.0 <= b);
    EXPECT_LE(std::abs(static_cast<double>(c) / 25.0 - len), d + 1e-15);
  }
}

TEST(ArcDiscrepancy, LatticeIsOneOverN) {
  for (std::size_t n : {1u, 2u, 4u, 64u, 1024u})
    EXPECT_EQ(arc_discrepancy(gen(GeneratorKind::lattice, n)).d_n, 1.0 / static_cast<double>(n)) << n;
  for (std::size_t n : {3u, 10u, 100u, 999u})
    EXPECT_NEAR(arc_discrepancy(gen(GeneratorKind::lattice, n)).d_n, 1.0 / static_cast<double>(n), 4e-16) << n;
}

TEST(ArcDiscrepancy, WitnessAttainsValue) {
  const PointSet p = gen(GeneratorKind::clustered, 50, 3);
  const DiscrepancyResult r = arc_discrepancy(p);
  EXPECT_TRUE(r.witness.closed);  // a cluster is an excess of points
  double len = r.witness.right - r.witness.left;
  if (len < 0.0)
    len += 1.0;
  std::size_t c = 0;
  for (double x : p.values())
    c += x >= r.witness.left && x <= r.witness.right;
  EXPECT_DOUBLE_EQ(static_cast<double>(c) / 50.0 - len, r.d_n);
  EXPECT_EQ(r.n_points, 50u);
}

TEST(ArcDiscrepancy, ComplementTieGoesToSmallestLeft) {
  // the closed arc [0.9, 0.1] and its open complement (0.1, 0.9) deviate
  // equally; the open one starts further left
  const PointSet p(std::vector<double>{0.0, 0.1, 0.9});
  const DiscrepancyResult r = arc_discrepancy(p);
  EXPECT_FALSE(r.witness.closed);
  EXPECT_NEAR(r.d_n, 0.8, 1e-15);
  EXPECT_EQ(r.witness.left, 0.1);
  EXPECT_EQ(r.witness.right, 0.9);
}

TEST(StarDiscrepancy, BoundsArcDiscrepancy) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const PointSet p = gen(GeneratorKind::uniform_random, 40, seed);
    const double star = star_discrepancy(p), arc = arc_discrepancy(p).d_n;
    EXPECT_LE(star, arc + 1e-15);
    EXPECT_LE(arc, 2.0 * star + 1e-15);
  }
  EXPECT_DOUBLE_EQ(star_discrepancy(PointSet(std::vector<double>{0.5})), 0.5);
}

TEST(BoundCheck, EvaluatesBothSides) {
  const PointSet p = gen(GeneratorKind::kronecker, 200);
  const BoundCheck b = bound_check(p, 4.0);
  const double d = arc_discrepancy(p).d_n;
  EXPECT_EQ(b.d_n, d);
  EXPECT_DOUBLE_EQ(b.t_star, d * d / (4.0 * std::log(1.0 / d)));
  EXPECT_NEAR(b.energy, theta_energy(p, b.t_star).energy, 1e-10);
  EXPECT_DOUBLE_EQ(b.rhs, 4.0 * (b.energy - 1.0));
  EXPECT_EQ(b.holds, d * d <= b.rhs + 1e-12);
}

TEST(BoundCheck, Inapplicable) {
  EXPECT_THROW(bound_check(PointSet(std::vector<double>{0.3}), 1.0), DomainError);
  EXPECT_THROW(bound_check(gen(GeneratorKind::lattice, 8), 0.0), DomainError);
}

TEST(CalibrateC, SmallestWorkingConstant) {
  std::vector<PointSet> fam{gen(GeneratorKind::lattice, 64), gen(GeneratorKind::kronecker, 64),
                            gen(GeneratorKind::uniform_random, 64, 5)};
  const double c = calibrate_c(fam);
  for (const PointSet& p : fam)
    EXPECT_TRUE(bound_check(p, c).holds);
  // below the final bisection bracket some set fails
  bool all = true;
  for (const PointSet& p : fam)
    all = all && bound_check(p, c * (1.0 - 1.0 / 512.0)).holds;
  EXPECT_FALSE(all);
}

TEST(Helpers, TimeScaleAndMassRadius) {
  EXPECT_DOUBLE_EQ(discrepancy_time_scale(0.1), 0.01 / (100.0 * std::log(200.0)));
  EXPECT_THROW(discrepancy_time_scale(0.0), DomainError);
  const double t = 1e-4, eps = 0.05;
  const double x = gaussian_mass_radius(eps, t);
  EXPECT_GE(theta_mass(-x, x, t), 1.0 - eps);
  const double ts = discrepancy_time_scale(eps);
  EXPECT_GE(theta_mass(-eps / 4, eps / 4, ts), 1.0 - eps / 10);
}
