#pragma once

// Pair-correlation counts on the circle,
//
//   F_N(s; alpha) = N^{alpha-2} #{(m, n), m != n : |x_m - x_n| <= s / N^alpha},
//
// (alpha = 1 is the Poissonian statistic, alpha < 1 the weak one), the
// equal-height step approximation of exp(-y^2) that links these counts to
// the Gaussian energy, and the diagonal contribution theta_t(0)/N.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "point_set.hpp"

namespace equidist {

struct PairCorrCurve {
  double alpha = 1.0;
  std::vector<double> s_grid;
  std::vector<double> values;
  bool include_diagonal = false;
};

// Verdict thresholds for finite-N pair-correlation checks. These are
// engineering choices, not part of the limit laws.
struct PairCorrConfig {
  double tolerance = 0.2;
};

namespace detail {

inline void check_alpha(double alpha, const char* where) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    domain_fail(where, "alpha must lie in (0, 1]");
}

inline double pc_radius(std::size_t n, double s, double alpha) {
  return s / std::pow(static_cast<double>(n), alpha);
}

inline double pc_norm(std::size_t n, double alpha) {
  return std::pow(static_cast<double>(n), 2.0 - alpha);
}

} // namespace detail

/// Number of ordered pairs m != n with circular distance <= r.
inline std::uint64_t pair_count_raw(const PointSet& pts, double r) {
  const std::vector<double> v = pts.sorted_values();
  const std::size_t n = v.size();
  if (n < 2)
    return 0;
  if (r >= 0.5)
    return static_cast<std::uint64_t>(n) * (n - 1);
  std::uint64_t unordered = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto first = v.begin() + static_cast<std::ptrdiff_t>(i) + 1;
    const double xi = v[i];
    // forward partners: v[j] - x_i <= r
    const auto fwd_end = std::partition_point(first, v.end(), [&](double y) { return y - xi <= r; });
    // wrapped partners: 1 - (v[j] - x_i) <= r, a suffix of the array
    const auto wrap_begin = std::partition_point(fwd_end, v.end(), [&](double y) { return 1.0 - (y - xi) > r; });
    unordered += static_cast<std::uint64_t>(fwd_end - first) + static_cast<std::uint64_t>(v.end() - wrap_begin);
  }
  return 2 * unordered;
}

/// F_N(s; alpha), optionally counting the N identical pairs (m, m).
inline double pair_count(const PointSet& pts, double s, double alpha, bool include_diagonal) {
  if (pts.empty())
    throw DomainError("pair_count: empty point set");
  if (!(s >= 0.0))
    detail::domain_fail("pair_count", "s must be nonnegative");
  detail::check_alpha(alpha, "pair_count");
  const std::size_t n = pts.size();
  std::uint64_t c = pair_count_raw(pts, detail::pc_radius(n, s, alpha));
  if (include_diagonal)
    c += n;
  return static_cast<double>(c) / detail::pc_norm(n, alpha);
}

/// F_N over a whole ascending grid of s in one sweep over the pairs within
/// the largest radius.
inline PairCorrCurve pc_curve(const PointSet& pts, std::span<const double> s_grid, double alpha,
                              bool include_diagonal) {
  if (pts.empty())
    throw DomainError("pc_curve: empty point set");
  detail::check_alpha(alpha, "pc_curve");
  if (s_grid.empty())
    throw DomainError("pc_curve: empty s grid");
  for (std::size_t k = 0; k < s_grid.size(); ++k) {
    if (!(s_grid[k] >= 0.0))
      throw DomainError("pc_curve: s values must be nonnegative");
    if (k > 0 && !(s_grid[k] > s_grid[k - 1]))
      throw DomainError("pc_curve: s grid must be strictly ascending");
  }

  const std::vector<double> v = pts.sorted_values();
  const std::size_t n = v.size();
  std::vector<double> radii;
  radii.reserve(s_grid.size());
  for (double s : s_grid)
    radii.push_back(detail::pc_radius(n, s, alpha));
  const double rmax = radii.back();

  std::vector<std::uint64_t> hist(radii.size(), 0);
  auto add = [&](double d) {
    const double m = std::min(d, 1.0 - d);
    const auto it = std::lower_bound(radii.begin(), radii.end(), m);
    if (it != radii.end())
      hist[static_cast<std::size_t>(it - radii.begin())] += 2;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double xi = v[i];
    if (rmax >= 0.5) {
      for (std::size_t j = i + 1; j < n; ++j)
        add(v[j] - xi);
      continue;
    }
    std::size_t j = i + 1;
    for (; j < n && v[j] - xi <= rmax; ++j)
      add(v[j] - xi);
    for (std::size_t k = n; k-- > j;) {
      if (1.0 - (v[k] - xi) > rmax)
        break;
      add(v[k] - xi);
    }
  }

  PairCorrCurve out{alpha, std::vector<double>(s_grid.begin(), s_grid.end()), {}, include_diagonal};
  out.values.reserve(hist.size());
  std::uint64_t cum = include_diagonal ? n : 0;
  const double norm = detail::pc_norm(n, alpha);
  for (std::uint64_t h : hist) {
    cum += h;
    out.values.push_back(static_cast<double>(cum) / norm);
  }
  return out;
}

/// max_s |F_N(s) - 2s| over the curve's grid.
inline double poisson_deviation(const PairCorrCurve& curve, double offset = 0.0) {
  double dev = 0.0;
  for (std::size_t k = 0; k < curve.values.size(); ++k)
    dev = std::max(dev, std::abs(curve.values[k] - (offset + 2.0 * curve.s_grid[k])));
  return dev;
}

struct StepLevel {
  double a;  // height
  double b;  // half-width of the slab {|y| <= b}
};

struct StepApprox {
  std::vector<StepLevel> levels;  // b strictly increasing
  double eps = 0.0;
  double sup_error = 0.0;  // measured on a dense grid including both sides of every jump

  double operator()(double y) const {
    const double ay = std::abs(y);
    double g = 0.0;
    for (const StepLevel& l : levels)
      if (ay <= l.b)
        g += l.a;
    return g;
  }

  // sum_k 2 a_k b_k, the integral of the step function over the real line.
  double integral() const {
    double s = 0.0;
    for (const StepLevel& l : levels)
      s += 2.0 * l.a * l.b;
    return s;
  }
};

/// Equal-height slicing of exp(-y^2): K = ceil(1/eps) slabs of height 1/K,
/// slab k kept where exp(-y^2) >= (k - 1/2)/K. The sup-norm error is at most
/// 1/(2K) <= eps/2 and is re-measured on a dense grid.
inline StepApprox step_approx_gaussian(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("step_approx_gaussian: eps must lie in (0, 1)");
  const std::size_t k_count = static_cast<std::size_t>(std::ceil(1.0 / eps));
  const double kd = static_cast<double>(k_count);
  StepApprox out;
  out.eps = eps;
  for (std::size_t k = k_count; k >= 1; --k) {
    const double level = (static_cast<double>(k) - 0.5) / kd;
    out.levels.push_back({1.0 / kd, std::sqrt(std::log(1.0 / level))});
  }

  auto err_at = [&](double y) { return std::abs(std::exp(-y * y) - out(y)); };
  double sup = err_at(0.0);
  const double ymax = out.levels.back().b + 1.0;
  const std::size_t grid = 200'000;
  for (std::size_t i = 0; i <= grid; ++i)
    sup = std::max(sup, err_at(ymax * static_cast<double>(i) / static_cast<double>(grid)));
  for (const StepLevel& l : out.levels) {
    sup = std::max(sup, err_at(l.b));
    sup = std::max(sup, err_at(std::nextafter(l.b, 2.0 * ymax)));
  }
  out.sup_error = sup;
  if (sup > eps)
    throw DataCorruption("step_approx_gaussian: certified error exceeds eps");
  return out;
}

/// sum_k a_k F_N(b_k; 1) with the diagonal included: the count-based
/// approximation of (1/N^2) sum_{m,n} N exp(-N^2 (x_m - x_n)^2).
inline double energy_from_counts(const PointSet& pts, double eps) {
  const StepApprox step = step_approx_gaussian(eps);
  std::vector<double> s_grid;
  s_grid.reserve(step.levels.size());
  for (const StepLevel& l : step.levels)
    s_grid.push_back(l.b);
  const PairCorrCurve c = pc_curve(pts, s_grid, 1.0, true);
  double e = 0.0;
  for (std::size_t k = 0; k < step.levels.size(); ++k)
    e += step.levels[k].a * c.values[k];
  return e;
}

/// Share theta_t(0)/N of the N diagonal terms in the theta energy.
inline double diagonal_weight(std::size_t n_points, double t, double tol = 1e-14) {
  if (n_points == 0)
    throw DomainError("diagonal_weight: n_points must be positive");
  return theta(0.0, ThetaParams{t, tol}) / static_cast<double>(n_points);
}

} // namespace equidist
