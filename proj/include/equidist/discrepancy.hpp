#pragma once

// Discrepancy of finite point sets on the circle and the inequality
//
//   D_N^2 <= c (E_{t*} - 1),   t* = D_N^2 / (c ln(1/D_N)),
//
// relating it to the theta pair energy, with an empirical calibration of the
// (unspecified) constant c.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "energy.hpp"
#include "errors.hpp"
#include "point_set.hpp"

namespace equidist {

struct Arc {
  double left = 0.0;
  double right = 0.0;  // counterclockwise end; right == left with closed = false is the circle minus a point
  bool closed = true;
};

struct DiscrepancyResult {
  double d_n = 0.0;
  Arc witness;
  std::size_t n_points = 0;
};

/// Exact sup over arcs J of |#(J)/N - |J||.
///
/// The deviation is piecewise linear in each endpoint, so the supremum is
/// attained (in the closure) on arcs whose endpoints are data points: closed
/// arcs for an excess of points, open arcs for a deficit. All O(M^2) such
/// arcs over the M distinct positions are scanned. Ties go to the smallest
/// left endpoint, then the shortest arc.
inline DiscrepancyResult arc_discrepancy(const PointSet& pts) {
  if (pts.empty())
    throw DomainError("arc_discrepancy: empty point set");
  const std::vector<double> v = pts.sorted_values();
  const std::size_t n = v.size();
  const double nd = static_cast<double>(n);

  std::vector<double> pos;
  std::vector<std::size_t> mult;
  for (double x : v) {
    if (!pos.empty() && pos.back() == x) {
      ++mult.back();
    } else {
      pos.push_back(x);
      mult.push_back(1);
    }
  }
  const std::size_t m = pos.size();

  DiscrepancyResult best{-1.0, {}, n};
  double best_len = 0.0;
  auto offer = [&](double dev, double len, std::size_t a, std::size_t b, bool closed) {
    const double left = pos[a];
    const bool better = dev > best.d_n ||
                        (dev == best.d_n && (left < best.witness.left ||
                                             (left == best.witness.left && len < best_len)));
    if (better) {
      best.d_n = dev;
      best.witness = Arc{left, pos[b], closed};
      best_len = len;
    }
  };
  auto arc_length = [&](std::size_t a, std::size_t b) {
    double d = pos[b] - pos[a];
    if (d < 0.0)
      d += 1.0;
    return d;
  };

  for (std::size_t a = 0; a < m; ++a) {
    // closed arcs [pos[a], pos[b]]
    std::size_t count = 0;
    for (std::size_t off = 0; off < m; ++off) {
      const std::size_t b = (a + off) % m;
      count += mult[b];
      const double len = off == 0 ? 0.0 : arc_length(a, b);
      offer(static_cast<double>(count) / nd - len, len, a, b, true);
    }
    // open arcs (pos[a], pos[b]); off == m is the circle minus pos[a]
    count = 0;
    for (std::size_t off = 1; off <= m; ++off) {
      const std::size_t b = (a + off) % m;
      const double len = off == m ? 1.0 : arc_length(a, b);
      offer(len - static_cast<double>(count) / nd, len, a, b, false);
      count += mult[b];
    }
  }
  return best;
}

/// Anchored discrepancy sup_a |#{x < a}/N - a| over [0, a) intervals.
inline double star_discrepancy(const PointSet& pts) {
  if (pts.empty())
    throw DomainError("star_discrepancy: empty point set");
  const std::vector<double> v = pts.sorted_values();
  const double nd = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / nd - v[i], v[i] - k / nd});
  }
  return d;
}

struct BoundCheck {
  double d_n = 0.0;
  double c = 0.0;
  double t_star = 0.0;
  double energy = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// The energy side is printed with a negative time -D^2/(c log D); since
// log D < 0 this is the positive time D^2/(c ln(1/D)) used here.
inline double bound_time(double d_n, double c) { return d_n * d_n / (c * std::log(1.0 / d_n)); }

inline BoundCheck bound_check_with(const PointSet& pts, double d_n, double c, Exec exec = {}) {
  if (!(c > 0.0) || !std::isfinite(c))
    throw DomainError("bound_check: c must be positive");
  if (!(d_n > 0.0 && d_n < 1.0))
    throw DomainError("bound inapplicable: discrepancy must lie strictly between 0 and 1");
  BoundCheck out;
  out.d_n = d_n;
  out.c = c;
  out.t_star = bound_time(d_n, c);
  const EnergyReport e = theta_energy_auto(pts, out.t_star, default_energy_tol, exec);
  out.energy = e.energy;
  out.rhs = c * e.excess;
  out.holds = d_n * d_n <= out.rhs + 1e-12;
  return out;
}

/// Evaluates both sides of the discrepancy-energy inequality for a given c.
inline BoundCheck bound_check(const PointSet& pts, double c, Exec exec = {}) {
  return bound_check_with(pts, arc_discrepancy(pts).d_n, c, exec);
}

/// Smallest c (grid 2^-10 .. 2^20, then 12 bisection steps, i.e. better than
/// 3 significant digits) for which the inequality holds on every input.
/// This is an empirical surrogate for the universal constant, nothing more.
inline double calibrate_c(std::span<const PointSet> families, Exec exec = {}) {
  if (families.empty())
    throw DomainError("calibrate_c: no point sets");
  std::vector<double> disc;
  disc.reserve(families.size());
  for (const PointSet& p : families) {
    const double d = arc_discrepancy(p).d_n;
    if (!(d > 0.0 && d < 1.0))
      throw DomainError("bound inapplicable: calibration set with discrepancy 1");
    disc.push_back(d);
  }
  // Sets that failed most recently are tried first; the predicate is a
  // conjunction, so the order only affects speed.
  std::vector<std::size_t> order(families.size());
  for (std::size_t i = 0; i < order.size(); ++i)
    order[i] = i;
  auto holds_all = [&](double c) {
    for (std::size_t k = 0; k < order.size(); ++k) {
      const std::size_t i = order[k];
      if (!bound_check_with(families[i], disc[i], c, exec).holds) {
        std::rotate(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k),
                    order.begin() + static_cast<std::ptrdiff_t>(k) + 1);
        return false;
      }
    }
    return true;
  };

  for (int e = -10; e <= 20; ++e) {
    const double c = std::ldexp(1.0, e);
    if (!holds_all(c))
      continue;
    if (e == -10)
      return c;
    double lo = 0.5 * c;
    double hi = c;
    for (int it = 0; it < 12; ++it) {
      const double mid = 0.5 * (lo + hi);
      (holds_all(mid) ? hi : lo) = mid;
    }
    return hi;
  }
  throw DataCorruption("calibrate_c: no c in [2^-10, 2^20] satisfies the bound");
}

inline double calibrate_c(const std::vector<PointSet>& families, Exec exec = {}) {
  return calibrate_c(std::span<const PointSet>(families), exec);
}

// Time scale eps^2 / (100 ln(20/eps)) at which theta_t keeps mass
// 1 - eps/10 within eps/4 of the origin.
inline double discrepancy_time_scale(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("discrepancy_time_scale: eps must lie in (0, 1)");
  return eps * eps / (100.0 * std::log(20.0 / eps));
}

// Radius 2 sqrt(ln(2/eps)) sqrt(t) beyond which theta_t has mass at most eps.
inline double gaussian_mass_radius(double eps, double t) {
  if (!(eps > 0.0) || !(t > 0.0))
    throw DomainError("gaussian_mass_radius: eps and t must be positive");
  return 2.0 * std::sqrt(std::log(2.0 / eps)) * std::sqrt(t);
}

} // namespace equidist
