#pragma once

// Heat kernels [e^{t Laplacian} delta_x](y) on compact manifolds and the
// associated pair energy (1/N^2) sum_{m,n} K_t(x_m, x_n) >= 1/vol.
//
// A manifold is anything satisfying HeatManifold: it supplies its volume, a
// kernel evaluator with a guaranteed absolute error, the geodesic distance
// and the (position independent) on-diagonal value. Built-ins: the circle,
// the flat torus T^d and the round unit sphere S^2.

#include <algorithm>
#include <array>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "point_set.hpp"
#include "summation.hpp"

namespace equidist {

enum class EnergyMethod { direct, fast, spectral, gaussian };

inline const char* method_name(EnergyMethod m) {
  switch (m) {
  case EnergyMethod::direct:
    return "direct";
  case EnergyMethod::fast:
    return "fast";
  case EnergyMethod::spectral:
    return "spectral";
  case EnergyMethod::gaussian:
    return "gaussian";
  }
  return "unknown";
}

// One energy evaluation. excess is energy - 1/vol, computed from the stored
// energy so the identity holds exactly.
struct EnergyReport {
  std::size_t n_points = 0;
  double t = 0.0;
  double energy = 0.0;
  double excess = 0.0;
  EnergyMethod method = EnergyMethod::direct;
  double error_bound = 0.0;
};

using HeatEnergyReport = EnergyReport;

inline EnergyReport make_report(std::size_t n, double t, double energy, double inv_volume,
                                EnergyMethod method, double error_bound) {
  return EnergyReport{n, t, energy, energy - inv_volume, method, error_bound};
}

// [e^{t Laplacian} delta_x](y) on the circle equals theta_t(x - y).
inline double heat_kernel_circle(double x, double y, double t, double tol = 1e-14) {
  if (!std::isfinite(x) || !std::isfinite(y))
    detail::domain_fail("heat_kernel_circle", "points must be finite");
  // x - y is reduced inside theta; use the symmetric difference so that
  // K(x, y) and K(y, x) see the same magnitude.
  return theta(std::abs(x - y), ThetaParams{t, tol});
}

// Product of circle kernels, each factor evaluated to tol / d.
inline double heat_kernel_torus(std::span<const double> x, std::span<const double> y, double t,
                                double tol = 1e-14) {
  if (x.size() != y.size())
    throw DomainError("heat_kernel_torus: dimension mismatch");
  if (x.empty())
    throw DomainError("heat_kernel_torus: zero-dimensional torus");
  const double factor_tol = tol / static_cast<double>(x.size());
  double k = 1.0;
  for (std::size_t i = 0; i < x.size(); ++i)
    k *= heat_kernel_circle(x[i], y[i], t, factor_tol);
  return k;
}

inline constexpr double sphere_min_time = 1e-4;

namespace detail {

inline void check_unit(const SpherePoint& x, const char* where) {
  const double n2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
  if (!std::isfinite(n2) || std::abs(std::sqrt(n2) - 1.0) > 1e-12)
    domain_fail(where, "sphere point is not a unit vector");
}

// sum_l (2l+1)/(4 pi) e^{-l(l+1)t} P_l(z), |z| <= 1, stopped when the
// geometric bound on the remaining coefficients (|P_l| <= 1) is below tol/2.
inline double sphere_series(double z, double t, double tol) {
  z = std::clamp(z, -1.0, 1.0);
  std::vector<double> terms;
  double p_prev = 1.0;  // P_0
  double p_cur = z;     // P_1
  for (std::size_t l = 0;; ++l) {
    const double ld = static_cast<double>(l);
    const double coeff = (2.0 * ld + 1.0) / (4.0 * pi) * std::exp(-ld * (ld + 1.0) * t);
    const double ratio = (2.0 * ld + 3.0) / (2.0 * ld + 1.0) * std::exp(-2.0 * (ld + 1.0) * t);
    if (ratio < 1.0 && coeff / (1.0 - ratio) < 0.5 * tol)
      break;
    if (l > max_series_terms)
      throw InfeasibleError("heat_kernel_sphere2: series too long");
    double p_l;
    if (l == 0) {
      p_l = 1.0;
    } else if (l == 1) {
      p_l = z;
    } else {
      const double next = ((2.0 * ld - 1.0) * z * p_cur - (ld - 1.0) * p_prev) / ld;
      p_prev = p_cur;
      p_cur = next;
      p_l = next;
    }
    terms.push_back(coeff * p_l);
  }
  return pairwise_sum(terms);
}

} // namespace detail

// Spherical-harmonic addition theorem form of the S^2 heat kernel.
inline double heat_kernel_sphere2(const SpherePoint& x, const SpherePoint& y, double t,
                                  double tol = 1e-14) {
  if (!(t >= sphere_min_time) || !std::isfinite(t))
    detail::domain_fail("heat_kernel_sphere2", "t below the supported floor 1e-4");
  if (!(tol > 0.0))
    detail::domain_fail("heat_kernel_sphere2", "tolerance must be positive");
  detail::check_unit(x, "heat_kernel_sphere2");
  detail::check_unit(y, "heat_kernel_sphere2");
  const double z = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  return detail::sphere_series(z, t, tol);
}

// Geodesic distance on S^2 via atan2(|x cross y|, x . y).
inline double sphere_distance(const SpherePoint& x, const SpherePoint& y) {
  const double cx = x[1] * y[2] - x[2] * y[1];
  const double cy = x[2] * y[0] - x[0] * y[2];
  const double cz = x[0] * y[1] - x[1] * y[0];
  const double dot = x[0] * y[0] + x[1] * y[1] + x[2] * y[2];
  return std::atan2(std::sqrt(cx * cx + cy * cy + cz * cz), dot);
}

template <class M>
concept HeatManifold = requires(const M& m, const typename M::point_type& x, double t, double tol) {
  { m.volume() } -> std::convertible_to<double>;
  { m.kernel(x, x, t, tol) } -> std::convertible_to<double>;
  { m.distance(x, x) } -> std::convertible_to<double>;
  { m.on_diagonal(t, tol) } -> std::convertible_to<double>;
  { m.min_time() } -> std::convertible_to<double>;
  { m.tag() } -> std::same_as<SpaceTag>;
  m.validate_point(x);
};

struct Circle {
  using point_type = double;
  double volume() const { return 1.0; }
  double kernel(double x, double y, double t, double tol) const { return heat_kernel_circle(x, y, t, tol); }
  double distance(double x, double y) const { return std::abs(detail::reduce_centered(x - y)); }
  double on_diagonal(double t, double tol) const { return theta(0.0, ThetaParams{t, tol}); }
  double min_time() const { return 0.0; }
  SpaceTag tag() const { return SpaceTag::circle; }
  void validate_point(double x) const {
    if (!std::isfinite(x))
      throw DomainError("circle point must be finite");
  }
};

struct FlatTorus {
  using point_type = TorusPoint;
  std::size_t dim = 2;

  double volume() const { return 1.0; }
  double kernel(const TorusPoint& x, const TorusPoint& y, double t, double tol) const {
    return heat_kernel_torus(x, y, t, tol);
  }
  double distance(const TorusPoint& x, const TorusPoint& y) const {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const double d = detail::reduce_centered(x[i] - y[i]);
      s += d * d;
    }
    return std::sqrt(s);
  }
  double on_diagonal(double t, double tol) const {
    return std::pow(theta(0.0, ThetaParams{t, tol / static_cast<double>(dim)}), static_cast<double>(dim));
  }
  double min_time() const { return 0.0; }
  SpaceTag tag() const { return SpaceTag::torus; }
  void validate_point(const TorusPoint& x) const {
    if (x.size() != dim)
      throw DomainError("torus point has wrong dimension");
    for (double c : x)
      if (!std::isfinite(c))
        throw DomainError("torus point must be finite");
  }
};

struct Sphere2 {
  using point_type = SpherePoint;
  double volume() const { return 4.0 * pi; }
  double kernel(const SpherePoint& x, const SpherePoint& y, double t, double tol) const {
    return heat_kernel_sphere2(x, y, t, tol);
  }
  double distance(const SpherePoint& x, const SpherePoint& y) const { return sphere_distance(x, y); }
  double on_diagonal(double t, double tol) const {
    if (!(t >= sphere_min_time))
      detail::domain_fail("Sphere2", "t below the supported floor 1e-4");
    return detail::sphere_series(1.0, t, tol);
  }
  double min_time() const { return sphere_min_time; }
  SpaceTag tag() const { return SpaceTag::sphere2; }
  void validate_point(const SpherePoint& x) const { detail::check_unit(x, "Sphere2"); }
};

/// Direct double sum (1/N^2) sum_{m,n} K_t(x_m, x_n). Every kernel value is
/// evaluated to tol / N^2; points are summed in sorted order so the result is
/// independent of input order.
template <HeatManifold M>
HeatEnergyReport heat_energy(const M& m, std::span<const typename M::point_type> pts, double t,
                             double tol = 1e-12, Exec exec = {}) {
  if (pts.empty())
    throw DomainError("heat_energy: empty point set");
  if (!(t > 0.0) || !std::isfinite(t))
    detail::domain_fail("heat_energy", "t must be positive and finite");
  if (t < m.min_time())
    detail::domain_fail("heat_energy", "t below the manifold's supported floor");
  if (!(tol > 0.0 && tol < 1.0))
    detail::domain_fail("heat_energy", "tolerance must lie in (0, 1)");
  for (const auto& x : pts)
    m.validate_point(x);

  std::vector<typename M::point_type> sorted(pts.begin(), pts.end());
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  const double nd = static_cast<double>(n);
  const double pair_tol = tol / (nd * nd);

  const double total = reduce_rows(n, exec, [&](std::size_t i, std::vector<double>& row) {
    row.push_back(m.kernel(sorted[i], sorted[i], t, pair_tol));
    for (std::size_t j = i + 1; j < n; ++j)
      row.push_back(2.0 * m.kernel(sorted[i], sorted[j], t, pair_tol));
  });
  return make_report(n, t, total / (nd * nd), 1.0 / m.volume(), EnergyMethod::direct, tol);
}

template <HeatManifold M>
HeatEnergyReport heat_energy(const M& m, const std::vector<typename M::point_type>& pts, double t,
                             double tol = 1e-12, Exec exec = {}) {
  return heat_energy(m, std::span<const typename M::point_type>(pts), t, tol, exec);
}

/// Contribution of the N diagonal terms, K_t(x, x) / N.
template <HeatManifold M>
double diagonal_floor(const M& m, std::size_t n_points, double t, double tol = 1e-14) {
  if (n_points == 0)
    throw DomainError("diagonal_floor: n_points must be positive");
  if (!(t > 0.0))
    detail::domain_fail("diagonal_floor", "t must be positive");
  return m.on_diagonal(t, tol) / static_cast<double>(n_points);
}

} // namespace equidist
