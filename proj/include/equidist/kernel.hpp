#pragma once

// Heat kernel of the unit-length circle (the Jacobi theta function
// theta_t(x) = 1 + 2 sum_n exp(-4 pi^2 n^2 t) cos(2 pi n x)), evaluated from
// either of its two series with a certified absolute truncation error, plus
// its partial mass, the scaled Gaussian surrogate, and general even kernels
// with nonnegative Fourier coefficients.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "errors.hpp"
#include "summation.hpp"

namespace equidist {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double four_pi_sq = 4.0 * std::numbers::pi * std::numbers::pi;

// Below this time the image (Poisson-summed) series is used, above it the
// Fourier series. At the crossover both decay like exp(-n^2 / (4t)).
inline constexpr double theta_crossover = 1.0 / (4.0 * std::numbers::pi);

struct ThetaParams {
  double t;
  double tol = 1e-14;

  void validate(const char* where) const {
    if (!(t > 0.0) || !std::isfinite(t))
      detail::domain_fail(where, "heat time t must be positive and finite");
    if (!(tol > 0.0 && tol < 1.0))
      detail::domain_fail(where, "tolerance must lie in (0, 1)");
  }
};

namespace detail {

// Representative of x modulo 1 in [0, 1).
inline double reduce_unit(double x) {
  double r = x - std::floor(x);
  return r >= 1.0 ? 0.0 : r;
}

// Representative of x modulo 1 in [-1/2, 1/2].
inline double reduce_centered(double x) { return x - std::round(x); }

// n*x modulo 1 in [-1/2, 1/2], carrying the rounding error of the product so
// that large frequencies keep full relative accuracy in the phase.
inline double frac_mul(double n, double x) {
  const double p = n * x;
  const double err = std::fma(n, x, -p);
  const double r = (p - std::round(p)) + err;
  return r - std::round(r);
}

// sin(2 pi r) and cos(2 pi r) with exact zeros at quarter periods.
inline double sin_2pi(double r) {
  r -= std::round(r);
  const double s = r < 0.0 ? -1.0 : 1.0;
  double a = std::abs(r);
  if (a > 0.25)
    a = 0.5 - a;
  return s * std::sin(two_pi * a);
}

inline double cos_2pi(double r) {
  r -= std::round(r);
  const double a = std::abs(r);
  if (a < 0.125)
    return std::cos(two_pi * a);
  if (a <= 0.375)
    return std::sin(two_pi * (0.25 - a));
  return -std::cos(two_pi * (0.5 - a));
}

// 1 - exp(-y) for y >= 0 without cancellation.
inline double one_minus_exp_neg(double y) { return -std::expm1(-y); }

// Bound on sum_{m >= n} exp(-a m^2) for n >= 1 using the decreasing ratio
// exp(-a(2m+1)) of consecutive terms.
inline double gauss_tail(double a, double n) {
  const double first = std::exp(-a * n * n);
  if (first == 0.0)
    return 0.0;
  const double gap = one_minus_exp_neg(a * (2.0 * n + 1.0));
  return gap > 0.0 ? first / gap : std::numeric_limits<double>::infinity();
}

// (erf(hi) - erf(lo)) / 2, switching to erfc on one-signed intervals so that
// far-out images keep their relative accuracy.
inline double half_erf_diff(double lo, double hi) {
  if (lo >= 0.0)
    return 0.5 * (std::erfc(lo) - std::erfc(hi));
  if (hi <= 0.0)
    return 0.5 * (std::erfc(-hi) - std::erfc(-lo));
  return 0.5 * (std::erf(hi) - std::erf(lo));
}

inline constexpr std::size_t max_series_terms = 100'000'000;

} // namespace detail

/// Fourier-side evaluation 1 + 2 sum_n exp(-4 pi^2 n^2 t) cos(2 pi n x).
/// Terms are added until a geometric bound on the remaining tail drops below
/// p.tol, so the returned value is within p.tol of the full series.
inline double theta_spectral(double x, ThetaParams p) {
  p.validate("theta_spectral");
  if (!std::isfinite(x))
    detail::domain_fail("theta_spectral", "x must be finite");
  const double r = detail::reduce_unit(x);
  const double a = four_pi_sq * p.t;
  std::vector<double> terms;
  for (std::size_t n = 1;; ++n) {
    const double nd = static_cast<double>(n);
    if (2.0 * detail::gauss_tail(a, nd) < p.tol)
      break;
    if (n > detail::max_series_terms)
      throw InfeasibleError("theta_spectral: more than 1e8 terms required");
    const double w = std::exp(-a * nd * nd);
    terms.push_back(2.0 * w * detail::cos_2pi(detail::frac_mul(nd, r)));
  }
  return 1.0 + pairwise_sum(terms);
}

/// Image-sum evaluation (4 pi t)^{-1/2} sum_k exp(-(x+k)^2 / (4t)), x taken
/// modulo 1 into [-1/2, 1/2]. Images are added symmetrically until the bound
/// on both remaining tails drops below p.tol.
inline double theta_spatial(double x, ThetaParams p) {
  p.validate("theta_spatial");
  if (!std::isfinite(x))
    detail::domain_fail("theta_spatial", "x must be finite");
  const double u = std::abs(detail::reduce_centered(x));
  const double c = 1.0 / (4.0 * p.t);
  const double pref = 1.0 / std::sqrt(4.0 * pi * p.t);

  auto tail = [c](double z) {
    // sum over z, z+1, z+2, ... of exp(-c w^2), valid for z > 0
    const double first = std::exp(-c * z * z);
    if (first == 0.0)
      return 0.0;
    const double gap = detail::one_minus_exp_neg(c * (2.0 * z + 1.0));
    return gap > 0.0 ? first / gap : std::numeric_limits<double>::infinity();
  };

  std::vector<double> terms{std::exp(-c * u * u)};
  for (std::size_t k = 1;; ++k) {
    const double kd = static_cast<double>(k);
    if (pref * (tail(kd + u) + tail(kd - u)) < p.tol)
      break;
    if (k > detail::max_series_terms)
      throw InfeasibleError("theta_spatial: more than 1e8 images required");
    terms.push_back(std::exp(-c * (kd + u) * (kd + u)));
    terms.push_back(std::exp(-c * (kd - u) * (kd - u)));
  }
  return pref * pairwise_sum(terms);
}

/// theta_t(x), choosing the faster-converging series.
inline double theta(double x, ThetaParams p) {
  return p.t < theta_crossover ? theta_spatial(x, p) : theta_spectral(x, p);
}

inline double theta(double x, double t, double tol = 1e-14) { return theta(x, ThetaParams{t, tol}); }

/// Integral of theta_t over [a, b], b - a <= 1, integrated term by term in
/// whichever series theta() would select for this t.
inline double theta_mass(double a, double b, ThetaParams p) {
  p.validate("theta_mass");
  if (!std::isfinite(a) || !std::isfinite(b))
    detail::domain_fail("theta_mass", "interval endpoints must be finite");
  if (a > b)
    detail::domain_fail("theta_mass", "requires a <= b");
  if (b - a > 1.0)
    detail::domain_fail("theta_mass", "interval longer than the circle");

  if (p.t >= theta_crossover) {
    const double q = four_pi_sq * p.t;
    std::vector<double> terms;
    for (std::size_t n = 1;; ++n) {
      const double nd = static_cast<double>(n);
      if (2.0 / (pi * nd) * detail::gauss_tail(q, nd) < p.tol)
        break;
      const double w = std::exp(-q * nd * nd) / (pi * nd);
      terms.push_back(w * (detail::sin_2pi(detail::frac_mul(nd, b)) -
                           detail::sin_2pi(detail::frac_mul(nd, a))));
    }
    const double m = (b - a) + pairwise_sum(terms);
    return std::clamp(m, 0.0, 1.0);
  }

  // Shift so the interval is centred in [-1/2, 1/2]; the mass is invariant
  // under integer translation.
  const double shift = std::round(0.5 * (a + b));
  a -= shift;
  b -= shift;
  const double s = 1.0 / (2.0 * std::sqrt(p.t));
  auto tail = [s](double z) {
    // bound on sum_{j>=0} erfc((z+j) s)/2 using erfc(w) <= exp(-w^2), z > 0
    const double first = 0.5 * std::exp(-(z * s) * (z * s));
    if (first == 0.0)
      return 0.0;
    const double gap = detail::one_minus_exp_neg(s * s * (2.0 * z + 1.0));
    return gap > 0.0 ? first / gap : std::numeric_limits<double>::infinity();
  };

  std::vector<double> terms{detail::half_erf_diff(a * s, b * s)};
  for (std::size_t k = 1;; ++k) {
    const double kd = static_cast<double>(k);
    // image k covers [a+k, b+k] with a+k >= 0; image -k covers [a-k, b-k], b-k <= 0
    const double right = std::max(a + kd, 0.0);
    const double left = std::max(kd - b, 0.0);
    if (right > 0.0 && left > 0.0 && tail(right) + tail(left) < p.tol)
      break;
    if (k > detail::max_series_terms)
      throw InfeasibleError("theta_mass: more than 1e8 images required");
    terms.push_back(detail::half_erf_diff((a + kd) * s, (b + kd) * s));
    terms.push_back(detail::half_erf_diff((a - kd) * s, (b - kd) * s));
  }
  return std::clamp(pairwise_sum(terms), 0.0, 1.0);
}

inline double theta_mass(double a, double b, double t, double tol = 1e-14) {
  return theta_mass(a, b, ThetaParams{t, tol});
}

/// t^{-1/2} exp(-d^2 / t) with d taken as the minimal circular representative.
inline double gaussian_kernel(double d, double t) {
  if (!(t > 0.0) || !std::isfinite(t))
    detail::domain_fail("gaussian_kernel", "t must be positive and finite");
  if (!std::isfinite(d))
    detail::domain_fail("gaussian_kernel", "d must be finite");
  const double r = detail::reduce_centered(d);
  return std::exp(-r * r / t) / std::sqrt(t);
}

// Even kernel on the circle given by its Fourier coefficients:
// phi(x) = c_0 + 2 sum_{l >= 1} c_l cos(2 pi l x).
struct KernelSpec {
  std::vector<double> coeffs;  // coeffs[l] = c_l for l = 0..L
  double tail_bound = 0.0;     // upper bound on sum_{l > L} c_l of the omitted terms
  std::string description;

  void validate() const {
    if (coeffs.empty())
      throw DomainError("KernelSpec: no coefficients");
    if (std::abs(coeffs[0] - 1.0) > 1e-15)
      throw DomainError("KernelSpec: c_0 must equal 1 (unit mass)");
    for (double c : coeffs)
      if (!(c >= 0.0) || !std::isfinite(c))
        throw DomainError("KernelSpec: coefficients must be finite and nonnegative");
    if (!(tail_bound >= 0.0) || !std::isfinite(tail_bound))
      throw DomainError("KernelSpec: tail bound must be finite and nonnegative");
  }

  // Worst-case absolute error of kernel_eval from the omitted coefficients.
  double truncation_error() const { return 2.0 * tail_bound; }

  static KernelSpec constant() { return KernelSpec{{1.0}, 0.0, "constant"}; }

  // theta_t as a coefficient kernel, c_l = exp(-4 pi^2 l^2 t).
  static KernelSpec theta(double t, double tol = 1e-14) {
    ThetaParams{t, tol}.validate("KernelSpec::theta");
    const double a = four_pi_sq * t;
    KernelSpec k{{1.0}, 0.0, "theta t=" + std::to_string(t)};
    for (std::size_t l = 1;; ++l) {
      const double ld = static_cast<double>(l);
      const double rest = detail::gauss_tail(a, ld);
      if (2.0 * rest < tol) {
        k.tail_bound = rest;
        break;
      }
      k.coeffs.push_back(std::exp(-a * ld * ld));
    }
    return k;
  }
};

namespace detail {

inline double kernel_eval_unchecked(const KernelSpec& k, double x) {
  const double r = reduce_unit(x);
  std::vector<double> terms;
  terms.reserve(k.coeffs.size());
  for (std::size_t l = 1; l < k.coeffs.size(); ++l)
    terms.push_back(2.0 * k.coeffs[l] * cos_2pi(frac_mul(static_cast<double>(l), r)));
  return k.coeffs[0] + pairwise_sum(terms);
}

} // namespace detail

inline double kernel_eval(const KernelSpec& k, double x) {
  k.validate();
  if (!std::isfinite(x))
    detail::domain_fail("kernel_eval", "x must be finite");
  return detail::kernel_eval_unchecked(k, x);
}

} // namespace equidist
