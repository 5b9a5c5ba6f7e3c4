#pragma once

// Pair energies of point sets on the circle,
//
//   E_t = (1/N^2) sum_{m,n} theta_t(x_n - x_m)
//       = 1 + 2 sum_{l >= 1} exp(-4 pi^2 l^2 t) |a_l|^2,
//   a_l = (1/N) sum_n exp(2 pi i l x_n),
//
// computed three ways: the direct double sum, a neighbor-truncated sweep for
// small t, and the Fourier side through the exponential sums a_l. Also the
// scaled Gaussian energy and energies of general coefficient kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "manifold.hpp"
#include "point_set.hpp"
#include "summation.hpp"

namespace equidist {

inline constexpr double default_energy_tol = 1e-12;
inline constexpr std::size_t default_frequency_cap = 10'000'000;

namespace detail {

inline void check_energy_args(const PointSet& pts, double t, double tol, const char* where) {
  if (pts.empty())
    domain_fail(where, "empty point set");
  ThetaParams{t, tol}.validate(where);
}

// Radius beyond which a pair contributes less than tol / N^2 to E_t.
inline double theta_cutoff(std::size_t n, double t, double tol) {
  const double nd = static_cast<double>(n);
  const double arg = nd * nd / (std::sqrt(4.0 * pi * t) * tol);
  return arg > 1.0 ? std::sqrt(4.0 * t * std::log(arg)) : 0.0;
}

// Sum of values f(v[j] - v[i]) over the partners j > i of sorted point i that
// lie within circular distance r, r < 1/2: first the forward neighbors, then
// those reached by wrapping around past 1.
template <class F>
void for_neighbors(const std::vector<double>& v, std::size_t i, double r, F&& f) {
  const std::size_t n = v.size();
  std::size_t j = i + 1;
  for (; j < n && v[j] - v[i] <= r; ++j)
    f(v[j] - v[i]);
  for (std::size_t k = n; k-- > j;) {
    const double d = v[k] - v[i];
    if (1.0 - d > r)
      break;
    f(d);
  }
}

inline std::size_t spectral_cutoff(double t, double tol) {
  const double a = four_pi_sq * t;
  // smallest L with 2 sum_{l > L} exp(-a l^2) < tol
  const double guess = std::ceil(std::sqrt(std::max(0.0, std::log(2.0 / tol)) / a));
  if (!(guess < 1e12))
    return static_cast<std::size_t>(-1);
  auto ok = [&](double l) { return 2.0 * gauss_tail(a, l + 1.0) < tol; };
  double l = std::max(guess, 0.0);
  while (l > 0.0 && ok(l - 1.0))
    l -= 1.0;
  while (!ok(l))
    l += 1.0;
  return static_cast<std::size_t>(l);
}

inline std::vector<double> spectral_terms(const std::vector<double>& v, double t, std::size_t lmax,
                                          Exec exec) {
  const double a = four_pi_sq * t;
  const double nd = static_cast<double>(v.size());
  std::vector<double> terms(lmax, 0.0);
  parallel_for(lmax, exec, [&](std::size_t idx) {
    const double l = static_cast<double>(idx + 1);
    std::vector<double> re(v.size()), im(v.size());
    for (std::size_t n = 0; n < v.size(); ++n) {
      const double ph = frac_mul(l, v[n]);
      re[n] = cos_2pi(ph);
      im[n] = sin_2pi(ph);
    }
    const double c = pairwise_sum(re) / nd;
    const double s = pairwise_sum(im) / nd;
    terms[idx] = 2.0 * std::exp(-a * l * l) * (c * c + s * s);
  });
  return terms;
}

} // namespace detail

/// Direct O(N^2) evaluation of E_t over unordered pairs.
inline EnergyReport theta_energy(const PointSet& pts, double t, double tol = default_energy_tol,
                                 Exec exec = {}) {
  detail::check_energy_args(pts, t, tol, "theta_energy");
  const std::vector<double> v = pts.sorted_values();
  const std::size_t n = v.size();
  const ThetaParams p{t, tol};
  const double diag = theta(0.0, p);
  const double total = reduce_rows(n, exec, [&](std::size_t i, std::vector<double>& row) {
    row.push_back(diag);
    for (std::size_t j = i + 1; j < n; ++j)
      row.push_back(2.0 * theta(v[j] - v[i], p));
  });
  const double nd = static_cast<double>(n);
  return make_report(n, t, total / (nd * nd), 1.0, EnergyMethod::direct, tol);
}

/// E_t from pairs within the cutoff radius only, using the image series.
/// Falls back to the direct sum when the cutoff covers the whole circle.
inline EnergyReport theta_energy_fast(const PointSet& pts, double t, double tol = default_energy_tol,
                                      Exec exec = {}) {
  detail::check_energy_args(pts, t, tol, "theta_energy_fast");
  const std::size_t n = pts.size();
  const double r = detail::theta_cutoff(n, t, tol);
  if (r >= 0.5)
    return theta_energy(pts, t, tol, exec);

  const std::vector<double> v = pts.sorted_values();
  const ThetaParams p{t, tol};
  const double diag = theta_spatial(0.0, p);
  const double total = reduce_rows(n, exec, [&](std::size_t i, std::vector<double>& row) {
    row.push_back(diag);
    detail::for_neighbors(v, i, r, [&](double d) { row.push_back(2.0 * theta_spatial(d, p)); });
  });
  const double nd = static_cast<double>(n);
  // theta_t is decreasing on [0, 1/2], so every skipped pair is below theta_t(r)
  const double skipped = r > 0.0 ? theta_spatial(r, p) : theta_spatial(0.5, p);
  return make_report(n, t, total / (nd * nd), 1.0, EnergyMethod::fast, tol + skipped);
}

/// Highest frequency the Fourier-side evaluation needs for (t, tol).
inline std::size_t spectral_frequency_count(double t, double tol = default_energy_tol) {
  ThetaParams{t, tol}.validate("spectral_frequency_count");
  return detail::spectral_cutoff(t, tol);
}

/// E_t - 1 = 2 sum_{l=1}^{L} exp(-4 pi^2 l^2 t) |a_l|^2, summed directly so
/// that excesses far below double precision relative to 1 stay resolved.
inline double theta_excess_spectral(const PointSet& pts, double t, double tol = default_energy_tol,
                                    std::size_t frequency_cap = default_frequency_cap, Exec exec = {}) {
  detail::check_energy_args(pts, t, tol, "theta_excess_spectral");
  const std::size_t lmax = detail::spectral_cutoff(t, tol);
  if (lmax > frequency_cap)
    throw InfeasibleError("spectral method infeasible at this scale: needs more than " +
                          std::to_string(frequency_cap) + " frequencies (frequency cap)");
  const std::vector<double> v = pts.sorted_values();
  return pairwise_sum(detail::spectral_terms(v, t, lmax, exec));
}

/// Fourier-side (Plancherel) evaluation of E_t.
inline EnergyReport theta_energy_spectral(const PointSet& pts, double t, double tol = default_energy_tol,
                                          std::size_t frequency_cap = default_frequency_cap,
                                          Exec exec = {}) {
  const double excess = theta_excess_spectral(pts, t, tol, frequency_cap, exec);
  return make_report(pts.size(), t, 1.0 + excess, 1.0, EnergyMethod::spectral, tol);
}

/// Picks the cheapest of the three evaluations for (N, t).
inline EnergyReport theta_energy_auto(const PointSet& pts, double t, double tol = default_energy_tol,
                                      Exec exec = {}) {
  detail::check_energy_args(pts, t, tol, "theta_energy_auto");
  const double n = static_cast<double>(pts.size());
  const double cost_direct = 0.5 * n * n;
  const double r = detail::theta_cutoff(pts.size(), t, tol);
  const double cost_fast = r < 0.5 ? n * (1.0 + 2.0 * r * n) + n * std::log2(n + 1.0) : cost_direct;
  const std::size_t lmax = detail::spectral_cutoff(t, tol);
  const double cost_spectral = lmax <= default_frequency_cap ? 2.0 * n * static_cast<double>(lmax)
                                                             : cost_direct * 1e3;
  if (cost_spectral <= cost_fast && cost_spectral <= cost_direct)
    return theta_energy_spectral(pts, t, tol, default_frequency_cap, exec);
  if (cost_fast < cost_direct)
    return theta_energy_fast(pts, t, tol, exec);
  return theta_energy(pts, t, tol, exec);
}

/// (1/N^2) sum_{m,n} t^{-1/2} exp(-d(x_m, x_n)^2 / t), d the minimal circular
/// distance. Pairs beyond the radius where a term falls below tol / N^2 are
/// skipped.
inline double gaussian_energy(const PointSet& pts, double t, double tol = default_energy_tol,
                              Exec exec = {}) {
  if (pts.empty())
    detail::domain_fail("gaussian_energy", "empty point set");
  if (!(t > 0.0) || !std::isfinite(t))
    detail::domain_fail("gaussian_energy", "t must be positive and finite");
  const std::vector<double> v = pts.sorted_values();
  const std::size_t n = v.size();
  const double nd = static_cast<double>(n);
  const double arg = nd * nd / (std::sqrt(t) * tol);
  const double r = arg > 1.0 ? std::sqrt(t * std::log(arg)) : 0.0;
  const double peak = 1.0 / std::sqrt(t);
  auto term = [&](double d) {
    const double m = std::min(d, 1.0 - d);
    return 2.0 * peak * std::exp(-m * m / t);
  };
  const double total = reduce_rows(n, exec, [&](std::size_t i, std::vector<double>& row) {
    row.push_back(peak);
    if (r >= 0.5) {
      for (std::size_t j = i + 1; j < n; ++j)
        row.push_back(term(v[j] - v[i]));
    } else {
      detail::for_neighbors(v, i, r, [&](double d) { row.push_back(term(d)); });
    }
  });
  return total / (nd * nd);
}

/// (1/N^2) sum_{m,n} phi(x_n - x_m) for a coefficient kernel phi.
inline double kernel_energy(const PointSet& pts, const KernelSpec& k, Exec exec = {}) {
  k.validate();
  if (pts.empty())
    detail::domain_fail("kernel_energy", "empty point set");
  const std::vector<double> v = pts.sorted_values();
  const std::size_t n = v.size();
  const double diag = detail::kernel_eval_unchecked(k, 0.0);
  const double total = reduce_rows(n, exec, [&](std::size_t i, std::vector<double>& row) {
    row.push_back(diag);
    for (std::size_t j = i + 1; j < n; ++j)
      row.push_back(2.0 * detail::kernel_eval_unchecked(k, v[j] - v[i]));
  });
  const double nd = static_cast<double>(n);
  return total / (nd * nd);
}

/// E_t along an ascending list of times. Energies must be nonincreasing in t
/// (to within 2 tol); a violation means a kernel evaluation went wrong.
inline std::vector<EnergyReport> energy_profile(const PointSet& pts, std::span<const double> t_list,
                                                double tol = default_energy_tol, Exec exec = {}) {
  if (t_list.empty())
    throw DomainError("energy_profile: empty time list");
  for (std::size_t i = 0; i < t_list.size(); ++i) {
    if (!(t_list[i] > 0.0))
      throw DomainError("energy_profile: times must be positive");
    if (i > 0 && !(t_list[i] > t_list[i - 1]))
      throw DomainError("energy_profile: times must be strictly ascending");
  }
  std::vector<EnergyReport> out;
  out.reserve(t_list.size());
  for (double t : t_list) {
    out.push_back(theta_energy_auto(pts, t, tol, exec));
    if (out.size() > 1 && out.back().energy > out[out.size() - 2].energy + 2.0 * tol)
      throw DataCorruption("energy_profile: energy increased with t (kernel evaluation fault)");
  }
  return out;
}

} // namespace equidist
