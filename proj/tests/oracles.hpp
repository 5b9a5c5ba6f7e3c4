#pragma once

// Independent reference computations for the test suite. Nothing here calls
// into the library's numerics; sums run in long double with naive loops.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>
#include <vector>

namespace oracle {

using ld = long double;
inline constexpr ld pi = std::numbers::pi_v<long double>;

// theta_t(x) by the spectral series with a fixed generous cutoff, or by the
// image sum for small t.
inline ld theta(ld x, ld t) {
  if (t >= 0.02L) {
    ld s = 1.0L;
    for (int n = 1; n < 200; ++n) {
      const ld w = std::exp(-4.0L * pi * pi * n * n * t);
      if (w == 0.0L)
        break;
      s += 2.0L * w * std::cos(2.0L * pi * n * x);
    }
    return s;
  }
  x -= std::floor(x);
  ld s = 0.0L;
  for (int k = -60; k <= 60; ++k) {
    const ld d = x + k;
    s += std::exp(-d * d / (4.0L * t));
  }
  return s / std::sqrt(4.0L * pi * t);
}

// Composite Simpson integral of theta_t over [a, b].
inline ld theta_mass(ld a, ld b, ld t, int panels = 20000) {
  const ld h = (b - a) / panels;
  ld s = theta(a, t) + theta(b, t);
  for (int i = 1; i < panels; ++i)
    s += (i % 2 ? 4.0L : 2.0L) * theta(a + i * h, t);
  return s * h / 3.0L;
}

// E_t of N equally spaced points: 1 + 2 sum_j exp(-4 pi^2 j^2 N^2 t).
inline ld lattice_energy(std::size_t n, ld t) {
  ld s = 1.0L;
  for (int j = 1; j < 1000; ++j) {
    const ld w = std::exp(-4.0L * pi * pi * j * j * static_cast<ld>(n) * n * t);
    if (w == 0.0L)
      break;
    s += 2.0L * w;
  }
  return s;
}

// E_t through the exponential sums a_l.
inline ld plancherel_excess(const std::vector<double>& x, ld t, int lmax) {
  const ld nd = static_cast<ld>(x.size());
  ld s = 0.0L;
  for (int l = 1; l <= lmax; ++l) {
    ld re = 0.0L, im = 0.0L;
    for (double v : x) {
      re += std::cos(2.0L * pi * l * v);
      im += std::sin(2.0L * pi * l * v);
    }
    s += 2.0L * std::exp(-4.0L * pi * pi * l * l * t) * (re * re + im * im) / (nd * nd);
  }
  return s;
}

inline ld plancherel_energy(const std::vector<double>& x, ld t, int lmax) {
  return 1.0L + plancherel_excess(x, t, lmax);
}

// E_t as a double sum of oracle theta values.
inline ld direct_energy(const std::vector<double>& x, ld t) {
  ld s = 0.0L;
  for (double a : x)
    for (double b : x)
      s += theta(static_cast<ld>(a) - b, t);
  return s / (static_cast<ld>(x.size()) * x.size());
}

inline ld circ_dist(double a, double b) {
  const ld d = std::abs(static_cast<ld>(a) - b);
  return std::min(d, 1.0L - d);
}

// (1/N^2) sum_{m,n} t^{-1/2} exp(-d^2 / t), all pairs.
inline ld gaussian_energy(const std::vector<double>& x, ld t) {
  ld s = 0.0L;
  for (double a : x)
    for (double b : x) {
      const ld d = circ_dist(a, b);
      s += std::exp(-d * d / t);
    }
  return s / std::sqrt(t) / (static_cast<ld>(x.size()) * x.size());
}

// Ordered pairs m != n with min(d, 1 - d) <= r, d = |x_m - x_n|.
inline std::uint64_t pair_count(const std::vector<double>& x, double r) {
  std::uint64_t c = 0;
  for (std::size_t m = 0; m < x.size(); ++m)
    for (std::size_t n = 0; n < x.size(); ++n) {
      if (m == n)
        continue;
      const double d = std::abs(x[m] - x[n]);
      if (d <= r || 1.0 - d <= r)
        c += 1;
    }
  return c;
}

// sup over arcs of |#/N - length| by explicit membership counting over all
// arcs whose endpoints are data points, closed and open, plus the full
// circle minus a point.
inline double discrepancy(const std::vector<double>& x) {
  const double nd = static_cast<double>(x.size());
  double best = 0.0;
  auto in_arc = [](double p, double a, double b, bool closed) {
    if (a <= b)
      return closed ? (p >= a && p <= b) : (p > a && p < b);
    return closed ? (p >= a || p <= b) : (p > a || p < b);
  };
  for (double a : x) {
    for (double b : x) {
      double len = b - a;
      if (len < 0.0)
        len += 1.0;
      std::size_t cc = 0, co = 0;
      for (double p : x) {
        if (a == b) {
          cc += p == a;
          co += p != a;
        } else {
          cc += in_arc(p, a, b, true);
          co += in_arc(p, a, b, false);
        }
      }
      const double open_len = a == b ? 1.0 : len;
      best = std::max(best, static_cast<double>(cc) / nd - (a == b ? 0.0 : len));
      best = std::max(best, open_len - static_cast<double>(co) / nd);
    }
  }
  return best;
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n) {
  std::vector<double> z(n), w(n);
  for (int i = 0; i < n; ++i) {
    ld x = std::cos(pi * (i + 0.75L) / (n + 0.5L));
    ld dp = 0.0L;
    for (int it = 0; it < 100; ++it) {
      ld p0 = 1.0L, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const ld p2 = ((2.0L * k - 1.0L) * x * p1 - (k - 1.0L) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0L);
      const ld dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-19L)
        break;
    }
    z[i] = static_cast<double>(x);
    w[i] = static_cast<double>(2.0L / ((1.0L - x * x) * dp * dp));
  }
  return {z, w};
}

// Product rule on S^2: Gauss-Legendre in z, trapezoid in phi.
struct SphereRule {
  std::vector<std::array<double, 3>> nodes;
  std::vector<double> weights;
};

inline SphereRule sphere_rule(int nz = 64, int nphi = 128) {
  SphereRule r;
  const auto [z, w] = gauss_legendre(nz);
  for (int i = 0; i < nz; ++i) {
    const double rho = std::sqrt(1.0 - z[i] * z[i]);
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2.0 * std::numbers::pi * j / nphi;
      r.nodes.push_back({rho * std::cos(ph), rho * std::sin(ph), z[i]});
      r.weights.push_back(w[i] * 2.0 * std::numbers::pi / nphi);
    }
  }
  return r;
}

// S^2 heat kernel by the Legendre series in long double, fixed 400 terms.
inline ld sphere_kernel(ld z, ld t) {
  ld p0 = 1.0L, p1 = z;
  ld s = 1.0L / (4.0L * pi) + 3.0L / (4.0L * pi) * std::exp(-2.0L * t) * z;
  for (int l = 2; l < 400; ++l) {
    const ld p2 = ((2.0L * l - 1.0L) * z * p1 - (l - 1.0L) * p0) / l;
    p0 = p1;
    p1 = p2;
    s += (2.0L * l + 1.0L) / (4.0L * pi) * std::exp(-static_cast<ld>(l) * (l + 1) * t) * p2;
  }
  return s;
}

// 53-bit uniform doubles from mt19937_64, written out independently.
class Mt64 {
public:
  explicit Mt64(std::uint64_t seed) {
    mt_[0] = seed;
    for (int i = 1; i < 312; ++i)
      mt_[i] = 6364136223846793005ULL * (mt_[i - 1] ^ (mt_[i - 1] >> 62)) + static_cast<std::uint64_t>(i);
  }
  std::uint64_t next() {
    if (idx_ >= 312) {
      for (int i = 0; i < 312; ++i) {
        const std::uint64_t x = (mt_[i] & 0xFFFFFFFF80000000ULL) | (mt_[(i + 1) % 312] & 0x7FFFFFFFULL);
        std::uint64_t xa = x >> 1;
        if (x & 1)
          xa ^= 0xB5026F5AA96619E9ULL;
        mt_[i] = mt_[(i + 156) % 312] ^ xa;
      }
      idx_ = 0;
    }
    std::uint64_t y = mt_[idx_++];
    y ^= (y >> 29) & 0x5555555555555555ULL;
    y ^= (y << 17) & 0x71D67FFFEDA60000ULL;
    y ^= (y << 37) & 0xFFF7EEE000000000ULL;
    y ^= y >> 43;
    return y;
  }
  double uniform() { return static_cast<double>(next() >> 11) * 0x1p-53; }

private:
  std::uint64_t mt_[312];
  int idx_ = 312;
};

} // namespace oracle
