#pragma once

// Test point sets on the circle, the flat torus and S^2, and a plain text
// point-file format.
//
// Seeded kinds draw from std::mt19937_64 (its output sequence is fixed by the
// C++ standard) converted to doubles as (x >> 11) * 2^-53. The pair is
// recorded as rng_version in every written file.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "kernel.hpp"
#include "point_set.hpp"

namespace equidist {

inline constexpr const char* rng_version = "mt19937_64/u53 v1";

enum class GeneratorKind {
  kronecker,
  van_der_corput,
  uniform_random,
  duplicated,
  clustered,
  lattice,
  sphere_fibonacci,
  sphere_random,
};

inline const char* kind_name(GeneratorKind k) {
  switch (k) {
  case GeneratorKind::kronecker:
    return "kronecker";
  case GeneratorKind::van_der_corput:
    return "van_der_corput";
  case GeneratorKind::uniform_random:
    return "uniform_random";
  case GeneratorKind::duplicated:
    return "duplicated";
  case GeneratorKind::clustered:
    return "clustered";
  case GeneratorKind::lattice:
    return "lattice";
  case GeneratorKind::sphere_fibonacci:
    return "sphere_fibonacci";
  case GeneratorKind::sphere_random:
    return "sphere_random";
  }
  return "unknown";
}

inline GeneratorKind kind_from_name(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(GeneratorKind::sphere_random); ++i) {
    const auto k = static_cast<GeneratorKind>(i);
    if (s == kind_name(k))
      return k;
  }
  throw ConfigError("unknown generator kind '" + s + "'");
}

inline constexpr double golden_alpha = std::numbers::phi - 1.0;

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kronecker;
  double alpha = golden_alpha;        // kronecker on the circle
  unsigned base = 2;                  // van_der_corput
  std::optional<std::uint64_t> seed;  // required by the random kinds
  double cluster_lo = 0.0;            // clustered: points uniform in [lo, hi)
  double cluster_hi = 0.1;
  std::size_t dim = 1;                // torus dimension for generate_torus

  bool random() const {
    return kind == GeneratorKind::uniform_random || kind == GeneratorKind::duplicated ||
           kind == GeneratorKind::clustered || kind == GeneratorKind::sphere_random;
  }
  bool on_sphere() const {
    return kind == GeneratorKind::sphere_fibonacci || kind == GeneratorKind::sphere_random;
  }

  void validate() const {
    if (random() && !seed)
      throw ConfigError(std::string(kind_name(kind)) + ": seed required");
    if (kind == GeneratorKind::van_der_corput && base < 2)
      throw ConfigError("van_der_corput: base must be >= 2");
    if (kind == GeneratorKind::kronecker &&
        (!std::isfinite(alpha) || alpha == std::floor(alpha)))
      throw ConfigError("kronecker: alpha must be finite and non-integral");
    if (kind == GeneratorKind::clustered &&
        !(cluster_lo >= 0.0 && cluster_lo < cluster_hi && cluster_hi <= 1.0))
      throw ConfigError("clustered: need 0 <= lo < hi <= 1");
    if (dim < 1)
      throw ConfigError("dimension must be >= 1");
  }

  std::string describe() const {
    char buf[160];
    switch (kind) {
    case GeneratorKind::kronecker:
      std::snprintf(buf, sizeof buf, "kronecker alpha=%.17g", alpha);
      break;
    case GeneratorKind::van_der_corput:
      std::snprintf(buf, sizeof buf, "van_der_corput base=%u", base);
      break;
    case GeneratorKind::clustered:
      std::snprintf(buf, sizeof buf, "clustered lo=%.17g hi=%.17g seed=%llu", cluster_lo, cluster_hi,
                    static_cast<unsigned long long>(seed.value_or(0)));
      break;
    default:
      if (random())
        std::snprintf(buf, sizeof buf, "%s seed=%llu", kind_name(kind),
                      static_cast<unsigned long long>(seed.value_or(0)));
      else
        std::snprintf(buf, sizeof buf, "%s", kind_name(kind));
    }
    std::string s = buf;
    if (dim > 1)
      s += " dim=" + std::to_string(dim);
    return s;
  }
};

// Uniform doubles in [0, 1) with 53 random bits.
class UniformStream {
public:
  explicit UniformStream(std::uint64_t seed) : eng_(seed) {}
  double next() { return static_cast<double>(eng_() >> 11) * 0x1p-53; }

private:
  std::mt19937_64 eng_;
};

namespace detail {

// Radical inverse of n in base b as a correctly rounded quotient R / b^k.
inline double radical_inverse(std::uint64_t n, unsigned b) {
  std::uint64_t rev = 0;
  std::uint64_t denom = 1;
  while (n > 0) {
    rev = rev * b + n % b;
    denom *= b;
    n /= b;
  }
  const double x = static_cast<double>(rev) / static_cast<double>(denom);
  return x < 1.0 ? x : std::nextafter(1.0, 0.0);
}

inline constexpr std::array<unsigned, 16> small_primes{2, 3, 5, 7, 11, 13, 17, 19,
                                                       23, 29, 31, 37, 41, 43, 47, 53};

inline unsigned prime_at(std::size_t i) {
  if (i >= small_primes.size())
    throw ConfigError("torus dimension too large (at most 16)");
  return small_primes[i];
}

} // namespace detail

/// First n points of the sequence on the circle.
///
/// kronecker: frac(k alpha), k = 1..n. van_der_corput: radical inverse of
/// k = 0..n-1. uniform_random: the stream itself. duplicated: u1, u1, u2,
/// u2, ... clustered: lo + (hi - lo) u. lattice: k/n, k = 0..n-1 (depends on
/// n, so lattice prefixes are not lattices).
inline PointSet generate(const GeneratorSpec& spec, std::size_t n) {
  spec.validate();
  if (n < 1)
    throw ConfigError("generate: n must be >= 1");
  if (spec.on_sphere())
    throw ConfigError(std::string(kind_name(spec.kind)) + " generates sphere points; use generate_sphere");
  std::vector<double> v;
  v.reserve(n);
  switch (spec.kind) {
  case GeneratorKind::kronecker:
    for (std::size_t k = 1; k <= n; ++k)
      v.push_back(detail::reduce_unit(detail::frac_mul(static_cast<double>(k), spec.alpha)));
    break;
  case GeneratorKind::van_der_corput:
    for (std::size_t k = 0; k < n; ++k)
      v.push_back(detail::radical_inverse(k, spec.base));
    break;
  case GeneratorKind::uniform_random: {
    UniformStream u(*spec.seed);
    for (std::size_t k = 0; k < n; ++k)
      v.push_back(u.next());
    break;
  }
  case GeneratorKind::duplicated: {
    UniformStream u(*spec.seed);
    while (v.size() < n) {
      const double x = u.next();
      v.push_back(x);
      if (v.size() < n)
        v.push_back(x);
    }
    break;
  }
  case GeneratorKind::clustered: {
    UniformStream u(*spec.seed);
    const double w = spec.cluster_hi - spec.cluster_lo;
    for (std::size_t k = 0; k < n; ++k) {
      double x = spec.cluster_lo + w * u.next();
      if (x >= spec.cluster_hi)
        x = std::nextafter(spec.cluster_hi, 0.0);
      v.push_back(x);
    }
    break;
  }
  case GeneratorKind::lattice:
    for (std::size_t k = 0; k < n; ++k)
      v.push_back(static_cast<double>(k) / static_cast<double>(n));
    break;
  default:
    break;
  }
  return PointSet(std::move(v), spec.describe());
}

/// First n points on T^dim. kronecker uses alpha_i = frac(sqrt(p_i)) for the
/// first primes (alpha itself when dim = 1), van_der_corput becomes the
/// Halton sequence in prime bases, the random kinds fill coordinates from one
/// stream point by point.
inline std::vector<TorusPoint> generate_torus(const GeneratorSpec& spec, std::size_t n) {
  spec.validate();
  if (spec.dim == 1) {
    const PointSet p = generate(spec, n);
    std::vector<TorusPoint> out;
    for (double x : p.values())
      out.push_back({x});
    return out;
  }
  if (n < 1)
    throw ConfigError("generate_torus: n must be >= 1");
  std::vector<TorusPoint> out(n, TorusPoint(spec.dim));
  switch (spec.kind) {
  case GeneratorKind::kronecker:
    for (std::size_t i = 0; i < spec.dim; ++i) {
      const double s = std::sqrt(static_cast<double>(detail::prime_at(i)));
      const double a = s - std::floor(s);
      for (std::size_t k = 0; k < n; ++k)
        out[k][i] = detail::reduce_unit(detail::frac_mul(static_cast<double>(k + 1), a));
    }
    break;
  case GeneratorKind::van_der_corput:
    for (std::size_t i = 0; i < spec.dim; ++i)
      for (std::size_t k = 0; k < n; ++k)
        out[k][i] = detail::radical_inverse(k, detail::prime_at(i));
    break;
  case GeneratorKind::uniform_random: {
    UniformStream u(*spec.seed);
    for (auto& p : out)
      for (double& c : p)
        c = u.next();
    break;
  }
  default:
    throw ConfigError(std::string(kind_name(spec.kind)) + " is not available on the torus");
  }
  return out;
}

/// Points on the unit sphere. sphere_fibonacci is the golden-angle spiral
/// z_k = 1 - (2k+1)/n (depends on n); sphere_random takes z = 2u - 1 and
/// phi = 2 pi v from consecutive stream values.
inline std::vector<SpherePoint> generate_sphere(const GeneratorSpec& spec, std::size_t n) {
  spec.validate();
  if (n < 1)
    throw ConfigError("generate_sphere: n must be >= 1");
  auto make = [](double z, double phi_turns) {
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double ph = detail::reduce_centered(phi_turns);
    SpherePoint p{rho * detail::cos_2pi(ph), rho * detail::sin_2pi(ph), z};
    const double len = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    for (double& c : p)
      c /= len;
    return p;
  };
  std::vector<SpherePoint> out;
  out.reserve(n);
  if (spec.kind == GeneratorKind::sphere_fibonacci) {
    // golden angle as a fraction of a full turn
    const double turn = 1.0 - golden_alpha;
    const double nd = static_cast<double>(n);
    for (std::size_t k = 0; k < n; ++k) {
      const double z = 1.0 - (2.0 * static_cast<double>(k) + 1.0) / nd;
      out.push_back(make(z, detail::frac_mul(static_cast<double>(k), turn)));
    }
  } else if (spec.kind == GeneratorKind::sphere_random) {
    UniformStream u(*spec.seed);
    for (std::size_t k = 0; k < n; ++k) {
      const double z = 2.0 * u.next() - 1.0;
      out.push_back(make(z, u.next()));
    }
  } else {
    throw ConfigError(std::string(kind_name(spec.kind)) + " is not a sphere generator");
  }
  return out;
}

// ---- point files ---------------------------------------------------------
//
//   # free comment lines anywhere
//   <space> <N>          circle | torus_<d> | sphere2
//   <coordinates>        one point per line, 17 significant digits

using PointData = std::variant<PointSet, std::vector<TorusPoint>, std::vector<SpherePoint>>;

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void write_header(std::ostream& os, const std::string& space, std::size_t n,
                         const std::vector<std::string>& comments) {
  for (const std::string& c : comments)
    os << "# " << c << '\n';
  os << "# rng " << rng_version << '\n';
  os << space << ' ' << n << '\n';
}

} // namespace detail

inline void write_points(std::ostream& os, const PointSet& p, const std::vector<std::string>& comments = {}) {
  detail::write_header(os, "circle", p.size(), comments);
  for (double x : p.values())
    os << detail::fmt17(x) << '\n';
}

inline void write_points(std::ostream& os, const std::vector<TorusPoint>& p,
                         const std::vector<std::string>& comments = {}) {
  const std::size_t d = p.empty() ? 1 : p.front().size();
  detail::write_header(os, space_name(SpaceTag::torus, d), p.size(), comments);
  for (const TorusPoint& x : p) {
    if (x.size() != d)
      throw DomainError("write_points: ragged torus points");
    for (std::size_t i = 0; i < d; ++i)
      os << (i ? " " : "") << detail::fmt17(x[i]);
    os << '\n';
  }
}

inline void write_points(std::ostream& os, const std::vector<SpherePoint>& p,
                         const std::vector<std::string>& comments = {}) {
  detail::write_header(os, "sphere2", p.size(), comments);
  for (const SpherePoint& x : p)
    os << detail::fmt17(x[0]) << ' ' << detail::fmt17(x[1]) << ' ' << detail::fmt17(x[2]) << '\n';
}

/// Parses a point file. Malformed content raises InputError with the line
/// number.
inline PointData read_points(std::istream& is, const std::string& source = "<stream>") {
  auto fail = [&](std::size_t line, const std::string& what) -> InputError {
    return InputError(source + ":" + std::to_string(line) + ": " + what);
  };
  std::string line;
  std::size_t lineno = 0;
  std::string space;
  std::size_t n = 0;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    std::istringstream ls(line);
    if (!have_header) {
      if (!(ls >> space >> n))
        throw fail(lineno, "expected header '<space> <N>'");
      if (space == "circle") {
        dim = 1;
      } else if (space == "sphere2") {
        dim = 3;
      } else if (space.rfind("torus_", 0) == 0) {
        try {
          dim = std::stoul(space.substr(6));
        } catch (const std::exception&) {
          throw fail(lineno, "bad torus dimension");
        }
        if (dim < 1)
          throw fail(lineno, "bad torus dimension");
      } else {
        throw fail(lineno, "unknown space '" + space + "'");
      }
      have_header = true;
      rows.reserve(n);
      continue;
    }
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      char* end = nullptr;
      const double x = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0' || !std::isfinite(x))
        throw fail(lineno, "bad number '" + tok + "'");
      row.push_back(x);
    }
    if (row.size() != dim)
      throw fail(lineno, "expected " + std::to_string(dim) + " coordinates");
    rows.push_back(std::move(row));
  }
  if (!have_header)
    throw InputError(source + ": missing header");
  if (rows.size() != n)
    throw InputError(source + ": header announces " + std::to_string(n) + " points, found " +
                     std::to_string(rows.size()));
  try {
    if (space == "circle") {
      std::vector<double> v;
      for (const auto& r : rows)
        v.push_back(r[0]);
      return PointSet(std::move(v), source);
    }
    if (space == "sphere2") {
      std::vector<SpherePoint> v;
      for (const auto& r : rows) {
        SpherePoint p{r[0], r[1], r[2]};
        if (std::abs(std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]) - 1.0) > 1e-12)
          throw DomainError("sphere point is not a unit vector");
        v.push_back(p);
      }
      return v;
    }
    std::vector<TorusPoint> v(rows.begin(), rows.end());
    return v;
  } catch (const DomainError& e) {
    throw InputError(source + ": " + e.what());
  }
}

inline PointData read_points_file(const std::string& path) {
  std::ifstream f(path);
  if (!f)
    throw InputError("cannot open point file '" + path + "'");
  return read_points(f, path);
}

} // namespace equidist
