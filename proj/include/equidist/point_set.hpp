#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace equidist {

enum class SpaceTag { circle, torus, sphere2 };

inline std::string space_name(SpaceTag tag, std::size_t dim = 1) {
  switch (tag) {
  case SpaceTag::circle:
    return "circle";
  case SpaceTag::torus:
    return "torus_" + std::to_string(dim);
  case SpaceTag::sphere2:
    return "sphere2";
  }
  return "unknown";
}

using TorusPoint = std::vector<double>;
using SpherePoint = std::array<double, 3>;

// Finite ordered point set on the unit-length circle, values in [0, 1).
class PointSet {
public:
  PointSet() = default;

  explicit PointSet(std::vector<double> values, std::string label = {})
      : values_(std::move(values)), label_(std::move(label)) {
    for (double v : values_)
      if (!(v >= 0.0 && v < 1.0))
        throw DomainError("PointSet: value outside [0, 1)");
    sorted_ = std::is_sorted(values_.begin(), values_.end());
  }

  // Reduces arbitrary finite reals modulo 1 before construction.
  static PointSet wrapped(std::span<const double> raw, std::string label = {}) {
    std::vector<double> v;
    v.reserve(raw.size());
    for (double x : raw) {
      if (!std::isfinite(x))
        throw DomainError("PointSet: non-finite value");
      double r = x - std::floor(x);
      v.push_back(r >= 1.0 ? 0.0 : r);
    }
    return PointSet(std::move(v), std::move(label));
  }

  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  bool sorted() const { return sorted_; }
  const std::string& label() const { return label_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  // Nondecreasing copy; every pair sum canonicalizes through this so results
  // do not depend on input order.
  std::vector<double> sorted_values() const {
    std::vector<double> v = values_;
    if (!sorted_)
      std::sort(v.begin(), v.end());
    return v;
  }

  PointSet prefix(std::size_t n) const {
    return PointSet(std::vector<double>(values_.begin(), values_.begin() + std::min(n, size())), label_);
  }

private:
  std::vector<double> values_;
  bool sorted_ = true;
  std::string label_;
};

} // namespace equidist
