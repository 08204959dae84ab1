#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "firstint/errors.hpp"

// Small helpers over std::vector<double>; every integrator works in terms of
// these rather than a matrix library because d stays tiny (a few dozen at most).

namespace firstint {

using Vec = std::vector<double>;

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double inf_norm(const Vec& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

inline double two_norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline bool all_finite(const Vec& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

/// x + s*y
inline Vec add_scaled(const Vec& x, double s, const Vec& y) {
  Vec r(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] += s * y[i];
  return r;
}

/// y += s*x
inline void axpy(Vec& y, double s, const Vec& x) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  return r;
}

inline void require_same_size(const Vec& a, const Vec& b, const char* where) {
  if (a.size() != b.size())
    throw DimensionMismatch(std::string(where) + ": size mismatch");
}

}  // namespace firstint
