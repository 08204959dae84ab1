#pragma once

// Independent test oracles: brute-force cofactor determinants, the explicit
// Einstein-sum wedge contraction, and finite-difference gradients.  These stay
// independent of the library's LU / projection code paths on purpose.

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "firstint/core.hpp"
#include "firstint/linalg.hpp"

namespace oracles {

using firstint::DenseMatrix;
using firstint::Vec;

/// Cofactor expansion along the first row; O(n!) but n stays <= 6 in tests.
inline double cofactor_determinant(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  if (n == 1) return m(0, 0);
  double det = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    DenseMatrix minor(n - 1, n - 1);
    for (std::size_t r = 1; r < n; ++r) {
      std::size_t cc = 0;
      for (std::size_t c = 0; c < n; ++c) {
        if (c == j) continue;
        minor(r - 1, cc++) = m(r, c);
      }
    }
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    det += sign * m(0, j) * cofactor_determinant(minor);
  }
  return det;
}

/// Wedge coefficient (u^1 ^ ... ^ u^K)_{j1..jK} = det [ u^b_{j_a} ].
inline double wedge_coefficient(const DenseMatrix& u,
                                const std::vector<std::size_t>& idx) {
  const std::size_t k = idx.size();
  DenseMatrix m(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) m(a, b) = u(idx[a], b);
  return cofactor_determinant(m);
}

/// Brute-force Einstein sum over all index tuples:
/// (u^1 ^ ... ^ u^K)_{j1..jK} v^1_{j1} ... v^K_{jK}.
inline double wedge_einstein_sum(const DenseMatrix& u, const DenseMatrix& v) {
  const std::size_t d = u.rows(), k = u.cols();
  std::vector<std::size_t> idx(k, 0);
  double total = 0.0;
  for (;;) {
    double term = wedge_coefficient(u, idx);
    for (std::size_t a = 0; a < k; ++a) term *= v(idx[a], a);
    total += term;
    std::size_t pos = k;
    while (pos-- > 0) {
      if (++idx[pos] < d) break;
      idx[pos] = 0;
      if (pos == 0) return total;
    }
  }
}

/// Central-difference gradient, independent of check_gradient.
inline Vec fd_gradient(const firstint::FirstIntegral& integral,
                       const firstint::StateVector& x, double eps) {
  Vec g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    Vec hi = x.entries(), lo = x.entries();
    hi[i] += eps;
    lo[i] -= eps;
    g[i] = (integral.value(firstint::StateVector(hi)) -
            integral.value(firstint::StateVector(lo))) /
           (2 * eps);
  }
  return g;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

/// Kepler state with entries in [-2,2] and planar radius >= rmin.
inline firstint::StateVector random_kepler_state(std::mt19937_64& rng,
                                                 double rmin) {
  for (;;) {
    Vec x(4);
    for (double& v : x) v = uniform(rng, -2.0, 2.0);
    if (std::hypot(x[0], x[1]) >= rmin) return firstint::StateVector(x);
  }
}

/// A nearby second state: both endpoints in the box with radius >= rmin and
/// separation bounded by `spread` in every coordinate.
inline firstint::StateVector nearby_kepler_state(std::mt19937_64& rng,
                                                 const firstint::StateVector& x,
                                                 double rmin, double spread) {
  for (;;) {
    Vec y = x.entries();
    for (double& v : y) v += uniform(rng, -spread, spread);
    bool in_box = true;
    for (double v : y) in_box = in_box && std::abs(v) <= 2.0;
    if (in_box && std::hypot(y[0], y[1]) >= rmin)
      return firstint::StateVector(y);
  }
}

inline DenseMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                                 std::size_t cols, double lo = -1.0,
                                 double hi = 1.0) {
  DenseMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

/// Infinity-norm condition number of a small square matrix via explicit
/// inverse columns.
inline double cond_inf(const DenseMatrix& m) {
  const std::size_t n = m.rows();
  firstint::LuFactorization lu(m);
  if (lu.singular()) return std::numeric_limits<double>::infinity();
  DenseMatrix inv(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Vec e(n, 0.0);
    e[j] = 1.0;
    const Vec col = lu.solve(e);
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  const auto row_norm = [](const DenseMatrix& a) {
    double best = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
      best = std::max(best, s);
    }
    return best;
  };
  return row_norm(m) * row_norm(inv);
}

}  // namespace oracles
