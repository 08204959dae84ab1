#pragma once

#include <cstddef>
#include <vector>

#include "firstint/errors.hpp"
#include "firstint/vecops.hpp"

// Small dense linear algebra for the projection machinery: square solves,
// determinants, oblique projectors and the wedge/determinant contraction.
// Everything here is O(n^3) at worst with n <= a few dozen.

namespace firstint {

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), a_(rows * cols, 0.0) {}
  DenseMatrix(std::size_t rows, std::size_t cols, Vec entries);

  static DenseMatrix identity(std::size_t n);
  /// Assemble a d x M matrix from M column vectors of length d.
  static DenseMatrix from_columns(const std::vector<Vec>& cols);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double operator()(std::size_t i, std::size_t j) const {
    return a_[i * cols_ + j];
  }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const Vec& entries() const { return a_; }

  Vec column(std::size_t j) const;
  double max_abs() const;

  /// this * v
  Vec apply(const Vec& v) const;
  /// this^T * v
  Vec apply_transposed(const Vec& v) const;
  /// this * other
  DenseMatrix multiply(const DenseMatrix& other) const;
  /// this^T * other
  DenseMatrix transposed_multiply(const DenseMatrix& other) const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  Vec a_;  // row-major
};

/// LU factorization with partial pivoting.  A pivot below
/// 1e-13 * max|entry| of the input is treated as singular.
class LuFactorization {
 public:
  explicit LuFactorization(const DenseMatrix& m);

  bool singular() const { return singular_; }
  double smallest_pivot() const { return smallest_pivot_; }
  /// Determinant from the pivot product and permutation sign (0 if singular).
  double determinant() const;
  /// Solve m * v = rhs.  Throws SingularMatrix when the factorization failed.
  Vec solve(const Vec& rhs) const;

 private:
  std::size_t n_;
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
  int sign_ = 1;
  bool singular_ = false;
  double smallest_pivot_ = 0.0;
};

/// Solve m * v = rhs via LU with partial pivoting (m square).
Vec solve_square(const DenseMatrix& m, const Vec& rhs);

/// Determinant via LU; a singular matrix yields 0 rather than an error.
double determinant(const DenseMatrix& m);

/// P = I - A (B^T A)^{-1} B^T:  range(P) = span(B)^perp, null(P) = span(A).
/// Throws ComplementarityFailure when B^T A is singular to working precision.
DenseMatrix oblique_projector(const DenseMatrix& a, const DenseMatrix& b);

/// The contraction (u^1 ^ ... ^ u^K)_{j1..jK} v^1_{j1} ... v^K_{jK},
/// computed as det(V^T U).
double wedge_contract(const DenseMatrix& u, const DenseMatrix& v);

/// P * ftilde computed as ftilde - A (B^T A)^{-1} B^T ftilde, never forming P.
Vec projected_vector_field(const Vec& ftilde, const DenseMatrix& a,
                           const DenseMatrix& b);

}  // namespace firstint
