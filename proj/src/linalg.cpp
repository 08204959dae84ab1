#include "firstint/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <utility>

namespace firstint {

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, Vec entries)
    : rows_(rows), cols_(cols), a_(std::move(entries)) {
  if (a_.size() != rows_ * cols_)
    throw DimensionMismatch("DenseMatrix: entries length != rows*cols");
  if (!all_finite(a_)) throw Error("DenseMatrix: non-finite entry");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_columns(const std::vector<Vec>& cols) {
  if (cols.empty()) throw DimensionMismatch("from_columns: no columns");
  const std::size_t d = cols.front().size();
  DenseMatrix m(d, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != d)
      throw DimensionMismatch("from_columns: ragged columns");
    for (std::size_t i = 0; i < d; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

Vec DenseMatrix::column(std::size_t j) const {
  Vec c(rows_);
  for (std::size_t i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
  return c;
}

double DenseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : a_) m = std::max(m, std::abs(v));
  return m;
}

Vec DenseMatrix::apply(const Vec& v) const {
  if (v.size() != cols_) throw DimensionMismatch("DenseMatrix::apply");
  Vec out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  return out;
}

Vec DenseMatrix::apply_transposed(const Vec& v) const {
  if (v.size() != rows_) throw DimensionMismatch("DenseMatrix::apply_transposed");
  Vec out(cols_, 0.0);
  for (std::size_t j = 0; j < cols_; ++j)
    for (std::size_t i = 0; i < rows_; ++i) out[j] += (*this)(i, j) * v[i];
  return out;
}

DenseMatrix DenseMatrix::multiply(const DenseMatrix& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("DenseMatrix::multiply");
  DenseMatrix out(rows_, other.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < other.cols_; ++j)
        out(i, j) += aik * other(k, j);
    }
  return out;
}

DenseMatrix DenseMatrix::transposed_multiply(const DenseMatrix& other) const {
  if (rows_ != other.rows_)
    throw DimensionMismatch("DenseMatrix::transposed_multiply");
  DenseMatrix out(cols_, other.cols_);
  for (std::size_t i = 0; i < cols_; ++i)
    for (std::size_t j = 0; j < other.cols_; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < rows_; ++k) s += (*this)(k, i) * other(k, j);
      out(i, j) = s;
    }
  return out;
}

LuFactorization::LuFactorization(const DenseMatrix& m)
    : n_(m.rows()), lu_(m), perm_(m.rows()) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("LuFactorization: matrix not square");
  if (n_ == 0) throw DimensionMismatch("LuFactorization: empty matrix");
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
  const double pivot_floor = 1e-13 * m.max_abs();
  smallest_pivot_ = std::numeric_limits<double>::infinity();

  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t imax = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) { best = v; imax = i; }
    }
    smallest_pivot_ = std::min(smallest_pivot_, best);
    if (best <= pivot_floor) {
      singular_ = true;
      smallest_pivot_ = best;
      return;
    }
    if (imax != k) {
      std::swap(perm_[imax], perm_[k]);
      for (std::size_t j = 0; j < n_; ++j) std::swap(lu_(imax, j), lu_(k, j));
      sign_ = -sign_;
    }
    for (std::size_t i = k + 1; i < n_; ++i) {
      lu_(i, k) /= lu_(k, k);
      const double lik = lu_(i, k);
      for (std::size_t j = k + 1; j < n_; ++j) lu_(i, j) -= lik * lu_(k, j);
    }
  }
}

double LuFactorization::determinant() const {
  if (singular_) return 0.0;
  double det = sign_;
  for (std::size_t k = 0; k < n_; ++k) det *= lu_(k, k);
  return det;
}

Vec LuFactorization::solve(const Vec& rhs) const {
  if (singular_) throw SingularMatrix(smallest_pivot_);
  if (rhs.size() != n_) throw DimensionMismatch("LuFactorization::solve");
  Vec x(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    x[i] = rhs[perm_[i]];
    for (std::size_t k = 0; k < i; ++k) x[i] -= lu_(i, k) * x[k];
  }
  for (std::size_t ii = n_; ii-- > 0;) {
    for (std::size_t k = ii + 1; k < n_; ++k) x[ii] -= lu_(ii, k) * x[k];
    x[ii] /= lu_(ii, ii);
  }
  return x;
}

Vec solve_square(const DenseMatrix& m, const Vec& rhs) {
  return LuFactorization(m).solve(rhs);
}

double determinant(const DenseMatrix& m) {
  return LuFactorization(m).determinant();
}

namespace {

void require_direction_shapes(const DenseMatrix& a, const DenseMatrix& b,
                              const char* where) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch(std::string(where) + ": A and B shapes differ");
  if (a.cols() < 1 || a.cols() > a.rows())
    throw DimensionMismatch(std::string(where) + ": need 1 <= M <= d");
}

}  // namespace

DenseMatrix oblique_projector(const DenseMatrix& a, const DenseMatrix& b) {
  require_direction_shapes(a, b, "oblique_projector");
  const std::size_t d = a.rows(), m = a.cols();
  const LuFactorization bta(b.transposed_multiply(a));
  if (bta.singular()) throw ComplementarityFailure();

  // X = (B^T A)^{-1} B^T, one solve per state dimension.
  DenseMatrix x(m, d);
  for (std::size_t j = 0; j < d; ++j) {
    Vec btcol(m);
    for (std::size_t i = 0; i < m; ++i) btcol[i] = b(j, i);
    const Vec sol = bta.solve(btcol);
    for (std::size_t i = 0; i < m; ++i) x(i, j) = sol[i];
  }

  DenseMatrix p = DenseMatrix::identity(d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = a(i, k);
      for (std::size_t j = 0; j < d; ++j) p(i, j) -= aik * x(k, j);
    }
  return p;
}

double wedge_contract(const DenseMatrix& u, const DenseMatrix& v) {
  require_direction_shapes(u, v, "wedge_contract");
  return determinant(v.transposed_multiply(u));
}

Vec projected_vector_field(const Vec& ftilde, const DenseMatrix& a,
                           const DenseMatrix& b) {
  require_direction_shapes(a, b, "projected_vector_field");
  if (ftilde.size() != a.rows())
    throw DimensionMismatch("projected_vector_field: ftilde length != d");
  const LuFactorization bta(b.transposed_multiply(a));
  if (bta.singular()) throw ComplementarityFailure();
  const Vec coeff = bta.solve(b.apply_transposed(ftilde));
  Vec out = ftilde;
  for (std::size_t j = 0; j < a.cols(); ++j) axpy(out, -coeff[j], a.column(j));
  return out;
}

}  // namespace firstint
