#include "isoform/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace isoform {

ComplexMatrix::ComplexMatrix(
    std::initializer_list<std::initializer_list<cd>> rows) {
  rows_ = static_cast<int>(rows.size());
  cols_ = rows_ > 0 ? static_cast<int>(rows.begin()->size()) : 0;
  a_.reserve(static_cast<std::size_t>(rows_) * cols_);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != cols_)
      throw_error(ErrorKind::invalid_argument, "ragged matrix initializer");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

ComplexMatrix ComplexMatrix::identity(int n) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::unit(int n, int i, int j) {
  ComplexMatrix m(n, n);
  m(i, j) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(const std::vector<cd>& d) {
  ComplexMatrix m(static_cast<int>(d.size()), static_cast<int>(d.size()));
  for (int i = 0; i < m.rows(); ++i) m(i, i) = d[i];
  return m;
}

int ComplexMatrix::dim() const {
  if (!is_square())
    throw_error(ErrorKind::invalid_argument, "matrix is not square");
  return rows_;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = std::conj((*this)(i, j));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) m(j, i) = (*this)(i, j);
  return m;
}

cd ComplexMatrix::trace() const {
  cd t = 0.0;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::frobenius_norm() const {
  double s = 0.0;
  for (const cd& z : a_) s += std::norm(z);
  return std::sqrt(s);
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (const cd& z : a_) m = std::max(m, std::abs(z));
  return m;
}

bool ComplexMatrix::all_finite() const {
  for (const cd& z : a_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

ComplexMatrix ComplexMatrix::block(int i0, int j0, int r, int c) const {
  ComplexMatrix m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = (*this)(i0 + i, j0 + j);
  return m;
}

void ComplexMatrix::set_block(int i0, int j0, const ComplexMatrix& b) {
  for (int i = 0; i < b.rows(); ++i)
    for (int j = 0; j < b.cols(); ++j) (*this)(i0 + i, j0 + j) = b(i, j);
}

ComplexMatrix ComplexMatrix::col(int j) const {
  ComplexMatrix m(rows_, 1);
  for (int i = 0; i < rows_; ++i) m(i, 0) = (*this)(i, j);
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(cd s) {
  for (auto& z : a_) z *= s;
  return *this;
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m = a;
  m += b;
  return m;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix m = a;
  m -= b;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw_error(ErrorKind::invalid_argument, "matrix product shape mismatch");
  ComplexMatrix m(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const cd aik = a(i, k);
      if (aik == cd(0.0)) continue;
      for (int j = 0; j < b.cols(); ++j) m(i, j) += aik * b(k, j);
    }
  }
  return m;
}

ComplexMatrix operator*(cd s, const ComplexMatrix& a) {
  ComplexMatrix m = a;
  m *= s;
  return m;
}

ComplexMatrix operator*(const ComplexMatrix& a, cd s) { return s * a; }

ComplexMatrix block_embed(int m, int i, int j, const ComplexMatrix& u) {
  const int k = u.dim();
  ComplexMatrix out(m * k, m * k);
  out.set_block(i * k, j * k, u);
  return out;
}

ComplexMatrix vectorize(const ComplexMatrix& a) {
  ComplexMatrix v(a.rows() * a.cols(), 1);
  int idx = 0;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i) v(idx++, 0) = a(i, j);
  return v;
}

void validate_matrix(const ComplexMatrix& a, const char* what) {
  if (!a.is_square() || a.rows() == 0)
    throw_error(ErrorKind::invalid_argument,
                std::string(what) + ": matrix must be square and nonempty");
  if (!a.all_finite())
    throw_error(ErrorKind::invalid_argument,
                std::string(what) + ": matrix has non-finite entries");
}

}  // namespace isoform
