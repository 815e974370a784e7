#ifndef ISOFORM_COMPLEX_MATRIX_HPP_
#define ISOFORM_COMPLEX_MATRIX_HPP_

#include <complex>
#include <initializer_list>
#include <vector>

#include "isoform/error.hpp"

namespace isoform {

using cd = std::complex<double>;

// Dense complex matrix, row-major. The domain objects are square n x n
// matrices; rectangular shapes appear internally (range bases, stacked
// vectorizations) and are supported by the same type.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}

  // Row-major nested-list construction, mainly for tests and corpora.
  ComplexMatrix(std::initializer_list<std::initializer_list<cd>> rows);

  static ComplexMatrix zero(int n) { return ComplexMatrix(n, n); }
  static ComplexMatrix zero(int rows, int cols) {
    return ComplexMatrix(rows, cols);
  }
  static ComplexMatrix identity(int n);
  // E_ij of size n x n (single unit entry).
  static ComplexMatrix unit(int n, int i, int j);
  static ComplexMatrix diagonal(const std::vector<cd>& d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }
  int dim() const;

  cd& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
  const cd& operator()(int i, int j) const {
    return a_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const std::vector<cd>& data() const { return a_; }
  std::vector<cd>& data() { return a_; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  cd trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexMatrix block(int i0, int j0, int r, int c) const;
  void set_block(int i0, int j0, const ComplexMatrix& b);
  // Column j as an n x 1 matrix.
  ComplexMatrix col(int j) const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(cd s);

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<cd> a_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cd s, const ComplexMatrix& a);
ComplexMatrix operator*(const ComplexMatrix& a, cd s);

// n x n block matrix with the (i,j) block equal to u and zeros elsewhere;
// result is (m*k) x (m*k) for a k x k block.
ComplexMatrix block_embed(int m, int i, int j, const ComplexMatrix& u);

// vec(A): columns stacked, as an (rows*cols) x 1 matrix.
ComplexMatrix vectorize(const ComplexMatrix& a);

// Checks squareness and finiteness of a domain matrix.
void validate_matrix(const ComplexMatrix& a, const char* what);

}  // namespace isoform

#endif  // ISOFORM_COMPLEX_MATRIX_HPP_
