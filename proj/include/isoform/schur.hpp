#ifndef ISOFORM_SCHUR_HPP_
#define ISOFORM_SCHUR_HPP_

#include <vector>

#include "isoform/complex_matrix.hpp"

namespace isoform {

// Unitary Schur factorization a = q * t * q^*, t upper triangular.
struct SchurDecomposition {
  ComplexMatrix q;
  ComplexMatrix t;
  int qr_steps = 0;

  std::vector<cd> diagonal() const {
    std::vector<cd> d(t.dim());
    for (int i = 0; i < t.dim(); ++i) d[i] = t(i, i);
    return d;
  }
};

// Householder reduction to upper Hessenberg followed by explicit
// single-shift QR with Wilkinson shifts and an occasional exceptional
// shift to break symmetric stalls. The total number of QR steps is capped
// at iter_factor * n; exceeding the cap raises a convergence error.
//
// Backward stability: the reconstruction residual ||q t q^* - a|| is
// bounded by roughly 20 * n * eps * ||a||_F in practice (checked by the
// property tests on random matrices).
SchurDecomposition schur_decompose(const ComplexMatrix& a,
                                   int iter_factor = 100);

// Eigenvalues with algebraic multiplicity, canonically ordered
// (lexicographic by real then imaginary part).
std::vector<cd> eigenvalues(const ComplexMatrix& a, int iter_factor = 100);

// Stable reorder: moves the selected diagonal entries of s.t to the
// leading positions by adjacent unitary swaps, preserving relative order.
void reorder_schur(SchurDecomposition& s, const std::vector<char>& select);

// Stable sort of the triangular diagonal into ascending key order by
// adjacent unitary swaps; key is permuted alongside.
void sort_schur(SchurDecomposition& s, std::vector<int>& key);

// Solves t11 * x - x * t22 = c for upper-triangular t11, t22. Throws a
// convergence error when the spectra are too close to separate.
ComplexMatrix sylvester_triangular(const ComplexMatrix& t11,
                                   const ComplexMatrix& t22,
                                   const ComplexMatrix& c);

}  // namespace isoform

#endif  // ISOFORM_SCHUR_HPP_
