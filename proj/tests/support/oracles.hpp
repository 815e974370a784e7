#ifndef ISOFORM_TESTS_SUPPORT_ORACLES_HPP_
#define ISOFORM_TESTS_SUPPORT_ORACLES_HPP_

// Independent test oracles: closed-form 2x2 linear algebra and a
// brute-force invariant-subspace search. These deliberately avoid the
// library's Schur/QR path so they can check it.

#include <array>
#include <vector>

#include "isoform/complex_matrix.hpp"
#include "isoform/tolerance.hpp"

namespace isoform::testsupport {

// Singular values of a 2x2 complex matrix via the characteristic
// polynomial of T^*T (quadratic formula), descending.
std::array<double, 2> svd2x2(const ComplexMatrix& t);

// Eigenvalues of a general 2x2 complex matrix by the quadratic formula.
std::array<cd, 2> eig2x2(const ComplexMatrix& t);

// Eigenvalues of a Hermitian 2x2 [[a, b], [conj(b), c]], ascending.
std::array<double, 2> eig2x2_hermitian(const ComplexMatrix& t);

// Unique PSD square root of a Hermitian PD 2x2 matrix:
// S = (M + sqrt(det) I) / sqrt(tr + 2 sqrt(det)).
ComplexMatrix sqrt2x2_pd(const ComplexMatrix& m);

// Brute-force irreducibility oracle for dim <= 3: enumerates candidate
// invariant subspaces as spans of subsets of generalized eigenvectors of
// the generators and checks joint invariance directly.
bool oracle_irreducible(const std::vector<ComplexMatrix>& gens,
                        const ToleranceConfig& cfg);

}  // namespace isoform::testsupport

#endif  // ISOFORM_TESTS_SUPPORT_ORACLES_HPP_
