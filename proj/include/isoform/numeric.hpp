#ifndef ISOFORM_NUMERIC_HPP_
#define ISOFORM_NUMERIC_HPP_

#include <vector>

#include "isoform/complex_matrix.hpp"
#include "isoform/tolerance.hpp"

namespace isoform {

// ---- norms, singular values, rank -------------------------------------

// Singular values in descending order, computed as the clamped square
// roots of the eigenvalues of T^* T (reuses the one eigen-kernel).
std::vector<double> singular_values(const ComplexMatrix& t);

// Operator norm = largest singular value.
double op_norm(const ComplexMatrix& t);

// Count of singular values above cfg.rank_tol.
int rank_numeric(const ComplexMatrix& t, const ToleranceConfig& cfg);

// Operator-norm distance with Frobenius fast paths on both sides.
double op_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b);
bool within(const ComplexMatrix& a, const ComplexMatrix& b, double tol);
bool op_norm_leq(const ComplexMatrix& d, double tol);

double spectral_radius(const ComplexMatrix& t);

// Classification band for "this eigenvalue is a perturbed zero". Normal
// matrices have perfectly conditioned eigenvalues and keep the strict
// spec_tol; for non-normal input a defective zero of Jordan index j
// scatters computed eigenvalues across a disk of radius ~ (n eps ||T||)^(1/j),
// so the band widens to the worst-case (j = n) splatter radius.
double spectral_zero_band(const ComplexMatrix& t, const ToleranceConfig& cfg);

// ---- linear solves ------------------------------------------------------

// Partial-pivoting LU. Factorization is done once; solve/inverse reuse it.
class LuSolver {
 public:
  explicit LuSolver(ComplexMatrix a);

  double min_pivot() const;
  ComplexMatrix solve(const ComplexMatrix& rhs) const;
  ComplexMatrix inverse() const;

 private:
  int n_;
  ComplexMatrix lu_;
  std::vector<int> perm_;
};

// Inverse with a singular-value guard: throws when the smallest singular
// value is at or below cfg.rank_tol.
ComplexMatrix inverse(const ComplexMatrix& a, const ToleranceConfig& cfg);

// First k columns of the column-pivoted Householder QR of a: an
// orthonormal basis of the dominant range directions.
ComplexMatrix orthonormal_range_basis(const ComplexMatrix& a, int k);

// Eigenbasis of a Hermitian matrix via the Schur kernel (the triangular
// factor of a Hermitian matrix is diagonal up to roundoff). Eigenvalues
// ascend; q columns are the matching orthonormal eigenvectors.
struct HermitianEigen {
  std::vector<double> values;
  ComplexMatrix q;
};
HermitianEigen hermitian_eigen(const ComplexMatrix& h);

// ---- positive-definite square root -------------------------------------

// Hermitian PD square root; input must be Hermitian within cfg.eq_tol and
// have minimum eigenvalue above cfg.rank_tol.
ComplexMatrix matrix_sqrt_pd(const ComplexMatrix& m, const ToleranceConfig& cfg);

// ---- spectral splitting -------------------------------------------------

struct UnimodularComponent {
  cd value;                 // lambda_i, |lambda_i| ~ 1
  ComplexMatrix projection; // E_i
};

struct InnerComponent {
  cd value;                 // mu_j, |mu_j| < 1 - spec_tol
  ComplexMatrix projection; // F_j
  ComplexMatrix nilpotent;  // N_j, commutes with F_j
};

// T = basis * diag(unitary_part, contraction_part) * basis^-1 where the
// unitary part is a diagonal unitary (bounded-powers case) and the
// contraction part carries the spectrum strictly inside the disk.
struct SpectralSplit {
  ComplexMatrix unitary_part;
  ComplexMatrix contraction_part;
  ComplexMatrix basis;
  ComplexMatrix basis_inverse;
  std::vector<UnimodularComponent> unimodular_eigs;
  std::vector<InnerComponent> inner_eigs;
};

// Splits the spectrum at the unit circle. An eigenvalue is unimodular iff
// |lambda| >= 1 - spec_tol; moduli beyond 1 + spec_tol violate the
// precondition, and moduli inside the band but further than spec_tol/2
// from 1 are reported as ambiguous. A defective unimodular eigenvalue
// (powers unbounded) raises a hypothesis error.
SpectralSplit spectral_split(const ComplexMatrix& t, const ToleranceConfig& cfg);

}  // namespace isoform

#endif  // ISOFORM_NUMERIC_HPP_
