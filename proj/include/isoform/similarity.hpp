#ifndef ISOFORM_SIMILARITY_HPP_
#define ISOFORM_SIMILARITY_HPP_

#include <vector>

#include "isoform/semigroup_set.hpp"
#include "isoform/structure.hpp"
#include "isoform/verify.hpp"

namespace isoform {

struct UnitarizationResult {
  ComplexMatrix similarity;  // Hermitian positive definite S_g
  std::vector<ComplexMatrix> group_sample;  // images S_g g S_g^-1
  double worst_residual = 0.0;              // max ||U^*U - I|| over images
  bool used_fallback = false;
};

// Finds Hermitian S_g > 0 with S_g g S_g^-1 unitary for every sample
// element. Primary route: Gram averaging M = avg g^*g, S_g = sqrt(M),
// exact for product-closed samples. Fallback: solve the fixed-point system
// {g^* X g = X, X Hermitian} and pick a positive definite solution of unit
// trace scale from its solution space.
UnitarizationResult unitarize_group(const std::vector<ComplexMatrix>& sample,
                                    const ToleranceConfig& cfg);

// Invertible B with B P_j B^-1 = E_jj (x) I_k in the canonical block
// layout; columns of B^-1 are orthonormal bases of the ranges of the P_j.
// A family that does not span the space raises the Case-2 signal.
ComplexMatrix orthonormalize_family(const IdempotentFamily& f,
                                    const ToleranceConfig& cfg);

struct LinkingIsometry {
  int index = 0;        // block row j in {1, .., m-1} (0-based)
  ComplexMatrix y;      // the P_j S P_1 representative, n x n
  double alpha = 0.0;   // Y^*Y = alpha P_1, Y Y^* = alpha P_j
};

// Picks a nonzero element of P_j S P_1 by the product probe and validates
// the proportionality relations. Requires the canonical layout (P_i =
// E_ii (x) I_k, diagonal block groups unitary).
LinkingIsometry find_linking(const SemigroupSet& s, int m, int k, int j,
                             const ToleranceConfig& cfg);

// Block-diagonal linking matrix: I_k in block (1,1), the (j,1) block of
// Y_j in block (j,j). Conjugating by its inverse lands E_j1 (x) I_k in the
// transformed set exactly.
ComplexMatrix linking_similarity(const std::vector<LinkingIsometry>& links,
                                 int m, int k, const ToleranceConfig& cfg);

struct SimilarityResult {
  ComplexMatrix similarity;          // S_sim; transformed = S_sim S S_sim^-1
  ComplexMatrix similarity_inverse;
  int block_count = 0;               // m
  int block_size = 0;                // k
  std::vector<ComplexMatrix> unitary_group_sample;
  SemigroupSet transformed;
  VerificationReport verification;
  // Stage factors: S_sim = stage_linking * stage_block_unitarize *
  // stage_orthonormalize.
  ComplexMatrix stage_orthonormalize;
  ComplexMatrix stage_block_unitarize;
  ComplexMatrix stage_linking;
};

// The constructive pipeline: disjoint idempotent family, orthonormalize,
// per-block unitarization, linking similarities, final verification.
// Callers are expected to have checked condition (ii) and irreducibility;
// a non-spanning family raises the Case-2 inconsistency error. A finished
// construction whose verification fails is returned with the failing
// report rather than thrown.
SimilarityResult build_similarity(const SemigroupSet& s,
                                  const ToleranceConfig& cfg);

}  // namespace isoform

#endif  // ISOFORM_SIMILARITY_HPP_
