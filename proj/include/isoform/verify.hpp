#ifndef ISOFORM_VERIFY_HPP_
#define ISOFORM_VERIFY_HPP_

#include <vector>

#include "isoform/semigroup_set.hpp"

namespace isoform {

struct PartialIsometryCheck {
  bool ok = false;
  double residual = 0.0;  // worst of the four projection residuals
};

// T is a partial isometry iff T^*T and TT^* are both self-adjoint
// projections; each is checked for idempotency and Hermitian symmetry at
// eq_tol and the worst residual is reported.
PartialIsometryCheck is_partial_isometry(const ComplexMatrix& t,
                                         const ToleranceConfig& cfg);

enum class BlockState { empty, unitary_listed, unitary_unlisted, invalid };

struct BlockCell {
  BlockState state = BlockState::empty;
  int label = -1;  // index into the reference group when listed
};

struct BlockPattern {
  int m = 0;
  int k = 0;
  std::vector<BlockCell> occupancy;  // row-major m x m
  bool valid = false;  // all cells unitary-or-empty, <= 1 per row and column

  const BlockCell& cell(int i, int j) const { return occupancy[i * m + j]; }
};

// Classifies the k x k blocks of t: empty (norm <= rank_tol), a unitary
// matched against u_ref (within eq_tol) or unlisted, else invalid.
BlockPattern block_pattern(const ComplexMatrix& t, int m, int k,
                           const std::vector<ComplexMatrix>& u_ref,
                           const ToleranceConfig& cfg);

struct VerificationReport {
  bool all_partial_isometries = false;
  double worst_pi_residual = 0.0;
  int worst_pi_index = -1;
  bool sandwich_lower = false;  // every E_ij (x) U present in the set
  bool sandwich_upper = false;  // every element within the S1 pattern
  bool minimal_rank_matches_k = false;
  int minimal_rank = 0;

  bool all_ok() const {
    return all_partial_isometries && sandwich_lower && sandwich_upper &&
           minimal_rank_matches_k;
  }
};

// Checks S0(U) <= S <= S1(U) on the sampled set together with the
// minimal-rank claim. Failures are report fields, not errors.
VerificationReport verify_sandwich(const SemigroupSet& s, int m, int k,
                                   const std::vector<ComplexMatrix>& u,
                                   const ToleranceConfig& cfg);

}  // namespace isoform

#endif  // ISOFORM_VERIFY_HPP_
