#ifndef ISOFORM_STRUCTURE_HPP_
#define ISOFORM_STRUCTURE_HPP_

#include <optional>
#include <utility>
#include <vector>

#include "isoform/semigroup_set.hpp"

namespace isoform {

// ---- irreducibility (Burnside span test) --------------------------------

struct IrreducibilityResult {
  bool irreducible = false;
  int span_dimension = 0;  // dimension of the algebra spanned by S and I
  // Orthonormal basis (n x d) of a nontrivial joint invariant subspace,
  // when one was found for a reducible set.
  std::optional<ComplexMatrix> witness;
  bool witness_verified = false;
  double witness_residual = 0.0;
};

// Irreducible iff the multiplicative span closure of S together with I has
// dimension n^2 (Burnside). The witness is searched first through the
// commutant (eigenspaces of a non-scalar commuting matrix), then through
// orbit closures of eigenvector candidates.
IrreducibilityResult is_irreducible(const SemigroupSet& s,
                                    const ToleranceConfig& cfg);

// ---- idempotents ---------------------------------------------------------

struct FoundIdempotent {
  ComplexMatrix matrix;
  bool closure_derived = false;  // found as a power limit, not as an element
};

// Elements X with ||X^2 - X|| <= eq_tol, zero excluded. For unsaturated
// sets the list is augmented with polished power limits of non-nilpotent
// elements, flagged closure_derived.
std::vector<FoundIdempotent> find_idempotents(const SemigroupSet& s,
                                              const ToleranceConfig& cfg);

struct CommuteCheck {
  bool commute = true;
  // A violating pair, when commute is false.
  std::optional<std::pair<ComplexMatrix, ComplexMatrix>> witness;
};

CommuteCheck idempotents_commute(const std::vector<ComplexMatrix>& idems,
                                 const ToleranceConfig& cfg);

// ---- structure conditions (ii) and (iii) -----------------------------------

struct ConditionIiVerdict {
  bool spectra_ok = false;
  bool idempotents_commute = false;
  bool verdict = false;
  std::optional<std::size_t> offending_element;
  std::optional<cd> offending_eigenvalue;
  std::optional<std::pair<ComplexMatrix, ComplexMatrix>> commute_witness;
};

ConditionIiVerdict check_condition_ii(const SemigroupSet& s,
                                      const ToleranceConfig& cfg);

struct ConditionIiiVerdict {
  double c1 = 0.0;
  double c2 = 0.0;
  bool idempotents_commute = false;
  // Spectral-radius certificate: some element has r(T) > 1 + spec_tol, so
  // no uniform upper bound can exist for the generated semigroup.
  bool norms_divergent = false;
  bool verdict = false;
  std::optional<std::pair<ComplexMatrix, ComplexMatrix>> commute_witness;
};

ConditionIiiVerdict check_condition_iii(const SemigroupSet& s,
                                        const ToleranceConfig& cfg);

// ---- disjoint idempotent families -----------------------------------------

struct IdempotentFamily {
  std::vector<ComplexMatrix> members;
  int common_rank = 0;
  bool spans_space = false;
  bool minimality_witnessed = false;
};

// Greedy-maximal family of pairwise disjoint idempotents of minimal rank,
// scanned in (rank, canonical) order.
IdempotentFamily maximal_disjoint_family(const SemigroupSet& s,
                                         const ToleranceConfig& cfg);

int minimal_nonzero_rank(const SemigroupSet& s, const ToleranceConfig& cfg);

bool is_nilpotent_element(const ComplexMatrix& t, const ToleranceConfig& cfg);

}  // namespace isoform

#endif  // ISOFORM_STRUCTURE_HPP_
