#ifndef ISOFORM_CLOSURE_HPP_
#define ISOFORM_CLOSURE_HPP_

#include <optional>
#include <vector>

#include "isoform/semigroup_set.hpp"

namespace isoform {

// Breadth-first product saturation with canonical deduplication. Elements
// are words in the generators; each generation multiplies the frontier by
// the generator set on the right. Products below rank_tol in norm are
// snapped to the exact zero matrix. After word saturation (or the cap),
// near-idempotent power limits of the elements are adjoined and the set is
// re-saturated against them. Hitting closure_cap is not an error: the
// result is returned with saturated = false.
SemigroupSet closure(const GeneratorInput& gens, const ToleranceConfig& cfg);

struct LimitPointOptions {
  double norm_bound = 0.0;    // 0 -> 64 * max(1, ||T||)
  bool include_zero = true;   // admit the zero limit when r(T) < 1 - spec_tol
  double candidate_tol = 0.0; // 0 -> 10 * eq_tol
  bool polish = true;         // Newton-polish candidates toward idempotency
};

// Near-idempotent accumulation points of the power sequence {T^j}.
// Examined exponents are 1..4n plus doublings 8n, 16n, ... up to 64 n^2.
// A candidate T^j with ||X^2 - X|| <= candidate_tol is polished by the
// idempotent iteration X <- 3X^2 - 2X^3 (which preserves range(X) within
// range(T^j)) and kept iff the result satisfies ||P^2 - P|| <= 10 eq_tol.
// Power norms beyond twice the bound raise a hypothesis error.
std::vector<ComplexMatrix> detect_limit_points(const ComplexMatrix& t,
                                               const ToleranceConfig& cfg,
                                               const LimitPointOptions& opts = {});

// First element T of s (canonical order) with ||a T b|| > rank_tol.
std::optional<ComplexMatrix> product_probe(const ComplexMatrix& a,
                                           const SemigroupSet& s,
                                           const ComplexMatrix& b,
                                           const ToleranceConfig& cfg);

// The two-sided ideal {A t B : A, B in s united with I}, saturated with the
// same procedure as closure. t must lie within eq_tol of an element of s.
SemigroupSet ideal(const SemigroupSet& s, const ComplexMatrix& t,
                   const ToleranceConfig& cfg);

}  // namespace isoform

#endif  // ISOFORM_CLOSURE_HPP_
