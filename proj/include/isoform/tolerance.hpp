#ifndef ISOFORM_TOLERANCE_HPP_
#define ISOFORM_TOLERANCE_HPP_

#include <cstddef>

#include "isoform/error.hpp"

namespace isoform {

// Tolerance bundle threaded through every verdict-producing operation.
// Matrix equality always means operator-norm distance <= eq_tol.
//
// eq_tol defaults to 1e-9, suitable for corpora whose entries are exactly
// representable; closure-sampled corpora accumulate products of bounded
// matrices, so error grows linearly in word length and 1e-6 is the
// recommended override there.
struct ToleranceConfig {
  double eq_tol = 1e-9;      // matrix-equality threshold (operator norm)
  double spec_tol = 1e-6;    // eigenvalue-modulus threshold
  double rank_tol = 1e-6;    // singular-value threshold
  std::size_t closure_cap = 8192;  // max elements retained in a closure

  void validate() const {
    if (!(eq_tol > 0.0) || !(spec_tol > 0.0) || !(rank_tol > 0.0))
      throw_error(ErrorKind::invalid_argument,
                  "tolerances must be strictly positive");
    if (eq_tol > 1.0)
      throw_error(ErrorKind::invalid_argument, "eq_tol must be <= 1");
    if (closure_cap < 1)
      throw_error(ErrorKind::invalid_argument, "closure_cap must be >= 1");
  }
};

}  // namespace isoform

#endif  // ISOFORM_TOLERANCE_HPP_
