#include "isoform/verify.hpp"

#include <algorithm>

#include "isoform/error.hpp"
#include "isoform/numeric.hpp"
#include "isoform/parallel.hpp"
#include "isoform/structure.hpp"

namespace isoform {

PartialIsometryCheck is_partial_isometry(const ComplexMatrix& t,
                                         const ToleranceConfig& cfg) {
  validate_matrix(t, "is_partial_isometry");
  PartialIsometryCheck out;
  double worst = 0.0;
  for (int side = 0; side < 2; ++side) {
    const ComplexMatrix p = side == 0 ? t.adjoint() * t : t * t.adjoint();
    worst = std::max(worst, op_norm(p * p - p));
    worst = std::max(worst, op_norm(p - p.adjoint()));
  }
  out.residual = worst;
  out.ok = worst <= cfg.eq_tol;
  return out;
}

BlockPattern block_pattern(const ComplexMatrix& t, int m, int k,
                           const std::vector<ComplexMatrix>& u_ref,
                           const ToleranceConfig& cfg) {
  if (t.dim() != m * k)
    throw_error(ErrorKind::precondition, "block_pattern: dim != m*k");
  BlockPattern out;
  out.m = m;
  out.k = k;
  out.occupancy.resize(static_cast<std::size_t>(m) * m);
  const ComplexMatrix eye = ComplexMatrix::identity(k);
  bool all_clean = true;
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      BlockCell& cell = out.occupancy[i * m + j];
      const ComplexMatrix b = t.block(i * k, j * k, k, k);
      if (op_norm_leq(b, cfg.rank_tol)) {
        cell.state = BlockState::empty;
        continue;
      }
      if (!op_norm_leq(b.adjoint() * b - eye, cfg.eq_tol)) {
        cell.state = BlockState::invalid;
        all_clean = false;
        continue;
      }
      cell.state = BlockState::unitary_unlisted;
      for (std::size_t r = 0; r < u_ref.size(); ++r) {
        if (op_norm_leq(b - u_ref[r], cfg.eq_tol)) {
          cell.state = BlockState::unitary_listed;
          cell.label = static_cast<int>(r);
          break;
        }
      }
    }
  }
  bool row_col_ok = true;
  for (int i = 0; i < m && row_col_ok; ++i) {
    int in_row = 0, in_col = 0;
    for (int j = 0; j < m; ++j) {
      if (out.cell(i, j).state != BlockState::empty) ++in_row;
      if (out.cell(j, i).state != BlockState::empty) ++in_col;
    }
    if (in_row > 1 || in_col > 1) row_col_ok = false;
  }
  out.valid = all_clean && row_col_ok;
  return out;
}

VerificationReport verify_sandwich(const SemigroupSet& s, int m, int k,
                                   const std::vector<ComplexMatrix>& u,
                                   const ToleranceConfig& cfg) {
  if (s.dim() != m * k)
    throw_error(ErrorKind::precondition, "verify_sandwich: dim != m*k");
  VerificationReport out;

  const std::size_t count = s.size();
  std::vector<double> residuals(count);
  parallel_for(count, [&](std::size_t i) {
    residuals[i] = is_partial_isometry(s.elements()[i], cfg).residual;
  });
  out.all_partial_isometries = true;
  for (std::size_t i = 0; i < count; ++i) {
    if (residuals[i] > out.worst_pi_residual) {
      out.worst_pi_residual = residuals[i];
      out.worst_pi_index = static_cast<int>(i);
    }
    if (residuals[i] > cfg.eq_tol) out.all_partial_isometries = false;
  }

  out.sandwich_lower = true;
  for (const auto& uu : u) {
    for (int i = 0; i < m && out.sandwich_lower; ++i)
      for (int j = 0; j < m; ++j) {
        if (!s.find_within(block_embed(m, i, j, uu), cfg.eq_tol).has_value()) {
          out.sandwich_lower = false;
          break;
        }
      }
    if (!out.sandwich_lower) break;
  }

  out.sandwich_upper = true;
  for (const auto& t : s.elements()) {
    if (op_norm_leq(t, cfg.rank_tol)) continue;
    if (!block_pattern(t, m, k, u, cfg).valid) {
      out.sandwich_upper = false;
      break;
    }
  }

  out.minimal_rank = minimal_nonzero_rank(s, cfg);
  out.minimal_rank_matches_k = out.minimal_rank == k;
  return out;
}

}  // namespace isoform
