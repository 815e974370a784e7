#include "isoform/structure.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isoform/closure.hpp"
#include "isoform/error.hpp"
#include "isoform/numeric.hpp"
#include "isoform/parallel.hpp"
#include "isoform/schur.hpp"

namespace isoform {

namespace {

// Incremental modified Gram-Schmidt span of vectorized matrices.
class VecSpan {
 public:
  explicit VecSpan(double tol) : tol_(tol) {}

  // Returns true when m extended the span. Candidates are normalized
  // first so wildly scaled elements cannot overflow downstream consumers.
  bool absorb(const ComplexMatrix& m) {
    std::vector<cd> v(m.data());
    double orig = norm(v);
    if (!std::isfinite(orig) || orig <= tol_) return false;
    for (auto& z : v) z /= orig;
    orig = 1.0;
    // Two MGS passes; one is not enough near the rank threshold.
    for (const auto& b : basis_) project_out(v, b);
    for (const auto& b : basis_) project_out(v, b);
    const double res = norm(v);
    if (res <= tol_) return false;
    for (auto& z : v) z /= res;
    basis_.push_back(std::move(v));
    return true;
  }

  int dimension() const { return static_cast<int>(basis_.size()); }

 private:
  static double norm(const std::vector<cd>& v) {
    double s = 0.0;
    for (const cd& z : v) s += std::norm(z);
    return std::sqrt(s);
  }
  static void project_out(std::vector<cd>& v, const std::vector<cd>& b) {
    cd dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += std::conj(b[i]) * v[i];
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= dot * b[i];
  }

  double tol_;
  std::vector<std::vector<cd>> basis_;
};

// Matrices spanning the algebra generated by S and I, grown to
// multiplicative stability (or to full dimension n^2).
std::vector<ComplexMatrix> span_closure_basis(const SemigroupSet& s,
                                              const ToleranceConfig& cfg,
                                              int* dimension) {
  const int n = s.dim();
  VecSpan span(cfg.rank_tol);
  std::vector<ComplexMatrix> basis;
  auto offer = [&](const ComplexMatrix& m) {
    if (!span.absorb(m)) return;
    ComplexMatrix scaled = m;
    scaled *= 1.0 / m.frobenius_norm();
    basis.push_back(std::move(scaled));
  };
  offer(ComplexMatrix::identity(n));
  for (const auto& e : s.elements()) offer(e);

  std::size_t frontier_begin = 0;
  while (span.dimension() < n * n) {
    const std::size_t frontier_end = basis.size();
    if (frontier_begin == frontier_end) break;
    for (std::size_t b = frontier_begin; b < frontier_end; ++b)
      for (const auto& e : s.elements()) offer(basis[b] * e);
    frontier_begin = frontier_end;
  }
  *dimension = span.dimension();
  return basis;
}

// Orthonormal basis of the invariant subspace spanned by the leading d
// Schur vectors after moving one eigenvalue cluster to the front.
ComplexMatrix cluster_subspace(const ComplexMatrix& x, const cd center,
                               double radius) {
  SchurDecomposition s = schur_decompose(x);
  const int n = x.dim();
  std::vector<char> sel(n, 0);
  int d = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(s.t(i, i) - center) <= radius) {
      sel[i] = 1;
      ++d;
    }
  reorder_schur(s, sel);
  return s.q.block(0, 0, n, d);
}

double invariance_residual(const SemigroupSet& s, const ComplexMatrix& w) {
  // Residual of (I - W W^*) T W over all elements, scale-normalized.
  double worst = 0.0;
  const ComplexMatrix proj = w * w.adjoint();
  for (const auto& t : s.elements()) {
    const double scale = std::max(1.0, t.frobenius_norm());
    if (!std::isfinite(scale)) continue;
    ComplexMatrix tw = t * w;
    tw *= 1.0 / scale;
    worst = std::max(worst, (tw - proj * tw).frobenius_norm());
  }
  return worst;
}

// Distinct eigenvalue cluster representatives, canonically ordered.
std::vector<cd> eigenvalue_clusters(const std::vector<cd>& eigs, double tol) {
  std::vector<cd> reps;
  for (cd z : eigs) {
    bool found = false;
    for (cd r : reps)
      if (std::abs(z - r) <= tol) {
        found = true;
        break;
      }
    if (!found) reps.push_back(z);
  }
  return reps;
}

std::optional<ComplexMatrix> commutant_witness(
    const SemigroupSet& s, const std::vector<ComplexMatrix>& algebra_basis,
    const ToleranceConfig& cfg, double* residual) {
  const int n = s.dim();
  const int nn = n * n;
  // K = sum over basis A of M_A^* M_A with M_A = I (x) A - A^T (x) I;
  // the commutant is the (near-)null space of K.
  ComplexMatrix k(nn, nn);
  for (const auto& a : algebra_basis) {
    ComplexMatrix ma(nn, nn);
    const ComplexMatrix at = a.transpose();
    for (int bi = 0; bi < n; ++bi)
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          ma(bi * n + r, bi * n + c) += a(r, c);
        }
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c)
        for (int bi = 0; bi < n; ++bi)
          ma(r * n + bi, c * n + bi) -= at(r, c);
    k += ma.adjoint() * ma;
  }
  HermitianEigen eig = hermitian_eigen(k);
  const double lmax = std::max(1.0, eig.values.back());
  std::vector<ComplexMatrix> null_mats;
  for (int i = 0; i < nn; ++i) {
    if (eig.values[i] > 1e-12 * lmax) break;
    ComplexMatrix x(n, n);
    for (int c = 0; c < n; ++c)
      for (int r = 0; r < n; ++r) x(r, c) = eig.q(c * n + r, i);
    null_mats.push_back(std::move(x));
  }
  // Look for a non-scalar element and take one of its cluster subspaces.
  for (auto& x : null_mats) {
    ComplexMatrix dev = x - (x.trace() / static_cast<double>(n)) *
                                ComplexMatrix::identity(n);
    if (dev.frobenius_norm() <= 1e-8) continue;
    const std::vector<cd> eigs = eigenvalues(dev);
    const double radius =
        std::max(cfg.spec_tol, 1e-7 * std::max(1.0, dev.frobenius_norm()));
    for (cd rep : eigenvalue_clusters(eigs, radius)) {
      const ComplexMatrix w = cluster_subspace(dev, rep, radius);
      if (w.cols() == 0 || w.cols() == n) continue;
      const double res = invariance_residual(s, w);
      if (res <= 1e-6 * std::max(1.0, static_cast<double>(n))) {
        *residual = res;
        return w;
      }
    }
  }
  return std::nullopt;
}

std::optional<ComplexMatrix> orbit_witness(const SemigroupSet& s,
                                           const ToleranceConfig& cfg,
                                           double* residual) {
  const int n = s.dim();
  // Candidate seed vectors: eigenvectors of elements (one per eigenvalue
  // cluster) and the coordinate vectors.
  std::vector<std::vector<cd>> seeds;
  for (const auto& t : s.elements()) {
    if (op_norm_leq(t, cfg.rank_tol)) continue;
    SchurDecomposition sd = schur_decompose(t);
    const std::vector<cd> eigs = sd.diagonal();
    for (cd rep : eigenvalue_clusters(eigs, cfg.spec_tol)) {
      SchurDecomposition copy = sd;
      std::vector<char> sel(n, 0);
      for (int i = 0; i < n; ++i)
        if (std::abs(copy.t(i, i) - rep) <= cfg.spec_tol) sel[i] = 1;
      reorder_schur(copy, sel);
      std::vector<cd> v(n);
      for (int i = 0; i < n; ++i) v[i] = copy.q(i, 0);
      seeds.push_back(std::move(v));
    }
  }
  for (int i = 0; i < n; ++i) {
    std::vector<cd> e(n, 0.0);
    e[i] = 1.0;
    seeds.push_back(std::move(e));
  }

  for (const auto& seed : seeds) {
    // Orbit closure of the seed under the elements, via Gram-Schmidt.
    std::vector<std::vector<cd>> basis{seed};
    {
      double s0 = 0.0;
      for (cd z : basis[0]) s0 += std::norm(z);
      s0 = std::sqrt(s0);
      for (cd& z : basis[0]) z /= s0;
    }
    std::size_t frontier = 0;
    bool full = false;
    while (frontier < basis.size() && !full) {
      const std::size_t end = basis.size();
      for (std::size_t b = frontier; b < end && !full; ++b) {
        for (const auto& t : s.elements()) {
          std::vector<cd> w(n, 0.0);
          for (int r = 0; r < n; ++r) {
            cd acc = 0.0;
            for (int c = 0; c < n; ++c) acc += t(r, c) * basis[b][c];
            w[r] = acc;
          }
          double orig = 0.0;
          for (cd z : w) orig += std::norm(z);
          orig = std::sqrt(orig);
          if (orig <= cfg.rank_tol) continue;
          for (const auto& bb : basis) {
            cd dot = 0.0;
            for (int r = 0; r < n; ++r) dot += std::conj(bb[r]) * w[r];
            for (int r = 0; r < n; ++r) w[r] -= dot * bb[r];
          }
          double res = 0.0;
          for (cd z : w) res += std::norm(z);
          res = std::sqrt(res);
          if (res > cfg.rank_tol * std::max(1.0, orig)) {
            for (cd& z : w) z /= res;
            basis.push_back(std::move(w));
            if (static_cast<int>(basis.size()) >= n) {
              full = true;
              break;
            }
          }
        }
      }
      frontier = end;
    }
    if (static_cast<int>(basis.size()) >= n) continue;
    ComplexMatrix w(n, static_cast<int>(basis.size()));
    for (int c = 0; c < w.cols(); ++c)
      for (int r = 0; r < n; ++r) w(r, c) = basis[c][r];
    const double res = invariance_residual(s, w);
    if (res <= 1e-6 * std::max(1.0, static_cast<double>(n))) {
      *residual = res;
      return w;
    }
  }
  return std::nullopt;
}

}  // namespace

IrreducibilityResult is_irreducible(const SemigroupSet& s,
                                    const ToleranceConfig& cfg) {
  if (s.size() == 0)
    throw_error(ErrorKind::precondition, "is_irreducible: empty set");
  const int n = s.dim();
  IrreducibilityResult out;
  std::vector<ComplexMatrix> basis = span_closure_basis(s, cfg, &out.span_dimension);
  out.irreducible = out.span_dimension == n * n;
  if (out.irreducible) return out;

  double res = 0.0;
  auto w = commutant_witness(s, basis, cfg, &res);
  if (!w.has_value()) w = orbit_witness(s, cfg, &res);
  if (w.has_value()) {
    out.witness = std::move(*w);
    out.witness_verified = true;
    out.witness_residual = res;
  }
  return out;
}

bool is_nilpotent_element(const ComplexMatrix& t, const ToleranceConfig& cfg) {
  const double band = spectral_zero_band(t, cfg);
  for (cd z : eigenvalues(t))
    if (std::abs(z) > band) return false;
  return true;
}

std::vector<FoundIdempotent> find_idempotents(const SemigroupSet& s,
                                              const ToleranceConfig& cfg) {
  std::vector<FoundIdempotent> out;
  auto known = [&](const ComplexMatrix& p) {
    for (const auto& f : out)
      if (op_norm_leq(p - f.matrix, cfg.eq_tol)) return true;
    return false;
  };
  for (const auto& x : s.elements()) {
    if (op_norm_leq(x, cfg.rank_tol)) continue;
    if (op_norm_leq(x * x - x, cfg.eq_tol)) out.push_back({x, false});
  }
  if (!s.saturated()) {
    // Norm-closure surrogate: power limits of the non-nilpotent elements,
    // detected at a loose accumulation tolerance and polished to exact
    // idempotency.
    LimitPointOptions opts;
    opts.include_zero = false;
    opts.candidate_tol = std::max(2e-3, 100.0 * cfg.eq_tol);
    for (const auto& t : s.elements()) {
      if (!t.all_finite() || op_norm_leq(t, cfg.rank_tol)) continue;
      if (spectral_radius(t) > 1.0 + cfg.spec_tol) continue;
      if (is_nilpotent_element(t, cfg)) continue;
      try {
        for (auto& p : detect_limit_points(t, cfg, opts)) {
          if (known(p)) continue;
          if (s.find_within(p, cfg.eq_tol).has_value()) continue;
          out.push_back({std::move(p), true});
        }
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::hypothesis) throw;
      }
    }
  }
  return out;
}

CommuteCheck idempotents_commute(const std::vector<ComplexMatrix>& idems,
                                 const ToleranceConfig& cfg) {
  for (const auto& p : idems)
    if (!op_norm_leq(p * p - p, cfg.eq_tol))
      throw_error(ErrorKind::precondition,
                  "idempotents_commute: input is not idempotent at eq_tol");
  CommuteCheck out;
  for (std::size_t i = 0; i < idems.size(); ++i)
    for (std::size_t j = i + 1; j < idems.size(); ++j) {
      const ComplexMatrix comm = idems[i] * idems[j] - idems[j] * idems[i];
      if (!op_norm_leq(comm, 10.0 * cfg.eq_tol)) {
        out.commute = false;
        out.witness = std::make_pair(idems[i], idems[j]);
        return out;
      }
    }
  return out;
}

ConditionIiVerdict check_condition_ii(const SemigroupSet& s,
                                      const ToleranceConfig& cfg) {
  ConditionIiVerdict out;
  const std::size_t count = s.size();
  std::vector<std::vector<cd>> spectra(count);
  std::vector<std::string> failures(count);
  parallel_for(count, [&](std::size_t i) {
    try {
      spectra[i] = eigenvalues(s.elements()[i]);
    } catch (const Error& e) {
      failures[i] = e.what();
    }
  });
  for (std::size_t i = 0; i < count; ++i)
    if (!failures[i].empty())
      throw_error(ErrorKind::convergence,
                  "check_condition_ii: eigenvalue solver failed on element " +
                      std::to_string(i) + ": " + failures[i]);

  out.spectra_ok = true;
  for (std::size_t i = 0; i < count && out.spectra_ok; ++i) {
    double zero_band = cfg.spec_tol;
    for (cd z : spectra[i]) {
      const double mod = std::abs(z);
      if (mod <= cfg.spec_tol || std::abs(mod - 1.0) <= cfg.spec_tol) continue;
      // Perturbed defective zeros of non-normal elements scatter beyond
      // spec_tol; widen to the splatter band before flagging.
      if (zero_band == cfg.spec_tol)
        zero_band = spectral_zero_band(s.elements()[i], cfg);
      if (mod <= zero_band) continue;
      out.spectra_ok = false;
      out.offending_element = i;
      out.offending_eigenvalue = z;
      break;
    }
  }

  std::vector<ComplexMatrix> idems;
  for (auto& f : find_idempotents(s, cfg)) idems.push_back(std::move(f.matrix));
  CommuteCheck cc = idempotents_commute(idems, cfg);
  out.idempotents_commute = cc.commute;
  out.commute_witness = std::move(cc.witness);
  out.verdict = out.spectra_ok && out.idempotents_commute;
  return out;
}

ConditionIiiVerdict check_condition_iii(const SemigroupSet& s,
                                        const ToleranceConfig& cfg) {
  ConditionIiiVerdict out;
  const std::size_t count = s.size();
  std::vector<double> norms(count), radii(count);
  parallel_for(count, [&](std::size_t i) {
    norms[i] = op_norm(s.elements()[i]);
    radii[i] = spectral_radius(s.elements()[i]);
  });
  bool any = false;
  for (std::size_t i = 0; i < count; ++i) {
    if (norms[i] <= cfg.rank_tol) continue;
    if (!any) {
      out.c1 = out.c2 = norms[i];
      any = true;
    } else {
      out.c1 = std::min(out.c1, norms[i]);
      out.c2 = std::max(out.c2, norms[i]);
    }
    if (radii[i] > 1.0 + cfg.spec_tol) out.norms_divergent = true;
  }
  if (!any)
    throw_error(ErrorKind::precondition,
                "check_condition_iii: no nonzero elements");

  std::vector<ComplexMatrix> idems;
  for (auto& f : find_idempotents(s, cfg)) idems.push_back(std::move(f.matrix));
  CommuteCheck cc = idempotents_commute(idems, cfg);
  out.idempotents_commute = cc.commute;
  out.commute_witness = std::move(cc.witness);
  out.verdict =
      out.c1 > cfg.rank_tol && out.idempotents_commute && !out.norms_divergent;
  return out;
}

IdempotentFamily maximal_disjoint_family(const SemigroupSet& s,
                                         const ToleranceConfig& cfg) {
  std::vector<FoundIdempotent> found = find_idempotents(s, cfg);
  if (found.empty())
    throw_error(ErrorKind::construction,
                "maximal_disjoint_family: no idempotents found; increase the "
                "closure budget (a closed bounded semigroup with a "
                "non-nilpotent element contains one)");
  struct Cand {
    ComplexMatrix p;
    int rank;
  };
  std::vector<Cand> cands;
  cands.reserve(found.size());
  for (auto& f : found) {
    const int r = rank_numeric(f.matrix, cfg);
    cands.push_back({std::move(f.matrix), r});
  }
  const double pitch = canonical_pitch(s.dim(), cfg.eq_tol);
  std::stable_sort(cands.begin(), cands.end(), [&](const Cand& a, const Cand& b) {
    if (a.rank != b.rank) return a.rank < b.rank;
    return canonical_less(a.p, b.p, pitch);
  });

  IdempotentFamily fam;
  fam.common_rank = cands.front().rank;
  for (const auto& c : cands) {
    if (c.rank != fam.common_rank) continue;
    bool ok = true;
    for (const auto& m : fam.members) {
      if (!op_norm_leq(c.p * m, cfg.eq_tol) ||
          !op_norm_leq(m * c.p, cfg.eq_tol)) {
        ok = false;
        break;
      }
    }
    if (ok) fam.members.push_back(c.p);
  }

  const int n = s.dim();
  ComplexMatrix gram(n, n);
  for (const auto& m : fam.members) gram += m * m.adjoint();
  fam.spans_space = rank_numeric(gram, cfg) == n;

  // Range-containment surrogate check for minimality (see report fields):
  // no other idempotent may have range inside a member's range.
  fam.minimality_witnessed = true;
  const double contain_tol = 100.0 * cfg.eq_tol;
  for (const auto& m : fam.members) {
    const ComplexMatrix v = orthonormal_range_basis(m, fam.common_rank);
    const ComplexMatrix proj = v * v.adjoint();
    for (const auto& c : cands) {
      if (op_norm_leq(c.p - m, cfg.eq_tol)) continue;
      const ComplexMatrix w = orthonormal_range_basis(c.p, c.rank);
      if (op_norm_leq(w - proj * w, contain_tol)) {
        fam.minimality_witnessed = false;
        break;
      }
    }
    if (!fam.minimality_witnessed) break;
  }
  return fam;
}

int minimal_nonzero_rank(const SemigroupSet& s, const ToleranceConfig& cfg) {
  int best = 0;
  for (const auto& t : s.elements()) {
    if (op_norm_leq(t, cfg.rank_tol)) continue;
    const int r = rank_numeric(t, cfg);
    if (r == 0) continue;
    if (best == 0 || r < best) best = r;
  }
  if (best == 0)
    throw_error(ErrorKind::precondition,
                "minimal_nonzero_rank: all elements are zero");
  return best;
}

}  // namespace isoform
