#include "isoform/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isoform/closure.hpp"
#include "isoform/corpus.hpp"
#include "isoform/error.hpp"
#include "isoform/numeric.hpp"

namespace isoform {

namespace {

// Hermitian k x k matrices over a real orthonormal basis (trace inner
// product): diagonal units, then symmetric and antisymmetric pairs.
std::vector<ComplexMatrix> hermitian_basis(int k) {
  std::vector<ComplexMatrix> basis;
  const double r = 1.0 / std::sqrt(2.0);
  for (int i = 0; i < k; ++i) basis.push_back(ComplexMatrix::unit(k, i, i));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      ComplexMatrix sym(k, k), asym(k, k);
      sym(i, j) = r;
      sym(j, i) = r;
      asym(i, j) = cd(0.0, r);
      asym(j, i) = cd(0.0, -r);
      basis.push_back(std::move(sym));
      basis.push_back(std::move(asym));
    }
  return basis;
}

double worst_unitarity(const std::vector<ComplexMatrix>& images) {
  double worst = 0.0;
  const ComplexMatrix eye = ComplexMatrix::identity(images.front().dim());
  for (const auto& u : images)
    worst = std::max(worst, op_norm(u.adjoint() * u - eye));
  return worst;
}

std::vector<ComplexMatrix> conjugate_sample(
    const std::vector<ComplexMatrix>& sample, const ComplexMatrix& s,
    const ComplexMatrix& sinv) {
  std::vector<ComplexMatrix> out;
  out.reserve(sample.size());
  for (const auto& g : sample) out.push_back(s * g * sinv);
  return out;
}

// Fixed-point fallback: Hermitian X with g^* X g = X for all samples,
// positive definite, trace normalized to k.
ComplexMatrix invariant_metric(const std::vector<ComplexMatrix>& sample,
                               const ToleranceConfig& cfg) {
  const int k = sample.front().dim();
  const std::vector<ComplexMatrix> hb = hermitian_basis(k);
  const int d = static_cast<int>(hb.size());

  // Real matrix of the constraint map X -> stack of g^* X g - X.
  ComplexMatrix big(static_cast<int>(sample.size()) * d, d);
  for (std::size_t gi = 0; gi < sample.size(); ++gi) {
    const ComplexMatrix& g = sample[gi];
    for (int c = 0; c < d; ++c) {
      const ComplexMatrix l = g.adjoint() * hb[c] * g - hb[c];
      for (int r = 0; r < d; ++r) {
        cd dot = 0.0;
        for (int i = 0; i < k; ++i)
          for (int j = 0; j < k; ++j)
            dot += std::conj(hb[r](i, j)) * l(i, j);
        big(static_cast<int>(gi) * d + r, c) = dot.real();
      }
    }
  }
  const ComplexMatrix gram = big.adjoint() * big;
  HermitianEigen eig = hermitian_eigen(gram);
  const double lmax = std::max(1.0, eig.values.back());
  std::vector<std::vector<double>> null_coords;
  for (int i = 0; i < d; ++i) {
    if (eig.values[i] > 1e-10 * lmax) break;
    std::vector<double> coords(d);
    for (int r = 0; r < d; ++r) coords[r] = eig.q(r, i).real();
    null_coords.push_back(std::move(coords));
  }
  if (null_coords.empty())
    throw_error(ErrorKind::construction,
                "unitarize_group: no invariant Hermitian form "
                "(not a bounded group)");

  auto assemble = [&](const std::vector<double>& x) {
    ComplexMatrix m(k, k);
    for (int i = 0; i < d; ++i) m += x[i] * hb[i];
    return m;
  };

  // Start from the projection of the Gram average onto the solution space
  // and ascend the minimum eigenvalue over the coefficient sphere.
  ComplexMatrix avg(k, k);
  for (const auto& g : sample) avg += g.adjoint() * g;
  avg *= 1.0 / static_cast<double>(sample.size());
  std::vector<double> x(null_coords.size(), 0.0);
  for (std::size_t i = 0; i < null_coords.size(); ++i) {
    double dot = 0.0;
    for (int c = 0; c < d; ++c) {
      cd acc = 0.0;
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) acc += std::conj(hb[c](a, b)) * avg(a, b);
      dot += null_coords[i][c] * acc.real();
    }
    x[i] = dot;
  }
  double xn = 0.0;
  for (double v : x) xn += v * v;
  if (xn <= 1e-14) x[0] = 1.0;

  std::vector<double> coords(d);
  for (int step = 0; step < 60; ++step) {
    std::fill(coords.begin(), coords.end(), 0.0);
    for (std::size_t i = 0; i < null_coords.size(); ++i)
      for (int c = 0; c < d; ++c) coords[c] += x[i] * null_coords[i][c];
    ComplexMatrix cand = assemble(coords);
    HermitianEigen ce = hermitian_eigen(cand);
    if (ce.values.front() > cfg.rank_tol) {
      cand *= static_cast<double>(k) / cand.trace().real();
      return cand;
    }
    // Subgradient of lambda_min in the null-space coordinates.
    ComplexMatrix v(k, 1);
    for (int i = 0; i < k; ++i) v(i, 0) = ce.q(i, 0);
    std::vector<double> grad(null_coords.size(), 0.0);
    for (std::size_t i = 0; i < null_coords.size(); ++i) {
      const ComplexMatrix xi = assemble(null_coords[i]);
      grad[i] = (v.adjoint() * xi * v)(0, 0).real();
    }
    double gn = 0.0, xnorm = 0.0;
    for (std::size_t i = 0; i < null_coords.size(); ++i) {
      gn += grad[i] * grad[i];
      xnorm += x[i] * x[i];
    }
    if (gn <= 1e-18) break;
    const double eta = 0.5 * std::sqrt(xnorm / gn);
    for (std::size_t i = 0; i < null_coords.size(); ++i) x[i] += eta * grad[i];
  }
  throw_error(ErrorKind::construction,
              "unitarize_group: no positive definite invariant form found "
              "(not a bounded group)");
}

std::vector<ComplexMatrix> dedup_blocks(std::vector<ComplexMatrix> blocks,
                                        int k, const ToleranceConfig& cfg) {
  const double pitch = canonical_pitch(k, cfg.eq_tol);
  std::sort(blocks.begin(), blocks.end(),
            [&](const ComplexMatrix& a, const ComplexMatrix& b) {
              return canonical_less(a, b, pitch);
            });
  std::vector<ComplexMatrix> out;
  for (auto& b : blocks) {
    if (!out.empty() && op_norm_leq(b - out.back(), cfg.eq_tol)) continue;
    out.push_back(std::move(b));
  }
  return out;
}

}  // namespace

UnitarizationResult unitarize_group(const std::vector<ComplexMatrix>& sample,
                                    const ToleranceConfig& cfg) {
  if (sample.empty())
    throw_error(ErrorKind::precondition, "unitarize_group: empty sample");
  const int k = sample.front().dim();
  for (const auto& g : sample) {
    if (g.dim() != k)
      throw_error(ErrorKind::precondition, "unitarize_group: mixed sizes");
    const std::vector<double> sv = singular_values(g);
    if (sv.back() <= cfg.rank_tol)
      throw_error(ErrorKind::precondition,
                  "unitarize_group: singular sample element");
  }

  UnitarizationResult out;
  ComplexMatrix m(k, k);
  for (const auto& g : sample) m += g.adjoint() * g;
  m *= 1.0 / static_cast<double>(sample.size());
  out.similarity = matrix_sqrt_pd(m, cfg);
  ComplexMatrix sinv = LuSolver(out.similarity).inverse();
  out.group_sample = conjugate_sample(sample, out.similarity, sinv);
  out.worst_residual = worst_unitarity(out.group_sample);
  if (out.worst_residual <= 10.0 * cfg.eq_tol) return out;

  // Gram averaging is exact only for product-closed samples; fall back to
  // the generator fixed-point system.
  out.used_fallback = true;
  const ComplexMatrix metric = invariant_metric(sample, cfg);
  out.similarity = matrix_sqrt_pd(metric, cfg);
  sinv = LuSolver(out.similarity).inverse();
  out.group_sample = conjugate_sample(sample, out.similarity, sinv);
  out.worst_residual = worst_unitarity(out.group_sample);
  if (out.worst_residual > 10.0 * cfg.eq_tol)
    throw_error(ErrorKind::construction,
                "unitarize_group: images fail unitarity after fallback "
                "(residual " +
                    std::to_string(out.worst_residual) + ")");
  return out;
}

ComplexMatrix orthonormalize_family(const IdempotentFamily& f,
                                    const ToleranceConfig& cfg) {
  if (f.members.empty())
    throw_error(ErrorKind::precondition, "orthonormalize_family: empty family");
  const int n = f.members.front().dim();
  const int m = static_cast<int>(f.members.size());
  const int k = f.common_rank;
  if (!f.spans_space || m * k != n)
    throw_error(ErrorKind::hypothesis,
                "orthonormalize_family: family does not span the space "
                "(Case 2 signal): m=" +
                    std::to_string(m) + " k=" + std::to_string(k) +
                    " n=" + std::to_string(n));
  ComplexMatrix c(n, n);
  for (int j = 0; j < m; ++j) {
    const ComplexMatrix v = orthonormal_range_basis(f.members[j], k);
    c.set_block(0, j * k, v);
  }
  const std::vector<double> sv = singular_values(c);
  if (sv.back() <= cfg.rank_tol)
    throw_error(ErrorKind::hypothesis,
                "orthonormalize_family: range bases are numerically "
                "dependent (Case 2 signal)");
  return LuSolver(c).inverse();
}

LinkingIsometry find_linking(const SemigroupSet& s, int m, int k, int j,
                             const ToleranceConfig& cfg) {
  if (j < 1 || j >= m)
    throw_error(ErrorKind::precondition, "find_linking: index out of range");
  const int n = m * k;
  ComplexMatrix p1(n, n), pj(n, n);
  for (int i = 0; i < k; ++i) {
    p1(i, i) = 1.0;
    pj(j * k + i, j * k + i) = 1.0;
  }
  const auto probe = product_probe(pj, s, p1, cfg);
  if (!probe.has_value())
    throw_error(ErrorKind::construction,
                "find_linking: P_" + std::to_string(j + 1) +
                    " S P_1 has no nonzero sampled element "
                    "(irreducibility or saturation failure)");
  LinkingIsometry out;
  out.index = j;
  out.y = pj * (*probe) * p1;
  const ComplexMatrix yb = out.y.block(j * k, 0, k, k);
  out.alpha = (yb.adjoint() * yb).trace().real() / k;
  if (out.alpha <= cfg.rank_tol)
    throw_error(ErrorKind::construction, "find_linking: degenerate link");
  const ComplexMatrix eye = ComplexMatrix::identity(k);
  const double tol = std::max(10.0 * cfg.eq_tol, 1e-12 * out.alpha);
  if (!op_norm_leq(yb.adjoint() * yb - out.alpha * eye, tol) ||
      !op_norm_leq(yb * yb.adjoint() - out.alpha * eye, tol))
    throw_error(ErrorKind::hypothesis,
                "find_linking: Y^*Y not proportional to P_1 within "
                "tolerance (condition (ii) hypothesis violated)");
  return out;
}

ComplexMatrix linking_similarity(const std::vector<LinkingIsometry>& links,
                                 int m, int k, const ToleranceConfig& cfg) {
  ComplexMatrix l = ComplexMatrix::identity(m * k);
  for (const auto& link : links) {
    const ComplexMatrix yb = link.y.block(link.index * k, 0, k, k);
    const std::vector<double> sv = singular_values(yb);
    if (sv.back() <= cfg.rank_tol)
      throw_error(ErrorKind::construction,
                  "linking_similarity: non-invertible block");
    l.set_block(link.index * k, link.index * k, yb);
  }
  return l;
}

SimilarityResult build_similarity(const SemigroupSet& s,
                                  const ToleranceConfig& cfg) {
  const int n = s.dim();
  IdempotentFamily fam = maximal_disjoint_family(s, cfg);
  const int m = static_cast<int>(fam.members.size());
  const int k = fam.common_rank;
  if (!fam.spans_space || m * k != n)
    throw_error(ErrorKind::hypothesis,
                "build_similarity: disjoint idempotent family does not span "
                "(Case 2 inconsistency): m=" +
                    std::to_string(m) + " k=" + std::to_string(k) +
                    " n=" + std::to_string(n) +
                    " (impossible for a closed bounded irreducible input; "
                    "closure or tolerances are suspect)");

  const ComplexMatrix b = orthonormalize_family(fam, cfg);
  SemigroupSet s1 = conjugate_set(s, b, cfg);

  // Per-block groups U_i from the diagonal blocks, unitarized.
  ComplexMatrix gblock(n, n);
  for (int i = 0; i < m; ++i) {
    std::vector<ComplexMatrix> sample;
    for (const auto& t : s1.elements()) {
      ComplexMatrix blk = t.block(i * k, i * k, k, k);
      if (op_norm_leq(blk, cfg.rank_tol)) continue;
      sample.push_back(std::move(blk));
    }
    sample = dedup_blocks(std::move(sample), k, cfg);
    if (sample.empty())
      throw_error(ErrorKind::construction,
                  "build_similarity: block group " + std::to_string(i + 1) +
                      " is empty");
    const UnitarizationResult u = unitarize_group(sample, cfg);
    gblock.set_block(i * k, i * k, u.similarity);
  }
  SemigroupSet s2 = conjugate_set(s1, gblock, cfg);

  std::vector<LinkingIsometry> links;
  for (int j = 1; j < m; ++j) links.push_back(find_linking(s2, m, k, j, cfg));
  const ComplexMatrix l = linking_similarity(links, m, k, cfg);
  const ComplexMatrix linv = LuSolver(l).inverse();
  SemigroupSet s3 = conjugate_set(s2, linv, cfg);

  SimilarityResult out;
  out.block_count = m;
  out.block_size = k;
  out.stage_orthonormalize = b;
  out.stage_block_unitarize = gblock;
  out.stage_linking = linv;
  out.similarity = linv * gblock * b;
  out.similarity_inverse = LuSolver(out.similarity).inverse();
  out.transformed = std::move(s3);

  std::vector<ComplexMatrix> blocks;
  for (const auto& t : out.transformed.elements())
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        ComplexMatrix blk = t.block(i * k, j * k, k, k);
        if (op_norm_leq(blk, cfg.rank_tol)) continue;
        blocks.push_back(std::move(blk));
      }
  out.unitary_group_sample = dedup_blocks(std::move(blocks), k, cfg);
  out.verification =
      verify_sandwich(out.transformed, m, k, out.unitary_group_sample, cfg);
  return out;
}

}  // namespace isoform
