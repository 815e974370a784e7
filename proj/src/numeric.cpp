#include "isoform/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "isoform/error.hpp"
#include "isoform/schur.hpp"

namespace isoform {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

std::vector<double> singular_values(const ComplexMatrix& t) {
  // Scale first: the Gram matrix squares the norm and can overflow.
  const double scale = t.max_abs();
  ComplexMatrix work = t;
  if (scale > 0.0 && std::isfinite(scale)) work *= 1.0 / scale;
  const ComplexMatrix gram = work.adjoint() * work;
  SchurDecomposition s = schur_decompose(gram);
  const double factor = scale > 0.0 && std::isfinite(scale) ? scale : 1.0;
  std::vector<double> sv(gram.dim());
  for (int i = 0; i < gram.dim(); ++i)
    sv[i] = factor * std::sqrt(std::max(0.0, s.t(i, i).real()));
  std::sort(sv.rbegin(), sv.rend());
  return sv;
}

double op_norm(const ComplexMatrix& t) {
  if (t.rows() == 0 || t.cols() == 0) return 0.0;
  std::vector<double> sv = singular_values(t);
  return sv.empty() ? 0.0 : sv.front();
}

int rank_numeric(const ComplexMatrix& t, const ToleranceConfig& cfg) {
  int r = 0;
  for (double s : singular_values(t))
    if (s > cfg.rank_tol) ++r;
  return r;
}

bool op_norm_leq(const ComplexMatrix& d, double tol) {
  const double f = d.frobenius_norm();
  if (f <= tol) return true;
  const int n = std::min(d.rows(), d.cols());
  if (f > tol * std::sqrt(static_cast<double>(std::max(1, n)))) return false;
  return op_norm(d) <= tol;
}

double op_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  return op_norm(a - b);
}

bool within(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return op_norm_leq(a - b, tol);
}

double spectral_radius(const ComplexMatrix& t) {
  double r = 0.0;
  for (cd z : eigenvalues(t)) r = std::max(r, std::abs(z));
  return r;
}

double spectral_zero_band(const ComplexMatrix& t, const ToleranceConfig& cfg) {
  const int n = t.dim();
  const double scale = std::max(1.0, t.frobenius_norm());
  const ComplexMatrix dev = t.adjoint() * t - t * t.adjoint();
  if (dev.frobenius_norm() <= 1e-8 * scale * scale) return cfg.spec_tol;
  const double splatter =
      std::pow(64.0 * n * kEps * scale, 1.0 / static_cast<double>(n));
  return std::max(cfg.spec_tol, splatter);
}

// ---- LU -------------------------------------------------------------------

LuSolver::LuSolver(ComplexMatrix a) : n_(a.dim()), lu_(std::move(a)), perm_(n_) {
  std::iota(perm_.begin(), perm_.end(), 0);
  for (int k = 0; k < n_; ++k) {
    int piv = k;
    double best = std::abs(lu_(k, k));
    for (int i = k + 1; i < n_; ++i) {
      const double v = std::abs(lu_(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (piv != k) {
      for (int j = 0; j < n_; ++j) std::swap(lu_(k, j), lu_(piv, j));
      std::swap(perm_[k], perm_[piv]);
    }
    const cd pivot = lu_(k, k);
    if (pivot == cd(0.0)) continue;
    for (int i = k + 1; i < n_; ++i) {
      const cd m = lu_(i, k) / pivot;
      lu_(i, k) = m;
      if (m == cd(0.0)) continue;
      for (int j = k + 1; j < n_; ++j) lu_(i, j) -= m * lu_(k, j);
    }
  }
}

double LuSolver::min_pivot() const {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n_; ++i) m = std::min(m, std::abs(lu_(i, i)));
  return m;
}

ComplexMatrix LuSolver::solve(const ComplexMatrix& rhs) const {
  if (min_pivot() == 0.0)
    throw_error(ErrorKind::precondition, "LuSolver: matrix is singular");
  ComplexMatrix x(n_, rhs.cols());
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < rhs.cols(); ++j) x(i, j) = rhs(perm_[i], j);
  for (int c = 0; c < rhs.cols(); ++c) {
    for (int i = 1; i < n_; ++i) {
      cd acc = x(i, c);
      for (int k = 0; k < i; ++k) acc -= lu_(i, k) * x(k, c);
      x(i, c) = acc;
    }
    for (int i = n_ - 1; i >= 0; --i) {
      cd acc = x(i, c);
      for (int k = i + 1; k < n_; ++k) acc -= lu_(i, k) * x(k, c);
      x(i, c) = acc / lu_(i, i);
    }
  }
  return x;
}

ComplexMatrix LuSolver::inverse() const {
  return solve(ComplexMatrix::identity(n_));
}

ComplexMatrix inverse(const ComplexMatrix& a, const ToleranceConfig& cfg) {
  std::vector<double> sv = singular_values(a);
  if (sv.empty() || sv.back() <= cfg.rank_tol)
    throw_error(ErrorKind::precondition,
                "inverse: matrix is singular at rank_tol");
  return LuSolver(a).inverse();
}

// ---- pivoted QR range basis ------------------------------------------------

ComplexMatrix orthonormal_range_basis(const ComplexMatrix& a, int k) {
  const int m = a.rows(), n = a.cols();
  ComplexMatrix r = a;
  ComplexMatrix q = ComplexMatrix::identity(m);
  std::vector<double> colnorm(n);
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::norm(r(i, j));
    colnorm[j] = s;
  }
  const int steps = std::min({k, m, n});
  for (int t = 0; t < steps; ++t) {
    int piv = t;
    for (int j = t + 1; j < n; ++j)
      if (colnorm[j] > colnorm[piv]) piv = j;
    if (piv != t) {
      for (int i = 0; i < m; ++i) std::swap(r(i, t), r(i, piv));
      std::swap(colnorm[t], colnorm[piv]);
    }
    // Householder zeroing column t below the diagonal.
    std::vector<cd> u(m - t);
    double xnorm = 0.0;
    for (int i = t; i < m; ++i) {
      u[i - t] = r(i, t);
      xnorm += std::norm(u[i - t]);
    }
    xnorm = std::sqrt(xnorm);
    if (xnorm == 0.0) continue;
    const cd x0 = u[0];
    const cd phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cd(1.0);
    u[0] -= -phase * xnorm;  // u = x - alpha e1, alpha = -phase*xnorm
    double unorm2 = 0.0;
    for (const cd& z : u) unorm2 += std::norm(z);
    if (unorm2 <= 0.0) continue;
    const double beta = 2.0 / unorm2;
    for (int j = t; j < n; ++j) {
      cd dot = 0.0;
      for (int i = t; i < m; ++i) dot += std::conj(u[i - t]) * r(i, j);
      dot *= beta;
      for (int i = t; i < m; ++i) r(i, j) -= dot * u[i - t];
    }
    for (int j = 0; j < m; ++j) {  // q <- q * P (P Hermitian)
      cd dot = 0.0;
      for (int i = t; i < m; ++i) dot += q(j, i) * u[i - t];
      dot *= beta;
      for (int i = t; i < m; ++i) q(j, i) -= dot * std::conj(u[i - t]);
    }
    for (int j = t + 1; j < n; ++j) colnorm[j] -= std::norm(r(t, j));
  }
  ComplexMatrix basis = q.block(0, 0, m, steps);
  // Canonical phases: the dominant entry of each column is real positive.
  for (int c = 0; c < steps; ++c) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < m; ++i) {
      const double v = std::abs(basis(i, c));
      if (v > best * (1.0 + 1e-12)) {
        best = v;
        arg = i;
      }
    }
    if (best == 0.0) continue;
    const cd phase = std::conj(basis(arg, c)) / best;
    for (int i = 0; i < m; ++i) basis(i, c) *= phase;
  }
  return basis;
}

// ---- Hermitian eigen --------------------------------------------------------

HermitianEigen hermitian_eigen(const ComplexMatrix& h) {
  SchurDecomposition s = schur_decompose(h);
  const int n = h.dim();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int i, int j) {
    return s.t(i, i).real() < s.t(j, j).real();
  });
  HermitianEigen out;
  out.values.resize(n);
  out.q = ComplexMatrix(n, n);
  for (int c = 0; c < n; ++c) {
    out.values[c] = s.t(idx[c], idx[c]).real();
    for (int r = 0; r < n; ++r) out.q(r, c) = s.q(r, idx[c]);
  }
  return out;
}

// ---- PD square root ---------------------------------------------------------

ComplexMatrix matrix_sqrt_pd(const ComplexMatrix& m, const ToleranceConfig& cfg) {
  validate_matrix(m, "matrix_sqrt_pd");
  if (!op_norm_leq(m - m.adjoint(), cfg.eq_tol))
    throw_error(ErrorKind::precondition, "matrix_sqrt_pd: input not Hermitian");
  const int n = m.dim();
  ComplexMatrix h = m + m.adjoint();
  h *= 0.5;
  HermitianEigen eig = hermitian_eigen(h);
  if (eig.values.front() <= cfg.rank_tol)
    throw_error(ErrorKind::precondition,
                "matrix_sqrt_pd: input not positive definite");
  ComplexMatrix d(n, n);
  for (int i = 0; i < n; ++i) d(i, i) = std::sqrt(eig.values[i]);
  ComplexMatrix s = eig.q * d * eig.q.adjoint();
  ComplexMatrix sym = s + s.adjoint();
  sym *= 0.5;
  return sym;
}

// ---- spectral split ---------------------------------------------------------

namespace {

// Contiguous clusters are assumed; returns the unit upper-triangular m with
// r * m = m * blockdiag(diagonal blocks of r).
ComplexMatrix decouple_clusters(const ComplexMatrix& r,
                                const std::vector<int>& sizes) {
  const int n = r.dim();
  ComplexMatrix m = ComplexMatrix::identity(n);
  int offset = 0;
  ComplexMatrix work = r;
  for (std::size_t g = 0; g + 1 < sizes.size(); ++g) {
    const int d = sizes[g];
    const int rest = n - offset - d;
    const ComplexMatrix b = work.block(offset, offset, d, d);
    const ComplexMatrix s = work.block(offset + d, offset + d, rest, rest);
    const ComplexMatrix c = work.block(offset, offset + d, d, rest);
    ComplexMatrix neg_c = c;
    neg_c *= -1.0;
    const ComplexMatrix x = sylvester_triangular(b, s, neg_c);
    // Fold [[I, x], [0, I]] (embedded at offset) into m; zero the coupling.
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < rest; ++j) {
        for (int t = 0; t < n; ++t)
          m(t, offset + d + j) += m(t, offset + i) * x(i, j);
      }
    ComplexMatrix zero(d, rest);
    work.set_block(offset, offset + d, zero);
    offset += d;
  }
  return m;
}

std::string list_values(const std::vector<cd>& vals) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vals.size(); ++i) {
    if (i) os << ", ";
    os << vals[i].real() << (vals[i].imag() < 0 ? "-" : "+")
       << std::abs(vals[i].imag()) << "i";
  }
  return os.str();
}

}  // namespace

SpectralSplit spectral_split(const ComplexMatrix& t, const ToleranceConfig& cfg) {
  validate_matrix(t, "spectral_split");
  const int n = t.dim();
  SchurDecomposition s = schur_decompose(t);

  std::vector<cd> diag = s.diagonal();
  std::vector<cd> over, ambiguous;
  std::vector<char> unimod(n, 0);
  for (int i = 0; i < n; ++i) {
    const double mod = std::abs(diag[i]);
    if (mod > 1.0 + cfg.spec_tol) {
      over.push_back(diag[i]);
    } else if (mod >= 1.0 - cfg.spec_tol) {
      unimod[i] = 1;
      if (std::abs(mod - 1.0) > 0.5 * cfg.spec_tol) ambiguous.push_back(diag[i]);
    }
  }
  if (!over.empty())
    throw_error(ErrorKind::precondition,
                "spectral_split: eigenvalue moduli exceed 1 + spec_tol: " +
                    list_values(over));
  if (!ambiguous.empty())
    throw_error(ErrorKind::precondition,
                "spectral_split: eigenvalues in the ambiguous modulus band: " +
                    list_values(ambiguous));

  // Cluster by proximity within each class, then sort the diagonal so the
  // layout is [unimodular clusters | inner clusters], clusters contiguous.
  const double cluster_tol = std::max(cfg.spec_tol, 1e4 * kEps);
  std::vector<int> cluster(n, -1);
  int n_clusters = 0;
  for (int phase = 0; phase < 2; ++phase) {
    const char want = phase == 0 ? 1 : 0;
    for (int i = 0; i < n; ++i) {
      if (unimod[i] != want || cluster[i] >= 0) continue;
      cluster[i] = n_clusters;
      // Transitive chaining keeps genuinely equal eigenvalues together.
      bool grew = true;
      while (grew) {
        grew = false;
        for (int j = 0; j < n; ++j) {
          if (unimod[j] != want || cluster[j] >= 0) continue;
          for (int l = 0; l < n; ++l) {
            if (cluster[l] == n_clusters &&
                std::abs(diag[j] - diag[l]) <= cluster_tol) {
              cluster[j] = n_clusters;
              grew = true;
              break;
            }
          }
        }
      }
      ++n_clusters;
    }
  }

  std::vector<int> key = cluster;
  sort_schur(s, key);

  diag = s.diagonal();
  std::vector<int> sizes;
  std::vector<cd> reps;
  std::vector<char> cluster_unimod;
  for (int i = 0; i < n;) {
    int j = i;
    cd sum = 0.0;
    while (j < n && key[j] == key[i]) sum += diag[j++];
    sizes.push_back(j - i);
    reps.push_back(sum / static_cast<double>(j - i));
    cluster_unimod.push_back(std::abs(reps.back()) >= 1.0 - cfg.spec_tol ? 1 : 0);
    i = j;
  }

  // Defect check: a bounded-powers unimodular cluster block must be scalar.
  const double scale = std::max(1.0, s.t.frobenius_norm());
  {
    int off = 0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      if (cluster_unimod[g]) {
        double defect = 0.0;
        for (int i = 0; i < sizes[g]; ++i)
          for (int j = i + 1; j < sizes[g]; ++j)
            defect = std::max(defect, std::abs(s.t(off + i, off + j)));
        if (defect > 1e-8 * scale)
          throw_error(ErrorKind::hypothesis,
                      "spectral_split: defective unimodular eigenvalue "
                      "(powers unbounded)");
      }
      off += sizes[g];
    }
  }

  const ComplexMatrix m = decouple_clusters(s.t, sizes);
  ComplexMatrix basis = s.q * m;
  LuSolver basis_lu(basis);
  ComplexMatrix basis_inv = basis_lu.inverse();

  SpectralSplit out;
  out.basis = basis;
  out.basis_inverse = basis_inv;

  int u = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g)
    if (cluster_unimod[g]) u += sizes[g];

  out.unitary_part = ComplexMatrix(u, u);
  for (int i = 0; i < u; ++i) out.unitary_part(i, i) = diag[i];
  // Trailing blocks of the decoupled form, block-diagonal by construction.
  out.contraction_part = ComplexMatrix(n - u, n - u);
  {
    int coff = 0, off = 0;
    for (std::size_t g = 0; g < sizes.size(); ++g) {
      if (!cluster_unimod[g]) {
        for (int i = 0; i < sizes[g]; ++i)
          for (int j = i; j < sizes[g]; ++j)
            out.contraction_part(coff + i, coff + j) = s.t(off + i, off + j);
        coff += sizes[g];
      }
      off += sizes[g];
    }
  }

  int off = 0;
  for (std::size_t g = 0; g < sizes.size(); ++g) {
    ComplexMatrix sel(n, n);
    for (int i = 0; i < sizes[g]; ++i) sel(off + i, off + i) = 1.0;
    ComplexMatrix proj = basis * sel * basis_inv;
    if (cluster_unimod[g]) {
      out.unimodular_eigs.push_back({reps[g], std::move(proj)});
    } else {
      ComplexMatrix nil_core(n, n);
      for (int i = 0; i < sizes[g]; ++i)
        for (int j = i; j < sizes[g]; ++j) {
          cd v = s.t(off + i, off + j);
          if (i == j) v -= reps[g];
          nil_core(off + i, off + j) = v;
        }
      ComplexMatrix nil = basis * nil_core * basis_inv;
      out.inner_eigs.push_back({reps[g], std::move(proj), std::move(nil)});
    }
    off += sizes[g];
  }
  return out;
}

}  // namespace isoform
