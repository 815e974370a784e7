#include "isoform/schur.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "isoform/error.hpp"

// Complex Schur form by the classical route: Householder reduction to
// upper Hessenberg, then explicit single-shift QR with Givens rotations
// (cf. EISPACK comqr2 / Golub & Van Loan ch. 7). Deflation uses the usual
// relative subdiagonal test with an absolute fallback for zero diagonals.

namespace isoform {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Givens {
  double c = 1.0;  // real cosine
  cd s = 0.0;      // complex sine
};

// G * [a; b] = [r; 0] with G = [[c, s], [-conj(s), c]], c real >= 0.
Givens make_givens(cd a, cd b) {
  Givens g;
  const double aa = std::abs(a), ab = std::abs(b);
  if (ab == 0.0) return g;
  const double d = std::hypot(aa, ab);
  if (aa == 0.0) {
    g.c = 0.0;
    g.s = std::conj(b) / ab;
    return g;
  }
  g.c = aa / d;
  g.s = (a / aa) * std::conj(b) / d;
  return g;
}

// Rows i and k of h over columns [c0, c1).
void apply_givens_rows(ComplexMatrix& h, const Givens& g, int i, int k,
                       int c0, int c1) {
  for (int j = c0; j < c1; ++j) {
    const cd x = h(i, j), y = h(k, j);
    h(i, j) = g.c * x + g.s * y;
    h(k, j) = -std::conj(g.s) * x + g.c * y;
  }
}

// Columns i and k of h over rows [r0, r1), multiplying by G^* on the right.
void apply_givens_cols(ComplexMatrix& h, const Givens& g, int i, int k,
                       int r0, int r1) {
  for (int r = r0; r < r1; ++r) {
    const cd x = h(r, i), y = h(r, k);
    h(r, i) = g.c * x + std::conj(g.s) * y;
    h(r, k) = -g.s * x + g.c * y;
  }
}

void hessenberg_reduce(ComplexMatrix& h, ComplexMatrix& q) {
  const int n = h.dim();
  for (int k = 0; k + 2 < n; ++k) {
    double below = 0.0;
    for (int i = k + 2; i < n; ++i) below += std::abs(h(i, k));
    if (below == 0.0) continue;

    std::vector<cd> u(n - k - 1);
    double xnorm = 0.0;
    for (int i = 0; i < n - k - 1; ++i) {
      u[i] = h(k + 1 + i, k);
      xnorm += std::norm(u[i]);
    }
    xnorm = std::sqrt(xnorm);
    const cd x0 = u[0];
    const cd phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : cd(1.0);
    const cd alpha = -phase * xnorm;
    u[0] -= alpha;
    double unorm2 = 0.0;
    for (const cd& z : u) unorm2 += std::norm(z);
    if (unorm2 <= 0.0) continue;
    const double beta = 2.0 / unorm2;

    // h <- P h with P = I - beta u u^*, acting on rows k+1..n-1.
    for (int j = k; j < n; ++j) {
      cd dot = 0.0;
      for (int i = 0; i < n - k - 1; ++i) dot += std::conj(u[i]) * h(k + 1 + i, j);
      dot *= beta;
      for (int i = 0; i < n - k - 1; ++i) h(k + 1 + i, j) -= dot * u[i];
    }
    // h <- h P on columns k+1..n-1.
    for (int i = 0; i < n; ++i) {
      cd dot = 0.0;
      for (int j = 0; j < n - k - 1; ++j) dot += h(i, k + 1 + j) * u[j];
      dot *= beta;
      for (int j = 0; j < n - k - 1; ++j) h(i, k + 1 + j) -= dot * std::conj(u[j]);
    }
    // q <- q P.
    for (int i = 0; i < n; ++i) {
      cd dot = 0.0;
      for (int j = 0; j < n - k - 1; ++j) dot += q(i, k + 1 + j) * u[j];
      dot *= beta;
      for (int j = 0; j < n - k - 1; ++j) q(i, k + 1 + j) -= dot * std::conj(u[j]);
    }
    h(k + 1, k) = alpha;
    for (int i = k + 2; i < n; ++i) h(i, k) = 0.0;
  }
}

cd wilkinson_shift(const ComplexMatrix& h, int hi) {
  const cd a = h(hi - 1, hi - 1), b = h(hi - 1, hi);
  const cd c = h(hi, hi - 1), d = h(hi, hi);
  const cd tr = a + d;
  const cd disc = std::sqrt(tr * tr - 4.0 * (a * d - b * c));
  const cd l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  return std::abs(l1 - d) <= std::abs(l2 - d) ? l1 : l2;
}

// One explicit single-shift QR step on the active window [lo, hi].
void qr_step(ComplexMatrix& h, ComplexMatrix& q, int lo, int hi, cd sigma) {
  const int n = h.dim();
  for (int i = lo; i <= hi; ++i) h(i, i) -= sigma;

  std::vector<Givens> rot(hi - lo);
  for (int k = lo; k < hi; ++k) {
    const Givens g = make_givens(h(k, k), h(k + 1, k));
    apply_givens_rows(h, g, k, k + 1, k, n);
    h(k + 1, k) = 0.0;
    rot[k - lo] = g;
  }
  for (int k = lo; k < hi; ++k) {
    const Givens& g = rot[k - lo];
    apply_givens_cols(h, g, k, k + 1, 0, std::min(k + 2, n));
    apply_givens_cols(q, g, k, k + 1, 0, n);
  }
  for (int i = lo; i <= hi; ++i) h(i, i) += sigma;
}

}  // namespace

SchurDecomposition schur_decompose(const ComplexMatrix& a, int iter_factor) {
  validate_matrix(a, "schur_decompose");
  const int n = a.dim();
  SchurDecomposition s{ComplexMatrix::identity(n), a, 0};
  ComplexMatrix& h = s.t;
  ComplexMatrix& q = s.q;
  if (n == 1) return s;

  // Work at unit scale; extreme norms would overflow the shift arithmetic.
  // max_abs is overflow-proof where a Frobenius norm is not.
  const double scale = a.max_abs();
  if (scale > 0.0 && std::isfinite(scale)) h *= 1.0 / scale;

  hessenberg_reduce(h, q);
  const double hnorm = std::max(h.frobenius_norm(),
                               std::numeric_limits<double>::min());
  const int budget = std::max(1, iter_factor) * n;

  // Deflation threshold: a small multiple of eps is needed so clustered
  // eigenvalues (no spectral gap, noise-level subdiagonals) still deflate.
  constexpr double kDeflate = 16.0 * kEps;
  int hi = n - 1;
  int stall = 0;
  while (hi > 0) {
    int lo = hi;
    while (lo > 0) {
      const double sub = std::abs(h(lo, lo - 1));
      double thresh =
          kDeflate * (std::abs(h(lo - 1, lo - 1)) + std::abs(h(lo, lo)));
      if (thresh == 0.0) thresh = kDeflate * hnorm;
      if (sub <= thresh) {
        h(lo, lo - 1) = 0.0;
        break;
      }
      --lo;
    }
    if (lo == hi) {
      --hi;
      stall = 0;
      continue;
    }
    if (++s.qr_steps > budget)
      throw_error(ErrorKind::convergence,
                  "QR iteration did not converge within " +
                      std::to_string(budget) + " steps");
    ++stall;
    cd sigma;
    if (stall % 10 == 0) {
      sigma = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1));
    } else {
      sigma = wilkinson_shift(h, hi);
    }
    qr_step(h, q, lo, hi, sigma);
  }

  for (int i = 0; i < n; ++i)
    for (int j = 0; j < i; ++j) h(i, j) = 0.0;
  if (scale > 0.0 && std::isfinite(scale)) h *= scale;
  return s;
}

std::vector<cd> eigenvalues(const ComplexMatrix& a, int iter_factor) {
  SchurDecomposition s = schur_decompose(a, iter_factor);
  std::vector<cd> ev = s.diagonal();
  std::sort(ev.begin(), ev.end(), [](cd x, cd y) {
    if (x.real() != y.real()) return x.real() < y.real();
    return x.imag() < y.imag();
  });
  return ev;
}

namespace {

// Swaps the diagonal entries at positions p, p+1 of the triangular factor
// by a unitary similarity; no-op when the 2x2 block is already diagonal
// with equal eigenvalues.
void swap_adjacent(SchurDecomposition& s, int p) {
  ComplexMatrix& t = s.t;
  const int n = t.dim();
  const cd a = t(p, p), b = t(p, p + 1), c = t(p + 1, p + 1);
  const double nb = std::abs(b), nca = std::abs(c - a);
  if (nb == 0.0 && nca == 0.0) return;

  // Unit eigenvector of [[a, b], [0, c]] for eigenvalue c.
  const double xn = std::hypot(nb, nca);
  const cd x0 = b / xn, x1 = (c - a) / xn;
  // G columns: [x, x_perp]; t <- G^* t G, q <- q G.
  const cd g00 = x0, g10 = x1;
  const cd g01 = -std::conj(x1), g11 = std::conj(x0);

  for (int j = 0; j < n; ++j) {  // rows p, p+1 <- G^* * rows
    const cd r0 = t(p, j), r1 = t(p + 1, j);
    t(p, j) = std::conj(g00) * r0 + std::conj(g10) * r1;
    t(p + 1, j) = std::conj(g01) * r0 + std::conj(g11) * r1;
  }
  for (int i = 0; i < n; ++i) {  // cols p, p+1 <- cols * G
    const cd c0 = t(i, p), c1 = t(i, p + 1);
    t(i, p) = c0 * g00 + c1 * g10;
    t(i, p + 1) = c0 * g01 + c1 * g11;
  }
  for (int i = 0; i < n; ++i) {
    const cd c0 = s.q(i, p), c1 = s.q(i, p + 1);
    s.q(i, p) = c0 * g00 + c1 * g10;
    s.q(i, p + 1) = c0 * g01 + c1 * g11;
  }
  t(p + 1, p) = 0.0;
}

}  // namespace

void reorder_schur(SchurDecomposition& s, const std::vector<char>& select) {
  const int n = s.t.dim();
  std::vector<char> cur(select.begin(), select.end());
  int target = 0;
  for (int i = 0; i < n; ++i) {
    if (!cur[i]) continue;
    for (int p = i; p > target; --p) {
      swap_adjacent(s, p - 1);
      std::swap(cur[p - 1], cur[p]);
    }
    ++target;
  }
}

void sort_schur(SchurDecomposition& s, std::vector<int>& key) {
  const int n = s.t.dim();
  for (int pass_end = n - 1; pass_end > 0; --pass_end) {
    for (int p = 0; p < pass_end; ++p) {
      if (key[p] > key[p + 1]) {
        swap_adjacent(s, p);
        std::swap(key[p], key[p + 1]);
      }
    }
  }
}

ComplexMatrix sylvester_triangular(const ComplexMatrix& t11,
                                   const ComplexMatrix& t22,
                                   const ComplexMatrix& c) {
  const int u = t11.dim(), v = t22.dim();
  ComplexMatrix x(u, v);
  for (int j = 0; j < v; ++j) {
    std::vector<cd> rhs(u);
    for (int i = 0; i < u; ++i) {
      cd acc = c(i, j);
      for (int l = 0; l < j; ++l) acc += x(i, l) * t22(l, j);
      rhs[i] = acc;
    }
    const cd mu = t22(j, j);
    for (int i = u - 1; i >= 0; --i) {
      cd acc = rhs[i];
      for (int l = i + 1; l < u; ++l) acc -= t11(i, l) * x(l, j);
      const cd piv = t11(i, i) - mu;
      if (std::abs(piv) < 64.0 * kEps * (std::abs(t11(i, i)) + std::abs(mu) + 1.0))
        throw_error(ErrorKind::convergence,
                    "sylvester_triangular: spectra not separated");
      x(i, j) = acc / piv;
    }
  }
  return x;
}

}  // namespace isoform
