#include <doctest.h>

#include <cmath>

#include "isoform/corpus.hpp"
#include "isoform/numeric.hpp"
#include "isoform/schur.hpp"
#include "support/oracles.hpp"

using namespace isoform;

namespace {

ComplexMatrix random_matrix(int n, Rng& rng, double scale = 1.0) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = scale * cd(rng.gauss(), rng.gauss());
  return m;
}

double reconstruction_error(const ComplexMatrix& a,
                            const SchurDecomposition& s) {
  return (s.q * s.t * s.q.adjoint() - a).frobenius_norm();
}

double unitarity_error(const ComplexMatrix& q) {
  return (q.adjoint() * q - ComplexMatrix::identity(q.dim())).frobenius_norm();
}

}  // namespace

TEST_CASE("schur reconstructs random matrices") {
  Rng rng(42);
  for (int n : {2, 3, 4, 6, 8}) {
    for (int rep = 0; rep < 6; ++rep) {
      const ComplexMatrix a = random_matrix(n, rng);
      const SchurDecomposition s = schur_decompose(a);
      const double scale = a.frobenius_norm();
      CHECK(reconstruction_error(a, s) <= 1e-12 * scale * n);
      CHECK(unitarity_error(s.q) <= 1e-12 * n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j) CHECK(s.t(i, j) == cd(0.0));
    }
  }
}

TEST_CASE("schur handles diagonal, nilpotent, and defective inputs") {
  const ComplexMatrix d({{cd(1, 0), 0.0}, {0.0, cd(0.5, 0)}});
  auto ev = eigenvalues(d);
  CHECK(std::abs(ev[0] - cd(0.5)) < 1e-14);
  CHECK(std::abs(ev[1] - cd(1.0)) < 1e-14);

  const ComplexMatrix e12({{0.0, 1.0}, {0.0, 0.0}});
  ev = eigenvalues(e12);
  CHECK(std::abs(ev[0]) < 1e-14);
  CHECK(std::abs(ev[1]) < 1e-14);

  // Characteristic polynomial x^2 - x by hand: spectrum {1, 0}.
  const ComplexMatrix col({{1.0, 0.0}, {1.0, 0.0}});
  ev = eigenvalues(col);
  CHECK(std::abs(ev[0]) < 1e-12);
  CHECK(std::abs(ev[1] - cd(1.0)) < 1e-12);

  const ComplexMatrix jordan({{2.0, 1.0}, {0.0, 2.0}});
  ev = eigenvalues(jordan);
  CHECK(std::abs(ev[0] - cd(2.0)) < 1e-7);  // defective: sqrt(eps) accuracy
  CHECK(std::abs(ev[1] - cd(2.0)) < 1e-7);
}

TEST_CASE("eigenvalues match the 2x2 quadratic oracle") {
  Rng rng(7);
  for (int rep = 0; rep < 40; ++rep) {
    const ComplexMatrix a = random_matrix(2, rng);
    const auto expected = testsupport::eig2x2(a);
    const auto got = eigenvalues(a);
    const double t1 = std::abs(got[0] - expected[0]) + std::abs(got[1] - expected[1]);
    const double t2 = std::abs(got[0] - expected[1]) + std::abs(got[1] - expected[0]);
    CHECK(std::min(t1, t2) < 1e-10 * std::max(1.0, a.frobenius_norm()));
  }
}

TEST_CASE("hermitian eigenvalues are real and match the analytic oracle") {
  Rng rng(11);
  const ToleranceConfig cfg;
  for (int rep = 0; rep < 40; ++rep) {
    ComplexMatrix h(2, 2);
    h(0, 0) = rng.gauss();
    h(1, 1) = rng.gauss();
    const cd b(rng.gauss(), rng.gauss());
    h(0, 1) = b;
    h(1, 0) = std::conj(b);
    const auto expected = testsupport::eig2x2_hermitian(h);
    const auto got = eigenvalues(h);
    for (cd z : got) CHECK(std::abs(z.imag()) <= cfg.spec_tol);
    CHECK(std::abs(got[0].real() - expected[0]) < 1e-10);
    CHECK(std::abs(got[1].real() - expected[1]) < 1e-10);
  }
}

TEST_CASE("reorder_schur moves selected eigenvalues to the front") {
  Rng rng(3);
  const ComplexMatrix a = random_matrix(4, rng);
  SchurDecomposition s = schur_decompose(a);
  const std::vector<cd> before = s.diagonal();
  std::vector<char> select{0, 1, 0, 1};
  reorder_schur(s, select);
  const std::vector<cd> after = s.diagonal();
  CHECK(std::abs(after[0] - before[1]) < 1e-10);
  CHECK(std::abs(after[1] - before[3]) < 1e-10);
  CHECK(reconstruction_error(a, s) <= 1e-11 * a.frobenius_norm());
  CHECK(unitarity_error(s.q) <= 1e-11);
}

TEST_CASE("sylvester_triangular solves the decoupling equation") {
  Rng rng(5);
  ComplexMatrix t11(2, 2), t22(2, 2), c(2, 2);
  t11(0, 0) = cd(1.0, 0.2);
  t11(0, 1) = rng.gauss();
  t11(1, 1) = cd(0.9, -0.3);
  t22(0, 0) = 0.3;
  t22(0, 1) = rng.gauss();
  t22(1, 1) = cd(0.1, 0.1);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c(i, j) = cd(rng.gauss(), rng.gauss());
  const ComplexMatrix x = sylvester_triangular(t11, t22, c);
  CHECK((t11 * x - x * t22 - c).frobenius_norm() < 1e-12);
}

TEST_CASE("qr iteration budget produces a convergence error eventually") {
  // A matrix the solver handles fine within budget; shrink the budget to 0
  // to exercise the error path.
  Rng rng(9);
  const ComplexMatrix a = random_matrix(5, rng);
  CHECK_THROWS_AS((void)schur_decompose(a, 0), Error);
}
