#include <doctest.h>

#include <cmath>
#include <numbers>

#include "isoform/corpus.hpp"
#include "isoform/error.hpp"
#include "isoform/numeric.hpp"
#include "support/oracles.hpp"

using namespace isoform;

namespace {
const ToleranceConfig kCfg;  // defaults

ComplexMatrix random_matrix(int n, Rng& rng) {
  ComplexMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd(rng.gauss(), rng.gauss());
  return m;
}
}  // namespace

TEST_CASE("op_norm basics") {
  CHECK(op_norm(ComplexMatrix::identity(2)) == doctest::Approx(1.0).epsilon(1e-14));

  // The column-pattern element with unimodular phases has norm sqrt(2).
  const cd z = std::polar(1.0, 1.0);
  ComplexMatrix ex(2, 2);
  ex(0, 0) = z;
  ex(1, 0) = std::polar(1.0, 5.0);
  CHECK(op_norm(ex) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const ComplexMatrix g({{1.0, -2.0}, {0.0, -1.0}});
  const auto sv = testsupport::svd2x2(g);
  CHECK(op_norm(g) == doctest::Approx(sv[0]).epsilon(1e-12));
  CHECK(op_norm(g) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("singular values match the 2x2 oracle on random input") {
  Rng rng(21);
  for (int rep = 0; rep < 30; ++rep) {
    const ComplexMatrix a = random_matrix(2, rng);
    const auto expected = testsupport::svd2x2(a);
    const auto got = singular_values(a);
    CHECK(got[0] == doctest::Approx(expected[0]).epsilon(1e-10));
    CHECK(got[1] == doctest::Approx(expected[1]).epsilon(1e-8));
  }
}

TEST_CASE("op_norm dominates the spectral radius") {
  Rng rng(22);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix a = random_matrix(4, rng);
    CHECK(op_norm(a) >= spectral_radius(a) - 10.0 * kCfg.eq_tol);
  }
}

TEST_CASE("rank_numeric") {
  CHECK(rank_numeric(ComplexMatrix::zero(3), kCfg) == 0);
  const ComplexMatrix block = block_embed(2, 0, 0, ComplexMatrix::identity(2));
  CHECK(rank_numeric(block, kCfg) == 2);
  const ComplexMatrix col({{1.0, 0.0}, {1.0, 0.0}});
  CHECK(rank_numeric(col, kCfg) == 1);
}

TEST_CASE("matrix_sqrt_pd") {
  const ComplexMatrix eye = ComplexMatrix::identity(3);
  CHECK((matrix_sqrt_pd(eye, kCfg) - eye).frobenius_norm() < 1e-13);

  const ComplexMatrix d({{4.0, 0.0}, {0.0, 9.0}});
  const ComplexMatrix expect_d({{2.0, 0.0}, {0.0, 3.0}});
  CHECK((matrix_sqrt_pd(d, kCfg) - expect_d).frobenius_norm() < 1e-12);

  const ComplexMatrix m({{1.0, -1.0}, {-1.0, 3.0}});
  const ComplexMatrix s = matrix_sqrt_pd(m, kCfg);
  CHECK((s - testsupport::sqrt2x2_pd(m)).frobenius_norm() < 1e-12);
  CHECK(op_norm(s * s - m) <= kCfg.eq_tol);
  CHECK(op_norm(s - s.adjoint()) <= kCfg.eq_tol);

  CHECK_THROWS_AS((void)matrix_sqrt_pd(ComplexMatrix({{0.0, 1.0}, {0.0, 0.0}}), kCfg),
                  Error);
  CHECK_THROWS_AS((void)matrix_sqrt_pd(ComplexMatrix({{1.0, 0.0}, {0.0, -1.0}}), kCfg),
                  Error);
}

TEST_CASE("matrix_sqrt_pd on random Gram matrices") {
  Rng rng(23);
  for (int rep = 0; rep < 10; ++rep) {
    const ComplexMatrix a = random_matrix(4, rng);
    const ComplexMatrix m =
        a.adjoint() * a + 0.1 * ComplexMatrix::identity(4);
    const ComplexMatrix s = matrix_sqrt_pd(m, kCfg);
    CHECK(op_norm(s * s - m) <= kCfg.eq_tol * std::max(1.0, op_norm(m)));
    CHECK(op_norm(s - s.adjoint()) <= kCfg.eq_tol);
  }
}

TEST_CASE("spectral_split on an already-split diagonal") {
  const cd u = std::polar(1.0, std::numbers::pi / 3.0);
  ComplexMatrix t(2, 2);
  t(0, 0) = u;
  t(1, 1) = 0.5;
  const SpectralSplit sp = spectral_split(t, kCfg);
  REQUIRE(sp.unitary_part.dim() == 1);
  REQUIRE(sp.contraction_part.dim() == 1);
  CHECK(std::abs(sp.unitary_part(0, 0) - u) < 1e-12);
  CHECK(std::abs(sp.contraction_part(0, 0) - cd(0.5)) < 1e-12);
  REQUIRE(sp.unimodular_eigs.size() == 1);
  REQUIRE(sp.inner_eigs.size() == 1);
}

TEST_CASE("spectral_split diagonalizes a unitary") {
  Rng rng(31);
  const ComplexMatrix u = random_unitary(3, rng);
  const SpectralSplit sp = spectral_split(u, kCfg);
  CHECK(sp.unitary_part.dim() == 3);
  CHECK(sp.contraction_part.dim() == 0);
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(std::abs(sp.unitary_part(i, i)) - 1.0) < 1e-10);
  // Round trip through the basis.
  ComplexMatrix d(3, 3);
  for (int i = 0; i < 3; ++i) d(i, i) = sp.unitary_part(i, i);
  CHECK(op_norm(sp.basis * d * sp.basis_inverse - u) <= 10.0 * kCfg.eq_tol);
}

TEST_CASE("spectral_split separates a coupled triangular matrix") {
  const ComplexMatrix t({{1.0, 1.0}, {0.0, 0.5}});
  const SpectralSplit sp = spectral_split(t, kCfg);
  REQUIRE(sp.unitary_part.dim() == 1);
  REQUIRE(sp.contraction_part.dim() == 1);
  CHECK(std::abs(sp.unitary_part(0, 0) - cd(1.0)) < 1e-12);
  CHECK(std::abs(sp.contraction_part(0, 0) - cd(0.5)) < 1e-12);
  // The basis is genuinely non-identity here.
  CHECK((sp.basis - ComplexMatrix::identity(2)).frobenius_norm() > 0.1);
  ComplexMatrix d(2, 2);
  d(0, 0) = sp.unitary_part(0, 0);
  d(1, 1) = sp.contraction_part(0, 0);
  CHECK(op_norm(sp.basis * d * sp.basis_inverse - t) <= 10.0 * kCfg.eq_tol);
  // Projections: idempotent, complementary.
  const ComplexMatrix& e = sp.unimodular_eigs.front().projection;
  const ComplexMatrix& f = sp.inner_eigs.front().projection;
  CHECK(op_norm(e * e - e) <= kCfg.eq_tol);
  CHECK(op_norm(f * f - f) <= kCfg.eq_tol);
  CHECK(op_norm(e + f - ComplexMatrix::identity(2)) <= kCfg.eq_tol);
}

TEST_CASE("spectral_split nilpotent parts commute with their projections") {
  // Inner eigenvalue 0.4 with a Jordan block; unimodular eigenvalue 1.
  ComplexMatrix t(3, 3);
  t(0, 0) = 1.0;
  t(1, 1) = 0.4;
  t(1, 2) = 1.0;
  t(2, 2) = 0.4;
  const SpectralSplit sp = spectral_split(t, kCfg);
  REQUIRE(sp.inner_eigs.size() == 1);
  const auto& inner = sp.inner_eigs.front();
  CHECK(std::abs(inner.value - cd(0.4)) < 1e-10);
  CHECK(op_norm(inner.nilpotent * inner.projection -
                inner.projection * inner.nilpotent) <= kCfg.eq_tol);
  const ComplexMatrix n2 = inner.nilpotent * inner.nilpotent;
  CHECK(op_norm(n2 * inner.nilpotent) <= kCfg.eq_tol);  // N^3 = 0 at n = 3
  // Reconstruction: T = sum lambda E + sum (mu F + N).
  ComplexMatrix acc(3, 3);
  for (const auto& ue : sp.unimodular_eigs) acc += ue.value * ue.projection;
  for (const auto& ie : sp.inner_eigs) {
    acc += ie.value * ie.projection;
    acc += ie.nilpotent;
  }
  CHECK(op_norm(acc - t) <= 10.0 * kCfg.eq_tol);
}

TEST_CASE("spectral_split error paths") {
  // Spectral radius beyond 1 + spec_tol.
  CHECK_THROWS_AS((void)spectral_split(ComplexMatrix({{cd(2.0, 0.0)}}), kCfg), Error);
  // Defective unimodular eigenvalue: powers unbounded.
  CHECK_THROWS_AS(
      (void)spectral_split(ComplexMatrix({{1.0, 1.0}, {0.0, 1.0}}), kCfg), Error);
  // Ambiguous modulus band: inside [1 - spec_tol, 1) but far from 1.
  ComplexMatrix amb(1, 1);
  amb(0, 0) = 1.0 - 0.75 * kCfg.spec_tol;
  CHECK_THROWS_AS((void)spectral_split(amb, kCfg), Error);
}

TEST_CASE("lu inverse and orthonormal range basis") {
  Rng rng(33);
  const ComplexMatrix a = random_matrix(4, rng) + 3.0 * ComplexMatrix::identity(4);
  const ComplexMatrix ainv = inverse(a, kCfg);
  CHECK(op_norm(a * ainv - ComplexMatrix::identity(4)) < 1e-11);

  CHECK_THROWS_AS((void)inverse(ComplexMatrix({{1.0, 0.0}, {1.0, 0.0}}), kCfg), Error);

  const ComplexMatrix p({{1.0, 0.0}, {1.0, 0.0}});  // rank 1
  const ComplexMatrix v = orthonormal_range_basis(p, 1);
  REQUIRE(v.cols() == 1);
  CHECK(std::abs((v.adjoint() * v)(0, 0) - cd(1.0)) < 1e-13);
  // Range of p is spanned by (1, 1)/sqrt(2).
  const double a0 = std::abs(v(0, 0)), a1 = std::abs(v(1, 0));
  CHECK(a0 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(a1 == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}
