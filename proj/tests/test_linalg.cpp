// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <limits>

#include <doctest.h>

#include "nspkit/linalg.hpp"
#include "nspkit/rng.hpp"
#include "test_util.hpp"

using namespace nspkit;
using namespace nspkit::testutil;

namespace {

bool penrose(const Matrix& a, const Matrix& ap, double tol = 1e-10) {
  const double s = std::max(1.0, spectral_norm(a));
  return spectral_norm(a * ap * a - a) <= tol * s &&
         spectral_norm(ap * a * ap - ap) <= tol * std::max(1.0, spectral_norm(ap)) &&
         spectral_norm((a * ap).transpose() - a * ap) <= tol &&
         spectral_norm((ap * a).transpose() - ap * a) <= tol;
}

}  // namespace

TEST_CASE("kernel_basis recovers the annihilators of the worked example") {
  const GoldenExample ex;

  const Matrix ku = kernel_basis(ex.u);
  REQUIRE(ku.cols() == 1);
  CHECK(orthonormal_columns(ku));
  CHECK(spectral_norm(ex.u * ku) <= 1e-14);
  Vector dir(3);
  dir << 1, -1, 1;
  CHECK(same_span(ku, dir.normalized()));

  const Matrix kv = kernel_basis(ex.v);
  REQUIRE(kv.cols() == 2);
  CHECK(orthonormal_columns(kv));
  CHECK(spectral_norm(ex.v * kv) <= 1e-14);
}

TEST_CASE("kernel_basis edge cases") {
  CHECK(kernel_basis(Matrix::Identity(3, 3)).cols() == 0);
  CHECK(same_span(kernel_basis(Matrix::Zero(2, 3)), Matrix::Identity(3, 3)));
  CHECK(kernel_basis(Matrix(0, 4)).isIdentity(0.0));
  CHECK(kernel_basis(Matrix(3, 0)).size() == 0);
}

TEST_CASE("scale_floor suppresses roundoff-level products") {
  // A numerically-zero matrix left over from cancellation must not be
  // treated as full rank: anchored to the scale of its factors it is zero.
  Rng rng(7);
  const Matrix g = rng.orthogonal(4);
  const Matrix noise = g - g;  // exactly zero here; perturb below
  Matrix dirty = noise;
  dirty(1, 2) = 1e-16;
  CHECK(image_basis(dirty, {}, 1.0).cols() == 0);
  CHECK(kernel_basis(dirty, {}, 1.0).cols() == 4);
  // Without the floor the same matrix looks rank one.
  CHECK(image_basis(dirty).cols() == 1);
}

TEST_CASE("image_basis spans and dimensions") {
  const GoldenExample ex;
  const Matrix imu = image_basis(ex.u.transpose());
  REQUIRE(imu.cols() == 2);
  CHECK(orthonormal_columns(imu));
  // Columns of U^T must be reproducible from the basis.
  const Matrix proj = imu * imu.transpose();
  CHECK(approx_equal(proj * ex.u.transpose(), ex.u.transpose(), 1e-13));

  CHECK(image_basis(Matrix::Zero(3, 2)).cols() == 0);
  CHECK(image_basis(Matrix(0, 3)).size() == 0);
  CHECK(image_basis(Matrix(3, 0)).cols() == 0);
}

TEST_CASE("subspace_intersection finds the common image direction") {
  const GoldenExample ex;
  const Matrix bu = image_basis(ex.u.transpose());
  const Matrix bv = image_basis(ex.v.transpose());
  const Matrix meet = subspace_intersection(bu, bv);
  REQUIRE(meet.cols() == 1);
  Vector dir(3);
  dir << 1, 0, -1;
  CHECK(same_span(meet, dir.normalized(), 1e-12));

  // Orthogonal planes in R^4 intersect trivially.
  Matrix e12 = Matrix::Identity(4, 4).leftCols(2);
  Matrix e34 = Matrix::Identity(4, 4).rightCols(2);
  CHECK(subspace_intersection(e12, e34).cols() == 0);
  CHECK_THROWS_AS(subspace_intersection(e12, Matrix::Identity(3, 3)),
                  DimensionMismatch);
}

TEST_CASE("pinv satisfies the Penrose identities") {
  Rng rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    const Index r = rng.uniform_int(1, 6);
    const Index c = rng.uniform_int(1, 6);
    const Matrix a = rng.gaussian(r, c);
    CHECK(penrose(a, pinv(a)));
  }
  // Rank-deficient: an outer product.
  const Matrix low = rng.gaussian(5, 1) * rng.gaussian(1, 4);
  CHECK(penrose(low, pinv(low)));
  // Zero and empty.
  CHECK(pinv(Matrix::Zero(3, 2)).isZero(0.0));
  CHECK(pinv(Matrix(0, 3)).rows() == 3);
  // Orthogonal matrices invert exactly to their transpose.
  const Matrix qm = rng.orthogonal(4);
  CHECK(approx_equal(pinv(qm), qm.transpose(), 1e-13));
}

TEST_CASE("sym_eigen golden values") {
  Matrix m(2, 2);
  m << 1, -1, -1, 1;
  const EigenResult eg = sym_eigen(SymMatrix(m));
  REQUIRE(eg.values.size() == 2);
  CHECK(std::abs(eg.values(0)) <= 1e-14);
  CHECK(std::abs(eg.values(1) - 2.0) <= 1e-14);
  CHECK(orthonormal_columns(eg.vectors, 1e-14));
  const Matrix rebuilt =
      eg.vectors * eg.values.asDiagonal() * eg.vectors.transpose();
  CHECK(approx_equal(rebuilt, m, 1e-14));

  const EigenResult empty = sym_eigen(SymMatrix(Matrix(0, 0)));
  CHECK(empty.values.size() == 0);
}

TEST_CASE("spectral_norm against an independent eigenvalue route") {
  Matrix a(2, 2);
  a << 3, 4, 0, 0;
  CHECK(std::abs(spectral_norm(a) - 5.0) <= 1e-14);
  CHECK(spectral_norm(Matrix(0, 2)) == 0.0);

  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix g = rng.gaussian(rng.uniform_int(1, 5), rng.uniform_int(1, 5));
    const Matrix gram = g.transpose() * g;
    const double via_eig =
        std::sqrt(sym_eigen(SymMatrix(gram, 1e-9)).values.maxCoeff());
    CHECK(std::abs(spectral_norm(g) - via_eig) <=
          1e-10 * std::max(1.0, via_eig));
  }
}

TEST_CASE("is_psd classification") {
  CHECK(is_psd(SymMatrix(Matrix::Identity(2, 2))).definite());
  Matrix semi = Matrix::Zero(2, 2);
  semi(1, 1) = 1.0;
  const auto rs = is_psd(SymMatrix(semi));
  CHECK(rs.at_least_psd());
  CHECK_FALSE(rs.definite());
  Matrix indef(2, 2);
  indef << -1, 0, 0, 1;
  const auto ri = is_psd(SymMatrix(indef));
  CHECK_FALSE(ri.at_least_psd());
  CHECK(ri.min_eig == doctest::Approx(-1.0));
  // Empty matrices are vacuously definite.
  const auto re = is_psd(SymMatrix());
  CHECK(re.definite());
  CHECK(re.min_eig == std::numeric_limits<double>::infinity());
  CHECK(min_eigenvalue(SymMatrix()) ==
        std::numeric_limits<double>::infinity());
  CHECK(min_eigenvalue(SymMatrix(indef)) == doctest::Approx(-1.0));
}

TEST_CASE("psd_sqrt squares back and rejects indefinite input") {
  Matrix m(2, 2);
  m << 2, 1, 1, 2;
  const SymMatrix root = psd_sqrt(SymMatrix(m));
  CHECK(approx_equal(root.mat() * root.mat(), m, 1e-13));

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 4.0;
  d(1, 1) = 9.0;
  Matrix expect = Matrix::Zero(2, 2);
  expect(0, 0) = 2.0;
  expect(1, 1) = 3.0;
  CHECK(approx_equal(psd_sqrt(SymMatrix(d)).mat(), expect, 1e-14));

  Matrix bad = Matrix::Identity(2, 2);
  bad(0, 0) = -1.0;
  CHECK_THROWS_AS(psd_sqrt(SymMatrix(bad)), IndefiniteInput);
}

TEST_CASE("schur_psd_check scalar cases") {
  const auto mk = [](double q, double s, double r) {
    return schur_psd_check(SymMatrix(Matrix::Constant(1, 1, q)),
                           Matrix::Constant(1, 1, s),
                           SymMatrix(Matrix::Constant(1, 1, r)));
  };
  // [1 0; 0 0] is PSD: singular corner, zero coupling.
  const auto a = mk(1, 0, 0);
  CHECK(a.psd);
  CHECK(a.range_ok);
  CHECK_FALSE(a.corner_nonsingular);
  // [0 1; 1 0] fails on the range condition alone.
  const auto b = mk(0, 1, 0);
  CHECK_FALSE(b.psd);
  CHECK_FALSE(b.range_ok);
  CHECK(b.corner.at_least_psd());
  // [1 1; 1 1] is PSD with complement exactly zero.
  const auto c = mk(1, 1, 1);
  CHECK(c.psd);
  CHECK(c.complement.at_least_psd());
  CHECK(std::abs(c.complement.min_eig) <= 1e-12);
  // [1 2; 2 1]: complement 1 - 4 = -3.
  const auto d = mk(1, 2, 1);
  CHECK_FALSE(d.psd);
  CHECK(d.complement.min_eig == doctest::Approx(-3.0));
  // Negative corner.
  CHECK_FALSE(mk(1, 0, -1).psd);
}

TEST_CASE("schur_psd_check agrees with direct eigenvalues") {
  Rng rng(17);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = rng.uniform_int(1, 4);
    const Index m = rng.uniform_int(1, 4);
    const bool singular_r = rng.uniform() < 0.4;
    const Matrix r =
        rng.psd(m, singular_r ? std::max<Index>(0, m - 1) : Index{-1});
    const Matrix s0 = rng.gaussian(n, m);
    const Matrix s = s0 * r;  // keeps im S^T inside im R
    const Matrix base = s * pinv(SymMatrix(r, 1e-9).mat()) * s.transpose();
    Matrix q;
    if (rng.uniform() < 0.5) {
      q = base + rng.psd(n) + 0.1 * Matrix::Identity(n, n);
    } else {
      const Vector dir = rng.unit_vector(n);
      q = base - (0.5 + rng.uniform()) * dir * dir.transpose();
    }
    q = 0.5 * (q + q.transpose());

    Matrix full(n + m, n + m);
    full.topLeftCorner(n, n) = q;
    full.topRightCorner(n, m) = s;
    full.bottomLeftCorner(m, n) = s.transpose();
    full.bottomRightCorner(m, m) = r;
    const double direct = min_eigenvalue(SymMatrix(full, 1e-9));
    const double scale = std::max(1.0, spectral_norm(full));
    if (std::abs(direct) <= 1e-6 * scale) continue;  // too close to call

    const auto rep = schur_psd_check(SymMatrix(q, 1e-9), s, SymMatrix(r, 1e-9));
    CHECK(rep.psd == (direct > 0 || std::abs(direct) <= 1e-9 * scale));
    ++checked;
  }
  CHECK(checked >= 200);
}

TEST_CASE("hcat, vcat and block_grid") {
  Matrix a = Matrix::Constant(2, 1, 1.0);
  Matrix b = Matrix::Constant(2, 2, 2.0);
  const Matrix h = hcat({a, Matrix(2, 0), b});
  REQUIRE(h.rows() == 2);
  REQUIRE(h.cols() == 3);
  CHECK(h(0, 0) == 1.0);
  CHECK(h(1, 2) == 2.0);
  CHECK_THROWS_AS(hcat({a, Matrix::Zero(3, 1)}), DimensionMismatch);

  const Matrix v = vcat({a.transpose(), Matrix(0, 2), b});
  REQUIRE(v.rows() == 3);
  CHECK(v(0, 1) == 1.0);
  CHECK(v(2, 0) == 2.0);

  const Matrix g = block_grid({{Matrix::Identity(2, 2), Matrix::Zero(2, 1)},
                               {Matrix::Zero(1, 2), Matrix::Constant(1, 1, 5.0)}});
  REQUIRE(g.rows() == 3);
  REQUIRE(g.cols() == 3);
  CHECK(g(2, 2) == 5.0);
  CHECK(g(0, 0) == 1.0);
  CHECK(g(0, 2) == 0.0);

  CHECK(hcat({}).size() == 0);
}

TEST_CASE("SymMatrix symmetrizes and validates") {
  Matrix nearly = Matrix::Identity(2, 2);
  nearly(0, 1) = 1e-14;
  const SymMatrix sm(nearly);
  CHECK(sm(0, 1) == sm(1, 0));

  Matrix skew(2, 2);
  skew << 0, 1, -1, 0;
  CHECK_THROWS_AS((void)SymMatrix(skew), IndefiniteInput);
  CHECK_THROWS_AS(SymMatrix(Matrix(2, 3)), DimensionMismatch);
  CHECK(SymMatrix().dim() == 0);
}
