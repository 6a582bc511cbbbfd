// SPDX-License-Identifier: Apache-2.0
#include "nspkit/generator.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "nspkit/errors.hpp"
#include "nspkit/linalg.hpp"

namespace nspkit {

namespace {

// Random matrix that is rank-deficient about a third of the time.
Matrix maybe_low_rank(Rng& rng, Index rows, Index cols) {
  if (rows > 1 && cols > 1 && rng.uniform() < 0.34) {
    const Index r = rng.uniform_int(1, static_cast<int>(std::min(rows, cols)) - 1);
    return rng.gaussian(rows, r) * rng.gaussian(r, cols);
  }
  return rng.gaussian(rows, cols);
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Random similarity S = O1 diag(0.6 .. 1.6) O2; condition number below 3.
Matrix well_conditioned_similarity(Rng& rng, Index n) {
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = rng.uniform(0.6, 1.6);
  return rng.orthogonal(n) * d.asDiagonal() * rng.orthogonal(n);
}

}  // namespace

ProjectionInstance gen_projection_feasible(Rng& rng, Index p_max,
                                           Index mn_max) {
  ProjectionInstance inst;
  const Index p = rng.uniform_int(1, static_cast<int>(p_max));
  const Index m = rng.uniform_int(1, static_cast<int>(mn_max));
  const Index n = rng.uniform_int(1, static_cast<int>(mn_max));
  inst.u = maybe_low_rank(rng, m, p);
  inst.v = maybe_low_rank(rng, n, p);
  // Rank-deficient G plants exact boundary directions.
  const Index g_rank =
      rng.uniform() < 0.4 ? std::max<Index>(1, p - rng.uniform_int(1, 2)) : p;
  const Matrix g = rng.psd(p, std::min(g_rank, p));
  const Matrix x0 = rng.gaussian(m, n);
  const Matrix shift = inst.u.transpose() * x0 * inst.v;
  inst.q = symmetrize(g - shift - shift.transpose());
  return inst;
}

ProjectionInstance gen_projection_infeasible(Rng& rng, Index p_max,
                                             Index mn_max) {
  ProjectionInstance inst;
  const Index p = rng.uniform_int(2, static_cast<int>(p_max));
  const Index m =
      rng.uniform_int(1, static_cast<int>(std::min<Index>(mn_max, p - 1)));
  const Index n = rng.uniform_int(1, static_cast<int>(mn_max));
  inst.u = rng.gaussian(m, p);
  inst.v = rng.gaussian(n, p);
  const Matrix u_perp = kernel_basis(inst.u);
  const Vector y = rng.unit_vector(u_perp.cols());
  const Vector dir = u_perp * y;  // unit vector in ker U
  const Matrix q0 = rng.symmetric(p);
  const double margin = rng.uniform(0.5, 2.0);
  inst.q = symmetrize(q0 - (dir.dot(q0 * dir) + margin) * dir * dir.transpose());
  return inst;
}

ProjectionInstance gen_projection_random(Rng& rng, Index p_max, Index mn_max) {
  ProjectionInstance inst;
  const Index p = rng.uniform_int(1, static_cast<int>(p_max));
  const Index m = rng.uniform_int(1, static_cast<int>(mn_max));
  const Index n = rng.uniform_int(1, static_cast<int>(mn_max));
  inst.u = maybe_low_rank(rng, m, p);
  inst.v = maybe_low_rank(rng, n, p);
  switch (rng.uniform_int(0, 2)) {
    case 0:
      inst.q = rng.symmetric(p);
      break;
    case 1:  // strictly feasible: bounded-below shift of a Gram matrix
      inst.q = symmetrize(rng.psd(p) + 0.5 * Matrix::Identity(p, p));
      break;
    default: {
      const Matrix x0 = rng.gaussian(m, n);
      const Matrix shift = inst.u.transpose() * x0 * inst.v;
      inst.q = symmetrize(rng.psd(p) - shift - shift.transpose());
      break;
    }
  }
  return inst;
}

Matrix gen_marginally_stable(Rng& rng, Index n) {
  Matrix core = Matrix::Zero(n, n);
  Index at = 0;
  while (at < n) {
    const Index left = n - at;
    const int kind = left >= 2 ? rng.uniform_int(0, 3) : rng.uniform_int(1, 3);
    if (kind == 0) {  // plane rotation: complex pair on the unit circle
      const double th = rng.uniform(0.1, 3.0);
      core(at, at) = std::cos(th);
      core(at, at + 1) = -std::sin(th);
      core(at + 1, at) = std::sin(th);
      core(at + 1, at + 1) = std::cos(th);
      at += 2;
    } else if (kind == 1) {  // unit real eigenvalue
      core(at, at) = rng.uniform() < 0.5 ? 1.0 : -1.0;
      at += 1;
    } else {  // Schur-stable scalar
      core(at, at) = rng.uniform(-0.9, 0.9);
      at += 1;
    }
  }
  // Well-conditioned similarity keeps the unit spectrum numerically clean.
  const Matrix s = well_conditioned_similarity(rng, n);
  return s * core * s.inverse();
}

Matrix gen_defective_or_unstable(Rng& rng, Index n) {
  if (n < 2) throw DimensionMismatch("gen_defective_or_unstable: need n >= 2");
  Matrix core = Matrix::Zero(n, n);
  if (rng.uniform() < 0.5) {
    // Jordan block at a unit eigenvalue: marginal radius, defective.
    const double lambda = rng.uniform() < 0.5 ? 1.0 : -1.0;
    core(0, 0) = core(1, 1) = lambda;
    core(0, 1) = 1.0;
  } else {
    core(0, 0) = (rng.uniform() < 0.5 ? 1.0 : -1.0) * rng.uniform(1.05, 1.5);
    core(1, 1) = rng.uniform(-0.9, 0.9);
  }
  for (Index i = 2; i < n; ++i) core(i, i) = rng.uniform(-0.9, 0.9);
  const Matrix s = well_conditioned_similarity(rng, n);
  return s * core * s.inverse();
}

namespace {

// Scale factor s such that the norm of the augmented matrix hits target;
// monotone in s, solved by bracketed bisection.
double bisect_scale(const std::function<double(double)>& norm_of,
                    double target) {
  double hi = 1.0;
  while (norm_of(hi) < target && hi < 1e12) hi *= 2.0;
  double lo = 0.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-18 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (norm_of(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

DilationInstance gen_dilation(Rng& rng, Index m, Index n, Index p, Index q,
                              double row_target, double col_target) {
  DilationInstance inst;
  Matrix a = rng.gaussian(m, n);
  const double a_cap = 0.8 * std::min(row_target, col_target);
  const double a_norm = spectral_norm(a);
  if (a_norm > 0.0) a *= a_cap / a_norm;
  inst.a = a;

  const Matrix b0 = rng.gaussian(m, p);
  const Matrix c0 = rng.gaussian(q, n);
  if (p > 0 && m > 0 && spectral_norm(b0) > 0.0) {
    const double sb = bisect_scale(
        [&](double s) { return spectral_norm(hcat({a, s * b0})); }, row_target);
    inst.b = sb * b0;
  } else {
    inst.b = b0;
  }
  if (q > 0 && n > 0 && spectral_norm(c0) > 0.0) {
    const double sc = bisect_scale(
        [&](double s) { return spectral_norm(vcat({a, s * c0})); }, col_target);
    inst.c = sc * c0;
  } else {
    inst.c = c0;
  }
  inst.row_norm = spectral_norm(hcat({inst.a, inst.b}));
  inst.col_norm = spectral_norm(vcat({inst.a, inst.c}));
  return inst;
}

DilationInstance gen_dilation_boundary(Rng& rng, Index m, Index n, Index p,
                                       Index q) {
  // A = u v^T has exact unit norm; aligning B and C rank-one factors with
  // the complementary singular directions keeps both conditions at one.
  DilationInstance inst;
  const Vector u = rng.unit_vector(m);
  const Vector v = rng.unit_vector(n);
  inst.a = u * v.transpose();
  Vector u2 = rng.unit_vector(m);
  u2 -= u * u.dot(u2);  // orthogonal to u: [A B] keeps norm exactly 1
  if (u2.norm() > 1e-8) u2.normalize(); else u2.setZero();
  Vector v2 = rng.unit_vector(n);
  v2 -= v * v.dot(v2);
  if (v2.norm() > 1e-8) v2.normalize(); else v2.setZero();
  inst.b = u2 * rng.unit_vector(p).transpose();
  inst.c = rng.unit_vector(q) * v2.transpose();
  inst.row_norm = spectral_norm(hcat({inst.a, inst.b}));
  inst.col_norm = spectral_norm(vcat({inst.a, inst.c}));
  return inst;
}

QuadraticInstance gen_quadratic(Rng& rng, Index n, Index m) {
  QuadraticInstance inst;
  inst.n = n;
  inst.m = m;
  const Matrix r = -(rng.psd(m) + 0.2 * Matrix::Identity(m, m));
  const Matrix s = rng.gaussian(n, m);
  const Index g_rank = rng.uniform() < 0.3 && n > 1
                           ? rng.uniform_int(0, static_cast<int>(n) - 1)
                           : n;
  const Matrix g = rng.psd(n, g_rank);  // = Q - S R^{-1} S^T by design
  const Matrix q =
      symmetrize(g - s * Matrix((-r).llt().solve(s.transpose())));
  inst.p = block_grid({{q, s}, {s.transpose(), r}});
  inst.p = symmetrize(inst.p);

  if (rng.uniform() < 0.1) {
    inst.z = Vector::Zero(n);
    inst.w = Vector::Zero(m);
    return inst;
  }
  inst.z = rng.normal_vector(n);
  const Vector w_star = (-r).llt().solve(s.transpose() * inst.z);
  // Offset from the central solution keeps (z, w) on the feasible side:
  // d^T (-R) d <= z^T G z, scaled by tau^2 with tau in [0, 1].
  const double rho2 = inst.z.dot(g * inst.z);
  Vector d = Vector::Zero(m);
  if (m > 0 && rho2 > 0.0) {
    const Vector dir = rng.unit_vector(m);
    const double denom = dir.dot(-(r * dir));
    const double tau = rng.uniform() < 0.25 ? 1.0 : rng.uniform(0.0, 1.0);
    d = dir * tau * std::sqrt(std::max(0.0, rho2) / denom);
  }
  inst.w = w_star + d;
  return inst;
}

SLemmaInstance gen_slemma(Rng& rng, Index n, Index m, bool ensure_slater) {
  SLemmaInstance inst;
  inst.n = n;
  inst.m_dim = m;
  const Matrix n22 = -(rng.psd(m) + 0.2 * Matrix::Identity(m, m));
  const Matrix n12 = rng.gaussian(n, m);
  const Index g_rank = (!ensure_slater && rng.uniform() < 0.3 && n > 1)
                           ? rng.uniform_int(0, static_cast<int>(n) - 1)
                           : n;
  Matrix g = rng.psd(n, g_rank);
  if (ensure_slater) g += 0.1 * Matrix::Identity(n, n);
  const Matrix n11 =
      symmetrize(g - n12 * Matrix((-n22).llt().solve(n12.transpose())));
  inst.n_pencil =
      symmetrize(block_grid({{n11, n12}, {n12.transpose(), n22}}));

  switch (rng.uniform_int(0, 2)) {
    case 0: {  // planted feasible: M = beta N + PD
      const double beta = rng.uniform(0.0, 3.0);
      inst.m = symmetrize(beta * inst.n_pencil + rng.psd(n + m) +
                          0.3 * Matrix::Identity(n + m, n + m));
      break;
    }
    case 1:
      inst.m = rng.symmetric(n + m);
      break;
    default:
      inst.m = symmetrize(-rng.psd(n + m) -
                          0.3 * Matrix::Identity(n + m, n + m));
      break;
  }

  // Slater candidate: on ker-complement graph directions the constraint
  // value is y^T G y > 0 whenever G is positive definite.
  const Vector y = rng.unit_vector(n);
  Vector xbar(n + m);
  xbar.head(n) = y;
  // x2 = -N22^{-1} N12^T y = (-N22)^{-1} N12^T y
  xbar.tail(m) = (-n22).llt().solve(n12.transpose() * y);
  inst.xbar = xbar;
  inst.slater_value = xbar.dot(inst.n_pencil * xbar);
  return inst;
}

}  // namespace nspkit
