// SPDX-License-Identifier: Apache-2.0
#include "nspkit/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nspkit/errors.hpp"

namespace nspkit {

namespace {

// Orthonormal basis of ker U ∩ ker V, nested inside ker U = im k_u.
// The rank cutoff is anchored at ||V||: V restricted to an orthonormal
// basis cannot have genuine singular values born from roundoff alone.
Matrix kernel_intersection(const Matrix& v, const Matrix& k_u,
                           const Tolerances& tol) {
  return k_u * kernel_basis(v * k_u, tol, spectral_norm(v));
}

std::string describe(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

}  // namespace

ProjectionProblem::ProjectionProblem(SymMatrix q_in, Matrix u_in, Matrix v_in,
                                     Tolerances tol_in)
    : q(std::move(q_in)), u(std::move(u_in)), v(std::move(v_in)), tol(tol_in) {
  if (u.cols() != q.dim() || v.cols() != q.dim()) {
    throw DimensionMismatch(
        "ProjectionProblem: U and V must have cols(Q) columns");
  }
  if (!u.allFinite() || !v.allFinite()) {
    throw DimensionMismatch("ProjectionProblem: U/V entries must be finite");
  }
}

Index PartitionBasis::offset(int block) const {
  Index off = 0;
  for (int i = 1; i < block; ++i) off += widths[static_cast<size_t>(i - 1)];
  return off;
}

Matrix PartitionBasis::block(int block) const {
  return t.middleCols(offset(block), widths[static_cast<size_t>(block - 1)]);
}

Matrix PartitionBasis::blocks(std::initializer_list<int> which) const {
  std::vector<Matrix> parts;
  parts.reserve(which.size());
  for (int i : which) parts.push_back(block(i));
  return hcat(parts);
}

FeasibilityReport check_conditions(const ProjectionProblem& prob) {
  const Tolerances& tol = prob.tol;
  FeasibilityReport rep;

  const Matrix u_perp = kernel_basis(prob.u, tol);
  const Matrix v_perp = kernel_basis(prob.v, tol);
  {
    const auto r =
        is_psd(SymMatrix(u_perp.transpose() * prob.q.mat() * u_perp), tol);
    rep.kernel_cond_u = {r.at_least_psd(), r.min_eig};
  }
  {
    const auto r =
        is_psd(SymMatrix(v_perp.transpose() * prob.q.mat() * v_perp), tol);
    rep.kernel_cond_v = {r.at_least_psd(), r.min_eig};
  }

  // Coupling: the zero set of x^T Q x on ker U ∩ ker V must lie in ker Q.
  // With B an orthonormal intersection basis and Qt = B^T Q B >= 0 the zero
  // set is B * ker Qt, so the condition reads Q B ker(Qt) = 0.
  const Matrix b = kernel_intersection(prob.v, u_perp, tol);
  const Matrix zero_dirs =
      b * kernel_basis(SymMatrix(b.transpose() * prob.q.mat() * b).mat(), tol,
                       spectral_norm(prob.q.mat()));
  const Matrix q_on_zero = prob.q.mat() * zero_dirs;
  const double q_scale = std::max(1.0, spectral_norm(prob.q.mat()));
  rep.coupling_residual = spectral_norm(q_on_zero);
  rep.coupling_holds = rep.coupling_residual <= tol.residual * q_scale;
  if (!rep.coupling_holds) {
    Index worst = 0;
    q_on_zero.colwise().norm().maxCoeff(&worst);
    rep.coupling_violation = zero_dirs.col(worst);
  }

  const Matrix im_u = image_basis(prob.u.transpose(), tol);
  const Matrix im_v = image_basis(prob.v.transpose(), tol);
  rep.helmersson_holds = subspace_intersection(im_u, im_v, tol).cols() == 0;

  rep.feasible = rep.kernel_cond_u.holds && rep.kernel_cond_v.holds &&
                 rep.coupling_holds;
  return rep;
}

PartitionBasis build_partition_basis(const ProjectionProblem& prob) {
  const Tolerances& tol = prob.tol;
  const Index p = prob.p();

  const Matrix k_u = kernel_basis(prob.u, tol);
  const Matrix k_v = kernel_basis(prob.v, tol);
  const Matrix k_uv = kernel_intersection(prob.v, k_u, tol);

  // Split ker U ∩ ker V into the part killed by Q (T4) and a complement (T3).
  const double q_norm = spectral_norm(prob.q.mat());
  const Matrix z = kernel_basis(prob.q.mat() * k_uv, tol, q_norm);
  const Matrix t4 = k_uv * z;
  const Matrix t3 = k_uv * kernel_basis(z.transpose(), tol, 1.0);

  // Complements of ker U ∩ ker V inside ker U (T1) and ker V (T2); the
  // projections of orthonormal bases live on the unit scale, so the rank
  // cutoffs are anchored there.
  const Matrix p34 = k_uv * k_uv.transpose();
  const Matrix t1 = image_basis(k_u - p34 * k_u, tol, 1.0);
  const Matrix t2 = image_basis(k_v - p34 * k_v, tol, 1.0);

  const Matrix front = hcat({t1, t2, t3, t4});
  const Matrix t5 = kernel_basis(front.transpose(), tol, 1.0);

  PartitionBasis basis;
  basis.widths = {t1.cols(), t2.cols(), t3.cols(), t4.cols(), t5.cols()};
  basis.t = hcat({front, t5});
  if (basis.t.cols() != p) {
    throw NumericalBreakdown(
        "build_partition_basis: blocks do not span the full space (got " +
        describe(static_cast<double>(basis.t.cols())) + " of " +
        describe(static_cast<double>(p)) + " columns)");
  }
  return basis;
}

EliminationWitness construct_witness(const ProjectionProblem& prob) {
  const Tolerances& tol = prob.tol;
  const FeasibilityReport feas = check_conditions(prob);
  if (!feas.feasible) {
    std::string why = "construct_witness: infeasible problem (";
    if (!feas.kernel_cond_u.holds)
      why += " U-kernel min eig " + describe(feas.kernel_cond_u.min_eig);
    if (!feas.kernel_cond_v.holds)
      why += " V-kernel min eig " + describe(feas.kernel_cond_v.min_eig);
    if (!feas.coupling_holds)
      why += " coupling residual " + describe(feas.coupling_residual);
    throw InfeasibleProblem(why + " )");
  }

  PartitionBasis basis = build_partition_basis(prob);
  const auto [w1, w2, w3, w4, w5] = basis.widths;
  const Index p = prob.p();
  const double q_scale = std::max(1.0, spectral_norm(prob.q.mat()));

  Matrix wm = basis.t.transpose() * prob.q.mat() * basis.t;
  wm = 0.5 * (wm + wm.transpose()).eval();

  // The fourth block row/column vanishes by construction (im T4 ⊂ ker Q);
  // verify, then zero it exactly so downstream algebra sees the structure.
  const Index off4 = basis.offset(4);
  const double stray = spectral_norm(wm.block(off4, 0, w4, p));
  if (stray > tol.residual * q_scale) {
    throw NumericalBreakdown(
        "construct_witness: transformed matrix keeps mass on the Q-kernel "
        "block (norm " +
        describe(stray) + ")");
  }
  wm.block(off4, 0, w4, p).setZero();
  wm.block(0, off4, p, w4).setZero();

  auto blk = [&](int i, int j) {
    return Matrix(wm.block(basis.offset(i), basis.offset(j),
                           basis.widths[static_cast<size_t>(i - 1)],
                           basis.widths[static_cast<size_t>(j - 1)]));
  };
  const Matrix w11 = blk(1, 1), w12 = blk(1, 2), w13 = blk(1, 3),
               w15 = blk(1, 5), w22 = blk(2, 2), w23 = blk(2, 3),
               w25 = blk(2, 5), w33 = blk(3, 3), w35 = blk(3, 5),
               w55 = blk(5, 5);

  // W33 = T3^T Q T3 is positive definite on the chosen complement.
  Eigen::LLT<Matrix> w33_llt;
  if (w3 > 0) {
    const double w33_min = min_eigenvalue(SymMatrix(w33));
    w33_llt.compute(w33);
    if (w33_min <= 0.0 || w33_llt.info() != Eigen::Success) {
      throw NumericalBreakdown(
          "construct_witness: interior block of the transformed matrix is "
          "not positive definite (min eig " +
          describe(w33_min) + ")");
    }
  }
  auto inv33 = [&](const Matrix& rhs) -> Matrix {
    if (w3 == 0) return rhs;  // rhs has zero rows; nothing to solve
    return w33_llt.solve(rhs);
  };

  const Matrix k = -w12.transpose() + w23 * inv33(w13.transpose());
  const Matrix m_t = -w15 + w13 * inv33(w35);  // = M^T, w1 x w5
  const Matrix l = -w25 + w23 * inv33(w35);

  // Range condition for the final Schur step: Y2 must lie in im Y1.
  const Matrix y1 = block_grid({{w11, w12 + k.transpose(), w13},
                                {(w12 + k.transpose()).transpose(), w22, w23},
                                {w13.transpose(), w23.transpose(), w33}});
  const Matrix y2 = vcat({w15 + m_t, w25 + l, w35});
  const Matrix y1p = pinv(y1, tol);
  const Index y_dim = w1 + w2 + w3;
  const double range_resid = spectral_norm(
      y2.transpose() * (Matrix::Identity(y_dim, y_dim) - y1 * y1p));
  if (range_resid > tol.residual * std::max(1.0, spectral_norm(y2))) {
    throw NumericalBreakdown(
        "construct_witness: Schur range condition violated (residual " +
        describe(range_resid) + ")");
  }

  double alpha = 1.0;
  if (w5 > 0) {
    const SymMatrix gap(y2.transpose() * y1p * y2 - w55);
    const Vector evals = sym_eigen(gap).values;
    alpha = std::max(0.0, evals(evals.size() - 1)) / 2.0 + 1.0;
  }
  const Matrix n_blk = alpha * Matrix::Identity(w5, w5);

  // Undo the compression: X = [ (U T2)^T ; (U T5)^T ]^+ [K L; M N] [V T1  V T5]^+.
  const Matrix gamma = vcat({Matrix((prob.u * basis.block(2)).transpose()),
                             Matrix((prob.u * basis.block(5)).transpose())});
  const Matrix omega =
      hcat({prob.v * basis.block(1), prob.v * basis.block(5)});
  const Matrix klmn = block_grid({{k, l}, {m_t.transpose(), n_blk}});
  const Matrix x = pinv(gamma, tol) * klmn * pinv(omega, tol);

  const auto [resid_min, resid_scale] = verify_witness_scaled(prob, x);
  if (resid_min < -tol.residual * resid_scale) {
    throw NumericalBreakdown(
        "construct_witness: constructed solution fails verification "
        "(min eig " +
        describe(resid_min) + " at scale " + describe(resid_scale) + ")");
  }

  EliminationWitness wit;
  wit.x = x;
  wit.residual_min_eig = resid_min;
  wit.residual_scale = resid_scale;
  wit.blocks =
      TransformedForm{SymMatrix(wm), basis.widths, k, l, m_t.transpose(),
                      n_blk, alpha};
  wit.basis = std::move(basis);
  return wit;
}

double verify_witness(const ProjectionProblem& prob, const Matrix& x) {
  return verify_witness_scaled(prob, x).first;
}

std::pair<double, double> verify_witness_scaled(const ProjectionProblem& prob,
                                                const Matrix& x) {
  if (x.rows() != prob.m() || x.cols() != prob.n()) {
    throw DimensionMismatch("verify_witness: X must be m x n");
  }
  const Matrix cross = prob.u.transpose() * x * prob.v;
  const SymMatrix achieved(prob.q.mat() + cross + cross.transpose());
  if (achieved.dim() == 0) {
    return {std::numeric_limits<double>::infinity(), 1.0};
  }
  const Vector evals = sym_eigen(achieved).values;
  const double scale =
      std::max(1.0, std::max(std::abs(evals(0)),
                             std::abs(evals(evals.size() - 1))));
  return {evals(0), scale};
}

bool strict_check(const ProjectionProblem& prob) {
  const Tolerances& tol = prob.tol;
  const Matrix u_perp = kernel_basis(prob.u, tol);
  const Matrix v_perp = kernel_basis(prob.v, tol);
  const auto ru =
      is_psd(SymMatrix(u_perp.transpose() * prob.q.mat() * u_perp), tol);
  const auto rv =
      is_psd(SymMatrix(v_perp.transpose() * prob.q.mat() * v_perp), tol);
  return ru.definite() && rv.definite();
}

}  // namespace nspkit
