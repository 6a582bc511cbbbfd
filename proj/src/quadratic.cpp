// SPDX-License-Identifier: Apache-2.0
#include "nspkit/quadratic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nspkit/errors.hpp"
#include "nspkit/linalg.hpp"
#include "nspkit/projection.hpp"

namespace nspkit {

namespace {

std::string describe(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

void check_partition_hypotheses(const SymMatrix& p, Index n, Index m,
                                const Tolerances& tol, const char* who) {
  if (n < 0 || m < 0 || p.dim() != n + m) {
    throw DimensionMismatch(std::string(who) +
                            ": partition sizes do not match the form");
  }
  const Matrix r = p.mat().bottomRightCorner(m, m);
  if (m > 0) {
    const auto neg = is_psd(SymMatrix(-r), tol);
    if (!neg.definite()) {
      throw HypothesisViolated(std::string(who) +
                               ": trailing block must be negative definite "
                               "(min eig of -R " +
                               describe(neg.min_eig) + ")");
    }
  }
  const Matrix q = p.mat().topLeftCorner(n, n);
  const Matrix s = p.mat().topRightCorner(n, m);
  // Q - S R^{-1} S^T = Q + S (-R)^{-1} S^T must be PSD.
  Matrix schur = q;
  if (m > 0 && n > 0) {
    schur += s * Matrix((-r).llt().solve(s.transpose()));
  }
  const auto sc = is_psd(SymMatrix(schur), tol);
  if (!sc.at_least_psd()) {
    throw HypothesisViolated(std::string(who) +
                             ": Schur complement must be positive "
                             "semidefinite (min eig " +
                             describe(sc.min_eig) + ")");
  }
}

}  // namespace

QuadraticForm::QuadraticForm(SymMatrix p, Index n, Index m, Tolerances tol)
    : p_(std::move(p)), n_(n), m_(m), tol_(tol) {
  check_partition_hypotheses(p_, n_, m_, tol_, "QuadraticForm");
}

SLemmaPair::SLemmaPair(SymMatrix m_mat, SymMatrix n_mat, Index n, Index m,
                       Tolerances tol)
    : m_(std::move(m_mat)), n_pencil_(std::move(n_mat)), n_(n), m_dim_(m),
      tol_(tol) {
  if (m_.dim() != n_ + m_dim_) {
    throw DimensionMismatch("SLemmaPair: M size does not match partition");
  }
  check_partition_hypotheses(n_pencil_, n_, m_dim_, tol_, "SLemmaPair");
}

Matrix interpolate(const QuadraticForm& form, const Vector& z,
                   const Vector& w) {
  const Tolerances& tol = form.tol();
  const Index n = form.n(), m = form.m();
  if (z.size() != n || w.size() != m) {
    throw DimensionMismatch("interpolate: data sizes do not match the form");
  }
  const Matrix q = form.q_block(), s = form.s_block(), r = form.r_block();

  // Solvability test: the form evaluated on the data must be nonnegative.
  const double value = z.dot(q * z) + 2.0 * z.dot(s * w) + w.dot(r * w);
  const double data_scale =
      std::max(1.0, spectral_norm(form.p().mat()) *
                        (z.squaredNorm() + w.squaredNorm()));
  if (value < -tol.residual * data_scale) {
    throw HypothesisViolated(
        "interpolate: data violates the nonnegativity condition (value " +
        describe(value) + ")");
  }

  const Matrix neg_r_inv =
      m > 0 ? Matrix((-r).llt().solve(Matrix::Identity(m, m))) : Matrix(0, 0);

  if (z.norm() <= tol.rank * std::max(1.0, w.norm())) {
    // Degenerate direction: any w here must be zero; the central choice
    // Delta = -R^{-1} S^T interpolates.
    return neg_r_inv * s.transpose();
  }

  // General case: compress along z and eliminate the residual block.
  const Matrix zp = z.transpose() / z.squaredNorm();  // z^+, 1 x n
  const Matrix wzp = w * zp;
  const Matrix sym_part = q + s * wzp + (s * wzp).transpose();
  const Matrix psi = block_grid(
      {{sym_part, wzp.transpose()}, {wzp, neg_r_inv}});
  const Matrix u_h = hcat({Matrix(s.transpose()), Matrix::Identity(m, m)});
  // Annihilator projector of z built from an orthonormal kernel basis:
  // I - z z^+ computed directly leaves roundoff where an exact zero is
  // needed (n = 1 makes it the zero map), which would poison the rank
  // decisions downstream and blow up the witness.
  const Matrix z_comp = kernel_basis(z.transpose(), tol);
  const Matrix proj = z_comp * z_comp.transpose();
  const Matrix v_h = hcat({proj, Matrix::Zero(n, m)});

  const ProjectionProblem prob(SymMatrix(psi), u_h, v_h, tol);
  const EliminationWitness wit = construct_witness(prob);
  const Matrix delta = wzp + wit.x * proj;

  const double interp_resid = (w - delta * z).norm();
  if (interp_resid > tol.residual * std::max(1.0, w.norm())) {
    throw NumericalBreakdown(
        "interpolate: returned map misses the data point (residual " +
        describe(interp_resid) + ")");
  }
  return delta;
}

namespace {

struct CurveEval {
  double min_eig = 0.0;
  double scale = 1.0;
};

CurveEval eval_pencil(const SymMatrix& m, const SymMatrix& n, double alpha) {
  const SymMatrix shifted(m.mat() - alpha * n.mat());
  if (shifted.dim() == 0) {
    return {std::numeric_limits<double>::infinity(), 1.0};
  }
  const Vector evals = sym_eigen(shifted).values;
  return {evals(0),
          std::max(1.0, std::max(std::abs(evals(0)),
                                 std::abs(evals(evals.size() - 1))))};
}

// Maximize the concave curve alpha |-> lambda_min(M - alpha N) over
// alpha >= 0 (or all of R when bidirectional) by geometric bracket growth
// followed by golden-section refinement.
MultiplierResult concave_search(const SymMatrix& m, const SymMatrix& n,
                                bool bidirectional, const Tolerances& tol) {
  MultiplierResult res;
  auto f = [&](double alpha) { return eval_pencil(m, n, alpha).min_eig; };

  const double cap = std::ldexp(1.0, 60) *
                     std::max(1.0, spectral_norm(m.mat())) /
                     std::max(1.0, spectral_norm(n.mat()));
  bool capped = false;

  double best_alpha = 0.0, best_f = f(0.0);
  double hi = 1.0;
  while (true) {
    if (hi >= cap) {
      hi = cap;
      if (f(hi) > best_f) capped = true;  // still rising at the cap
      break;
    }
    const double fh = f(hi);
    if (fh <= best_f) break;
    best_alpha = hi;
    best_f = fh;
    hi *= 2.0;
  }
  double lo = 0.0;
  if (bidirectional) {
    lo = -1.0;
    while (true) {
      if (lo <= -cap) {
        lo = -cap;
        if (f(lo) > best_f) capped = true;
        break;
      }
      const double fl = f(lo);
      if (fl <= best_f) break;
      best_alpha = lo;
      best_f = fl;
      lo *= 2.0;
    }
  }
  res.bracket_lo = lo;
  res.bracket_hi = hi;

  // Golden-section refinement; f is concave, hence unimodal on [lo, hi].
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double c = b - kInvPhi * (b - a);
  double d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 90 && (b - a) > 0.0; ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  double alpha_star = 0.5 * (a + b);
  double f_star = f(alpha_star);
  for (double cand : {best_alpha, 0.0}) {
    const double fcand = f(cand);
    if (fcand > f_star) {
      alpha_star = cand;
      f_star = fcand;
    }
  }

  const CurveEval at_best = eval_pencil(m, n, alpha_star);
  res.alpha = alpha_star;
  res.min_eig = at_best.min_eig;
  res.scale = at_best.scale;
  res.feasible = res.min_eig > tol.psd * res.scale;
  if (res.feasible) {
    res.status = MultiplierStatus::Feasible;
  } else {
    res.status = capped ? MultiplierStatus::InfeasibleAtCap
                        : MultiplierStatus::Infeasible;
  }
  return res;
}

}  // namespace

MultiplierResult matrix_s_lemma(const SLemmaPair& pair) {
  MultiplierResult res =
      concave_search(pair.m_mat(), pair.n_mat(), false, pair.tol());
  if (!res.feasible) {
    // When N <= 0 the constraint set collapses and alpha = 0 decides.
    const auto n_neg = is_psd(SymMatrix(-pair.n_mat().mat()), pair.tol());
    if (n_neg.at_least_psd()) {
      const CurveEval at0 = eval_pencil(pair.m_mat(), pair.n_mat(), 0.0);
      if (at0.min_eig > pair.tol().psd * at0.scale) {
        res.alpha = 0.0;
        res.min_eig = at0.min_eig;
        res.scale = at0.scale;
        res.feasible = true;
        res.status = MultiplierStatus::Feasible;
      }
    }
  }
  return res;
}

MultiplierResult scalar_s_lemma(const SymMatrix& m, const SymMatrix& n,
                                const Vector& xbar, const Tolerances& tol) {
  if (m.dim() != n.dim() || xbar.size() != n.dim()) {
    throw DimensionMismatch("scalar_s_lemma: dimensions do not agree");
  }
  const double slater = xbar.dot(n.mat() * xbar);
  const double scale =
      std::max(1.0, spectral_norm(n.mat()) * xbar.squaredNorm());
  if (slater <= tol.psd * scale) {
    throw SlaterViolated(
        "scalar_s_lemma: interior point has nonpositive constraint value " +
        describe(slater));
  }
  return concave_search(m, n, false, tol);
}

MultiplierResult finsler(const SymMatrix& m, const SymMatrix& n,
                         const Tolerances& tol) {
  if (m.dim() != n.dim()) {
    throw DimensionMismatch("finsler: dimensions do not agree");
  }
  return concave_search(m, n, true, tol);
}

}  // namespace nspkit
