// SPDX-License-Identifier: Apache-2.0
#include "nspkit/dilation.hpp"

#include <algorithm>
#include <sstream>

#include "nspkit/errors.hpp"
#include "nspkit/linalg.hpp"
#include "nspkit/projection.hpp"

namespace nspkit {

DilationProblem::DilationProblem(Matrix a_in, Matrix b_in, Matrix c_in,
                                 Tolerances tol_in)
    : a(std::move(a_in)), b(std::move(b_in)), c(std::move(c_in)), tol(tol_in) {
  if (b.rows() != a.rows() || c.cols() != a.cols()) {
    throw DimensionMismatch(
        "DilationProblem: B must share rows with A, C must share cols");
  }
  if (!a.allFinite() || !b.allFinite() || !c.allFinite()) {
    throw DimensionMismatch("DilationProblem: entries must be finite");
  }
}

DilationConditions check_dilation_conditions(const DilationProblem& prob) {
  DilationConditions cond;
  cond.row_norm = spectral_norm(hcat({prob.a, prob.b}));
  cond.col_norm = spectral_norm(vcat({prob.a, prob.c}));
  const double slack = prob.tol.residual;
  cond.row_ok = cond.row_norm <= 1.0 + slack;
  cond.col_ok = cond.col_norm <= 1.0 + slack;
  cond.ok = cond.row_ok && cond.col_ok;
  return cond;
}

Matrix complete(const DilationProblem& prob) {
  const DilationConditions cond = check_dilation_conditions(prob);
  if (!cond.ok) {
    std::ostringstream os;
    os.precision(6);
    os << "complete: contraction preconditions fail (row norm "
       << cond.row_norm << ", col norm " << cond.col_norm << ")";
    throw ConditionsViolated(os.str());
  }
  const Index m = prob.m(), n = prob.n(), p = prob.p(), q = prob.q();
  if (p == 0 || q == 0) return Matrix(q, p);

  // Contractiveness of the dilated matrix is the elimination inequality on
  // the Gram form of [A B; C D] with D as the free corner.
  auto zero = [](Index r, Index c2) { return Matrix::Zero(r, c2); };
  const Matrix eye_m = Matrix::Identity(m, m), eye_q = Matrix::Identity(q, q),
               eye_n = Matrix::Identity(n, n), eye_p = Matrix::Identity(p, p);
  const Matrix q_big = block_grid({
      {eye_m, zero(m, q), prob.a, prob.b},
      {zero(q, m), eye_q, prob.c, zero(q, p)},
      {prob.a.transpose(), prob.c.transpose(), eye_n, zero(n, p)},
      {prob.b.transpose(), zero(p, q), zero(p, n), eye_p},
  });
  const Matrix u_big =
      hcat({zero(q, m), eye_q, zero(q, n), zero(q, p)});
  const Matrix v_big =
      hcat({zero(p, m), zero(p, q), zero(p, n), eye_p});

  const ProjectionProblem elim(SymMatrix(q_big), u_big, v_big, prob.tol);
  const EliminationWitness wit = construct_witness(elim);
  const Matrix d = wit.x;

  const double achieved = verify_dilation(prob, d);
  if (achieved > 1.0 + prob.tol.residual) {
    std::ostringstream os;
    os.precision(10);
    os << "complete: dilated norm " << achieved << " exceeds 1";
    throw NumericalBreakdown(os.str());
  }
  return d;
}

double verify_dilation(const DilationProblem& prob, const Matrix& d) {
  if (d.rows() != prob.q() || d.cols() != prob.p()) {
    throw DimensionMismatch("verify_dilation: D must be q x p");
  }
  return spectral_norm(block_grid({{prob.a, prob.b}, {prob.c, d}}));
}

}  // namespace nspkit
