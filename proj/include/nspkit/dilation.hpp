// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nspkit/types.hpp"

namespace nspkit {

/// Norm-preserving completion data: find D with || [A B; C D] || <= 1.
/// A is m x n, B is m x p, C is q x n, D is q x p.
struct DilationProblem {
  Matrix a;
  Matrix b;
  Matrix c;
  Tolerances tol;

  DilationProblem(Matrix a_in, Matrix b_in, Matrix c_in, Tolerances tol_in = {});

  Index m() const { return a.rows(); }
  Index n() const { return a.cols(); }
  Index p() const { return b.cols(); }
  Index q() const { return c.rows(); }
};

/// The two contraction preconditions || [A B] || <= 1 and || [A; C] || <= 1.
struct DilationConditions {
  double row_norm = 0.0;
  double col_norm = 0.0;
  bool row_ok = false;
  bool col_ok = false;
  bool ok = false;
};

DilationConditions check_dilation_conditions(const DilationProblem& prob);

/// Completes the corner: returns D with || [A B; C D] || <= 1 (to
/// tolerance). Throws ConditionsViolated when the preconditions fail.
Matrix complete(const DilationProblem& prob);

/// Spectral norm of the dilated matrix for a candidate D.
double verify_dilation(const DilationProblem& prob, const Matrix& d);

}  // namespace nspkit
