// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <initializer_list>
#include <utility>

#include "nspkit/linalg.hpp"
#include "nspkit/types.hpp"

namespace nspkit {

/// Feasibility problem for the non-strict elimination inequality
///   Q + U^T X V + V^T X^T U >= 0
/// in the unknown X, with Q symmetric p x p, U m x p and V n x p.
struct ProjectionProblem {
  SymMatrix q;
  Matrix u;
  Matrix v;
  Tolerances tol;

  ProjectionProblem(SymMatrix q_in, Matrix u_in, Matrix v_in,
                    Tolerances tol_in = {});

  Index p() const { return q.dim(); }
  Index m() const { return u.rows(); }
  Index n() const { return v.rows(); }
};

/// One projected-definiteness condition with its eigenvalue witness.
struct ConditionVerdict {
  bool holds = false;
  double min_eig = 0.0;
};

/// Outcome of the three feasibility conditions plus the image-intersection
/// diagnostic. feasible <=> both kernel conditions and the coupling
/// condition hold; the intersection diagnostic is informational only.
struct FeasibilityReport {
  ConditionVerdict kernel_cond_u;   // lambda_min of U_perp^T Q U_perp
  ConditionVerdict kernel_cond_v;   // lambda_min of V_perp^T Q V_perp
  bool coupling_holds = false;      // ker U ∩ ker V ∩ {x^T Q x = 0} ⊂ ker Q
  double coupling_residual = 0.0;   // ||Q B K||_2 driving that verdict
  Vector coupling_violation;        // offending direction when violated (else empty)
  bool helmersson_holds = false;    // im U^T ∩ im V^T = {0}
  bool feasible = false;
};

/// Nonsingular change of basis T = [T1 T2 T3 T4 T5] adapted to the kernels:
///   im [T1 T3 T4] = ker U,   im [T2 T3 T4] = ker V,
///   im [T3 T4]    = ker U ∩ ker V,   im T4 = ker U ∩ ker V ∩ ker Q.
/// Each block has orthonormal columns; T5 is orthonormal to all others.
struct PartitionBasis {
  Matrix t;
  std::array<Index, 5> widths{};

  Index offset(int block) const;        // column offset of block 1..5
  Matrix block(int block) const;        // T_i
  Matrix blocks(std::initializer_list<int> which) const;  // [T_i T_j ...]
};

/// Congruence-transformed data W = T^T Q T together with the constructed
/// correction blocks K, L, M, N of the transformed inequality.
struct TransformedForm {
  SymMatrix w;
  std::array<Index, 5> widths{};
  Matrix k;  // fixes the (1,2) coupling of the transformed inequality
  Matrix l;  // (2,5) block correction
  Matrix m;  // (1,5) block correction (stored untransposed, w5 x w1)
  Matrix n;  // (5,5) block correction, alpha * I
  double alpha = 0.0;
};

/// Constructed solution X together with the diagnostics of its build.
struct EliminationWitness {
  Matrix x;                     // m x n
  double residual_min_eig = 0;  // lambda_min of Q + U^T X V + V^T X^T U
  double residual_scale = 1;    // max(1, |lambda|_max of the achieved matrix)
  PartitionBasis basis;
  TransformedForm blocks;
};

/// Evaluates the three feasibility conditions of the non-strict
/// elimination inequality, plus the image-intersection diagnostic.
FeasibilityReport check_conditions(const ProjectionProblem& prob);

/// Builds the kernel-adapted partition basis. Independent of feasibility.
PartitionBasis build_partition_basis(const ProjectionProblem& prob);

/// Constructs X with Q + U^T X V + V^T X^T U >= 0 (to tolerance).
/// Throws InfeasibleProblem when check_conditions rejects the problem and
/// NumericalBreakdown when the constructive path degenerates.
EliminationWitness construct_witness(const ProjectionProblem& prob);

/// lambda_min of Q + U^T X V + V^T X^T U for a candidate X.
double verify_witness(const ProjectionProblem& prob, const Matrix& x);

/// As verify_witness but also reporting the scale max(1, |lambda|_max).
std::pair<double, double> verify_witness_scaled(const ProjectionProblem& prob,
                                                const Matrix& x);

/// Strict-inequality feasibility: both projected blocks positive definite.
bool strict_check(const ProjectionProblem& prob);

}  // namespace nspkit
