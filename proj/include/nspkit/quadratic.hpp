// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nspkit/types.hpp"

namespace nspkit {

/// Partitioned symmetric form P = [Q S; S^T R] on R^{n+m} with R < 0 and
/// Q - S R^{-1} S^T >= 0 (checked at construction).
class QuadraticForm {
 public:
  QuadraticForm(SymMatrix p, Index n, Index m, Tolerances tol = {});

  const SymMatrix& p() const { return p_; }
  Index n() const { return n_; }
  Index m() const { return m_; }
  const Tolerances& tol() const { return tol_; }

  Matrix q_block() const { return p_.mat().topLeftCorner(n_, n_); }
  Matrix s_block() const { return p_.mat().topRightCorner(n_, m_); }
  Matrix r_block() const { return p_.mat().bottomRightCorner(m_, m_); }

 private:
  SymMatrix p_;
  Index n_ = 0;
  Index m_ = 0;
  Tolerances tol_;
};

/// Pencil (M, N) on R^{n+m} for the one-constraint matrix multiplier
/// problem; N carries the same partition hypotheses as QuadraticForm.
class SLemmaPair {
 public:
  SLemmaPair(SymMatrix m_mat, SymMatrix n_mat, Index n, Index m,
             Tolerances tol = {});

  const SymMatrix& m_mat() const { return m_; }
  const SymMatrix& n_mat() const { return n_pencil_; }
  Index n() const { return n_; }
  Index m() const { return m_dim_; }
  const Tolerances& tol() const { return tol_; }

 private:
  SymMatrix m_;
  SymMatrix n_pencil_;
  Index n_ = 0;
  Index m_dim_ = 0;
  Tolerances tol_;
};

enum class MultiplierStatus { Feasible, Infeasible, InfeasibleAtCap };

/// Result of maximizing alpha |-> lambda_min(M - alpha N).
struct MultiplierResult {
  MultiplierStatus status = MultiplierStatus::Infeasible;
  bool feasible = false;
  double alpha = 0.0;    // maximizer found by the search
  double min_eig = 0.0;  // lambda_min(M - alpha N) at that alpha
  double scale = 1.0;    // max(1, |lambda|_max) there, threshold reference
  double bracket_lo = 0.0;  // final search bracket (audit hook)
  double bracket_hi = 0.0;
};

/// One-point matrix interpolation: Delta with w = Delta z and
/// [I; Delta]^T P [I; Delta] >= 0, which exists iff
/// z^T Q z + 2 z^T S w + w^T R w >= 0 (throws HypothesisViolated otherwise).
Matrix interpolate(const QuadraticForm& form, const Vector& z,
                   const Vector& w);

/// Multiplier search over alpha >= 0 for M - alpha N >= margin deciding the
/// implication between the quadratic constraints of the pair.
MultiplierResult matrix_s_lemma(const SLemmaPair& pair);

/// Classic scalar variant; requires a Slater point xbar with
/// xbar^T N xbar > 0 (throws SlaterViolated otherwise).
MultiplierResult scalar_s_lemma(const SymMatrix& m, const SymMatrix& n,
                                const Vector& xbar,
                                const Tolerances& tol = {});

/// Sign-free variant: alpha ranges over all of R.
MultiplierResult finsler(const SymMatrix& m, const SymMatrix& n,
                         const Tolerances& tol = {});

}  // namespace nspkit
