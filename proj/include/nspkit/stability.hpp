// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <vector>

#include "nspkit/types.hpp"

namespace nspkit {

/// Discrete-time system x+ = A x.
struct LtiSystem {
  Matrix a;

  explicit LtiSystem(Matrix a_in);
  Index dim() const { return a.rows(); }
};

/// Marginal stability: spectral radius <= 1 and every eigenvalue on the
/// unit circle (at tolerance) is semisimple.
struct MarginalStabilityReport {
  bool marginally_stable = false;
  double spectral_radius = 0.0;
  std::vector<std::complex<double>> unstable;   // |lambda| > 1 + tol
  std::vector<std::complex<double>> defective;  // unit-circle, not semisimple
};

/// Non-strict Lyapunov certificate in either primal (P) or dual (S) form:
///   P form: [P  A^T X^T; X A  X + X^T - P] >= 0,  P = P^T > 0
///   S form: [S  A X;  X^T A^T  X + X^T - S] >= 0,  S = S^T > 0
struct StabilityCertificate {
  enum class Form { P, S };
  Form form = Form::P;
  SymMatrix gram;         // the positive definite P (or S)
  Matrix x;               // the nonsingular slack variable
  double lmi_min_eig = 0.0;
  double lyap_min_eig = 0.0;  // lambda_min of P - A^T P A (resp. S - A S A^T)
};

/// Re-verification outcome for a claimed certificate.
struct CertificateCheck {
  bool pass = false;
  double lmi_min_eig = 0.0;
  double lmi_scale = 1.0;
  double lyap_min_eig = 0.0;
  double gram_min_eig = 0.0;   // lambda_min of P (or S); must be > 0
  double shift_min_eig = 0.0;  // lambda_min of X + X^T - P (or - S)
  double x_sigma_ratio = 0.0;  // sigma_min(X) / sigma_max(X)
  bool x_nonsingular = false;
};

/// Which factor the slack variable multiplies in a synthesis change of
/// variables Z = K X (controller) or Z = X K (observer).
enum class GainSide { Controller, Observer };

/// Recovered gain together with the defining residual.
struct SynthesisExtraction {
  Matrix gain;
  double residual = 0.0;  // ||K X - Z|| resp. ||X K - Z||, spectral norm
};

/// Eigenvalue classification of A: radius and semisimplicity of the
/// unit-circle spectrum (geometric multiplicity from rank of A - lambda I).
MarginalStabilityReport is_marginally_stable(const LtiSystem& sys,
                                             const Tolerances& tol = {});

/// Builds P > 0 with P - A^T P A >= 0 for a marginally stable A via Schur
/// reordering, spectral decoupling, and a stable-part Stein solve.
/// Normalized so trace(P) = dim. Throws NotMarginallyStable otherwise.
SymMatrix construct_P(const LtiSystem& sys, const Tolerances& tol = {});

/// Full primal-form certificate: P, plus a nonsingular X making the
/// one-sided LMI hold (constructed, not assumed).
StabilityCertificate certificate_P_form(const LtiSystem& sys,
                                        const Tolerances& tol = {});

/// Dual-form certificate, built on A^T and transposed back.
StabilityCertificate certificate_S_form(const LtiSystem& sys,
                                        const Tolerances& tol = {});

/// Recomputes every side condition of a claimed certificate.
CertificateCheck verify_certificate(const LtiSystem& sys,
                                    const StabilityCertificate& cert,
                                    const Tolerances& tol = {});

/// Recovers K from Z and the slack X of a feasible synthesis LMI.
/// Controller: K = Z X^{-1}; observer: K = X^{-1} Z.
SynthesisExtraction extract_gain(const Matrix& x, const Matrix& z,
                                 GainSide side, const Tolerances& tol = {});

}  // namespace nspkit
