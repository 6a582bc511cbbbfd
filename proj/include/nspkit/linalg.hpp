// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "nspkit/types.hpp"

namespace nspkit {

enum class Definiteness { Indefinite, Semidefinite, Definite };

/// Verdict of a semidefiniteness test together with its eigenvalue witness.
struct DefinitenessReport {
  Definiteness verdict = Definiteness::Indefinite;
  double min_eig = 0.0;  // witness; +inf for 0x0 inputs
  double scale = 1.0;    // max(1, |lambda|_max), the reference for the slack

  bool at_least_psd() const { return verdict != Definiteness::Indefinite; }
  bool definite() const { return verdict == Definiteness::Definite; }
};

/// Sub-verdicts of the pseudoinverse Schur-complement test for
/// [Q S; S^T R] >= 0: R >= 0, Q - S R^+ S^T >= 0 and S(I - R R^+) = 0.
struct SchurComplementReport {
  DefinitenessReport corner;      // R >= 0
  DefinitenessReport complement;  // Q - S R^+ S^T >= 0 (R^{-1} when nonsingular)
  double range_residual = 0.0;    // ||S(I - R R^+)||_2
  bool range_ok = true;
  bool corner_nonsingular = false;
  bool psd = false;  // conjunction of the three sub-verdicts
};

/// Horizontal/vertical concatenation; empty blocks are skipped but must
/// still agree in the shared dimension.
Matrix hcat(const std::vector<Matrix>& parts);
Matrix vcat(const std::vector<Matrix>& parts);

/// Assembles a block matrix from a grid of blocks (rows of blocks).
Matrix block_grid(const std::vector<std::vector<Matrix>>& rows);

/// Orthonormal basis of ker A; cols(A) x 0 when the kernel is trivial.
/// scale_floor anchors the rank cutoff for matrices that are themselves
/// derived products: singular values below
/// tol.rank * max(sigma_max, scale_floor) * max(dims) count as zero, so a
/// product that vanishes up to roundoff is not mistaken for signal.
Matrix kernel_basis(const Matrix& a, const Tolerances& tol = {},
                    double scale_floor = 0.0);

/// Orthonormal basis of im A; rank decided by the singular-value cutoff
/// (scale_floor as in kernel_basis).
Matrix image_basis(const Matrix& a, const Tolerances& tol = {},
                   double scale_floor = 0.0);

/// Orthonormal basis of im B1 ∩ im B2. Both inputs must have equal row
/// counts and orthonormal columns.
Matrix subspace_intersection(const Matrix& b1, const Matrix& b2,
                             const Tolerances& tol = {});

/// Moore-Penrose pseudoinverse with rank cutoff tol.rank * sigma_max * max(dims).
Matrix pinv(const Matrix& a, const Tolerances& tol = {});

/// Largest singular value; 0 for empty matrices.
double spectral_norm(const Matrix& a);

/// Full orthonormal eigendecomposition of a symmetric matrix, values ascending.
EigenResult sym_eigen(const SymMatrix& m);

/// Classifies m as positive definite / semidefinite / indefinite with
/// relative slack tol.psd, returning lambda_min as witness.
DefinitenessReport is_psd(const SymMatrix& m, const Tolerances& tol = {});

/// Smallest eigenvalue of a symmetric matrix (+inf when empty).
double min_eigenvalue(const SymMatrix& m);

/// Symmetric positive semidefinite square root. Eigenvalues in
/// [-tol.psd * scale, 0) are clamped to zero; anything lower throws.
SymMatrix psd_sqrt(const SymMatrix& m, const Tolerances& tol = {});

/// Pseudoinverse Schur-complement test of [Q S; S^T R] >= 0, reporting the
/// three sub-verdicts and their conjunction.
SchurComplementReport schur_psd_check(const SymMatrix& q, const Matrix& s,
                                      const SymMatrix& r,
                                      const Tolerances& tol = {});

}  // namespace nspkit
