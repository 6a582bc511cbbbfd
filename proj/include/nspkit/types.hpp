// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

#include "nspkit/errors.hpp"

namespace nspkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Relative tolerance policy shared by all rank / definiteness decisions.
struct Tolerances {
  double rank = 1e-10;      // singular-value cutoff, relative to sigma_max
  double psd = 1e-9;        // eigenvalue slack for (semi)definiteness verdicts
  double sym = 1e-12;       // admissible relative asymmetry of symmetric inputs
  double residual = 1e-8;   // slack when re-verifying constructed witnesses

  static Tolerances defaults() { return {}; }
  static Tolerances strict() { return {1e-12, 1e-11, 1e-13, 1e-10}; }
  static Tolerances loose() { return {1e-8, 1e-7, 1e-10, 1e-6}; }
};

/// Square matrix stored canonically symmetrized as (M + M^T)/2.
///
/// Construction rejects matrices whose asymmetry exceeds
/// sym_tol * (1 + max|M_ij|); below that it is treated as roundoff
/// (file round-trips and congruence products introduce last-bit noise).
class SymMatrix {
 public:
  SymMatrix() : m_(0, 0) {}

  explicit SymMatrix(const Matrix& m, double sym_tol = Tolerances{}.sym) {
    if (m.rows() != m.cols()) {
      throw DimensionMismatch("SymMatrix: matrix is " + std::to_string(m.rows()) +
                              "x" + std::to_string(m.cols()));
    }
    if (m.size() > 0) {
      const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
      const double scale = 1.0 + m.cwiseAbs().maxCoeff();
      if (asym > sym_tol * scale) {
        throw IndefiniteInput("SymMatrix: asymmetry " + std::to_string(asym) +
                              " exceeds tolerance");
      }
    }
    m_ = 0.5 * (m + m.transpose());
  }

  Index dim() const { return m_.rows(); }
  const Matrix& mat() const { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

 private:
  Matrix m_;
};

/// Ascending eigenvalues with matching orthonormal eigenvector columns.
struct EigenResult {
  Vector values;
  Matrix vectors;
};

}  // namespace nspkit
