// SPDX-License-Identifier: Apache-2.0
#include "nspkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nspkit {

namespace {

Index svd_rank(const Eigen::JacobiSVD<Matrix>& svd, Index rows, Index cols,
               const Tolerances& tol, double scale_floor = 0.0) {
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  const double cutoff = tol.rank * std::max(sv(0), scale_floor) *
                        static_cast<double>(std::max(rows, cols));
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return r;
}

}  // namespace

Matrix hcat(const std::vector<Matrix>& parts) {
  Index rows = 0, cols = 0;
  for (const auto& p : parts) {
    if (p.cols() > 0 || p.rows() > 0) {
      if (cols > 0 || rows > 0) {
        if (p.rows() != rows) throw DimensionMismatch("hcat: row counts differ");
      } else {
        rows = p.rows();
      }
    }
    cols += p.cols();
  }
  Matrix out(rows, cols);
  Index at = 0;
  for (const auto& p : parts) {
    if (p.cols() > 0) out.middleCols(at, p.cols()) = p;
    at += p.cols();
  }
  return out;
}

Matrix vcat(const std::vector<Matrix>& parts) {
  std::vector<Matrix> t;
  t.reserve(parts.size());
  for (const auto& p : parts) t.push_back(p.transpose());
  return hcat(t).transpose();
}

Matrix block_grid(const std::vector<std::vector<Matrix>>& rows) {
  std::vector<Matrix> strips;
  strips.reserve(rows.size());
  for (const auto& row : rows) strips.push_back(hcat(row));
  return vcat(strips);
}

Matrix kernel_basis(const Matrix& a, const Tolerances& tol,
                    double scale_floor) {
  if (a.cols() == 0) return Matrix(0, 0);
  if (a.rows() == 0) return Matrix::Identity(a.cols(), a.cols());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullV);
  const Index r = svd_rank(svd, a.rows(), a.cols(), tol, scale_floor);
  return svd.matrixV().rightCols(a.cols() - r);
}

Matrix image_basis(const Matrix& a, const Tolerances& tol,
                   double scale_floor) {
  if (a.rows() == 0) return Matrix(0, 0);
  if (a.cols() == 0) return Matrix(a.rows(), 0);
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  const Index r = svd_rank(svd, a.rows(), a.cols(), tol, scale_floor);
  return svd.matrixU().leftCols(r);
}

Matrix subspace_intersection(const Matrix& b1, const Matrix& b2,
                             const Tolerances& tol) {
  if (b1.rows() != b2.rows()) {
    throw DimensionMismatch("subspace_intersection: row counts differ");
  }
  if (b1.cols() == 0 || b2.cols() == 0) return Matrix(b1.rows(), 0);
  // x = B1 a = B2 b  <=>  [B1 -B2] (a, b) = 0
  Matrix stacked(b1.rows(), b1.cols() + b2.cols());
  stacked << b1, -b2;
  const Matrix coeff = kernel_basis(stacked, tol);
  return image_basis(b1 * coeff.topRows(b1.cols()), tol);
}

Matrix pinv(const Matrix& a, const Tolerances& tol) {
  if (a.rows() == 0 || a.cols() == 0) return Matrix(a.cols(), a.rows());
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double cutoff =
      tol.rank * sv(0) * static_cast<double>(std::max(a.rows(), a.cols()));
  Vector inv = Vector::Zero(sv.size());
  for (Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
  }
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

double spectral_norm(const Matrix& a) {
  if (a.rows() == 0 || a.cols() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(a);
  return svd.singularValues()(0);
}

EigenResult sym_eigen(const SymMatrix& m) {
  if (m.dim() == 0) return {Vector(0), Matrix(0, 0)};
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.mat());
  if (es.info() != Eigen::Success) {
    throw NumericalBreakdown("sym_eigen: eigensolver did not converge");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

DefinitenessReport is_psd(const SymMatrix& m, const Tolerances& tol) {
  if (m.dim() == 0) {
    return {Definiteness::Definite, std::numeric_limits<double>::infinity(), 1.0};
  }
  const EigenResult eig = sym_eigen(m);
  const double lo = eig.values(0);
  const double hi = eig.values(eig.values.size() - 1);
  const double scale = std::max(1.0, std::max(std::abs(lo), std::abs(hi)));
  DefinitenessReport rep;
  rep.min_eig = lo;
  rep.scale = scale;
  if (lo > tol.psd * scale) {
    rep.verdict = Definiteness::Definite;
  } else if (lo >= -tol.psd * scale) {
    rep.verdict = Definiteness::Semidefinite;
  } else {
    rep.verdict = Definiteness::Indefinite;
  }
  return rep;
}

double min_eigenvalue(const SymMatrix& m) {
  if (m.dim() == 0) return std::numeric_limits<double>::infinity();
  return sym_eigen(m).values(0);
}

SymMatrix psd_sqrt(const SymMatrix& m, const Tolerances& tol) {
  if (m.dim() == 0) return SymMatrix();
  const EigenResult eig = sym_eigen(m);
  const double scale =
      std::max(1.0, eig.values.cwiseAbs().maxCoeff());
  if (eig.values(0) < -tol.psd * scale) {
    throw IndefiniteInput("psd_sqrt: min eigenvalue " +
                          std::to_string(eig.values(0)));
  }
  Vector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  Matrix r = eig.vectors * roots.asDiagonal() * eig.vectors.transpose();
  return SymMatrix(r);
}

SchurComplementReport schur_psd_check(const SymMatrix& q, const Matrix& s,
                                      const SymMatrix& r,
                                      const Tolerances& tol) {
  if (s.rows() != q.dim() || s.cols() != r.dim()) {
    throw DimensionMismatch("schur_psd_check: S must be dim(Q) x dim(R)");
  }
  SchurComplementReport rep;
  rep.corner = is_psd(r, tol);

  const Index n = r.dim();
  Matrix r_pinv;
  if (n == 0) {
    rep.corner_nonsingular = false;
    r_pinv = Matrix(0, 0);
  } else {
    const EigenResult eig = sym_eigen(r);
    const double cutoff = tol.rank * eig.values.cwiseAbs().maxCoeff() *
                          static_cast<double>(n);
    rep.corner_nonsingular = eig.values.cwiseAbs().minCoeff() > cutoff;
    if (rep.corner_nonsingular) {
      r_pinv = r.mat().lu().solve(Matrix::Identity(n, n));
    } else {
      r_pinv = pinv(r.mat(), tol);
    }
  }

  // The complement is symmetric in exact arithmetic but the computed
  // R^{-1} (LU) / R^+ (SVD) are not; near the rank cutoff the product's
  // asymmetry can exceed the SymMatrix gate, so symmetrize deliberately.
  Matrix comp = q.mat() - s * r_pinv * s.transpose();
  comp = 0.5 * (comp + comp.transpose()).eval();
  rep.complement = is_psd(SymMatrix(comp), tol);

  if (rep.corner_nonsingular || n == 0) {
    rep.range_residual = 0.0;  // R R^+ = I holds exactly
  } else {
    rep.range_residual =
        spectral_norm(s * (Matrix::Identity(n, n) - r.mat() * r_pinv));
  }
  rep.range_ok =
      rep.range_residual <= tol.residual * std::max(1.0, spectral_norm(s));

  rep.psd = rep.corner.at_least_psd() && rep.complement.at_least_psd() &&
            rep.range_ok;
  return rep;
}

}  // namespace nspkit
