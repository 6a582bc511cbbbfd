// SPDX-License-Identifier: Apache-2.0
#include "nspkit/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "nspkit/errors.hpp"
#include "nspkit/linalg.hpp"
#include "nspkit/projection.hpp"

namespace nspkit {

namespace {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Complex = std::complex<double>;

// Relative gap below which two eigenvalues are treated as one cluster.
constexpr double kClusterGap = 1e-6;

std::vector<std::vector<Index>> cluster_eigenvalues(const CVector& vals) {
  std::vector<std::vector<Index>> clusters;
  std::vector<bool> used(static_cast<size_t>(vals.size()), false);
  for (Index i = 0; i < vals.size(); ++i) {
    if (used[static_cast<size_t>(i)]) continue;
    std::vector<Index> group{i};
    used[static_cast<size_t>(i)] = true;
    // Grow transitively so near-chains merge into one cluster.
    for (size_t at = 0; at < group.size(); ++at) {
      const Complex anchor = vals(group[at]);
      for (Index j = 0; j < vals.size(); ++j) {
        if (used[static_cast<size_t>(j)]) continue;
        if (std::abs(vals(j) - anchor) <=
            kClusterGap * std::max(1.0, std::abs(anchor))) {
          group.push_back(j);
          used[static_cast<size_t>(j)] = true;
        }
      }
    }
    clusters.push_back(std::move(group));
  }
  return clusters;
}

Index complex_rank(const CMatrix& a, const Tolerances& tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(a);
  const auto& sv = svd.singularValues();
  const double cutoff = tol.rank * sv(0) *
                        static_cast<double>(std::max(a.rows(), a.cols()));
  Index r = 0;
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return r;
}

// Unitary 2x2 whose first column is v/||v||.
Eigen::Matrix2cd givens_from(const Complex& v0, const Complex& v1) {
  Eigen::Matrix2cd g;
  const double nrm = std::sqrt(std::norm(v0) + std::norm(v1));
  if (nrm == 0.0) {
    g.setIdentity();
    return g;
  }
  g << v0 / nrm, -std::conj(v1) / nrm, v1 / nrm, std::conj(v0) / nrm;
  return g;
}

// Sylvester solve T11 Y - Y T22 = T12 by vectorization (sizes are tiny).
CMatrix solve_sylvester(const CMatrix& t11, const CMatrix& t22,
                        const CMatrix& t12) {
  const Index k = t11.rows(), s = t22.rows();
  if (k == 0 || s == 0) return CMatrix::Zero(k, s);
  CMatrix op = CMatrix::Zero(k * s, k * s);
  for (Index j = 0; j < s; ++j) {
    op.block(j * k, j * k, k, k) += t11;
    for (Index j2 = 0; j2 < s; ++j2) {
      op.block(j * k, j2 * k, k, k) -=
          t22(j2, j) * CMatrix::Identity(k, k);
    }
  }
  CVector rhs(k * s);
  for (Index j = 0; j < s; ++j) rhs.segment(j * k, k) = t12.col(j);
  Eigen::PartialPivLU<CMatrix> lu(op);
  const CVector y = lu.solve(rhs);
  CMatrix out(k, s);
  for (Index j = 0; j < s; ++j) out.col(j) = y.segment(j * k, k);
  return out;
}

// Stein solve P - T^H P T = I for the Schur-stable block.
CMatrix solve_stein(const CMatrix& t) {
  const Index s = t.rows();
  if (s == 0) return CMatrix(0, 0);
  CMatrix op = CMatrix::Identity(s * s, s * s);
  const CMatrix th = t.adjoint();
  // vec(T^H P T) = (T^T kron T^H) vec(P)
  for (Index j = 0; j < s; ++j) {
    for (Index j2 = 0; j2 < s; ++j2) {
      op.block(j * s, j2 * s, s, s) -= t(j2, j) * th;
    }
  }
  CVector rhs(s * s);
  const CMatrix eye = CMatrix::Identity(s, s);
  for (Index j = 0; j < s; ++j) rhs.segment(j * s, s) = eye.col(j);
  const CVector p = Eigen::PartialPivLU<CMatrix>(op).solve(rhs);
  CMatrix out(s, s);
  for (Index j = 0; j < s; ++j) out.col(j) = p.segment(j * s, s);
  return CMatrix(0.5 * (out + out.adjoint()));
}

std::string describe(double value) {
  std::ostringstream os;
  os.precision(6);
  os << value;
  return os.str();
}

}  // namespace

LtiSystem::LtiSystem(Matrix a_in) : a(std::move(a_in)) {
  if (a.rows() != a.cols()) {
    throw DimensionMismatch("LtiSystem: A must be square");
  }
  if (!a.allFinite()) {
    throw DimensionMismatch("LtiSystem: A entries must be finite");
  }
}

MarginalStabilityReport is_marginally_stable(const LtiSystem& sys,
                                             const Tolerances& tol) {
  MarginalStabilityReport rep;
  const Index n = sys.dim();
  if (n == 0) {
    rep.marginally_stable = true;
    return rep;
  }
  Eigen::EigenSolver<Matrix> es(sys.a);
  if (es.info() != Eigen::Success) {
    throw NumericalBreakdown("is_marginally_stable: eigensolver failed");
  }
  const CVector vals = es.eigenvalues();
  for (Index i = 0; i < n; ++i) {
    rep.spectral_radius = std::max(rep.spectral_radius, std::abs(vals(i)));
  }
  const double band = tol.psd * std::max(1.0, rep.spectral_radius);

  for (Index i = 0; i < n; ++i) {
    if (std::abs(vals(i)) > 1.0 + band) rep.unstable.push_back(vals(i));
  }

  const CMatrix ac = sys.a.cast<Complex>();
  for (const auto& cluster : cluster_eigenvalues(vals)) {
    Complex mean = 0.0;
    for (Index i : cluster) mean += vals(i);
    mean /= static_cast<double>(cluster.size());
    if (std::abs(mean) < 1.0 - band) continue;  // interior: no constraint
    const Index geo =
        n - complex_rank(ac - mean * CMatrix::Identity(n, n), tol);
    if (geo < static_cast<Index>(cluster.size())) {
      rep.defective.push_back(mean);
    }
  }

  rep.marginally_stable = rep.unstable.empty() && rep.defective.empty();
  return rep;
}

SymMatrix construct_P(const LtiSystem& sys, const Tolerances& tol) {
  const Index n = sys.dim();
  if (n == 0) return SymMatrix(Matrix(0, 0));

  const MarginalStabilityReport rep = is_marginally_stable(sys, tol);
  if (!rep.marginally_stable) {
    throw NotMarginallyStable(
        "construct_P: A is not marginally stable (radius " +
        describe(rep.spectral_radius) + ", " +
        std::to_string(rep.defective.size()) + " defective unit eigenvalues)");
  }
  const double band = tol.psd * std::max(1.0, rep.spectral_radius);

  Eigen::ComplexSchur<Matrix> schur(sys.a);
  if (schur.info() != Eigen::Success) {
    throw NumericalBreakdown("construct_P: Schur decomposition failed");
  }
  CMatrix t = schur.matrixT();
  CMatrix z = schur.matrixU();

  // Bubble unit-circle eigenvalues to the leading diagonal positions.
  auto is_unit = [&](Index i) { return std::abs(t(i, i)) >= 1.0 - band; };
  bool moved = true;
  while (moved) {
    moved = false;
    for (Index i = 0; i + 1 < n; ++i) {
      if (is_unit(i) || !is_unit(i + 1)) continue;
      // Swap diagonal entries i, i+1 with a unitary similarity that keeps T
      // triangular: rotate onto the eigenvector (b, c - a) of the trailing
      // eigenvalue of the 2x2 block [[a, b], [0, c]].
      const Complex a = t(i, i), b = t(i, i + 1), c = t(i + 1, i + 1);
      const Eigen::Matrix2cd g = givens_from(b, c - a);
      t.middleRows(i, 2) = (g.adjoint() * t.middleRows(i, 2)).eval();
      t.middleCols(i, 2) = (t.middleCols(i, 2) * g).eval();
      z.middleCols(i, 2) = (z.middleCols(i, 2) * g).eval();
      t(i + 1, i) = 0.0;
      moved = true;
    }
  }

  Index k = 0;
  while (k < n && is_unit(k)) ++k;

  const CMatrix t11 = t.topLeftCorner(k, k);
  const CMatrix t12 = t.topRightCorner(k, n - k);
  const CMatrix t22 = t.bottomRightCorner(n - k, n - k);

  // Decouple: with Y solving T11 Y - Y T22 = -T12 the columns of
  // S = [Z1, Z1 Y + Z2] split the space into the unit and stable parts
  // (A (Z1 Y + Z2) = Z1 (T11 Y + T12) + Z2 T22 = (Z1 Y + Z2) T22).
  const CMatrix y = solve_sylvester(t11, t22, CMatrix(-t12));
  CMatrix s_basis(n, n);
  if (k > 0) s_basis.leftCols(k) = z.leftCols(k);
  if (n - k > 0) {
    s_basis.rightCols(n - k) = z.leftCols(k) * y + z.rightCols(n - k);
  }

  // Unit part: P1 = E^{-H} E^{-1} from a basis E of eigenvectors of T11.
  CMatrix p1(k, k);
  if (k > 0) {
    CMatrix e(k, k);
    Index filled = 0;
    CVector diag = t11.diagonal();
    for (const auto& cluster : cluster_eigenvalues(diag)) {
      Complex mean = 0.0;
      for (Index i : cluster) mean += diag(i);
      mean /= static_cast<double>(cluster.size());
      const CMatrix shifted = t11 - mean * CMatrix::Identity(k, k);
      Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
      const Index mult = static_cast<Index>(cluster.size());
      e.middleCols(filled, mult) = svd.matrixV().rightCols(mult);
      filled += mult;
    }
    if (filled != k) {
      throw NumericalBreakdown("construct_P: eigenvector basis incomplete");
    }
    Eigen::JacobiSVD<CMatrix> esvd(e);
    const auto& sv = esvd.singularValues();
    if (sv(sv.size() - 1) <=
        tol.rank * sv(0) * static_cast<double>(k)) {
      throw NumericalBreakdown(
          "construct_P: unit-circle eigenvector basis is numerically "
          "singular; the unit spectrum is too close to defective");
    }
    const CMatrix e_inv = Eigen::PartialPivLU<CMatrix>(e).inverse();
    p1 = e_inv.adjoint() * e_inv;
  }

  // Stable part: P2 - T22^H P2 T22 = I (unique, positive definite).
  const CMatrix p2 = solve_stein(t22);

  CMatrix p_tilde = CMatrix::Zero(n, n);
  if (k > 0) p_tilde.topLeftCorner(k, k) = p1;
  if (n - k > 0) p_tilde.bottomRightCorner(n - k, n - k) = p2;

  const CMatrix s_inv = Eigen::PartialPivLU<CMatrix>(s_basis).inverse();
  const CMatrix pc = s_inv.adjoint() * p_tilde * s_inv;
  Matrix p_real = pc.real();
  p_real = 0.5 * (p_real + p_real.transpose()).eval();
  const double tr = p_real.trace();
  if (!(tr > 0.0)) {
    throw NumericalBreakdown("construct_P: constructed P has nonpositive trace");
  }
  p_real *= static_cast<double>(n) / tr;

  const SymMatrix p(p_real);
  const double lyap_min =
      min_eigenvalue(SymMatrix(p.mat() - sys.a.transpose() * p.mat() * sys.a));
  const double p_min = min_eigenvalue(p);
  const double scale = std::max(1.0, spectral_norm(p.mat()));
  if (p_min <= tol.psd * scale || lyap_min < -tol.residual * scale) {
    throw NumericalBreakdown(
        "construct_P: Lyapunov postcondition failed (P min eig " +
        describe(p_min) + ", decrement min eig " + describe(lyap_min) + ")");
  }
  return p;
}

namespace {

StabilityCertificate certificate_impl(const LtiSystem& sys,
                                      StabilityCertificate::Form form,
                                      const Tolerances& tol) {
  const Index n = sys.dim();
  const Matrix a_used =
      form == StabilityCertificate::Form::P ? sys.a : Matrix(sys.a.transpose());
  const SymMatrix gram = construct_P(LtiSystem(a_used), tol);

  // Feasibility of the one-sided LMI is an elimination problem with
  // Q = [P 0; 0 -P], U = [0 I], V = [A I] in the transformed variable.
  const Matrix q_big = block_grid(
      {{gram.mat(), Matrix::Zero(n, n)}, {Matrix::Zero(n, n), -gram.mat()}});
  const Matrix u_big = hcat({Matrix::Zero(n, n), Matrix::Identity(n, n)});
  const Matrix v_big = hcat({a_used, Matrix::Identity(n, n)});
  const ProjectionProblem prob(SymMatrix(q_big), u_big, v_big, tol);
  const EliminationWitness wit = construct_witness(prob);

  StabilityCertificate cert;
  cert.form = form;
  cert.gram = gram;
  cert.x = form == StabilityCertificate::Form::P ? wit.x
                                                 : Matrix(wit.x.transpose());
  cert.lmi_min_eig = wit.residual_min_eig;
  cert.lyap_min_eig = min_eigenvalue(
      SymMatrix(gram.mat() - a_used.transpose() * gram.mat() * a_used));

  if (n > 0) {
    Eigen::JacobiSVD<Matrix> svd(cert.x);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= tol.rank * sv(0)) {
      throw NumericalBreakdown(
          "stability certificate: slack variable came out numerically "
          "singular (sigma ratio " +
          describe(sv(sv.size() - 1) / sv(0)) + ")");
    }
  }
  return cert;
}

}  // namespace

StabilityCertificate certificate_P_form(const LtiSystem& sys,
                                        const Tolerances& tol) {
  return certificate_impl(sys, StabilityCertificate::Form::P, tol);
}

StabilityCertificate certificate_S_form(const LtiSystem& sys,
                                        const Tolerances& tol) {
  return certificate_impl(sys, StabilityCertificate::Form::S, tol);
}

CertificateCheck verify_certificate(const LtiSystem& sys,
                                    const StabilityCertificate& cert,
                                    const Tolerances& tol) {
  const Index n = sys.dim();
  if (cert.gram.dim() != n || cert.x.rows() != n || cert.x.cols() != n) {
    throw DimensionMismatch("verify_certificate: certificate/system mismatch");
  }
  CertificateCheck check;
  const bool primal = cert.form == StabilityCertificate::Form::P;
  const Matrix& a = sys.a;
  const Matrix& g = cert.gram.mat();
  const Matrix& x = cert.x;

  // Bottom-left block: X A in the primal form, (A X)^T in the dual one
  // (the block layout is not spectrum-invariant under partial transpose).
  const Matrix off =
      primal ? Matrix(x * a) : Matrix((a * x).transpose());
  const Matrix lmi = block_grid(
      {{g, off.transpose()}, {off, x + x.transpose() - g}});
  if (n > 0) {
    const Vector evals = sym_eigen(SymMatrix(lmi)).values;
    check.lmi_min_eig = evals(0);
    check.lmi_scale = std::max(
        1.0, std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1))));
    check.lyap_min_eig = min_eigenvalue(
        primal ? SymMatrix(g - a.transpose() * g * a)
               : SymMatrix(g - a * g * a.transpose()));
    check.gram_min_eig = min_eigenvalue(cert.gram);
    check.shift_min_eig = min_eigenvalue(SymMatrix(x + x.transpose() - g));
    Eigen::JacobiSVD<Matrix> svd(x);
    const auto& sv = svd.singularValues();
    check.x_sigma_ratio = sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  } else {
    check.lmi_min_eig = check.lyap_min_eig = check.gram_min_eig =
        check.shift_min_eig = std::numeric_limits<double>::infinity();
    check.x_sigma_ratio = 1.0;
  }
  check.x_nonsingular = check.x_sigma_ratio > tol.rank;
  const double slack = tol.residual * check.lmi_scale;
  const double gram_scale = std::max(1.0, spectral_norm(g));
  check.pass = n == 0 ||
               (check.lmi_min_eig >= -slack && check.lyap_min_eig >= -slack &&
                check.gram_min_eig > tol.psd * gram_scale &&
                check.shift_min_eig >= -slack && check.x_nonsingular);
  return check;
}

SynthesisExtraction extract_gain(const Matrix& x, const Matrix& z,
                                 GainSide side, const Tolerances& tol) {
  if (x.rows() != x.cols()) {
    throw DimensionMismatch("extract_gain: X must be square");
  }
  const Index n = x.rows();
  if (side == GainSide::Controller ? z.cols() != n : z.rows() != n) {
    throw DimensionMismatch("extract_gain: Z does not conform with X");
  }
  if (n == 0) return {Matrix(z.rows(), z.cols()), 0.0};

  Eigen::JacobiSVD<Matrix> svd(x);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= tol.rank * sv(0)) {
    throw SingularMatrix("extract_gain: X is singular at tolerance");
  }

  SynthesisExtraction out;
  if (side == GainSide::Controller) {
    // K X = Z  =>  X^T K^T = Z^T
    out.gain = x.transpose().lu().solve(z.transpose()).transpose();
    out.residual = spectral_norm(out.gain * x - z);
  } else {
    // X K = Z
    out.gain = x.lu().solve(z);
    out.residual = spectral_norm(x * out.gain - z);
  }
  return out;
}

}  // namespace nspkit
