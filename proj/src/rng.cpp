// SPDX-License-Identifier: Apache-2.0
#include "nspkit/rng.hpp"

#include <cmath>

namespace nspkit {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}  // namespace

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on open-interval uniforms.
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = kTwoPi * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Vector Rng::normal_vector(Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal();
  return v;
}

Matrix Rng::gaussian(Index rows, Index cols) {
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal();
  }
  return m;
}

Matrix Rng::symmetric(Index n, double scale) {
  const Matrix g = gaussian(n, n);
  return scale * 0.5 * (g + g.transpose());
}

Matrix Rng::psd(Index n, Index rank) {
  if (rank < 0 || rank > n) rank = n;
  const Matrix g = gaussian(n, rank);
  return g * g.transpose();
}

Matrix Rng::orthogonal(Index n) {
  if (n == 0) return Matrix(0, 0);
  const Matrix g = gaussian(n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index i = 0; i < n; ++i) {
    if (r(i, i) < 0.0) q.col(i) = -q.col(i);
  }
  return q;
}

Vector Rng::unit_vector(Index n) {
  if (n == 0) return Vector(0);
  Vector v = normal_vector(n);
  double nrm = v.norm();
  while (nrm == 0.0) {
    v = normal_vector(n);
    nrm = v.norm();
  }
  return v / nrm;
}

}  // namespace nspkit
