// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <random>

#include "nspkit/types.hpp"

namespace nspkit {

/// Deterministic random source. mt19937_64 output is fixed by the standard;
/// the real-valued transforms are hand-rolled because the std distributions
/// are not bit-stable across implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  double uniform() {  // [0, 1)
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Inclusive integer range via rejection-free modulo (bias irrelevant
  /// for the tiny ranges used here, determinism is what matters).
  int uniform_int(int lo, int hi) {
    return lo + static_cast<int>(next_u64() %
                                 static_cast<std::uint64_t>(hi - lo + 1));
  }

  double normal();

  Vector normal_vector(Index n);
  Matrix gaussian(Index rows, Index cols);
  Matrix symmetric(Index n, double scale = 1.0);
  /// Gram matrix G G^T with G of the requested rank (full when rank < 0).
  Matrix psd(Index n, Index rank = -1);
  /// Haar-distributed orthogonal matrix via QR with sign correction.
  Matrix orthogonal(Index n);
  Vector unit_vector(Index n);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nspkit
