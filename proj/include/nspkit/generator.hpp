// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "nspkit/rng.hpp"
#include "nspkit/types.hpp"

namespace nspkit {

/// Random elimination-inequality instance.
struct ProjectionInstance {
  Matrix q;  // symmetric p x p
  Matrix u;  // m x p
  Matrix v;  // n x p
};

/// Feasible by construction: Q = G - U^T X0 V - V^T X0^T U with G >= 0,
/// so X0 solves the inequality exactly. Occasionally rank-deficient G, U, V.
ProjectionInstance gen_projection_feasible(Rng& rng, Index p_max = 12,
                                           Index mn_max = 6);

/// Infeasible by construction: a direction of ker U is planted strictly
/// negative for Q, violating the U-kernel condition.
ProjectionInstance gen_projection_infeasible(Rng& rng, Index p_max = 12,
                                             Index mn_max = 6);

/// Undirected random instance (either verdict possible).
ProjectionInstance gen_projection_random(Rng& rng, Index p_max = 12,
                                         Index mn_max = 6);

/// Marginally stable A: similarity-conjugated block diagonal of plane
/// rotations, +-1 scalars, and Schur-stable blocks.
Matrix gen_marginally_stable(Rng& rng, Index n);

/// Rejection case: either a defective unit-circle Jordan block or a
/// spectral radius strictly above one (coin flip). Requires n >= 2.
Matrix gen_defective_or_unstable(Rng& rng, Index n);

/// Random dilation data with both condition norms steered to the targets.
struct DilationInstance {
  Matrix a, b, c;
  double row_norm = 0.0;
  double col_norm = 0.0;
};

DilationInstance gen_dilation(Rng& rng, Index m, Index n, Index p, Index q,
                              double row_target, double col_target);

/// Boundary family built from exact unit singular triplets of A.
DilationInstance gen_dilation_boundary(Rng& rng, Index m, Index n, Index p,
                                       Index q);

/// Interpolation instance: partitioned form plus consistent data (z, w)
/// meeting the nonnegativity condition with slack factor tau in [0, 1]
/// (tau = 1 puts the data exactly on the boundary).
struct QuadraticInstance {
  Matrix p;  // (n + m) x (n + m) symmetric
  Index n = 0;
  Index m = 0;
  Vector z;
  Vector w;
};

QuadraticInstance gen_quadratic(Rng& rng, Index n, Index m);

/// Multiplier-search instance; N always satisfies the partition
/// hypotheses, M cycles through planted-feasible / random / planted-hard.
struct SLemmaInstance {
  Matrix m;
  Matrix n_pencil;
  Index n = 0;
  Index m_dim = 0;
  Vector xbar;          // Slater candidate for the scalar variant
  double slater_value = 0.0;
};

SLemmaInstance gen_slemma(Rng& rng, Index n, Index m, bool ensure_slater);

}  // namespace nspkit
