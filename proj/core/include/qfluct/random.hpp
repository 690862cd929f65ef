#pragma once

#include "qfluct/channels.hpp"

#include <cstdint>
#include <random>

namespace qfluct {

using Rng = std::mt19937_64;

CMatrix ginibre(Index rows, Index cols, Rng& rng);
// Haar unitary from the QR decomposition of a Ginibre matrix.
CMatrix random_unitary(Index d, Rng& rng);
// Isometry with the given number of rows (>= cols).
CMatrix random_isometry(Index rows, Index cols, Rng& rng);

CVector random_pure(Index d, Rng& rng);
// G G^dagger / Tr with G a d x rank Ginibre matrix.
DensityOperator random_state(Index d, Index rank, Rng& rng);
DensityOperator random_full_rank_state(Index d, Rng& rng);

// Random Stinespring isometry cut into n_kraus blocks (raised to ceil(din / dout) if smaller).
KrausChannel random_channel(Index din, Index dout, Index n_kraus, Rng& rng);

// Channel covariant under exp(-i diag(levels) t): Choi entries connecting |i><j| to |a><b| are
// kept only when levels_in(i) - levels_in(j) = levels_out(a) - levels_out(b).
KrausChannel random_covariant_channel(const RVector& levels_in, const RVector& levels_out,
                                      Index n_kraus, Rng& rng);

// Unitary block-diagonal in the eigenspaces of diag(energies).
CMatrix random_energy_conserving_unitary(const RVector& energies, Rng& rng);

}  // namespace qfluct
