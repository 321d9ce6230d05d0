#pragma once

#include "qdiscord/discord.hpp"
#include "qdiscord/rng.hpp"
#include "qdiscord/states.hpp"

namespace qdiscord {

/// rows x cols matrix of independent standard complex Gaussians.
CMatrix ginibre(Index rows, Index cols, SeededSampler& s);

/// Haar-random unitary: QR of a Ginibre matrix with R's diagonal phases folded into Q.
CMatrix random_unitary(Index d, SeededSampler& s);

/// Flat Dirichlet draw on the (n-1)-simplex.
RVector random_simplex(Index n, SeededSampler& s);

/// Haar-random pure state |psi><psi|.
DensityMatrixd random_pure_state(Dims dims, SeededSampler& s);
DensityMatrixd random_pure_state(Index d, SeededSampler& s);

/// GG^dagger / Tr[GG^dagger] with G a d x rank Ginibre matrix; rank == d gives
/// the Hilbert-Schmidt measure.
DensityMatrixd random_mixed_state(Dims dims, Index rank, SeededSampler& s);
DensityMatrixd random_mixed_state(Dims dims, SeededSampler& s);

/// sum_j p_j P_j (x) sigma_j with a Haar basis, flat simplex weights and
/// Hilbert-Schmidt conditional states.
DensityMatrixd random_zero_discord(Dims dims, SeededSampler& s);

/// Same, with a caller-supplied basis on A.
DensityMatrixd random_zero_discord(Dims dims, const ProjectiveMeasurement& basis,
                                   SeededSampler& s);

/// (1 - w) rho + w sigma.
DensityMatrixd mix(const DensityMatrixd& rho, const DensityMatrixd& sigma, double w);

/// (1 - eta) rho + eta sigma with sigma a full-rank Hilbert-Schmidt draw, eta in (0, 1].
DensityMatrixd perturb(const DensityMatrixd& rho, double eta, SeededSampler& s);

/// (1 - lambda) rho + lambda 1/d, lambda in [0, 1].
DensityMatrixd depolarize_toward_identity(const DensityMatrixd& rho, double lambda);

}  // namespace qdiscord
