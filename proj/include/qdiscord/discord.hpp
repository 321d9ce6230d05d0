#pragma once

#include <cstdint>
#include <vector>

#include "qdiscord/states.hpp"

namespace qdiscord {

/// Rank-1 von Neumann measurement on H_A, stored as the unitary whose columns
/// are the measured basis vectors.
class ProjectiveMeasurement {
 public:
  /// Throws InvalidArgument unless `basis` is unitary to 1e-10.
  explicit ProjectiveMeasurement(CMatrix basis);

  static ProjectiveMeasurement computational(Index d);

  Index dim() const { return basis_.rows(); }
  const CMatrix& basis() const { return basis_; }
  CVector vector(Index j) const { return basis_.col(j); }
  CMatrix projector(Index j) const { return basis_.col(j) * basis_.col(j).adjoint(); }

 private:
  CMatrix basis_;
};

struct OptimizerConfig {
  int restarts = 20;
  double tolerance = 1e-8;
  int max_evaluations = 4000;
  double initial_step = 0.5;
  std::uint64_t seed = 0x5eed;
};

struct DiscordResult {
  double mutual_information = 0;
  double classical_correlations = 0;
  double discord = 0;
  ProjectiveMeasurement optimal_measurement = ProjectiveMeasurement::computational(2);
  int optimizer_restarts_used = 0;
  bool converged = false;
};

struct ClassicalCorrelations {
  double value = 0;
  ProjectiveMeasurement measurement = ProjectiveMeasurement::computational(2);
  int restarts_used = 0;
  bool converged = false;
};

struct Omega0Residual {
  double residual = 0;
  ProjectiveMeasurement best_basis = ProjectiveMeasurement::computational(2);
  bool used_optimizer = false;
  bool converged = true;
};

/// sum_j p_j S(rho_B|j) for the measurement acting on A; outcomes with
/// p_j < 1e-14 contribute nothing.
double conditional_entropy(const DensityMatrixd& rho, const ProjectiveMeasurement& m);

/// S(rho_B) minus the minimum conditional entropy over projective measurements on A.
ClassicalCorrelations classical_correlations(const DensityMatrixd& rho,
                                             const OptimizerConfig& cfg = {});

DiscordResult discord(const DensityMatrixd& rho, const OptimizerConfig& cfg = {});

/// [rho, rho_A (x) 1_B].
CMatrix reduced_commutator(const DensityMatrixd& rho);

/// [X, Tr_B[X] (x) 1_B] for a traceless deviation X = rho - 1/d. Equals the
/// commutator of rho itself since the identity parts commute.
CMatrix centered_commutator(const CMatrix& deviation, Dims dims);

/// Frobenius norm of [rho, rho_A (x) 1_B]. Positive values certify positive discord.
double commutator_criterion(const DensityMatrixd& rho);

bool in_c0(const DensityMatrixd& rho, double tolerance = tol::c0);

/// sum_j (P_j (x) 1) rho (P_j (x) 1).
CMatrix dephase_a(const DensityMatrixd& rho, const ProjectiveMeasurement& m);

/// min over bases of ||rho - dephase_a(rho)||_F. Uses the eigenbasis of rho_A
/// when its spectrum is non-degenerate (gaps >= 1e-8) and multi-start search otherwise.
Omega0Residual omega0_residual(const DensityMatrixd& rho, const OptimizerConfig& cfg = {});

/// sum_j p_j P_j (x) sigma_j.
DensityMatrixd make_zero_discord(const RVector& p, const ProjectiveMeasurement& basis,
                                 const std::vector<CMatrix>& sigmas);

}  // namespace qdiscord
