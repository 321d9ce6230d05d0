#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qdiscord/discord.hpp"
#include "qdiscord/states.hpp"

namespace qdiscord {

enum class ChannelKind {
  global_depolarizing,  // rho -> (1-p) rho + p 1/d
  local_depolarizing,   // the same on A, identity on B
  local_dephasing,      // rho_A -> (1-q) rho_A + q Z rho_A Z^dagger, Z the clock matrix
  amplitude_damping,    // |k> -> |0> on A with probability gamma, identity on B
  replacement,          // rho -> (1-p) rho + p Tr[rho] target
};

std::string to_string(ChannelKind kind);
ChannelKind channel_kind_from_string(const std::string& name);

/// Serializable description of a built-in channel: { kind, params, dims }.
struct ChannelDescriptor {
  ChannelKind kind = ChannelKind::global_depolarizing;
  double strength = 0;  // p, q or gamma depending on kind
  Dims dims;
  std::optional<DensityMatrixd> target;  // replacement only
};

/// CPTP map on operators of H_A (x) H_B as a Kraus set with a cached superoperator
/// in the column-stacking convention: vec(K rho K^dagger) = (conj(K) (x) K) vec(rho).
class QuantumChannel {
 public:
  /// Validates trace preservation (1e-10) and Choi positivity (-1e-10).
  QuantumChannel(Dims dims, std::vector<CMatrix> kraus);

  Dims dims() const { return dims_; }
  Index dim() const { return dims_.total(); }
  const std::vector<CMatrix>& kraus() const { return kraus_; }
  const CMatrix& superop() const { return superop_; }

  CMatrix apply(const CMatrix& rho) const;
  DensityMatrixd apply(const DensityMatrixd& rho) const;

  /// sum_ij |i><j| (x) Lambda(|i><j|).
  CMatrix choi() const;

 private:
  Dims dims_;
  std::vector<CMatrix> kraus_;
  CMatrix superop_;
};

QuantumChannel make_channel(const ChannelDescriptor& desc);
QuantumChannel make_channel(ChannelKind kind, double strength, Dims dims);
QuantumChannel make_replacement_channel(const DensityMatrixd& target, double p);
QuantumChannel identity_channel(Dims dims);

struct EigenvalueCluster {
  cplx center;
  int multiplicity = 0;
};

/// Lambda = sum_i lambda_i |mu_i)(nu_i| with (nu_i|mu_j) = Tr[nu_i^dagger mu_j] = delta_ij.
struct SpectralDecomposition {
  Dims dims;
  CVector eigenvalues;
  std::vector<CMatrix> right_ops;
  std::vector<CMatrix> left_ops;
  std::vector<EigenvalueCluster> clusters;
  Index n_distinct = 0;
  bool diagonalizable = true;
  bool unitary = false;  // every |lambda_i| = 1: no decoherence
  double condition_number = 1;
  double cluster_tolerance = 1e-8;

  /// sum_i lambda_i vec(mu_i) vec(nu_i)^dagger.
  CMatrix reconstruct() const;
};

/// Throws UnsupportedMap when the superoperator is not diagonalizable
/// (eigenvector condition number above 1e10 or a deficient eigenspace).
SpectralDecomposition spectral_decompose(const QuantumChannel& ch, double cluster_tol = 1e-8);

/// Same, for a raw d^2 x d^2 superoperator (column-stacking convention).
SpectralDecomposition spectral_decompose(const CMatrix& superop, Dims dims,
                                         double cluster_tol = 1e-8);

DensityMatrixd evolve(const QuantumChannel& ch, const DensityMatrixd& rho, long steps);

/// sum_i (nu_i|rho) lambda_i^n |mu_i).
DensityMatrixd evolve_spectral(const SpectralDecomposition& sd, const DensityMatrixd& rho,
                               long steps);

/// d(d-1)/2 - 1 for d distinct eigenvalues, floored at 0.
long crossing_bound(const SpectralDecomposition& sd);
long crossing_bound(Index n_distinct);

/// Number of distinct products lambda_i lambda_j (i <= j) under the cluster tolerance.
Index distinct_pair_products(const SpectralDecomposition& sd);

/// Unit-trace Hermitian eigenoperator of eigenvalue 1. Throws UnsupportedMap for
/// unitary maps and NonUniqueSteadyState when eigenvalue 1 is degenerate.
DensityMatrixd steady_state(const SpectralDecomposition& sd);

/// Projection of rho onto the eigenvalue-1 eigenspace: the n -> infinity limit.
DensityMatrixd asymptotic_state(const SpectralDecomposition& sd, const DensityMatrixd& rho);

/// Maximal run of steps with commutator norm below threshold. `exit` is the
/// first step back above it, or empty if the run lasts to the end.
struct CrossingInterval {
  long enter = 0;
  std::optional<long> exit;
};

struct Trajectory {
  std::vector<long> times;
  std::vector<DensityMatrixd> states;
  std::vector<double> commutator_norms;
  std::optional<std::vector<double>> discord_values;
  std::vector<CrossingInterval> crossings;
  double threshold = 1e-8;

  /// Intervals entered after step 0 and left before the end: the passages
  /// through C0 that the eigenvalue bound limits.
  long transient_crossings() const;

  /// The interval that runs to the last step, if any.
  std::optional<CrossingInterval> terminal() const;
};

struct TrajectoryOptions {
  bool record_states = true;
  bool evaluate_discord = false;
  OptimizerConfig discord_config{};
};

/// Iterates the channel n_max times. States are propagated as deviations from
/// 1/d so commutator norms keep full relative precision as they decay.
Trajectory run_trajectory(const QuantumChannel& ch, const DensityMatrixd& rho0, long n_max,
                          double c0_threshold = 1e-8, const TrajectoryOptions& opts = {});

/// Maximal runs of entries below the threshold.
std::vector<CrossingInterval> find_crossings(const std::vector<double>& norms, double threshold);

}  // namespace qdiscord
