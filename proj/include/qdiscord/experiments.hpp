#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qdiscord/channels.hpp"
#include "qdiscord/io.hpp"

namespace qdiscord {

inline constexpr std::string_view kLibraryVersion = QDISCORD_VERSION;

enum class ExperimentKind { measure_zero, perturbation, convexity, trajectory, discord_single };

std::string to_string(ExperimentKind k);
/// Accepts both `measure_zero` and `measure-zero` spellings.
ExperimentKind experiment_kind_from_string(const std::string& name);

struct Thresholds {
  double c0_tol = 1e-8;
  double discord_tol = 1e-6;
  double crossing_tol = 1e-8;
};

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::measure_zero;
  Dims dims{2, 2};
  long trials = 1000;
  std::uint64_t seed = 42;
  Thresholds thresholds;
  std::optional<ChannelDescriptor> channel;
  long steps = 10000;                 // trajectory length n_max
  std::string output_path;            // empty: do not write
  int workers = 1;
  bool evaluate_discord = false;      // per-trial discord in measure_zero / trajectory
  std::vector<double> etas{1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  std::optional<std::string> state_path;  // injected states replace the first trials
  int optimizer_restarts = 20;

  /// Throws InvalidArgument on out-of-range fields.
  void validate() const;
};

/// Everything except `workers`, which is reported under "execution".
json config_to_json(const ExperimentConfig& cfg);

/// Missing fields keep their defaults; unknown fields are rejected.
ExperimentConfig config_from_json(const json& j, ExperimentConfig base = {});

struct ExperimentReport {
  json config;
  json records = json::array();
  json aggregates = json::object();
  double wall_clock_seconds = 0;
  int workers = 1;

  json to_json(bool include_execution = true) const;
  std::string dump(bool include_execution = true) const;
};

ExperimentReport run_measure_zero(const ExperimentConfig& cfg);
ExperimentReport run_perturbation(const ExperimentConfig& cfg);
ExperimentReport run_convexity(const ExperimentConfig& cfg);
ExperimentReport run_trajectory_study(const ExperimentConfig& cfg);
ExperimentReport run_discord_single(const ExperimentConfig& cfg);

/// Validates, checks the output path is writable before any sampling, runs the
/// experiment and writes the report when `output_path` is set.
ExperimentReport run_experiment(const ExperimentConfig& cfg);

}  // namespace qdiscord
