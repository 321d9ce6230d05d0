// qdiscord: discord, C0 commutator checks, state sampling, channel evolution and
// the Monte Carlo experiments.
//
// Exit codes: 0 success, 1 validation or usage error, 2 I/O error.

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include <CLI11.hpp>

#include "qdiscord/bloch.hpp"
#include "qdiscord/channels.hpp"
#include "qdiscord/experiments.hpp"
#include "qdiscord/io.hpp"
#include "qdiscord/rng.hpp"
#include "qdiscord/sampling.hpp"

using namespace qdiscord;

namespace {

int default_workers() {
  if (const char* env = std::getenv("QDISCORD_WORKERS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  return 1;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text << '\n';
  if (!out) throw IoError("write to '" + path + "' failed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum discord, zero-discord criteria and C0 crossing experiments"};
  app.require_subcommand(0, 1);
  bool show_version = false;
  app.add_flag("--version", show_version, "Print library and PRNG identifiers");

  // discord
  auto* cmd_discord = app.add_subcommand("discord", "Quantum discord of a state (measurement on A)");
  std::string discord_state;
  OptimizerConfig discord_opt;
  std::string discord_out;
  cmd_discord->add_option("--state", discord_state, "State JSON file")->required();
  cmd_discord->add_option("--restarts", discord_opt.restarts, "Optimizer restarts");
  cmd_discord->add_option("--seed", discord_opt.seed, "Optimizer seed");
  cmd_discord->add_option("--out", discord_out, "Write the full result as JSON");

  // commutator
  auto* cmd_comm = app.add_subcommand("commutator", "Frobenius norm of [rho, rho_A (x) 1_B]");
  std::string comm_state;
  double comm_tol = tol::c0;
  bool comm_bloch = false;
  cmd_comm->add_option("--state", comm_state, "State JSON file")->required();
  cmd_comm->add_option("--tol", comm_tol, "C0 membership tolerance");
  cmd_comm->add_flag("--residuals", comm_bloch, "Also print the largest structure-constant residual");

  // sample
  auto* cmd_sample = app.add_subcommand("sample", "Write a random ensemble as JSON lines");
  std::string sample_kind = "mixed";
  std::string sample_dims = "2x2";
  long sample_count = 1;
  std::uint64_t sample_seed = 42;
  long sample_rank = 0;
  std::string sample_out;
  cmd_sample->add_option("--kind", sample_kind, "pure | mixed | zero-discord")
      ->check(CLI::IsMember({"pure", "mixed", "zero-discord", "zero_discord"}));
  cmd_sample->add_option("--dims", sample_dims, "Local dimensions, e.g. 2x3");
  cmd_sample->add_option("--count", sample_count, "Number of states")->check(CLI::PositiveNumber);
  cmd_sample->add_option("--seed", sample_seed, "Master seed");
  cmd_sample->add_option("--rank", sample_rank, "Ginibre rank for mixed states (default full)");
  cmd_sample->add_option("--out", sample_out, "Output file (default stdout)");

  // evolve
  auto* cmd_evolve = app.add_subcommand("evolve", "Iterate a channel and export the trajectory CSV");
  std::string evolve_channel, evolve_state, evolve_out;
  long evolve_steps = 100;
  double evolve_threshold = 1e-8;
  bool evolve_discord = false;
  cmd_evolve->add_option("--channel", evolve_channel, "Channel descriptor JSON file")->required();
  cmd_evolve->add_option("--state", evolve_state, "Initial state JSON file")->required();
  cmd_evolve->add_option("--steps", evolve_steps, "Number of steps n_max");
  cmd_evolve->add_option("--threshold", evolve_threshold, "C0 crossing threshold");
  cmd_evolve->add_flag("--discord", evolve_discord, "Evaluate discord at every step");
  cmd_evolve->add_option("--out", evolve_out, "Trajectory CSV (default stdout)");

  // experiment
  auto* cmd_exp = app.add_subcommand("experiment", "Run a Monte Carlo experiment");
  std::string exp_name, exp_config, exp_dims, exp_out, exp_channel, exp_state;
  long exp_trials = 0, exp_steps = 0;
  std::uint64_t exp_seed = 0;
  int exp_workers = default_workers();
  double exp_c0 = 0, exp_dtol = 0, exp_ctol = 0;
  std::vector<double> exp_etas;
  bool exp_discord = false;
  int exp_restarts = 0;
  cmd_exp->add_option("name", exp_name,
                      "measure-zero | perturbation | convexity | trajectory | discord-single")
      ->required();
  cmd_exp->add_option("--config", exp_config, "Experiment config JSON");
  auto* o_dims = cmd_exp->add_option("--dims", exp_dims, "Local dimensions, e.g. 2x2");
  auto* o_trials = cmd_exp->add_option("--trials", exp_trials, "Number of trials");
  auto* o_seed = cmd_exp->add_option("--seed", exp_seed, "Master seed");
  auto* o_out = cmd_exp->add_option("--out", exp_out, "Report JSON path");
  auto* o_workers = cmd_exp->add_option("--workers", exp_workers,
                                        "Worker threads (default $QDISCORD_WORKERS or 1)");
  auto* o_channel = cmd_exp->add_option("--channel", exp_channel, "Channel descriptor JSON file");
  auto* o_steps = cmd_exp->add_option("--steps", exp_steps, "Trajectory length");
  auto* o_state = cmd_exp->add_option("--state", exp_state, "Inject states from a state or ensemble file");
  auto* o_c0 = cmd_exp->add_option("--c0-tol", exp_c0, "C0 membership tolerance");
  auto* o_dtol = cmd_exp->add_option("--discord-tol", exp_dtol, "Zero-discord tolerance");
  auto* o_ctol = cmd_exp->add_option("--crossing-tol", exp_ctol, "Crossing / escape threshold");
  auto* o_etas = cmd_exp->add_option("--etas", exp_etas, "Perturbation strengths");
  auto* o_discord = cmd_exp->add_flag("--evaluate-discord", exp_discord, "Evaluate discord per trial");
  auto* o_restarts = cmd_exp->add_option("--restarts", exp_restarts, "Optimizer restarts");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (show_version) {
      std::cout << "qdiscord " << kLibraryVersion << "\nprng " << kPrngId << '\n';
      return 0;
    }

    if (*cmd_discord) {
      const DensityMatrixd rho = read_state_file(discord_state);
      const DiscordResult r = discord(rho, discord_opt);
      std::cout << std::fixed << std::setprecision(6) << "I = " << r.mutual_information
                << "\nJ = " << r.classical_correlations << "\nD = " << r.discord
                << "\nconverged = " << (r.converged ? "true" : "false") << '\n';
      if (!discord_out.empty()) write_text(discord_out, discord_result_to_json(r).dump(2));
      return 0;
    }

    if (*cmd_comm) {
      const DensityMatrixd rho = read_state_file(comm_state);
      const double norm = commutator_criterion(rho);
      std::cout << "commutator_norm = " << format_double(norm) << "\nin_c0 = "
                << (norm <= comm_tol ? "true" : "false") << '\n';
      if (comm_bloch) {
        const RMatrix res = c0_residuals(to_bloch(rho));
        std::cout << "max_residual = " << format_double(res.cwiseAbs().maxCoeff()) << '\n';
      }
      return 0;
    }

    if (*cmd_sample) {
      const Dims dims = parse_dims(sample_dims);
      SeededSampler master(sample_seed);
      std::vector<DensityMatrixd> states;
      EnsembleHeader header;
      header.dims = dims;
      header.seed = sample_seed;
      header.ensemble = sample_kind == "zero_discord" ? "zero-discord" : sample_kind;
      if (sample_kind == "mixed") header.params["rank"] = sample_rank > 0 ? sample_rank : dims.total();
      for (long i = 0; i < sample_count; ++i) {
        SeededSampler s = master.child(static_cast<std::uint64_t>(i));
        if (sample_kind == "pure") states.push_back(random_pure_state(dims, s));
        else if (sample_kind == "mixed")
          states.push_back(random_mixed_state(dims, sample_rank > 0 ? sample_rank : dims.total(), s));
        else states.push_back(random_zero_discord(dims, s));
      }
      if (sample_out.empty()) write_ensemble(std::cout, header, states);
      else write_ensemble_file(sample_out, header, states);
      return 0;
    }

    if (*cmd_evolve) {
      const ChannelDescriptor desc = channel_descriptor_from_json(read_json_file(evolve_channel));
      const QuantumChannel ch = make_channel(desc);
      const DensityMatrixd rho = read_state_file(evolve_state);
      if (!evolve_out.empty()) ensure_writable(evolve_out);
      TrajectoryOptions opts;
      opts.record_states = false;
      opts.evaluate_discord = evolve_discord;
      const Trajectory t = run_trajectory(ch, rho, evolve_steps, evolve_threshold, opts);
      const SpectralDecomposition sd = spectral_decompose(ch);
      if (evolve_out.empty()) {
        write_trajectory_csv(std::cout, t);
      } else {
        write_trajectory_csv_file(evolve_out, t);
        std::cout << "distinct_eigenvalues = " << sd.n_distinct
                  << "\ncrossing_bound = " << crossing_bound(sd)
                  << "\ncrossings = " << t.transient_crossings() << '\n';
      }
      return 0;
    }

    if (*cmd_exp) {
      ExperimentConfig cfg;
      if (!exp_config.empty()) cfg = config_from_json(read_json_file(exp_config));
      cfg.experiment = experiment_kind_from_string(exp_name);
      if (o_dims->count()) cfg.dims = parse_dims(exp_dims);
      if (o_trials->count()) cfg.trials = exp_trials;
      if (o_seed->count()) cfg.seed = exp_seed;
      if (o_out->count()) cfg.output_path = exp_out;
      if (o_workers->count() || exp_config.empty()) cfg.workers = exp_workers;
      if (o_channel->count()) cfg.channel = channel_descriptor_from_json(read_json_file(exp_channel));
      if (o_steps->count()) cfg.steps = exp_steps;
      if (o_state->count()) cfg.state_path = exp_state;
      if (o_c0->count()) cfg.thresholds.c0_tol = exp_c0;
      if (o_dtol->count()) cfg.thresholds.discord_tol = exp_dtol;
      if (o_ctol->count()) cfg.thresholds.crossing_tol = exp_ctol;
      if (o_etas->count()) cfg.etas = exp_etas;
      if (o_discord->count()) cfg.evaluate_discord = exp_discord;
      if (o_restarts->count()) cfg.optimizer_restarts = exp_restarts;
      const ExperimentReport r = run_experiment(cfg);
      if (cfg.output_path.empty()) std::cout << r.dump() << '\n';
      else std::cout << r.aggregates.dump(2) << '\n';
      return 0;
    }

    std::cerr << app.help();
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
