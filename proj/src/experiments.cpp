#include "qdiscord/experiments.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "qdiscord/rng.hpp"
#include "qdiscord/sampling.hpp"

namespace qdiscord {

std::string to_string(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::measure_zero: return "measure_zero";
    case ExperimentKind::perturbation: return "perturbation";
    case ExperimentKind::convexity: return "convexity";
    case ExperimentKind::trajectory: return "trajectory";
    case ExperimentKind::discord_single: return "discord_single";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  std::string n = name;
  std::replace(n.begin(), n.end(), '-', '_');
  for (auto k : {ExperimentKind::measure_zero, ExperimentKind::perturbation,
                 ExperimentKind::convexity, ExperimentKind::trajectory,
                 ExperimentKind::discord_single})
    if (n == to_string(k)) return k;
  throw InvalidArgument("unknown experiment '" + name + "'");
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw InvalidArgument("trials must be >= 1");
  if (dims.a < 2 || dims.b < 2) throw InvalidArgument("dims must each be >= 2");
  if (!(thresholds.c0_tol > 0) || !(thresholds.discord_tol > 0) || !(thresholds.crossing_tol > 0))
    throw InvalidArgument("tolerances must be positive");
  if (workers < 1) throw InvalidArgument("workers must be >= 1");
  if (optimizer_restarts < 1) throw InvalidArgument("optimizer_restarts must be >= 1");
  if (experiment == ExperimentKind::trajectory) {
    if (!channel) throw InvalidArgument("trajectory experiment needs a channel descriptor");
    if (channel->dims != dims) throw InvalidArgument("channel dims must match experiment dims");
    if (steps < 1) throw InvalidArgument("steps must be >= 1");
  }
  if (experiment == ExperimentKind::perturbation) {
    if (etas.empty()) throw InvalidArgument("perturbation experiment needs at least one eta");
    for (double e : etas)
      if (!(e >= 0.0 && e <= 1.0)) throw InvalidArgument("eta values must lie in [0, 1]");
  }
}

json config_to_json(const ExperimentConfig& cfg) {
  json j{{"experiment", to_string(cfg.experiment)},
         {"dims", json::array({cfg.dims.a, cfg.dims.b})},
         {"trials", cfg.trials},
         {"seed", cfg.seed},
         {"thresholds",
          {{"c0_tol", cfg.thresholds.c0_tol},
           {"discord_tol", cfg.thresholds.discord_tol},
           {"crossing_tol", cfg.thresholds.crossing_tol}}},
         {"channel", cfg.channel ? channel_descriptor_to_json(*cfg.channel) : json(nullptr)},
         {"steps", cfg.steps},
         {"output_path", cfg.output_path},
         {"evaluate_discord", cfg.evaluate_discord},
         {"etas", cfg.etas},
         {"state_path", cfg.state_path ? json(*cfg.state_path) : json(nullptr)},
         {"optimizer_restarts", cfg.optimizer_restarts}};
  return j;
}

ExperimentConfig config_from_json(const json& j, ExperimentConfig cfg) {
  if (!j.is_object()) throw InvalidArgument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (key == "experiment") {
      cfg.experiment = experiment_kind_from_string(value.get<std::string>());
    } else if (key == "dims") {
      if (value.is_string()) {
        cfg.dims = parse_dims(value.get<std::string>());
      } else {
        if (!value.is_array() || value.size() != 2) throw InvalidArgument("dims must be [d_A, d_B]");
        cfg.dims = {value[0].get<Index>(), value[1].get<Index>()};
      }
    } else if (key == "trials") {
      cfg.trials = value.get<long>();
    } else if (key == "seed") {
      cfg.seed = value.get<std::uint64_t>();
    } else if (key == "thresholds") {
      for (const auto& [tk, tv] : value.items()) {
        if (tk == "c0_tol") cfg.thresholds.c0_tol = tv.get<double>();
        else if (tk == "discord_tol") cfg.thresholds.discord_tol = tv.get<double>();
        else if (tk == "crossing_tol") cfg.thresholds.crossing_tol = tv.get<double>();
        else throw InvalidArgument("unknown threshold '" + tk + "'");
      }
    } else if (key == "channel") {
      if (value.is_null()) cfg.channel.reset();
      else cfg.channel = channel_descriptor_from_json(value);
    } else if (key == "steps") {
      cfg.steps = value.get<long>();
    } else if (key == "output_path") {
      cfg.output_path = value.get<std::string>();
    } else if (key == "workers") {
      cfg.workers = value.get<int>();
    } else if (key == "evaluate_discord") {
      cfg.evaluate_discord = value.get<bool>();
    } else if (key == "etas") {
      cfg.etas = value.get<std::vector<double>>();
    } else if (key == "state_path") {
      if (value.is_null()) cfg.state_path.reset();
      else cfg.state_path = value.get<std::string>();
    } else if (key == "optimizer_restarts") {
      cfg.optimizer_restarts = value.get<int>();
    } else {
      throw InvalidArgument("unknown config field '" + key + "'");
    }
  }
  return cfg;
}

json ExperimentReport::to_json(bool include_execution) const {
  json j{{"config", config},
         {"library_version", std::string(kLibraryVersion)},
         {"prng", std::string(kPrngId)},
         {"aggregates", aggregates},
         {"records", records}};
  if (include_execution)
    j["execution"] = {{"workers", workers}, {"wall_clock_seconds", wall_clock_seconds}};
  return j;
}

std::string ExperimentReport::dump(bool include_execution) const {
  return to_json(include_execution).dump(2);
}

namespace {

/// Runs fn(trial) for every trial on `workers` threads; results land in trial order.
template <typename Fn>
std::vector<json> run_trials(long trials, int workers, Fn&& fn) {
  std::vector<json> out(static_cast<size_t>(trials));
  std::atomic<long> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    while (true) {
      const long t = next.fetch_add(1);
      if (t >= trials) return;
      try {
        out[static_cast<size_t>(t)] = fn(t);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = trials;
        return;
      }
    }
  };
  const int n = static_cast<int>(std::min<long>(workers, trials));
  if (n <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

SeededSampler trial_sampler(const ExperimentConfig& cfg, long trial) {
  return SeededSampler(cfg.seed).child(static_cast<std::uint64_t>(trial));
}

OptimizerConfig trial_optimizer(const ExperimentConfig& cfg, const SeededSampler& s) {
  OptimizerConfig o;
  o.restarts = cfg.optimizer_restarts;
  o.seed = s.child(0xD15C0).master_seed();
  return o;
}

struct Stats {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
  double sum = 0;
  long count = 0;

  void add(double x) {
    min = std::min(min, x);
    max = std::max(max, x);
    sum += x;
    ++count;
  }
  json to_json() const {
    if (count == 0) return json{{"min", nullptr}, {"max", nullptr}, {"mean", nullptr}};
    return json{{"min", min}, {"max", max}, {"mean", sum / static_cast<double>(count)}};
  }
};

std::vector<DensityMatrixd> injected_states(const ExperimentConfig& cfg) {
  if (!cfg.state_path) return {};
  auto states = read_states(*cfg.state_path);
  for (const auto& s : states)
    if (s.dims() != cfg.dims) throw InvalidArgument("injected state dims do not match config dims");
  return states;
}

template <typename Body>
ExperimentReport timed(const ExperimentConfig& cfg, Body&& body) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentReport r;
  r.config = config_to_json(cfg);
  r.workers = cfg.workers;
  body(r);
  r.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace

ExperimentReport run_measure_zero(const ExperimentConfig& cfg) {
  return timed(cfg, [&](ExperimentReport& r) {
    const auto injected = injected_states(cfg);
    const auto records = run_trials(cfg.trials, cfg.workers, [&](long t) {
      SeededSampler s = trial_sampler(cfg, t);
      const bool inj = static_cast<size_t>(t) < injected.size();
      const DensityMatrixd rho = inj ? injected[static_cast<size_t>(t)] : random_mixed_state(cfg.dims, s);
      const double norm = commutator_criterion(rho);
      json rec{{"trial", t},
               {"injected", inj},
               {"commutator_norm", norm},
               {"in_c0", norm < cfg.thresholds.c0_tol}};
      if (cfg.evaluate_discord) rec["discord"] = discord(rho, trial_optimizer(cfg, s)).discord;
      return rec;
    });
    Stats norms, discords;
    long in_c0 = 0;
    for (const auto& rec : records) {
      norms.add(rec["commutator_norm"].get<double>());
      if (rec["in_c0"].get<bool>()) ++in_c0;
      if (rec.contains("discord")) discords.add(rec["discord"].get<double>());
    }
    r.records = records;
    r.aggregates = {{"count_in_c0", in_c0},
                    {"fraction_in_c0", static_cast<double>(in_c0) / static_cast<double>(cfg.trials)},
                    {"min_norm", norms.min},
                    {"max_norm", norms.max},
                    {"mean_norm", norms.to_json()["mean"]}};
    if (cfg.evaluate_discord) {
      long below = 0;
      for (const auto& rec : records)
        if (rec["discord"].get<double>() <= cfg.thresholds.discord_tol) ++below;
      r.aggregates["discord"] = discords.to_json();
      r.aggregates["count_discord_below_tol"] = below;
    }
  });
}

ExperimentReport run_perturbation(const ExperimentConfig& cfg) {
  return timed(cfg, [&](ExperimentReport& r) {
    const auto records = run_trials(cfg.trials, cfg.workers, [&](long t) {
      SeededSampler s = trial_sampler(cfg, t);
      const DensityMatrixd base = random_zero_discord(cfg.dims, s);
      json norms = json::array();
      for (size_t k = 0; k < cfg.etas.size(); ++k) {
        const double eta = cfg.etas[k];
        if (eta == 0.0) {
          norms.push_back(commutator_criterion(base));
          continue;
        }
        SeededSampler sk = s.child(k);
        norms.push_back(commutator_criterion(perturb(base, eta, sk)));
      }
      return json{{"trial", t}, {"base_norm", commutator_criterion(base)}, {"norms", norms}};
    });
    json per_eta = json::array();
    for (size_t k = 0; k < cfg.etas.size(); ++k) {
      Stats st;
      long escaped = 0;
      for (const auto& rec : records) {
        const double n = rec["norms"][k].get<double>();
        st.add(n);
        if (n > cfg.thresholds.crossing_tol) ++escaped;
      }
      json e = st.to_json();
      e["eta"] = cfg.etas[k];
      e["escape_count"] = escaped;
      e["escape_fraction"] = static_cast<double>(escaped) / static_cast<double>(cfg.trials);
      per_eta.push_back(std::move(e));
    }
    Stats base;
    for (const auto& rec : records) base.add(rec["base_norm"].get<double>());
    r.records = records;
    r.aggregates = {{"per_eta", per_eta}, {"base_norm", base.to_json()}};
  });
}

ExperimentReport run_convexity(const ExperimentConfig& cfg) {
  return timed(cfg, [&](ExperimentReport& r) {
    const double tol = cfg.thresholds.c0_tol;
    const auto records = run_trials(cfg.trials, cfg.workers, [&](long t) {
      SeededSampler s = trial_sampler(cfg, t);
      const DensityMatrixd r1 = random_zero_discord(cfg.dims, s);
      const DensityMatrixd r2 = random_zero_discord(cfg.dims, s);
      const double random_norm = commutator_criterion(mix(r1, r2, 0.5));

      const ProjectiveMeasurement shared(random_unitary(cfg.dims.a, s));
      const DensityMatrixd r3 = random_zero_discord(cfg.dims, shared, s);
      const DensityMatrixd r4 = random_zero_discord(cfg.dims, shared, s);
      const DensityMatrixd same = mix(r3, r4, 0.5);
      const double same_norm = commutator_criterion(same);
      OptimizerConfig oc = trial_optimizer(cfg, s);
      const double same_residual = omega0_residual(same, oc).residual;

      const DensityMatrixd with_id = mix(r1, DensityMatrixd::maximally_mixed(cfg.dims), 0.5);
      const double id_residual = omega0_residual(with_id, oc).residual;
      return json{{"trial", t},
                  {"random_basis_norm", random_norm},
                  {"random_basis_leaves_c0", random_norm > tol},
                  {"same_basis_norm", same_norm},
                  {"same_basis_leaves_c0", same_norm > tol},
                  {"same_basis_omega0_residual", same_residual},
                  {"identity_mix_omega0_residual", id_residual}};
    });
    long random_leave = 0, same_leave = 0, same_in_omega0 = 0, id_in_omega0 = 0;
    Stats random_norms;
    for (const auto& rec : records) {
      random_norms.add(rec["random_basis_norm"].get<double>());
      if (rec["random_basis_leaves_c0"].get<bool>()) ++random_leave;
      if (rec["same_basis_leaves_c0"].get<bool>()) ++same_leave;
      if (rec["same_basis_omega0_residual"].get<double>() <= tol) ++same_in_omega0;
      if (rec["identity_mix_omega0_residual"].get<double>() <= tol) ++id_in_omega0;
    }
    const double n = static_cast<double>(cfg.trials);
    r.records = records;
    r.aggregates = {{"random_basis_leave_fraction", random_leave / n},
                    {"random_basis_norm", random_norms.to_json()},
                    {"same_basis_leave_fraction", same_leave / n},
                    {"same_basis_omega0_fraction", same_in_omega0 / n},
                    {"identity_mix_omega0_fraction", id_in_omega0 / n}};
  });
}

ExperimentReport run_trajectory_study(const ExperimentConfig& cfg) {
  return timed(cfg, [&](ExperimentReport& r) {
    QuantumChannel ch = [&] {
      try {
        return make_channel(*cfg.channel);
      } catch (const Error& e) {
        throw InvalidArgument("channel " + channel_descriptor_to_json(*cfg.channel).dump() +
                              ": " + e.what());
      }
    }();
    const SpectralDecomposition sd = spectral_decompose(ch);
    const long bound = crossing_bound(sd);
    std::optional<bool> steady_in_c0;
    int unit_multiplicity = 0;
    for (const auto& c : sd.clusters)
      if (std::abs(c.center - 1.0) <= sd.cluster_tolerance) unit_multiplicity = c.multiplicity;
    if (!sd.unitary && unit_multiplicity == 1)
      steady_in_c0 = commutator_criterion(steady_state(sd)) <= cfg.thresholds.c0_tol;

    const auto records = run_trials(cfg.trials, cfg.workers, [&](long t) {
      SeededSampler s = trial_sampler(cfg, t);
      const DensityMatrixd rho0 = random_mixed_state(cfg.dims, s);
      TrajectoryOptions opts;
      opts.record_states = false;
      opts.evaluate_discord = cfg.evaluate_discord;
      opts.discord_config = trial_optimizer(cfg, s);
      const Trajectory tr = run_trajectory(ch, rho0, cfg.steps, cfg.thresholds.crossing_tol, opts);
      const bool limit_in_c0 =
          sd.unitary ? false : commutator_criterion(asymptotic_state(sd, rho0)) <= cfg.thresholds.c0_tol;
      const auto term = tr.terminal();
      const bool permanent_vanishing = term && term->enter > 0 && !limit_in_c0;
      const long crossings = tr.transient_crossings();
      json rec{{"trial", t},
               {"initial_norm", tr.commutator_norms.front()},
               {"final_norm", tr.commutator_norms.back()},
               {"min_norm", *std::min_element(tr.commutator_norms.begin(), tr.commutator_norms.end())},
               {"crossings", crossings},
               {"terminal_enter_step", term ? json(term->enter) : json(nullptr)},
               {"asymptotic_state_in_c0", limit_in_c0},
               {"bound_violation", crossings > bound},
               {"permanent_vanishing", permanent_vanishing}};
      if (tr.discord_values) rec["final_discord"] = tr.discord_values->back();
      return rec;
    });
    long max_crossings = 0, violations = 0, vanishing = 0, limit_in = 0;
    for (const auto& rec : records) {
      max_crossings = std::max(max_crossings, rec["crossings"].get<long>());
      if (rec["bound_violation"].get<bool>()) ++violations;
      if (rec["permanent_vanishing"].get<bool>()) ++vanishing;
      if (rec["asymptotic_state_in_c0"].get<bool>()) ++limit_in;
    }
    const Index products = distinct_pair_products(sd);
    r.records = records;
    r.aggregates = {{"distinct_eigenvalues", sd.n_distinct},
                    {"crossing_bound", bound},
                    {"distinct_pair_products", products},
                    {"bound_formula_discrepancy", products - 1 > bound},
                    {"unitary", sd.unitary},
                    {"eigenvalue_one_multiplicity", unit_multiplicity},
                    {"steady_state_in_c0", steady_in_c0 ? json(*steady_in_c0) : json(nullptr)},
                    {"asymptotic_in_c0_fraction", static_cast<double>(limit_in) / static_cast<double>(cfg.trials)},
                    {"max_crossings", max_crossings},
                    {"bound_violations", violations},
                    {"permanent_vanishing_count", vanishing}};
  });
}

ExperimentReport run_discord_single(const ExperimentConfig& cfg) {
  return timed(cfg, [&](ExperimentReport& r) {
    const auto injected = injected_states(cfg);
    const auto records = run_trials(cfg.trials, cfg.workers, [&](long t) {
      SeededSampler s = trial_sampler(cfg, t);
      const bool inj = static_cast<size_t>(t) < injected.size();
      const DensityMatrixd rho = inj ? injected[static_cast<size_t>(t)] : random_mixed_state(cfg.dims, s);
      const DiscordResult d = discord(rho, trial_optimizer(cfg, s));
      return json{{"trial", t},
                  {"injected", inj},
                  {"commutator_norm", commutator_criterion(rho)},
                  {"result", discord_result_to_json(d)}};
    });
    Stats st;
    bool all_converged = true;
    for (const auto& rec : records) {
      st.add(rec["result"]["discord"].get<double>());
      all_converged = all_converged && rec["result"]["converged"].get<bool>();
    }
    r.records = records;
    r.aggregates = {{"discord", st.to_json()}, {"all_converged", all_converged}};
  });
}

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  if (!cfg.output_path.empty()) ensure_writable(cfg.output_path);
  ExperimentReport r;
  switch (cfg.experiment) {
    case ExperimentKind::measure_zero: r = run_measure_zero(cfg); break;
    case ExperimentKind::perturbation: r = run_perturbation(cfg); break;
    case ExperimentKind::convexity: r = run_convexity(cfg); break;
    case ExperimentKind::trajectory: r = run_trajectory_study(cfg); break;
    case ExperimentKind::discord_single: r = run_discord_single(cfg); break;
  }
  if (!cfg.output_path.empty()) {
    std::ofstream out(cfg.output_path);
    if (!out) throw IoError("cannot open '" + cfg.output_path + "' for writing");
    out << r.dump() << '\n';
    if (!out) throw IoError("write to '" + cfg.output_path + "' failed");
  }
  return r;
}

}  // namespace qdiscord
