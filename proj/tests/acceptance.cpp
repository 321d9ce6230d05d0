// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "qdiscord/bloch.hpp"
#include "qdiscord/channels.hpp"
#include "qdiscord/discord.hpp"
#include "qdiscord/experiments.hpp"
#include "qdiscord/sampling.hpp"
#include "test_helpers.hpp"

using namespace qdiscord;
using namespace qdiscord::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Kept for criterion 9.
std::string measure_zero_reference;

Outcome measure_zero_witness() {
  Outcome o;
  for (Dims dims : {Dims{2, 2}, Dims{2, 3}}) {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::measure_zero;
    cfg.dims = dims;
    cfg.trials = 10000;
    cfg.seed = 42;
    cfg.workers = 1;
    const auto r = run_experiment(cfg);
    const double frac = r.aggregates["fraction_in_c0"].get<double>();
    const double min_norm = r.aggregates["min_norm"].get<double>();
    o.detail << " dims " << format_dims(dims) << ": fraction=" << frac << " min_norm=" << min_norm
             << " time=" << r.wall_clock_seconds << "s;";
    o.require(r.records.size() == 10000, "record count");
    o.require(frac == 0.0, "fraction in C0 must be exactly 0");
    o.require(min_norm > 1e-6, "minimum norm must exceed 1e-6");
    o.require(r.wall_clock_seconds <= 60.0, "runtime <= 60 s");
    if (dims == Dims{2, 2}) measure_zero_reference = r.dump(false);
  }
  return o;
}

Outcome nowhere_dense_witness() {
  Outcome o;
  ExperimentConfig cfg;
  cfg.experiment = ExperimentKind::perturbation;
  cfg.dims = {2, 2};
  cfg.trials = 1000;
  cfg.seed = 7;
  cfg.etas = {1e-3, 1e-6};
  cfg.thresholds.crossing_tol = 1e-10;
  const auto r = run_experiment(cfg);
  for (const auto& e : r.aggregates["per_eta"]) {
    const double f = e["escape_fraction"].get<double>();
    o.detail << " eta=" << e["eta"].get<double>() << ": escape=" << f
             << " min_norm=" << e["min"].get<double>() << ";";
    o.require(f == 1.0, "escape fraction must be 1.0");
  }
  o.detail << " time=" << r.wall_clock_seconds << "s";
  o.require(r.wall_clock_seconds <= 60.0, "runtime <= 60 s");
  return o;
}

Outcome zero_discord_soundness() {
  Outcome o;
  SeededSampler master(2718);
  double worst_norm = 0, worst_discord = 0;
  for (int i = 0; i < 500; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    const Dims dims = small_dims()[static_cast<size_t>(i) % small_dims().size()];
    const auto rho = random_zero_discord(dims, s);
    OptimizerConfig cfg;
    cfg.seed = s.child(1).master_seed();
    worst_norm = std::max(worst_norm, commutator_criterion(rho));
    worst_discord = std::max(worst_discord, discord(rho, cfg).discord);
  }
  const double bell_norm = commutator_criterion(bell_state());
  const double bell_d = discord(bell_state()).discord;
  o.detail << " 500 constructed states: max norm=" << worst_norm << " max D=" << worst_discord
           << "; Bell: norm=" << bell_norm << " D=" << bell_d;
  o.require(worst_norm <= 1e-10, "constructed norm <= 1e-10");
  o.require(worst_discord <= 1e-6, "constructed discord <= 1e-6");
  o.require(bell_norm <= 1e-12, "Bell norm <= 1e-12");
  o.require(std::abs(bell_d - 1.0) <= 1e-4, "Bell discord 1 +- 1e-4");
  return o;
}

Outcome optimizer_vs_grid() {
  Outcome o;
  SeededSampler master(31415);
  double worst = 0;
  for (int i = 0; i < 50; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    const auto rho = random_mixed_state({2, 2}, s);
    const double j_opt = classical_correlations(rho).value;
    const double j_grid = grid_classical_correlations(rho.matrix(), 180, 360);
    worst = std::max(worst, std::abs(j_opt - j_grid));
  }
  const double bell_d = discord(bell_state()).discord;
  double product_d = 0;
  for (int i = 0; i < 20; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(1000 + i));
    const auto prod = tensor_product(random_mixed_state({2, 1}, s).matrix(),
                                     random_mixed_state({2, 1}, s).matrix());
    product_d = std::max(product_d, discord(prod).discord);
  }
  o.detail << " max |J_opt - J_grid|=" << worst << " over 50 states; Bell D=" << bell_d
           << "; max product D=" << product_d;
  o.require(worst <= 1e-4, "grid agreement 1e-4");
  o.require(std::abs(bell_d - 1.0) <= 1e-6, "Bell D 1 +- 1e-6");
  o.require(product_d <= 1e-9, "product D <= 1e-9");
  return o;
}

Outcome structure_constant_path() {
  Outcome o;
  SeededSampler master(1618);
  double worst = 0;
  for (const Dims& dims : small_dims()) {
    for (int i = 0; i < 100; ++i) {
      SeededSampler s = master.child(static_cast<std::uint64_t>(100 * dims.a + 10 * dims.b + i));
      const auto rho = random_mixed_state(dims, s);
      const CMatrix via = commutator_from_bloch(commutator_bloch(to_bloch(rho)), dims);
      worst = std::max(worst, (via - reduced_commutator(rho)).cwiseAbs().maxCoeff());
    }
  }
  // equivalence on states inside C0 (zero discord, Bell, Werner, maximally mixed)
  // and generic states outside it
  int agree = 0, total = 0, positives = 0;
  auto check = [&](const DensityMatrixd& rho) {
    const bool by_residual = c0_residuals(to_bloch(rho)).cwiseAbs().maxCoeff() <= 1e-10;
    const bool by_norm = commutator_criterion(rho) <= 1e-10;
    ++total;
    if (by_residual == by_norm) ++agree;
    if (by_norm) ++positives;
  };
  for (const Dims& dims : small_dims()) {
    for (int i = 0; i < 50; ++i) {
      SeededSampler s = master.child(static_cast<std::uint64_t>(9000 + 100 * dims.a + 10 * dims.b + i));
      check(random_zero_discord(dims, s));
      check(random_mixed_state(dims, s));
    }
    check(DensityMatrixd::maximally_mixed(dims));
  }
  check(bell_state());
  check(werner(0.3));
  o.detail << " max elementwise deviation=" << worst << "; residual/norm agreement " << agree << "/"
           << total << " (" << positives << " inside C0)";
  o.require(worst <= 1e-10, "elementwise 1e-10");
  o.require(agree == total, "residual <=> norm");
  o.require(positives > 0 && positives < total, "mixed positive and negative cases");
  return o;
}

Outcome crossing_bound_check() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  struct Case {
    ChannelKind kind;
    double strength;
    long limit;  // -1: use the computed bound only
  };
  const Case cases[] = {{ChannelKind::global_depolarizing, 0.01, 0},
                        {ChannelKind::local_dephasing, 0.01, 2},
                        {ChannelKind::local_depolarizing, 0.01, -1},
                        {ChannelKind::amplitude_damping, 0.01, -1}};
  long violations = 0;
  for (const Case& c : cases) {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::trajectory;
    cfg.dims = {2, 2};
    cfg.trials = 100;
    cfg.steps = 10000;
    cfg.seed = 99;
    cfg.channel = ChannelDescriptor{c.kind, c.strength, {2, 2}, std::nullopt};
    const auto r = run_experiment(cfg);
    const long max_c = r.aggregates["max_crossings"].get<long>();
    const long bound = r.aggregates["crossing_bound"].get<long>();
    violations += r.aggregates["bound_violations"].get<long>();
    o.detail << " " << to_string(c.kind) << ": distinct=" << r.aggregates["distinct_eigenvalues"]
             << " bound=" << bound << " max_crossings=" << max_c
             << " vanishing=" << r.aggregates["permanent_vanishing_count"] << ";";
    if (c.limit >= 0) o.require(max_c <= c.limit, to_string(c.kind) + " crossing limit");
    o.require(r.aggregates["permanent_vanishing_count"].get<long>() == 0, "no permanent vanishing");
  }
  const double t = seconds_since(t0);
  o.detail << " violations=" << violations << " time=" << t << "s";
  o.require(violations == 0, "zero bound violations");
  o.require(t <= 300.0, "runtime <= 5 min");
  return o;
}

Outcome spectral_machinery() {
  Outcome o;
  SeededSampler master(4242);
  double worst_bi = 0, worst_lam = 0, worst_ev = 0;
  int channels = 0;
  for (const Dims& dims : small_dims()) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(10 * dims.a + dims.b));
    std::vector<QuantumChannel> list;
    for (ChannelKind k : {ChannelKind::global_depolarizing, ChannelKind::local_depolarizing,
                          ChannelKind::local_dephasing, ChannelKind::amplitude_damping})
      list.push_back(make_channel(k, 0.05 + 0.9 * s.uniform(), dims));
    list.push_back(make_replacement_channel(random_mixed_state(dims, s), 0.05 + 0.9 * s.uniform()));
    for (const auto& ch : list) {
      ++channels;
      const auto sd = spectral_decompose(ch);
      const Index n = sd.eigenvalues.size();
      for (Index i = 0; i < n; ++i)
        for (Index j = 0; j < n; ++j) {
          const cplx g = (sd.left_ops[size_t(i)].adjoint() * sd.right_ops[size_t(j)]).trace();
          worst_bi = std::max(worst_bi, std::abs(g - cplx(i == j ? 1.0 : 0.0)));
        }
      worst_lam = std::max(worst_lam, std::abs(sd.eigenvalues.cwiseAbs().maxCoeff() - 1.0));
      const auto rho = random_mixed_state(dims, s);
      for (long steps : {1L, 2L, 5L, 10L, 50L})
        worst_ev = std::max(worst_ev, (evolve(ch, rho, steps).matrix() -
                                       evolve_spectral(sd, rho, steps).matrix())
                                          .cwiseAbs()
                                          .maxCoeff());
    }
  }
  o.detail << " " << channels << " channels: biorthogonality=" << worst_bi
           << " | max|lambda| - 1 |=" << worst_lam << " evolve mismatch=" << worst_ev;
  o.require(worst_bi <= 1e-8, "biorthogonality 1e-8");
  o.require(worst_lam <= 1e-10, "max|lambda| = 1 +- 1e-10");
  o.require(worst_ev <= 1e-8, "evolution agreement 1e-8");
  return o;
}

Outcome steady_state_condition() {
  Outcome o;
  const long n_max = 10000;
  SeededSampler master(5150);
  TrajectoryOptions opts;
  opts.record_states = false;

  // Steady state I/d inside C0: strictly decreasing tail, never exactly zero.
  const auto glob = make_channel(ChannelKind::global_depolarizing, 0.01, {2, 2});
  const bool glob_in = in_c0(steady_state(spectral_decompose(glob)));
  int monotone = 0, nonzero = 0, tested = 0;
  double smallest = 1;
  for (int i = 0; i < 20; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    const auto rho = random_mixed_state({2, 2}, s);
    if (commutator_criterion(rho) <= 1e-3) continue;
    ++tested;
    const auto t = run_trajectory(glob, rho, n_max, 1e-8, opts);
    bool mono = true, pos = true;
    for (long n = n_max / 10 + 1; n <= n_max; ++n)
      mono = mono && t.commutator_norms[size_t(n)] < t.commutator_norms[size_t(n - 1)];
    for (double v : t.commutator_norms) pos = pos && v > 0.0;
    smallest = std::min(smallest, t.commutator_norms.back());
    monotone += mono;
    nonzero += pos;
  }

  // Steady state outside C0: norm stays bounded away from zero.
  SeededSampler s = master.child(777);
  DensityMatrixd target = random_mixed_state({2, 2}, s);
  while (commutator_criterion(target) <= 1e-2) target = random_mixed_state({2, 2}, s);
  const auto repl = make_replacement_channel(target, 0.05);
  const auto sd = spectral_decompose(repl);
  const double target_norm = commutator_criterion(steady_state(sd));
  double tail_min = 1e300;
  for (int i = 0; i < 20; ++i) {
    SeededSampler si = master.child(static_cast<std::uint64_t>(1000 + i));
    const auto t = run_trajectory(repl, random_mixed_state({2, 2}, si), n_max, 1e-8, opts);
    for (long n = n_max / 10; n <= n_max; ++n) tail_min = std::min(tail_min, t.commutator_norms[size_t(n)]);
  }
  o.detail << " depolarizing: steady in C0=" << glob_in << ", monotone tails " << monotone << "/" << tested
           << ", never zero " << nonzero << "/" << tested << ", smallest final norm=" << smallest
           << "; replacement: steady norm=" << target_norm << ", tail min=" << tail_min;
  o.require(glob_in, "depolarizing steady state in C0");
  o.require(tested > 0 && monotone == tested, "monotone decay in final decade");
  o.require(nonzero == tested, "no exact zero at finite n");
  o.require(!in_c0(steady_state(sd)), "replacement steady state outside C0");
  o.require(tail_min >= 0.5 * target_norm, "bounded away from zero");
  return o;
}

Outcome determinism() {
  Outcome o;
  bool all_equal = !measure_zero_reference.empty();
  for (int workers : {1, 8}) {
    ExperimentConfig cfg;
    cfg.experiment = ExperimentKind::measure_zero;
    cfg.dims = {2, 2};
    cfg.trials = 10000;
    cfg.seed = 42;
    cfg.workers = workers;
    const auto r = run_experiment(cfg);
    const bool same = r.dump(false) == measure_zero_reference;
    o.detail << " workers=" << workers << ": " << (same ? "identical" : "DIFFERENT") << ";";
    all_equal = all_equal && same;
  }
  o.detail << " report bytes=" << measure_zero_reference.size();
  o.require(all_equal, "byte-identical reports");
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"1 measure-zero witness", measure_zero_witness},
      {"2 nowhere-dense witness", nowhere_dense_witness},
      {"3 zero-discord states lie in C0, Bell witness", zero_discord_soundness},
      {"4 discord optimizer vs grid oracle", optimizer_vs_grid},
      {"5 structure-constant commutator path", structure_constant_path},
      {"6 crossing bound", crossing_bound_check},
      {"7 spectral machinery", spectral_machinery},
      {"8 steady-state condition", steady_state_condition},
      {"9 determinism across worker counts", determinism},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " exception: " << e.what();
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %s (%.1fs):%s\n", o.pass ? "PASS" : "FAIL", name, seconds_since(t0),
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(std::size(criteria)) - failures,
              std::size(criteria));
  return failures == 0 ? 0 : 1;
}
