#include <doctest.h>

#include "qdiscord/discord.hpp"
#include "qdiscord/io.hpp"
#include "qdiscord/sampling.hpp"
#include "test_helpers.hpp"

using namespace qdiscord;
using namespace qdiscord::testing;

TEST_CASE("sampler streams are reproducible and children independent") {
  SeededSampler a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  CHECK(a.counter() == 100);

  // resuming from a counter reproduces the stream
  SeededSampler c(42, 50), d(42);
  for (int i = 0; i < 50; ++i) d.next();
  CHECK(c.next() == d.next());

  const SeededSampler m(7);
  CHECK(m.child(3).master_seed() == m.child(3).master_seed());
  CHECK(m.child(3).master_seed() != m.child(4).master_seed());
  CHECK(m.child(0).master_seed() != SeededSampler(8).child(0).master_seed());
}

TEST_CASE("uniform, normal and exponential moments") {
  SeededSampler s(1);
  const int n = 100000;
  double su = 0, sn = 0, sn2 = 0, se = 0, sc2 = 0;
  double umin = 1, umax = 0;
  for (int i = 0; i < n; ++i) {
    const double u = s.uniform();
    umin = std::min(umin, u), umax = std::max(umax, u);
    su += u;
    const double z = s.normal();
    sn += z, sn2 += z * z;
    se += s.exponential();
    sc2 += std::norm(s.complex_normal());
  }
  CHECK(umin > 0.0);
  CHECK(umax < 1.0);
  CHECK(std::abs(su / n - 0.5) < 0.01);
  CHECK(std::abs(sn / n) < 0.02);
  CHECK(std::abs(sn2 / n - 1.0) < 0.02);
  CHECK(std::abs(se / n - 1.0) < 0.02);
  CHECK(std::abs(sc2 / n - 1.0) < 0.02);
}

TEST_CASE("random states are valid and deterministic") {
  for (const Dims& dims : small_dims()) {
    SeededSampler s1(9), s2(9);
    const auto r1 = random_mixed_state(dims, s1);
    const auto r2 = random_mixed_state(dims, s2);
    CHECK(r1.matrix() == r2.matrix());
    CHECK(is_state(r1.matrix(), 1e-12));
    CHECK(min_eigenvalue(r1.matrix()) > 0.0);

    const auto p = random_pure_state(dims, s1);
    CHECK(std::abs((p.matrix() * p.matrix()).trace().real() - 1.0) < 1e-12);
  }
  SeededSampler s(3);
  CHECK(random_pure_state(5, s).dims() == Dims{5, 1});
}

TEST_CASE("rank-one Ginibre states are pure") {
  SeededSampler s(21);
  for (int i = 0; i < 20; ++i) {
    const auto r = random_mixed_state({2, 2}, 1, s);
    CHECK(std::abs((r.matrix() * r.matrix()).trace().real() - 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(random_mixed_state({2, 2}, 0, s), InvalidArgument);
  CHECK_THROWS_AS(random_mixed_state({2, 2}, 5, s), InvalidArgument);
}

TEST_CASE("full-rank d = 4 states have positive spectrum") {
  SeededSampler master(5);
  for (int i = 0; i < 1000; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    CHECK(min_eigenvalue(random_mixed_state({2, 2}, s).matrix()) > 0.0);
  }
}

TEST_CASE("ensemble means approach the maximally mixed state") {
  SeededSampler master(31);
  CMatrix mixed_sum = CMatrix::Zero(4, 4), pure_sum = CMatrix::Zero(4, 4);
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    mixed_sum += random_mixed_state({2, 2}, s).matrix();
    pure_sum += random_pure_state({2, 2}, s).matrix();
  }
  const CMatrix target = CMatrix::Identity(4, 4) / 4.0;
  CHECK((mixed_sum / n - target).cwiseAbs().maxCoeff() < 0.01);
  CHECK((pure_sum / n - target).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("Haar unitaries") {
  SeededSampler s(12);
  CMatrix sum = CMatrix::Zero(3, 3);
  const int n = 5000;
  for (int i = 0; i < n; ++i) {
    const CMatrix u = random_unitary(3, s);
    CHECK((u.adjoint() * u - CMatrix::Identity(3, 3)).cwiseAbs().maxCoeff() < 1e-12);
    sum += u;
  }
  // E[U] = 0 under the Haar measure; the phase correction matters here.
  CHECK((sum / n).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("simplex draws") {
  SeededSampler s(13);
  RVector mean = RVector::Zero(4);
  for (int i = 0; i < 10000; ++i) {
    const RVector p = random_simplex(4, s);
    CHECK((p.array() > 0).all());
    CHECK(std::abs(p.sum() - 1.0) < 1e-14);
    mean += p;
  }
  CHECK((mean / 10000.0 - RVector::Constant(4, 0.25)).cwiseAbs().maxCoeff() < 0.01);
}

TEST_CASE("random zero-discord states") {
  SeededSampler master(14);
  for (int i = 0; i < 100; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    const auto rho = random_zero_discord({2, 2}, s);
    CHECK(commutator_criterion(rho) <= 1e-12);
    CHECK(omega0_residual(rho).residual <= 1e-10);
    OptimizerConfig cfg;
    cfg.restarts = 4;
    CHECK(discord(rho, cfg).discord <= 1e-6);
  }
  SeededSampler s(1);
  CHECK_THROWS_AS(random_zero_discord({1, 2}, s), InvalidDimension);
}

TEST_CASE("perturb") {
  SeededSampler s(15);
  const auto rho = random_zero_discord({2, 2}, s);

  SeededSampler s1 = s, s2 = s;
  const auto replaced = perturb(rho, 1.0, s1);
  CHECK((replaced.matrix() - random_mixed_state({2, 2}, s2).matrix()).norm() < 1e-15);

  for (double eta : {1e-2, 1e-4, 1e-6}) {
    SeededSampler t = s;
    const auto out = perturb(rho, eta, t);
    CHECK(is_state(out.matrix(), 1e-12));
    // trace distance is eta times the distance to the perturbation direction
    SeededSampler u = s;
    const auto sigma = random_mixed_state({2, 2}, u);
    CHECK(std::abs(trace_distance(out, rho) - eta * trace_distance(sigma, rho)) < 1e-12);
  }

  CHECK_THROWS_AS(perturb(rho, 0.0, s), InvalidArgument);
  CHECK_THROWS_AS(perturb(rho, 1.5, s), InvalidArgument);
  CHECK_THROWS_AS(perturb(rho, -0.1, s), InvalidArgument);
}

TEST_CASE("depolarize_toward_identity") {
  SeededSampler s(16);
  const auto rho = random_mixed_state({2, 3}, s);
  CHECK((depolarize_toward_identity(rho, 1.0).matrix() - CMatrix::Identity(6, 6) / 6.0).norm() < 1e-15);

  const double c = commutator_criterion(rho);
  for (double lambda : {0.0, 0.25, 0.5, 0.9}) {
    const double expect = (1 - lambda) * (1 - lambda) * c;
    CHECK(std::abs(commutator_criterion(depolarize_toward_identity(rho, lambda)) - expect) < 1e-12);
  }

  const auto zero = random_zero_discord({2, 2}, s);
  CHECK(omega0_residual(depolarize_toward_identity(zero, 0.5)).residual <= 1e-10);
  CHECK_THROWS_AS(depolarize_toward_identity(rho, 1.1), InvalidArgument);
}

TEST_CASE("segments towards the maximally mixed state stay outside C0") {
  SeededSampler master(17);
  int tested = 0;
  for (int i = 0; tested < 100; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    const auto rho = random_mixed_state({2, 2}, s);
    if (commutator_criterion(rho) <= 1e-3) continue;
    ++tested;
    for (int k = 0; k < 20; ++k) {
      const double lambda = 0.99 * k / 19.0;
      CHECK(commutator_criterion(depolarize_toward_identity(rho, lambda)) > 0.0);
    }
  }
}

TEST_CASE("mixtures of zero-discord states with unrelated bases leave C0") {
  SeededSampler master(18);
  int escaped = 0;
  const int n = 500;
  for (int i = 0; i < n; ++i) {
    SeededSampler s = master.child(static_cast<std::uint64_t>(i));
    const auto a = random_zero_discord({2, 2}, s);
    const auto b = random_zero_discord({2, 2}, s);
    if (commutator_criterion(mix(a, b, 0.5)) > 1e-8) ++escaped;
  }
  CHECK(escaped >= 0.99 * n);
}

TEST_CASE("golden pure-state ensemble") {
  const std::string path = std::string(QDISCORD_TEST_DATA) + "/pure_seed42_d4.jsonl";
  EnsembleHeader header;
  const auto frozen = read_ensemble_file(path, &header);
  CHECK(header.seed == 42);
  CHECK(header.ensemble == "pure");
  REQUIRE(frozen.size() == 3);
  SeededSampler master(42);
  for (size_t i = 0; i < frozen.size(); ++i) {
    SeededSampler s = master.child(i);
    const auto fresh = random_pure_state({2, 2}, s);
    CHECK((fresh.matrix() - frozen[i].matrix()).cwiseAbs().maxCoeff() == 0.0);
  }
}
