#include "qdiscord/channels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <numbers>
#include <sstream>

namespace qdiscord {

std::string to_string(ChannelKind kind) {
  switch (kind) {
    case ChannelKind::global_depolarizing: return "global_depolarizing";
    case ChannelKind::local_depolarizing: return "local_depolarizing";
    case ChannelKind::local_dephasing: return "local_dephasing";
    case ChannelKind::amplitude_damping: return "amplitude_damping";
    case ChannelKind::replacement: return "replacement";
  }
  return "unknown";
}

ChannelKind channel_kind_from_string(const std::string& name) {
  for (auto k : {ChannelKind::global_depolarizing, ChannelKind::local_depolarizing,
                 ChannelKind::local_dephasing, ChannelKind::amplitude_damping,
                 ChannelKind::replacement}) {
    std::string s = to_string(k);
    std::string dashed = s;
    std::replace(dashed.begin(), dashed.end(), '_', '-');
    if (name == s || name == dashed) return k;
  }
  throw InvalidArgument("unknown channel kind '" + name + "'");
}

namespace {

CMatrix vec(const CMatrix& m) { return m.reshaped(m.size(), 1); }

CMatrix unvec(const CVector& v, Index d) { return v.reshaped(d, d); }

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

}  // namespace

QuantumChannel::QuantumChannel(Dims dims, std::vector<CMatrix> kraus)
    : dims_(dims), kraus_(std::move(kraus)) {
  const Index d = dims_.total();
  if (dims_.a < 1 || dims_.b < 1) throw InvalidDimension("dimensions must be positive");
  if (kraus_.empty()) throw InvalidArgument("channel needs at least one Kraus operator");
  CMatrix tp = CMatrix::Zero(d, d);
  superop_ = CMatrix::Zero(d * d, d * d);
  for (const CMatrix& k : kraus_) {
    if (k.rows() != d || k.cols() != d) throw InvalidDimension("Kraus operator size mismatch");
    tp += k.adjoint() * k;
    superop_ += kron(CMatrix(k.conjugate()), k);
  }
  const double tp_err = (tp - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (tp_err > tol::state) {
    std::ostringstream os;
    os << "Kraus set is not trace preserving (deviation " << tp_err << ")";
    throw InvalidArgument(os.str());
  }
  const double lmin = min_eigenvalue(choi());
  if (lmin < -tol::state) {
    std::ostringstream os;
    os << "map is not completely positive (Choi min eigenvalue " << lmin << ")";
    throw InvalidArgument(os.str());
  }
}

CMatrix QuantumChannel::apply(const CMatrix& rho) const {
  return unvec(superop_ * vec(rho), dims_.total());
}

DensityMatrixd QuantumChannel::apply(const DensityMatrixd& rho) const {
  if (rho.dims() != dims_) throw InvalidDimension("state dims do not match channel");
  return DensityMatrixd::trusted(dims_, hermitize(apply(rho.matrix())));
}

CMatrix QuantumChannel::choi() const {
  const Index d = dims_.total();
  CMatrix c = CMatrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      CMatrix unit = CMatrix::Zero(d, d);
      unit(i, j) = 1.0;
      CMatrix out = CMatrix::Zero(d, d);
      for (const CMatrix& k : kraus_) out += k * unit * k.adjoint();
      c.block(i * d, j * d, d, d) = out;
    }
  return c;
}

namespace {

void check_strength(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    std::ostringstream os;
    os << name << " must lie in [0, 1], got " << x;
    throw InvalidArgument(os.str());
  }
}

/// {sqrt(1-p) 1, sqrt(p/d) |i><j|}: rho -> (1-p) rho + p Tr[rho] 1/d.
std::vector<CMatrix> depolarizing_kraus(Index d, double p) {
  std::vector<CMatrix> k;
  k.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(d, d));
  const double w = std::sqrt(p / static_cast<double>(d));
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) {
      CMatrix e = CMatrix::Zero(d, d);
      e(i, j) = w;
      k.push_back(std::move(e));
    }
  return k;
}

std::vector<CMatrix> dephasing_kraus(Index d, double q) {
  CMatrix z = CMatrix::Zero(d, d);
  for (Index j = 0; j < d; ++j)
    z(j, j) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(d));
  if (d == 2) z(1, 1) = -1.0;
  return {std::sqrt(1.0 - q) * CMatrix::Identity(d, d), std::sqrt(q) * z};
}

std::vector<CMatrix> damping_kraus(Index d, double gamma) {
  std::vector<CMatrix> k;
  CMatrix k0 = CMatrix::Zero(d, d);
  k0(0, 0) = 1.0;
  for (Index j = 1; j < d; ++j) k0(j, j) = std::sqrt(1.0 - gamma);
  k.push_back(std::move(k0));
  for (Index j = 1; j < d; ++j) {
    CMatrix e = CMatrix::Zero(d, d);
    e(0, j) = std::sqrt(gamma);
    k.push_back(std::move(e));
  }
  return k;
}

std::vector<CMatrix> on_a(const std::vector<CMatrix>& kraus_a, Index db) {
  std::vector<CMatrix> out;
  out.reserve(kraus_a.size());
  const CMatrix id = CMatrix::Identity(db, db);
  for (const CMatrix& k : kraus_a) out.push_back(kron(k, id));
  return out;
}

}  // namespace

QuantumChannel make_channel(ChannelKind kind, double strength, Dims dims) {
  if (dims.a < 1 || dims.b < 1) throw InvalidDimension("dimensions must be positive");
  switch (kind) {
    case ChannelKind::global_depolarizing:
      check_strength(strength, "p");
      return QuantumChannel(dims, depolarizing_kraus(dims.total(), strength));
    case ChannelKind::local_depolarizing:
      check_strength(strength, "p");
      return QuantumChannel(dims, on_a(depolarizing_kraus(dims.a, strength), dims.b));
    case ChannelKind::local_dephasing:
      check_strength(strength, "q");
      return QuantumChannel(dims, on_a(dephasing_kraus(dims.a, strength), dims.b));
    case ChannelKind::amplitude_damping:
      check_strength(strength, "gamma");
      return QuantumChannel(dims, on_a(damping_kraus(dims.a, strength), dims.b));
    case ChannelKind::replacement:
      throw InvalidArgument("replacement channel needs a target state");
  }
  throw InvalidArgument("unknown channel kind");
}

QuantumChannel make_replacement_channel(const DensityMatrixd& target, double p) {
  check_strength(p, "p");
  const Index d = target.dim();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(target.matrix()));
  std::vector<CMatrix> k;
  k.push_back(std::sqrt(1.0 - p) * CMatrix::Identity(d, d));
  for (Index i = 0; i < d; ++i) {
    const double s = std::max(es.eigenvalues()(i), 0.0);
    if (s == 0.0) continue;
    for (Index j = 0; j < d; ++j) {
      CMatrix e = std::sqrt(p * s) * es.eigenvectors().col(i) * CVector::Unit(d, j).adjoint();
      k.push_back(std::move(e));
    }
  }
  return QuantumChannel(target.dims(), std::move(k));
}

QuantumChannel make_channel(const ChannelDescriptor& desc) {
  if (desc.kind == ChannelKind::replacement) {
    if (!desc.target) throw InvalidArgument("replacement channel needs a target state");
    if (desc.target->dims() != desc.dims) throw InvalidDimension("target dims mismatch");
    return make_replacement_channel(*desc.target, desc.strength);
  }
  return make_channel(desc.kind, desc.strength, desc.dims);
}

QuantumChannel identity_channel(Dims dims) {
  return QuantumChannel(dims, {CMatrix::Identity(dims.total(), dims.total())});
}

CMatrix SpectralDecomposition::reconstruct() const {
  const Index n = eigenvalues.size();
  CMatrix out = CMatrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    out += eigenvalues(i) * vec(right_ops[static_cast<size_t>(i)]) *
           vec(left_ops[static_cast<size_t>(i)]).adjoint();
  return out;
}

SpectralDecomposition spectral_decompose(const QuantumChannel& ch, double cluster_tol) {
  return spectral_decompose(ch.superop(), ch.dims(), cluster_tol);
}

SpectralDecomposition spectral_decompose(const CMatrix& s, Dims dims, double cluster_tol) {
  const Index n = s.rows();
  const Index d = dims.total();
  if (n != d * d || s.cols() != n) throw InvalidDimension("superoperator size does not match dims");
  Eigen::ComplexEigenSolver<CMatrix> es(s, /*computeEigenvectors=*/false);
  if (es.info() != Eigen::Success) throw UnsupportedMap("superoperator eigensolver failed");
  const CVector raw = es.eigenvalues();

  // Single-linkage clustering of the raw spectrum.
  std::vector<int> label(static_cast<size_t>(n));
  std::iota(label.begin(), label.end(), 0);
  auto find = [&](int i) {
    while (label[static_cast<size_t>(i)] != i) i = label[static_cast<size_t>(i)];
    return i;
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (std::abs(raw(i) - raw(j)) <= cluster_tol) {
        const int a = find(static_cast<int>(i));
        const int b = find(static_cast<int>(j));
        if (a != b) label[static_cast<size_t>(std::max(a, b))] = std::min(a, b);
      }
  std::vector<int> roots;
  std::vector<std::vector<Index>> members;
  for (Index i = 0; i < n; ++i) {
    const int r = find(static_cast<int>(i));
    auto it = std::find(roots.begin(), roots.end(), r);
    if (it == roots.end()) {
      roots.push_back(r);
      members.push_back({i});
    } else {
      members[static_cast<size_t>(it - roots.begin())].push_back(i);
    }
  }

  SpectralDecomposition sd;
  sd.dims = dims;
  sd.cluster_tolerance = cluster_tol;
  sd.eigenvalues.resize(n);
  CMatrix v(n, n);
  const double scale = std::max(1.0, s.norm());
  Index col = 0;
  for (const auto& group : members) {
    cplx center(0);
    for (Index i : group) center += raw(i);
    center /= static_cast<double>(group.size());
    const Index m = static_cast<Index>(group.size());
    const CMatrix shifted = s - center * CMatrix::Identity(n, n);
    Eigen::JacobiSVD<CMatrix> svd(shifted, Eigen::ComputeFullV);
    const double largest_kept = svd.singularValues()(n - m);
    if (largest_kept > 1e-6 * scale) {
      std::ostringstream os;
      os << "superoperator is not diagonalizable: eigenvalue " << center << " has algebraic multiplicity "
         << m << " but a deficient eigenspace (singular value " << largest_kept << ")";
      throw UnsupportedMap(os.str());
    }
    v.middleCols(col, m) = svd.matrixV().rightCols(m);
    sd.eigenvalues.segment(col, m).setConstant(center);
    sd.clusters.push_back({center, static_cast<int>(m)});
    col += m;
  }
  sd.n_distinct = static_cast<Index>(sd.clusters.size());

  Eigen::JacobiSVD<CMatrix> cond_svd(v);
  const auto& sv = cond_svd.singularValues();
  sd.condition_number = sv(0) / sv(n - 1);
  if (!(sd.condition_number < 1e10)) {
    std::ostringstream os;
    os << "superoperator is not diagonalizable: eigenvector condition number "
       << sd.condition_number;
    throw UnsupportedMap(os.str());
  }
  const CMatrix w = v.partialPivLu().inverse();
  sd.right_ops.reserve(static_cast<size_t>(n));
  sd.left_ops.reserve(static_cast<size_t>(n));
  for (Index i = 0; i < n; ++i) {
    sd.right_ops.push_back(unvec(v.col(i), d));
    sd.left_ops.push_back(unvec(w.row(i).adjoint(), d));
  }
  sd.unitary = (sd.eigenvalues.cwiseAbs().array() >= 1.0 - 1e-10).all();
  return sd;
}

DensityMatrixd evolve(const QuantumChannel& ch, const DensityMatrixd& rho, long steps) {
  if (steps < 0) throw InvalidArgument("step count must be non-negative");
  if (rho.dims() != ch.dims()) throw InvalidDimension("state dims do not match channel");
  CVector x = vec(rho.matrix());
  for (long n = 0; n < steps; ++n) x = ch.superop() * x;
  return DensityMatrixd::trusted(rho.dims(), hermitize(unvec(x, rho.dim())));
}

DensityMatrixd evolve_spectral(const SpectralDecomposition& sd, const DensityMatrixd& rho,
                               long steps) {
  if (steps < 0) throw InvalidArgument("step count must be non-negative");
  if (rho.dims() != sd.dims) throw InvalidDimension("state dims do not match channel");
  if (steps == 0) return rho;
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (size_t i = 0; i < sd.right_ops.size(); ++i) {
    const cplx coeff = (sd.left_ops[i].adjoint() * rho.matrix()).trace();
    const cplx lam = std::pow(sd.eigenvalues(static_cast<Index>(i)), static_cast<int>(steps));
    out += coeff * lam * sd.right_ops[i];
  }
  return DensityMatrixd::trusted(rho.dims(), hermitize(out));
}

long crossing_bound(Index n_distinct) {
  const long k = static_cast<long>(n_distinct);
  return std::max(0L, k * (k - 1) / 2 - 1);
}

long crossing_bound(const SpectralDecomposition& sd) { return crossing_bound(sd.n_distinct); }

Index distinct_pair_products(const SpectralDecomposition& sd) {
  std::vector<cplx> products;
  for (size_t i = 0; i < sd.clusters.size(); ++i)
    for (size_t j = i; j < sd.clusters.size(); ++j) {
      const cplx v = sd.clusters[i].center * sd.clusters[j].center;
      const bool seen = std::any_of(products.begin(), products.end(), [&](cplx u) {
        return std::abs(u - v) <= sd.cluster_tolerance;
      });
      if (!seen) products.push_back(v);
    }
  return static_cast<Index>(products.size());
}

namespace {

std::vector<size_t> unit_eigen_indices(const SpectralDecomposition& sd) {
  std::vector<size_t> out;
  for (Index i = 0; i < sd.eigenvalues.size(); ++i)
    if (std::abs(sd.eigenvalues(i) - 1.0) <= sd.cluster_tolerance) out.push_back(static_cast<size_t>(i));
  return out;
}

}  // namespace

DensityMatrixd steady_state(const SpectralDecomposition& sd) {
  if (sd.unitary)
    throw UnsupportedMap("map has an all-unit-modulus spectrum (no decoherence); no unique steady state");
  const auto idx = unit_eigen_indices(sd);
  if (idx.size() != 1) {
    std::ostringstream os;
    os << "eigenvalue 1 has multiplicity " << idx.size() << "; steady state is not unique";
    throw NonUniqueSteadyState(os.str(), static_cast<int>(idx.size()));
  }
  const CMatrix& mu = sd.right_ops[idx.front()];
  const cplx tr = mu.trace();
  if (std::abs(tr) < 1e-12) throw NumericalInconsistency("steady eigenoperator is traceless");
  return DensityMatrixd(sd.dims, hermitize(mu / tr));
}

DensityMatrixd asymptotic_state(const SpectralDecomposition& sd, const DensityMatrixd& rho) {
  if (rho.dims() != sd.dims) throw InvalidDimension("state dims do not match channel");
  CMatrix out = CMatrix::Zero(rho.dim(), rho.dim());
  for (size_t i : unit_eigen_indices(sd))
    out += (sd.left_ops[i].adjoint() * rho.matrix()).trace() * sd.right_ops[i];
  return DensityMatrixd(sd.dims, hermitize(out));
}

long Trajectory::transient_crossings() const {
  return static_cast<long>(std::count_if(crossings.begin(), crossings.end(), [](const auto& c) {
    return c.enter > 0 && c.exit.has_value();
  }));
}

std::optional<CrossingInterval> Trajectory::terminal() const {
  if (!crossings.empty() && !crossings.back().exit) return crossings.back();
  return std::nullopt;
}

std::vector<CrossingInterval> find_crossings(const std::vector<double>& norms, double threshold) {
  std::vector<CrossingInterval> out;
  bool inside = false;
  for (size_t n = 0; n < norms.size(); ++n) {
    const bool below = norms[n] < threshold;
    if (below && !inside) {
      out.push_back({static_cast<long>(n), std::nullopt});
      inside = true;
    } else if (!below && inside) {
      out.back().exit = static_cast<long>(n);
      inside = false;
    }
  }
  return out;
}

Trajectory run_trajectory(const QuantumChannel& ch, const DensityMatrixd& rho0, long n_max,
                          double c0_threshold, const TrajectoryOptions& opts) {
  if (n_max < 1) throw InvalidArgument("trajectory needs n_max >= 1");
  if (rho0.dims() != ch.dims()) throw InvalidDimension("state dims do not match channel");
  const Index d = ch.dim();
  const Dims dims = ch.dims();
  const CMatrix centre = CMatrix::Identity(d, d) / static_cast<double>(d);
  CMatrix drift = ch.apply(centre) - centre;
  if (drift.norm() <= 1e-14) drift.setZero();  // unital map

  Trajectory t;
  t.threshold = c0_threshold;
  const size_t count = static_cast<size_t>(n_max) + 1;
  t.times.reserve(count);
  t.commutator_norms.reserve(count);
  if (opts.record_states) t.states.reserve(count);
  if (opts.evaluate_discord) t.discord_values.emplace().reserve(count);

  CVector dev = vec(CMatrix(rho0.matrix() - centre));
  const CVector drift_vec = vec(drift);
  for (long n = 0; n <= n_max; ++n) {
    if (n > 0) {
      dev = ch.superop() * dev + drift_vec;
      // rho has unit trace, so the deviation is traceless. Trace-preserving maps never
      // damp a rounding-level trace component, which would swamp the decaying part.
      cplx tr(0);
      for (Index i = 0; i < d; ++i) tr += dev(i * d + i);
      for (Index i = 0; i < d; ++i) dev(i * d + i) -= tr / static_cast<double>(d);
    }
    const CMatrix dev_m = hermitize(unvec(dev, d));
    t.times.push_back(n);
    t.commutator_norms.push_back(centered_commutator(dev_m, dims).norm());
    if (opts.record_states || opts.evaluate_discord) {
      DensityMatrixd state = DensityMatrixd::trusted(dims, centre + dev_m);
      if (opts.evaluate_discord)
        t.discord_values->push_back(discord(state, opts.discord_config).discord);
      if (opts.record_states) t.states.push_back(std::move(state));
    }
  }
  t.crossings = find_crossings(t.commutator_norms, c0_threshold);
  return t;
}

}  // namespace qdiscord
