#include "qdiscord/discord.hpp"

#include <functional>
#include <sstream>

#include "nelder_mead.hpp"
#include "qdiscord/bloch.hpp"
#include "qdiscord/sampling.hpp"

namespace qdiscord {

ProjectiveMeasurement::ProjectiveMeasurement(CMatrix basis) : basis_(std::move(basis)) {
  if (basis_.rows() < 1 || basis_.rows() != basis_.cols())
    throw InvalidArgument("measurement basis must be a square matrix");
  const double err =
      (basis_.adjoint() * basis_ - CMatrix::Identity(basis_.rows(), basis_.cols())).cwiseAbs().maxCoeff();
  if (err > tol::state) {
    std::ostringstream os;
    os << "measurement basis is not orthonormal (deviation " << err << ")";
    throw InvalidArgument(os.str());
  }
}

ProjectiveMeasurement ProjectiveMeasurement::computational(Index d) {
  return ProjectiveMeasurement(CMatrix::Identity(d, d));
}

namespace {

double entropy_of_block(const CMatrix& m, double p) {
  if (m.rows() == 2) {
    const double a = m(0, 0).real();
    const double c = m(1, 1).real();
    const double half = 0.5 * (a - c);
    const double r = std::sqrt(half * half + std::norm(m(0, 1)));
    Eigen::Vector2d ev(((a + c) / 2 - r) / p, ((a + c) / 2 + r) / p);
    return entropy_of_spectrum(ev.cwiseMax(0.0));
  }
  const CMatrix h = (m + m.adjoint()) / (2.0 * p);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return entropy_of_spectrum(es.eigenvalues().cwiseMax(0.0));
}

/// (u^dagger (x) 1) rho (u (x) 1): the unnormalized conditional state of B.
CMatrix conditional_block(const CMatrix& rho, Dims d, const CVector& u) {
  CMatrix out = CMatrix::Zero(d.b, d.b);
  for (Index a = 0; a < d.a; ++a) {
    const cplx ca = std::conj(u(a));
    if (ca == cplx(0)) continue;
    for (Index a2 = 0; a2 < d.a; ++a2) {
      const cplx w = ca * u(a2);
      if (w == cplx(0)) continue;
      out += w * rho.block(a * d.b, a2 * d.b, d.b, d.b);
    }
  }
  return out;
}

double conditional_entropy_basis(const CMatrix& rho, Dims d, const CMatrix& basis) {
  double s = 0;
  for (Index j = 0; j < d.a; ++j) {
    const CMatrix m = conditional_block(rho, d, basis.col(j));
    const double p = m.trace().real();
    if (p < tol::outcome) continue;
    s += p * entropy_of_block(m, p);
  }
  return s;
}

/// exp(i H) for Hermitian H.
CMatrix unitary_exp(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  const Eigen::VectorXd& w = es.eigenvalues();
  CVector phases(w.size());
  for (Index i = 0; i < w.size(); ++i) phases(i) = std::polar(1.0, w(i));
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

struct BasisSearch {
  CMatrix basis;
  double value = 0;
  int restarts = 0;
  bool converged = false;
};

/// Multi-start simplex search over orthonormal bases of C^d. Restart 0 starts at
/// `first_start`; restart r > 0 at a Haar-random unitary from child stream r.
/// Bases are parametrized locally as U0 exp(i sum_k x_k g_k) over the d(d-1)
/// off-diagonal generators; diagonal generators only rephase basis vectors.
BasisSearch search_bases(Index d, const CMatrix& first_start,
                         const std::function<double(const CMatrix&)>& objective,
                         const OptimizerConfig& cfg) {
  const auto& gens = cached_basis<double>(d);
  const Index n_params = d * (d - 1);
  const SeededSampler master(cfg.seed);
  BasisSearch best;
  best.value = std::numeric_limits<double>::infinity();
  const int restarts = std::max(cfg.restarts, 1);
  for (int r = 0; r < restarts; ++r) {
    CMatrix start = first_start;
    if (r > 0) {
      SeededSampler s = master.child(static_cast<std::uint64_t>(r));
      start = random_unitary(d, s);
    }
    auto to_basis = [&](const Eigen::VectorXd& x) {
      CMatrix h = CMatrix::Zero(d, d);
      for (Index k = 0; k < n_params; ++k) h += x(k) * gens[k];
      return CMatrix(start * unitary_exp(h));
    };
    auto f = [&](const Eigen::VectorXd& x) { return objective(to_basis(x)); };
    auto run = detail::nelder_mead(f, Eigen::VectorXd::Zero(n_params), cfg.initial_step,
                                   cfg.tolerance, cfg.max_evaluations);
    // Restarting the simplex at its own optimum guards against premature collapse.
    auto polish = detail::nelder_mead(f, run.x, cfg.initial_step / 10, cfg.tolerance,
                                      cfg.max_evaluations);
    if (polish.value > run.value) polish = run;
    if (polish.value < best.value) {
      best.value = polish.value;
      best.basis = to_basis(polish.x);
      best.converged = polish.converged;
    }
    best.restarts = r + 1;
  }
  // Re-orthonormalize away round-off accumulated in the products above.
  Eigen::HouseholderQR<CMatrix> qr(best.basis);
  CMatrix q = qr.householderQ();
  const CMatrix rr = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j)
    if (std::abs(rr(j, j)) > 0) q.col(j) *= rr(j, j) / std::abs(rr(j, j));
  best.basis = q;
  return best;
}

CMatrix reduced_eigenbasis(const DensityMatrixd& rho, double* min_gap) {
  const CMatrix ra = partial_trace(rho, Subsystem::A);
  Eigen::SelfAdjointEigenSolver<CMatrix> es((ra + ra.adjoint()) / 2.0);
  if (min_gap) {
    double gap = std::numeric_limits<double>::infinity();
    for (Index i = 1; i < es.eigenvalues().size(); ++i)
      gap = std::min(gap, es.eigenvalues()(i) - es.eigenvalues()(i - 1));
    *min_gap = gap;
  }
  return es.eigenvectors();
}

}  // namespace

double conditional_entropy(const DensityMatrixd& rho, const ProjectiveMeasurement& m) {
  if (m.dim() != rho.dim_a()) throw InvalidDimension("measurement dimension must equal d_A");
  return conditional_entropy_basis(rho.matrix(), rho.dims(), m.basis());
}

ClassicalCorrelations classical_correlations(const DensityMatrixd& rho,
                                             const OptimizerConfig& cfg) {
  const Dims d = rho.dims();
  if (d.a < 2) throw InvalidDimension("measured subsystem needs d_A >= 2");
  const double s_b = von_neumann_entropy(partial_trace(rho, Subsystem::B)).bits;
  const CMatrix start = reduced_eigenbasis(rho, nullptr);
  const BasisSearch found = search_bases(
      d.a, start,
      [&](const CMatrix& basis) { return conditional_entropy_basis(rho.matrix(), d, basis); },
      cfg);
  ClassicalCorrelations out;
  out.value = std::max(0.0, s_b - found.value);
  out.measurement = ProjectiveMeasurement(found.basis);
  out.restarts_used = found.restarts;
  out.converged = found.converged;
  return out;
}

DiscordResult discord(const DensityMatrixd& rho, const OptimizerConfig& cfg) {
  const ClassicalCorrelations j = classical_correlations(rho, cfg);
  DiscordResult out;
  out.mutual_information = mutual_information(rho);
  out.classical_correlations = j.value;
  out.discord = out.mutual_information - j.value;
  if (out.discord < 0) {
    if (out.discord < -tol::mutual_info) {
      std::ostringstream os;
      os << "discord evaluated to " << out.discord;
      throw NumericalInconsistency(os.str());
    }
    out.discord = 0;
    out.classical_correlations = out.mutual_information;
  }
  out.optimal_measurement = j.measurement;
  out.optimizer_restarts_used = j.restarts_used;
  out.converged = j.converged;
  return out;
}

CMatrix centered_commutator(const CMatrix& deviation, Dims dims) {
  const CMatrix dev_a = partial_trace(deviation, dims, Subsystem::A);
  CMatrix out(dims.total(), dims.total());
  // [X, Y (x) 1]: block (i, j) is sum_k X_ik Y_kj - Y_ik X_kj.
  for (Index i = 0; i < dims.a; ++i)
    for (Index j = 0; j < dims.a; ++j) {
      auto blk = out.block(i * dims.b, j * dims.b, dims.b, dims.b);
      blk.setZero();
      for (Index k = 0; k < dims.a; ++k) {
        blk += dev_a(k, j) * deviation.block(i * dims.b, k * dims.b, dims.b, dims.b);
        blk -= dev_a(i, k) * deviation.block(k * dims.b, j * dims.b, dims.b, dims.b);
      }
    }
  return out;
}

CMatrix reduced_commutator(const DensityMatrixd& rho) {
  const CMatrix dev =
      rho.matrix() - CMatrix::Identity(rho.dim(), rho.dim()) / static_cast<double>(rho.dim());
  return centered_commutator(dev, rho.dims());
}

double commutator_criterion(const DensityMatrixd& rho) { return reduced_commutator(rho).norm(); }

bool in_c0(const DensityMatrixd& rho, double tolerance) {
  return commutator_criterion(rho) <= tolerance;
}

namespace {

CMatrix dephase_basis(const CMatrix& rho, Dims d, const CMatrix& basis) {
  CMatrix out = CMatrix::Zero(d.total(), d.total());
  for (Index j = 0; j < d.a; ++j) {
    const CVector u = basis.col(j);
    const CMatrix proj = kron(CMatrix(u * u.adjoint()), CMatrix::Identity(d.b, d.b));
    out += proj * rho * proj;
  }
  return out;
}

}  // namespace

CMatrix dephase_a(const DensityMatrixd& rho, const ProjectiveMeasurement& m) {
  if (m.dim() != rho.dim_a()) throw InvalidDimension("measurement dimension must equal d_A");
  return dephase_basis(rho.matrix(), rho.dims(), m.basis());
}

Omega0Residual omega0_residual(const DensityMatrixd& rho, const OptimizerConfig& cfg) {
  const Dims d = rho.dims();
  auto residual = [&](const CMatrix& basis) {
    return (rho.matrix() - dephase_basis(rho.matrix(), d, basis)).norm();
  };
  double gap = 0;
  const CMatrix eig = reduced_eigenbasis(rho, &gap);
  Omega0Residual out;
  if (gap >= 1e-8) {
    out.residual = residual(eig);
    out.best_basis = ProjectiveMeasurement(eig);
    return out;
  }
  const BasisSearch found = search_bases(d.a, eig, residual, cfg);
  out.residual = found.value;
  out.best_basis = ProjectiveMeasurement(found.basis);
  out.used_optimizer = true;
  out.converged = found.converged;
  return out;
}

DensityMatrixd make_zero_discord(const RVector& p, const ProjectiveMeasurement& basis,
                                 const std::vector<CMatrix>& sigmas) {
  const Index da = basis.dim();
  if (p.size() != da) throw InvalidArgument("probability vector length must equal d_A");
  if (static_cast<Index>(sigmas.size()) != da)
    throw InvalidArgument("need one conditional state per basis vector");
  if ((p.array() < -1e-12).any() || std::abs(p.sum() - 1.0) > tol::state)
    throw InvalidArgument("weights must be non-negative and sum to 1");
  const Index db = sigmas.front().rows();
  CMatrix out = CMatrix::Zero(da * db, da * db);
  for (Index j = 0; j < da; ++j) {
    const CMatrix& sigma = sigmas[static_cast<size_t>(j)];
    if (sigma.rows() != db) throw InvalidDimension("conditional states must share a dimension");
    check_state(sigma);
    out += std::max(p(j), 0.0) * kron(basis.projector(j), sigma);
  }
  out = (out + out.adjoint()).eval() / 2.0;
  return DensityMatrixd::trusted({da, db}, std::move(out));
}

}  // namespace qdiscord
