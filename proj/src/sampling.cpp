#include "qdiscord/sampling.hpp"

#include <string>

namespace qdiscord {

CMatrix ginibre(Index rows, Index cols, SeededSampler& s) {
  CMatrix g(rows, cols);
  // Row-major fill so the draw order does not depend on Eigen's storage order.
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) g(i, j) = s.complex_normal();
  return g;
}

CMatrix random_unitary(Index d, SeededSampler& s) {
  if (d < 1) throw InvalidDimension("unitary dimension must be positive");
  const CMatrix g = ginibre(d, d, s);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const cplx rjj = r(j, j);
    const double a = std::abs(rjj);
    if (a > 0) q.col(j) *= rjj / a;
  }
  return q;
}

RVector random_simplex(Index n, SeededSampler& s) {
  if (n < 1) throw InvalidDimension("simplex dimension must be positive");
  RVector p(n);
  for (Index i = 0; i < n; ++i) p(i) = s.exponential();
  return p / p.sum();
}

DensityMatrixd random_pure_state(Dims dims, SeededSampler& s) {
  if (dims.a < 1 || dims.b < 1) throw InvalidDimension("dimensions must be positive");
  const CMatrix psi = ginibre(dims.total(), 1, s);
  return DensityMatrixd::pure(dims, psi.col(0));
}

DensityMatrixd random_pure_state(Index d, SeededSampler& s) {
  return random_pure_state(Dims{d, 1}, s);
}

DensityMatrixd random_mixed_state(Dims dims, Index rank, SeededSampler& s) {
  const Index d = dims.total();
  if (dims.a < 1 || dims.b < 1) throw InvalidDimension("dimensions must be positive");
  if (rank < 1 || rank > d)
    throw InvalidArgument("rank must lie in [1, d], got " + std::to_string(rank));
  const CMatrix g = ginibre(d, rank, s);
  CMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = (rho + rho.adjoint()).eval() / 2.0;
  return DensityMatrixd::trusted(dims, std::move(rho));
}

DensityMatrixd random_mixed_state(Dims dims, SeededSampler& s) {
  return random_mixed_state(dims, dims.total(), s);
}

DensityMatrixd random_zero_discord(Dims dims, const ProjectiveMeasurement& basis,
                                   SeededSampler& s) {
  if (dims.a < 2 || dims.b < 2) throw InvalidDimension("zero-discord ensemble needs dims >= 2");
  if (basis.dim() != dims.a) throw InvalidDimension("basis dimension must equal d_A");
  const RVector p = random_simplex(dims.a, s);
  std::vector<CMatrix> sigmas;
  sigmas.reserve(static_cast<size_t>(dims.a));
  for (Index j = 0; j < dims.a; ++j)
    sigmas.push_back(random_mixed_state({dims.b, 1}, s).matrix());
  return make_zero_discord(p, basis, sigmas);
}

DensityMatrixd random_zero_discord(Dims dims, SeededSampler& s) {
  if (dims.a < 2 || dims.b < 2) throw InvalidDimension("zero-discord ensemble needs dims >= 2");
  const ProjectiveMeasurement basis(random_unitary(dims.a, s));
  return random_zero_discord(dims, basis, s);
}

DensityMatrixd mix(const DensityMatrixd& rho, const DensityMatrixd& sigma, double w) {
  if (rho.dims() != sigma.dims()) throw InvalidDimension("mixing states of different dims");
  if (!(w >= 0.0 && w <= 1.0)) throw InvalidArgument("mixing weight must lie in [0, 1]");
  return DensityMatrixd::trusted(rho.dims(), (1.0 - w) * rho.matrix() + w * sigma.matrix());
}

DensityMatrixd perturb(const DensityMatrixd& rho, double eta, SeededSampler& s) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InvalidArgument("perturbation strength must lie in (0, 1]");
  const DensityMatrixd sigma = random_mixed_state(rho.dims(), s);
  return mix(rho, sigma, eta);
}

DensityMatrixd depolarize_toward_identity(const DensityMatrixd& rho, double lambda) {
  return mix(rho, DensityMatrixd::maximally_mixed(rho.dims()), lambda);
}

}  // namespace qdiscord
