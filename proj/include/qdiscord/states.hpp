#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "qdiscord/types.hpp"

namespace qdiscord {

/// Kronecker product in the A-major convention: (A (x) B)[(a,b),(a',b')] = A[a,a'] B[b,b'].
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Smallest eigenvalue of the Hermitian part of `m`.
template <typename Derived>
auto min_eigenvalue(const Eigen::MatrixBase<Derived>& m) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix h = (m + m.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

/// Throws unless `m` is a Hermitian, unit-trace, positive semidefinite matrix.
template <typename Derived>
void check_state(const Eigen::MatrixBase<Derived>& m, double tolerance = tol::state) {
  if (m.rows() == 0 || m.rows() != m.cols())
    throw InvalidDimension("density matrix must be square and non-empty");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tolerance) {
    std::ostringstream os;
    os << "matrix is not Hermitian (max |rho - rho^dagger| = " << herm << ")";
    throw NotAState(os.str(), std::nan(""));
  }
  const double tr_err = std::abs(m.trace() - typename Derived::Scalar(1));
  if (tr_err > tolerance) {
    std::ostringstream os;
    os << "matrix trace differs from 1 by " << tr_err;
    throw NotAState(os.str(), std::nan(""));
  }
  const double lmin = static_cast<double>(min_eigenvalue(m));
  if (lmin < -tolerance) {
    std::ostringstream os;
    os << "matrix is not positive semidefinite (min eigenvalue " << lmin << ")";
    throw NotAState(os.str(), lmin);
  }
}

/// Bipartite density matrix on H_A (x) H_B. Immutable after construction.
template <typename Real>
class DensityMatrix {
 public:
  using Matrix = ComplexMatrix<Real>;

  /// Validates shape and the state invariants.
  DensityMatrix(Dims dims, Matrix matrix) : dims_(dims), matrix_(std::move(matrix)) {
    check_shape();
    check_state(matrix_);
  }

  /// Skips the eigenvalue check; for results that are states by construction.
  static DensityMatrix trusted(Dims dims, Matrix matrix) {
    DensityMatrix out(dims, std::move(matrix), Unchecked{});
    return out;
  }

  static DensityMatrix maximally_mixed(Dims dims) {
    if (dims.a < 1 || dims.b < 1) throw InvalidDimension("dimensions must be positive");
    return trusted(dims, Matrix::Identity(dims.total(), dims.total()) / Real(dims.total()));
  }

  /// |psi><psi| after normalizing psi.
  template <typename Derived>
  static DensityMatrix pure(Dims dims, const Eigen::MatrixBase<Derived>& psi) {
    if (psi.size() != dims.total()) throw InvalidDimension("state vector length mismatch");
    const Real n = psi.norm();
    if (!(n > Real(0))) throw InvalidArgument("zero state vector");
    ComplexVector<Real> v = psi / n;
    return trusted(dims, v * v.adjoint());
  }

  Dims dims() const { return dims_; }
  Index dim_a() const { return dims_.a; }
  Index dim_b() const { return dims_.b; }
  Index dim() const { return dims_.total(); }
  const Matrix& matrix() const { return matrix_; }

 private:
  struct Unchecked {};
  DensityMatrix(Dims dims, Matrix matrix, Unchecked) : dims_(dims), matrix_(std::move(matrix)) {
    check_shape();
  }

  void check_shape() const {
    if (dims_.a < 1 || dims_.b < 1) throw InvalidDimension("dimensions must be positive");
    if (matrix_.rows() != dims_.total() || matrix_.cols() != dims_.total())
      throw InvalidDimension("matrix size does not match dim_a * dim_b");
  }

  Dims dims_;
  Matrix matrix_;
};

using DensityMatrixd = DensityMatrix<double>;

/// Von Neumann entropy in bits.
template <typename Real>
struct EntropyValue {
  Real bits = 0;
};

template <typename DerivedA, typename DerivedB>
DensityMatrix<typename DerivedA::RealScalar> tensor_product(
    const Eigen::MatrixBase<DerivedA>& rho_a, const Eigen::MatrixBase<DerivedB>& rho_b) {
  using Real = typename DerivedA::RealScalar;
  if (rho_a.rows() < 1 || rho_b.rows() < 1) throw InvalidDimension("empty factor");
  check_state(rho_a);
  check_state(rho_b);
  return DensityMatrix<Real>::trusted({rho_a.rows(), rho_b.rows()}, kron(rho_a, rho_b));
}

/// Partial trace of a (d_A d_B)-square operator, keeping subsystem `keep`.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& op, Dims dims, Subsystem keep) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (op.rows() != dims.total() || op.cols() != dims.total())
    throw InvalidDimension("operator size does not match dims");
  if (keep == Subsystem::A) {
    Matrix out(dims.a, dims.a);
    for (Index i = 0; i < dims.a; ++i)
      for (Index j = 0; j < dims.a; ++j)
        out(i, j) = op.block(i * dims.b, j * dims.b, dims.b, dims.b).trace();
    return out;
  }
  Matrix out = Matrix::Zero(dims.b, dims.b);
  for (Index i = 0; i < dims.a; ++i) out += op.block(i * dims.b, i * dims.b, dims.b, dims.b);
  return out;
}

template <typename Real>
ComplexMatrix<Real> partial_trace(const DensityMatrix<Real>& rho, Subsystem keep) {
  return partial_trace(rho.matrix(), rho.dims(), keep);
}

/// Exchanges the roles of A and B.
template <typename Real>
DensityMatrix<Real> swap_subsystems(const DensityMatrix<Real>& rho) {
  const Dims d = rho.dims();
  ComplexMatrix<Real> out(d.total(), d.total());
  for (Index a = 0; a < d.a; ++a)
    for (Index b = 0; b < d.b; ++b)
      for (Index a2 = 0; a2 < d.a; ++a2)
        for (Index b2 = 0; b2 < d.b; ++b2)
          out(b * d.a + a, b2 * d.a + a2) = rho.matrix()(a * d.b + b, a2 * d.b + b2);
  return DensityMatrix<Real>::trusted({d.b, d.a}, std::move(out));
}

/// -sum p log2 p over a spectrum; eigenvalues below the clip threshold contribute 0.
template <typename Derived>
typename Derived::Scalar entropy_of_spectrum(const Eigen::MatrixBase<Derived>& eigenvalues) {
  using Real = typename Derived::Scalar;
  Real s = 0;
  for (Index i = 0; i < eigenvalues.size(); ++i) {
    const Real p = eigenvalues(i);
    if (p < Real(-tol::state)) {
      std::ostringstream os;
      os << "negative eigenvalue " << p << " in entropy argument";
      throw NotAState(os.str(), static_cast<double>(p));
    }
    if (p > Real(tol::entropy_clip)) s -= p * std::log2(p);
  }
  return std::max(s, Real(0));
}

template <typename Derived>
EntropyValue<typename Derived::RealScalar> von_neumann_entropy(
    const Eigen::MatrixBase<Derived>& rho) {
  using Matrix = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  Matrix h = (rho + rho.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  return {entropy_of_spectrum(es.eigenvalues())};
}

template <typename Real>
EntropyValue<Real> von_neumann_entropy(const DensityMatrix<Real>& rho) {
  return von_neumann_entropy(rho.matrix());
}

/// S(rho_A) + S(rho_B) - S(rho), in bits.
template <typename Real>
Real mutual_information(const DensityMatrix<Real>& rho) {
  const Real i = von_neumann_entropy(partial_trace(rho, Subsystem::A)).bits +
                 von_neumann_entropy(partial_trace(rho, Subsystem::B)).bits -
                 von_neumann_entropy(rho).bits;
  if (i < Real(-tol::mutual_info)) {
    std::ostringstream os;
    os << "mutual information evaluated to " << i;
    throw NumericalInconsistency(os.str());
  }
  return std::max(i, Real(0));
}

/// Frobenius norm of rho - sigma.
template <typename Real>
Real hs_distance(const DensityMatrix<Real>& rho, const DensityMatrix<Real>& sigma) {
  return (rho.matrix() - sigma.matrix()).norm();
}

/// Trace distance (1/2)||rho - sigma||_1.
template <typename Real>
Real trace_distance(const DensityMatrix<Real>& rho, const DensityMatrix<Real>& sigma) {
  ComplexMatrix<Real> diff = rho.matrix() - sigma.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es((diff + diff.adjoint()) / 2,
                                                       Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum() / 2;
}

}  // namespace qdiscord
