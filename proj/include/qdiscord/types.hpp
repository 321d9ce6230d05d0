#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qdiscord {

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using ComplexVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using cplx = Complex<double>;
using CMatrix = ComplexMatrix<double>;
using CVector = ComplexVector<double>;
using RMatrix = RealMatrix<double>;
using RVector = RealVector<double>;

using Index = Eigen::Index;

/// Local dimensions of a bipartite Hilbert space H_A (x) H_B.
struct Dims {
  Index a = 2;
  Index b = 2;

  constexpr Index total() const { return a * b; }
  friend constexpr bool operator==(const Dims&, const Dims&) = default;
};

enum class Subsystem { A, B };

/// Numerical tolerances shared across modules.
namespace tol {
inline constexpr double state = 1e-10;        // Hermiticity, trace, PSD
inline constexpr double entropy_clip = 1e-12;  // eigenvalues below contribute 0
inline constexpr double c0 = 1e-10;           // default C0 membership
inline constexpr double mutual_info = 1e-9;   // negative clamp window
inline constexpr double outcome = 1e-14;      // zero-probability outcome
inline constexpr double imag = 1e-12;         // real-coefficient truncation
}  // namespace tol

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidDimension : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class NotAState : public Error {
 public:
  NotAState(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

class NumericalInconsistency : public Error {
 public:
  using Error::Error;
};

class UnsupportedMap : public Error {
 public:
  using Error::Error;
};

class NonUniqueSteadyState : public Error {
 public:
  NonUniqueSteadyState(const std::string& what, int multiplicity)
      : Error(what), multiplicity_(multiplicity) {}
  int multiplicity() const { return multiplicity_; }

 private:
  int multiplicity_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace qdiscord
