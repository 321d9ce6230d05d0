#pragma once

#include <cmath>
#include <vector>

#include "qdiscord/states.hpp"

namespace qdiscord::testing {

inline CMatrix diag(std::initializer_list<double> values) {
  CMatrix m = CMatrix::Zero(static_cast<Index>(values.size()), static_cast<Index>(values.size()));
  Index i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return m;
}

inline CMatrix ket_bra(Index d, Index i, Index j) {
  CMatrix m = CMatrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

/// |Phi+> = (|00> + |11>)/sqrt(2).
inline DensityMatrixd bell_state() {
  CVector psi = CVector::Zero(4);
  psi(0) = psi(3) = 1.0 / std::sqrt(2.0);
  return DensityMatrixd::pure({2, 2}, psi);
}

/// p |Phi+><Phi+| + (1 - p) 1/4.
inline DensityMatrixd werner(double p) {
  return DensityMatrixd({2, 2}, p * bell_state().matrix() + (1 - p) * CMatrix::Identity(4, 4) / 4.0);
}

inline double h2(std::initializer_list<double> probs) {
  double s = 0;
  for (double p : probs)
    if (p > 0) s -= p * std::log2(p);
  return s;
}

inline CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}
inline CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << 0, cplx(0, -1), cplx(0, 1), 0;
  return m;
}
inline CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline bool is_state(const CMatrix& m, double tolerance) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tolerance) return false;
  if (std::abs(m.trace() - cplx(1)) > tolerance) return false;
  return min_eigenvalue(m) >= -tolerance;
}

inline const std::vector<Dims>& small_dims() {
  static const std::vector<Dims> d{{2, 2}, {2, 3}, {3, 2}, {3, 3}};
  return d;
}

}  // namespace qdiscord::testing
