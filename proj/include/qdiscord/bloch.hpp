#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "qdiscord/states.hpp"

namespace qdiscord {

/// Traceless Hermitian generators of SU(d) with Tr[g_i g_j] = 2 delta_ij.
///
/// Ordering is generalized Gell-Mann: all symmetric off-diagonal matrices
/// |j><k| + |k><j| (j < k, lexicographic), then the antisymmetric ones
/// -i|j><k| + i|k><j| in the same pair order, then the d - 1 diagonal ones
/// sqrt(2/(l(l+1))) (sum_{j<l} |j><j| - l|l><l|), l = 1..d-1.
template <typename Real>
struct GeneratorBasis {
  Index dim = 0;
  std::vector<ComplexMatrix<Real>> generators;

  Index size() const { return static_cast<Index>(generators.size()); }
  const ComplexMatrix<Real>& operator[](Index i) const { return generators[static_cast<size_t>(i)]; }
};

template <typename Real>
GeneratorBasis<Real> build_generator_basis(Index d) {
  if (d < 2) throw InvalidDimension("generator basis needs d >= 2");
  using Matrix = ComplexMatrix<Real>;
  using C = Complex<Real>;
  GeneratorBasis<Real> basis;
  basis.dim = d;
  basis.generators.reserve(static_cast<size_t>(d * d - 1));
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      Matrix g = Matrix::Zero(d, d);
      g(j, k) = g(k, j) = C(1, 0);
      basis.generators.push_back(std::move(g));
    }
  for (Index j = 0; j < d; ++j)
    for (Index k = j + 1; k < d; ++k) {
      Matrix g = Matrix::Zero(d, d);
      g(j, k) = C(0, -1);
      g(k, j) = C(0, 1);
      basis.generators.push_back(std::move(g));
    }
  for (Index l = 1; l < d; ++l) {
    Matrix g = Matrix::Zero(d, d);
    const Real norm = std::sqrt(Real(2) / Real(l * (l + 1)));
    for (Index j = 0; j < l; ++j) g(j, j) = C(norm, 0);
    g(l, l) = C(-Real(l) * norm, 0);
    basis.generators.push_back(std::move(g));
  }
  return basis;
}

/// Real antisymmetric tensor with [g_i, g_j] = 2i sum_k f_ijk g_k, stored dense,
/// (d^2 - 1)^3 entries.
template <typename Real>
struct StructureConstants {
  Index dim = 0;
  Index n = 0;
  std::vector<Real> tensor;

  Real operator()(Index i, Index j, Index k) const {
    return tensor[static_cast<size_t>((i * n + j) * n + k)];
  }
};

template <typename Real>
StructureConstants<Real> structure_constants(const GeneratorBasis<Real>& basis) {
  const Index n = basis.size();
  StructureConstants<Real> f;
  f.dim = basis.dim;
  f.n = n;
  f.tensor.assign(static_cast<size_t>(n * n * n), Real(0));
  const Complex<Real> four_i(0, 4);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      const ComplexMatrix<Real> comm = basis[i] * basis[j] - basis[j] * basis[i];
      for (Index k = 0; k < n; ++k) {
        const Complex<Real> v = (comm * basis[k]).trace() / four_i;
        if (std::abs(v.imag()) > Real(tol::imag))
          throw NumericalInconsistency("structure constant has an imaginary part");
        f.tensor[static_cast<size_t>((i * n + j) * n + k)] = v.real();
        f.tensor[static_cast<size_t>((j * n + i) * n + k)] = -v.real();
      }
    }
  return f;
}

namespace detail {

/// Per-dimension cache of bases and structure constants, shared read-only.
template <typename Real>
class GeneratorRegistry {
 public:
  struct Entry {
    GeneratorBasis<Real> basis;
    StructureConstants<Real> f;
  };

  static std::shared_ptr<const Entry> get(Index d) {
    static GeneratorRegistry registry;
    {
      std::shared_lock lock(registry.mutex_);
      auto it = registry.entries_.find(d);
      if (it != registry.entries_.end()) return it->second;
    }
    auto entry = std::make_shared<Entry>();
    entry->basis = build_generator_basis<Real>(d);
    entry->f = structure_constants(entry->basis);
    std::unique_lock lock(registry.mutex_);
    auto [it, inserted] = registry.entries_.emplace(d, std::move(entry));
    return it->second;
  }

 private:
  std::shared_mutex mutex_;
  std::map<Index, std::shared_ptr<const Entry>> entries_;
};

}  // namespace detail

template <typename Real>
const GeneratorBasis<Real>& cached_basis(Index d) {
  // Entries are never evicted, so the reference outlives the shared_ptr copy.
  return detail::GeneratorRegistry<Real>::get(d)->basis;
}

template <typename Real>
const StructureConstants<Real>& cached_structure_constants(Index d) {
  return detail::GeneratorRegistry<Real>::get(d)->f;
}

/// Coefficients of
///   rho = 1/(d_A d_B) [1 + sum tau_a_i g_i (x) 1 + sum tau_b_j 1 (x) g_j + sum beta_hk g_h (x) g_k]
/// so that rho_A = (1/d_A)[1 + sum tau_a_i g_i]. With Tr[g_i g_j] = 2 delta_ij this gives
/// tau_a_i = (d_A/2) Tr[rho_A g_i], tau_b_j = (d_B/2) Tr[rho_B g_j] and
/// beta_hk = (d_A d_B / 4) Tr[rho (g_h (x) g_k)].
template <typename Real>
struct BlochRepresentation {
  Dims dims;
  RealVector<Real> tau_a;
  RealVector<Real> tau_b;
  RealMatrix<Real> beta;

  /// Flat layout: tau_a, tau_b, then beta column-major.
  RealVector<Real> flatten() const {
    RealVector<Real> out(tau_a.size() + tau_b.size() + beta.size());
    out << tau_a, tau_b, beta.reshaped();
    return out;
  }
};

namespace detail {

template <typename Real>
Real real_coefficient(Complex<Real> v) {
  if (std::abs(v.imag()) > Real(tol::imag))
    throw NumericalInconsistency("Bloch coefficient has an imaginary part");
  return v.real();
}

}  // namespace detail

template <typename Real>
BlochRepresentation<Real> to_bloch(const DensityMatrix<Real>& rho) {
  const Dims d = rho.dims();
  if (d.a < 2 || d.b < 2) throw InvalidDimension("Bloch representation needs d_A, d_B >= 2");
  const auto& ga = cached_basis<Real>(d.a);
  const auto& gb = cached_basis<Real>(d.b);
  if (ga.dim != d.a || gb.dim != d.b) throw InvalidDimension("cached basis dimension mismatch");

  const ComplexMatrix<Real> h = (rho.matrix() + rho.matrix().adjoint()) / Real(2);
  const ComplexMatrix<Real> rho_a = partial_trace(h, d, Subsystem::A);
  const ComplexMatrix<Real> rho_b = partial_trace(h, d, Subsystem::B);

  BlochRepresentation<Real> out;
  out.dims = d;
  out.tau_a.resize(ga.size());
  out.tau_b.resize(gb.size());
  out.beta.resize(ga.size(), gb.size());
  for (Index i = 0; i < ga.size(); ++i)
    out.tau_a(i) = detail::real_coefficient<Real>((rho_a * ga[i]).trace()) * Real(d.a) / Real(2);
  for (Index j = 0; j < gb.size(); ++j)
    out.tau_b(j) = detail::real_coefficient<Real>((rho_b * gb[j]).trace()) * Real(d.b) / Real(2);

  const Real scale = Real(d.a * d.b) / Real(4);
  for (Index hh = 0; hh < ga.size(); ++hh) {
    // Tr_A[(g_h (x) 1) rho] as a d_B x d_B operator.
    ComplexMatrix<Real> reduced = ComplexMatrix<Real>::Zero(d.b, d.b);
    for (Index a = 0; a < d.a; ++a)
      for (Index a2 = 0; a2 < d.a; ++a2) {
        const Complex<Real> g = ga[hh](a2, a);
        if (g != Complex<Real>(0)) reduced += g * h.block(a * d.b, a2 * d.b, d.b, d.b);
      }
    for (Index k = 0; k < gb.size(); ++k)
      out.beta(hh, k) = detail::real_coefficient<Real>((reduced * gb[k]).trace()) * scale;
  }
  return out;
}

/// Operator sum of the expansion without any state check.
template <typename Real>
ComplexMatrix<Real> bloch_operator(const BlochRepresentation<Real>& b) {
  const Dims d = b.dims;
  const auto& ga = cached_basis<Real>(d.a);
  const auto& gb = cached_basis<Real>(d.b);
  if (b.tau_a.size() != ga.size() || b.tau_b.size() != gb.size() || b.beta.rows() != ga.size() ||
      b.beta.cols() != gb.size())
    throw InvalidDimension("Bloch coefficient sizes do not match dims");
  using Matrix = ComplexMatrix<Real>;
  const Matrix id_a = Matrix::Identity(d.a, d.a);
  const Matrix id_b = Matrix::Identity(d.b, d.b);
  Matrix local_a = id_a;
  for (Index i = 0; i < ga.size(); ++i) local_a += b.tau_a(i) * ga[i];
  Matrix local_b = Matrix::Zero(d.b, d.b);
  for (Index j = 0; j < gb.size(); ++j) local_b += b.tau_b(j) * gb[j];
  Matrix out = kron(local_a, id_b) + kron(id_a, local_b);
  for (Index hh = 0; hh < ga.size(); ++hh) {
    Matrix mix = Matrix::Zero(d.b, d.b);
    for (Index k = 0; k < gb.size(); ++k) mix += b.beta(hh, k) * gb[k];
    out += kron(ga[hh], mix);
  }
  return out / Real(d.total());
}

/// Rebuilds the state; throws NotAState carrying the minimum eigenvalue when the
/// coefficients do not describe a positive operator.
template <typename Real>
DensityMatrix<Real> from_bloch(const BlochRepresentation<Real>& b) {
  ComplexMatrix<Real> m = bloch_operator(b);
  m = (m + m.adjoint()).eval() / Real(2);
  const Real lmin = min_eigenvalue(m);
  if (lmin < Real(-tol::state)) {
    std::ostringstream os;
    os << "Bloch coefficients give a non-positive operator (min eigenvalue " << lmin << ")";
    throw NotAState(os.str(), static_cast<double>(lmin));
  }
  return DensityMatrix<Real>::trusted(b.dims, std::move(m));
}

template <typename Real>
DensityMatrix<Real> from_bloch(const BlochRepresentation<Real>& b, Index dim_a, Index dim_b) {
  if (b.dims.a != dim_a || b.dims.b != dim_b) throw InvalidDimension("dims mismatch");
  return from_bloch(b);
}

/// c(m, k) = sum_{h,l} beta_hk tau_a_l f_hlm, the coefficients of [rho, rho_A (x) 1]
/// in the g_m (x) g_k basis up to the factor 2i / (d_A^2 d_B).
template <typename Real>
RealMatrix<Real> commutator_bloch(const BlochRepresentation<Real>& b) {
  const auto& f = cached_structure_constants<Real>(b.dims.a);
  const Index na = f.n;
  // t(h, m) = sum_l tau_l f_hlm
  RealMatrix<Real> t = RealMatrix<Real>::Zero(na, na);
  for (Index hh = 0; hh < na; ++hh)
    for (Index l = 0; l < na; ++l) {
      const Real tl = b.tau_a(l);
      if (tl == Real(0)) continue;
      for (Index m = 0; m < na; ++m) t(hh, m) += tl * f(hh, l, m);
    }
  return t.transpose() * b.beta;
}

/// Operator 2i/(d_A^2 d_B) sum_{m,k} c_mk g_m (x) g_k.
template <typename Real>
ComplexMatrix<Real> commutator_from_bloch(const RealMatrix<Real>& c, Dims dims) {
  const auto& ga = cached_basis<Real>(dims.a);
  const auto& gb = cached_basis<Real>(dims.b);
  using Matrix = ComplexMatrix<Real>;
  Matrix out = Matrix::Zero(dims.total(), dims.total());
  for (Index m = 0; m < ga.size(); ++m) {
    Matrix mix = Matrix::Zero(dims.b, dims.b);
    for (Index k = 0; k < gb.size(); ++k) mix += c(m, k) * gb[k];
    out += kron(ga[m], mix);
  }
  const Complex<Real> prefactor(0, Real(2) / Real(dims.a * dims.a * dims.b));
  return prefactor * out;
}

/// Constraint residuals indexed (k, m); all zero exactly on C0.
template <typename Real>
RealMatrix<Real> c0_residuals(const BlochRepresentation<Real>& b) {
  return commutator_bloch(b).transpose();
}

}  // namespace qdiscord
