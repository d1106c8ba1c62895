#pragma once

// Density matrices over a coupled |n l s; J M> basis and their time
// evolution. The phase convention follows rho(t) = e^{+iHt} rho e^{-iHt},
// so element (1,2) of a diagonal-H evolution picks up e^{i(E1 - E2) t}.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrot/angmo.hpp"
#include "qrot/errors.hpp"
#include "qrot/spectra.hpp"

namespace qrot {

using cplx = std::complex<double>;

class DensityMatrix {
 public:
  static constexpr double hermiticity_tol = 1e-12;
  static constexpr double trace_tol = 1e-12;
  static constexpr double positivity_tol = 1e-10;

  /// Validates Hermiticity, unit trace and positivity.
  DensityMatrix(std::vector<CoupledLabel> basis, Eigen::MatrixXcd elements, double time = 0.0)
      : basis_(std::move(basis)), elements_(std::move(elements)), time_(time) {
    const auto dim = static_cast<Eigen::Index>(basis_.size());
    if (dim == 0 || elements_.rows() != dim || elements_.cols() != dim) {
      throw ArgumentError("density matrix dimension does not match its basis");
    }
    std::set<CoupledLabel> seen(basis_.begin(), basis_.end());
    if (seen.size() != basis_.size()) throw ArgumentError("density matrix basis has duplicate labels");
    const double herm = (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
    if (herm > hermiticity_tol) {
      throw ArgumentError("density matrix not Hermitian (deviation " + std::to_string(herm) + ")");
    }
    const cplx tr = elements_.trace();
    if (std::abs(tr - 1.0) > trace_tol) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "density matrix trace " << tr.real() << " differs from 1";
      throw ArgumentError(msg.str());
    }
    const double min_eig = eigenvalues().minCoeff();
    if (min_eig < -positivity_tol) {
      throw ArgumentError("density matrix not positive semidefinite (eigenvalue " +
                          std::to_string(min_eig) + ")");
    }
  }

  const std::vector<CoupledLabel>& basis() const { return basis_; }
  const Eigen::MatrixXcd& elements() const { return elements_; }
  double time() const { return time_; }
  std::size_t dim() const { return basis_.size(); }
  cplx operator()(Eigen::Index i, Eigen::Index j) const { return elements_(i, j); }

  /// Ascending eigenvalues of the Hermitian part.
  Eigen::VectorXd eigenvalues() const {
    const Eigen::MatrixXcd herm = 0.5 * (elements_ + elements_.adjoint());
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues();
  }

 private:
  std::vector<CoupledLabel> basis_;
  Eigen::MatrixXcd elements_;
  double time_ = 0.0;
};

/// Initial state in the uncoupled product basis. `rho` is expressed over
/// `states` (all with the same l and s) and must be Hermitian PSD with unit
/// trace. `basis_n` lists the n values the coupled basis must span; states'
/// own n values are always included.
struct InitialCoefficients {
  int l = 0;
  HalfInt s;
  std::vector<UncoupledLabel> states;
  Eigen::MatrixXcd rho;
  std::vector<int> basis_n;

  /// rho_{m1 m2} |n l m_l; s m1><n l m_l; s m2|, rows ordered m_s = s, s-1, ..., -s.
  static InitialCoefficients spin_only(int n, int l, int m_l, HalfInt s, Eigen::MatrixXcd spin_rho) {
    InitialCoefficients c;
    c.l = l;
    c.s = s;
    for (HalfInt ms = s; ms >= -s; ms -= 1) c.states.push_back(UncoupledLabel{n, l, m_l, s, ms});
    c.rho = std::move(spin_rho);
    return c;
  }
};

/// Coupled-basis labels for every n in `ns` (ascending, deduplicated).
inline std::vector<CoupledLabel> coupled_labels(const std::vector<int>& ns, int l, HalfInt s) {
  std::set<int> sorted(ns.begin(), ns.end());
  std::vector<CoupledLabel> out;
  for (int n : sorted) {
    for (const auto& st : couple_basis(n, l, s)) out.push_back(st.label);
  }
  return out;
}

/// <n J1 M1| rho |n' J2 M2> = sum C^{J1 M1}_{l m_l, s m1} C^{J2 M2}_{l m_l', s m2} rho_{(m_l m1),(m_l' m2)}.
inline DensityMatrix build_rho0(const InitialCoefficients& c) {
  const auto k = static_cast<Eigen::Index>(c.states.size());
  if (k == 0 || c.rho.rows() != k || c.rho.cols() != k) {
    throw ArgumentError("initial coefficients: matrix size does not match the listed states");
  }
  std::vector<int> ns = c.basis_n;
  for (const auto& st : c.states) {
    st.validate();
    if (st.l != c.l || st.s != c.s) throw ArgumentError("initial coefficients: mixed l or s");
    ns.push_back(st.n);
  }
  if ((c.rho - c.rho.adjoint()).cwiseAbs().maxCoeff() > DensityMatrix::hermiticity_tol) {
    throw ArgumentError("initial coefficients violate Hermiticity");
  }
  if (std::abs(c.rho.trace() - 1.0) > DensityMatrix::trace_tol) {
    throw ArgumentError("initial coefficients violate unit trace");
  }
  {
    const Eigen::MatrixXcd herm = 0.5 * (c.rho + c.rho.adjoint());
    const double min_eig =
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(herm, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
    if (min_eig < -DensityMatrix::positivity_tol) {
      throw ArgumentError("initial coefficients violate positivity (eigenvalue " + std::to_string(min_eig) + ")");
    }
  }

  const auto basis = coupled_labels(ns, c.l, c.s);
  const auto dim = static_cast<Eigen::Index>(basis.size());
  // transform(i, a) = <coupled i | uncoupled a>
  Eigen::MatrixXd transform = Eigen::MatrixXd::Zero(dim, k);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& lab = basis[static_cast<std::size_t>(i)];
    for (Eigen::Index a = 0; a < k; ++a) {
      const auto& st = c.states[static_cast<std::size_t>(a)];
      if (st.n != lab.n || HalfInt(st.m_l) + st.m_s != lab.M) continue;
      transform(i, a) = clebsch_gordan(c.l, HalfInt(st.m_l), c.s, st.m_s, lab.J, lab.M);
    }
  }
  const Eigen::MatrixXcd coupled = transform.cast<cplx>() * c.rho * transform.transpose().cast<cplx>();
  return DensityMatrix(basis, coupled, 0.0);
}

/// rho_{12}(t) = rho_{12} e^{i (E1 - E2) t}.
inline DensityMatrix evolve_active(const DensityMatrix& rho0, const std::vector<SpectrumEntry>& spectrum,
                                   double t) {
  std::map<CoupledLabel, double> energy;
  for (const auto& e : spectrum) energy[e.label] = e.energy;
  std::vector<double> diag;
  diag.reserve(rho0.dim());
  for (const auto& lab : rho0.basis()) {
    auto it = energy.find(lab);
    if (it == energy.end()) throw ArgumentError("evolve_active: no spectrum entry for " + lab.str());
    diag.push_back(it->second);
  }
  Eigen::MatrixXcd out = rho0.elements();
  const auto dim = static_cast<Eigen::Index>(diag.size());
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i == j) continue;
      out(i, j) *= std::polar(1.0, (diag[static_cast<std::size_t>(i)] - diag[static_cast<std::size_t>(j)]) * t);
    }
  }
  return DensityMatrix(rho0.basis(), out, rho0.time() + t);
}

/// e^{+i s Jz w t} rho e^{-i s Jz w t}: element (1,2) times e^{i s (M1 - M2) w t},
/// s from the frame convention.
inline DensityMatrix evolve_passive(const DensityMatrix& rho0, const GeneratorSet& generators,
                                    const RotationSpec& rot, double t) {
  rot.validate();
  if (generators.basis != rho0.basis()) throw ArgumentError("evolve_passive: generator basis mismatch");
  const double rate = rot.sign() * rot.omega_z;
  Eigen::MatrixXcd out = rho0.elements();
  const auto dim = static_cast<Eigen::Index>(rho0.dim());
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (i == j) continue;
      const double mi = generators.jz(i, i).real();
      const double mj = generators.jz(j, j).real();
      out(i, j) *= std::polar(1.0, (mi - mj) * rate * t);
    }
  }
  return DensityMatrix(rho0.basis(), out, rho0.time() + t);
}

/// rho(t) = U rho0 U^dagger with U = e^{+iHt} from the spectral decomposition of H.
inline DensityMatrix oracle_evolve(const DensityMatrix& rho0, const Eigen::MatrixXcd& h, double t) {
  const auto dim = static_cast<Eigen::Index>(rho0.dim());
  if (h.rows() != dim || h.cols() != dim) throw ArgumentError("oracle_evolve: Hamiltonian size mismatch");
  if ((h - h.adjoint()).cwiseAbs().maxCoeff() > 1e-10) throw ArgumentError("oracle_evolve: H not Hermitian");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  Eigen::VectorXcd phases(dim);
  for (Eigen::Index i = 0; i < dim; ++i) phases(i) = std::polar(1.0, es.eigenvalues()(i) * t);
  const Eigen::MatrixXcd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
  Eigen::MatrixXcd out = u * rho0.elements() * u.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return DensityMatrix(rho0.basis(), out, rho0.time() + t);
}

/// diag(E) over rho's basis.
inline Eigen::MatrixXcd diagonal_hamiltonian(const std::vector<CoupledLabel>& basis,
                                             const std::vector<SpectrumEntry>& spectrum) {
  std::map<CoupledLabel, double> energy;
  for (const auto& e : spectrum) energy[e.label] = e.energy;
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    auto it = energy.find(basis[static_cast<std::size_t>(i)]);
    if (it == energy.end()) throw ArgumentError("no spectrum entry for " + basis[static_cast<std::size_t>(i)].str());
    h(i, i) = it->second;
  }
  return h;
}

/// (1/2) sum of singular values of rho1 - rho2.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.basis() != b.basis()) throw ArgumentError("trace_distance: basis mismatch");
  const Eigen::MatrixXcd diff = a.elements() - b.elements();
  const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(diff);
  return 0.5 * svd.singularValues().sum();
}

}  // namespace qrot
