// Invariants that must hold for every potential family and random states.

#include <algorithm>
#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qrot/equivalence.hpp"

using qrot::HalfInt;
using qrot::RotationSpec;

namespace {

struct Case {
  std::string name;
  qrot::PotentialSpec potential;
  std::vector<qrot::CoupledLabel> basis;
  double omega;
};

std::vector<qrot::CoupledLabel> labels(int n, int l, HalfInt s) { return qrot::labels_of(qrot::couple_basis(n, l, s)); }

std::vector<Case> cases() {
  qrot::MagneticCoulombPotential mag;
  mag.field_uniform = 0.05;
  mag.field_inverse_r = 0.1;
  mag.field_inverse_r2 = 0.02;
  qrot::CoulombWellPotential cw;
  cw.nprime = qrot::NPrimeMap::linear(0.1, 0.05);
  const HalfInt half = HalfInt::from_twice(1);
  return {
      {"coulomb", qrot::CoulombPotential{}, labels(3, 2, half), 0.4},
      {"magnetic", mag, labels(3, 2, half), 0.3},
      {"slow_well", qrot::CylindricalWell{1.0, 50.0, 1.0, 0.2, qrot::WellRegime::slow}, labels(1, 1, HalfInt(0)), 0.3},
      {"rapid_well", qrot::CylindricalWell{4.0, 1.0, 1.0, 0.0, qrot::WellRegime::rapid}, labels(2, 1, HalfInt(1)), 0.5},
      {"coulomb_well", cw, labels(3, 1, half), 0.25},
  };
}

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Properties, ActiveEvolutionIsUnitary) {
  for (const auto& c : cases()) {
    const auto spec = qrot::build_spectrum(c.potential, RotationSpec{c.omega}, c.basis);
    for (auto seed : oracle::seed_table) {
      const qrot::DensityMatrix rho0(c.basis, oracle::random_density(static_cast<int>(c.basis.size()), seed));
      const Eigen::VectorXd ev0 = rho0.eigenvalues();
      for (double t : {0.3, 4.0, 37.5}) {
        const auto rho = qrot::evolve_active(rho0, spec, t);
        EXPECT_NEAR(std::abs(rho.elements().trace() - 1.0), 0.0, 1e-12) << c.name;
        EXPECT_LT(max_abs(rho.elements() - rho.elements().adjoint()), 1e-12) << c.name;
        EXPECT_LT((rho.eigenvalues() - ev0).cwiseAbs().maxCoeff(), 1e-11) << c.name;
      }
    }
  }
}

TEST(Properties, GroupLaw) {
  for (const auto& c : cases()) {
    const RotationSpec rot{c.omega};
    const auto spec = qrot::build_spectrum(c.potential, rot, c.basis);
    const auto g = qrot::generator_matrices(c.basis);
    const qrot::DensityMatrix rho0(c.basis, oracle::random_density(static_cast<int>(c.basis.size()), oracle::seed_table[1]));
    for (auto [t1, t2] : {std::pair{0.7, 1.9}, std::pair{5.0, -2.5}, std::pair{12.25, 3.5}}) {
      const auto two_step = qrot::evolve_active(qrot::evolve_active(rho0, spec, t1), spec, t2);
      EXPECT_LT(max_abs(two_step.elements() - qrot::evolve_active(rho0, spec, t1 + t2).elements()), 1e-11) << c.name;
      const auto p2 = qrot::evolve_passive(qrot::evolve_passive(rho0, g, rot, t1), g, rot, t2);
      EXPECT_LT(max_abs(p2.elements() - qrot::evolve_passive(rho0, g, rot, t1 + t2).elements()), 1e-11) << c.name;
    }
  }
}

TEST(Properties, PhaseLawMatchesMatrixExponential) {
  for (const auto& c : cases()) {
    const auto spec = qrot::build_spectrum(c.potential, RotationSpec{c.omega}, c.basis);
    const Eigen::MatrixXcd h = qrot::diagonal_hamiltonian(c.basis, spec);
    const qrot::DensityMatrix rho0(c.basis, oracle::random_density(static_cast<int>(c.basis.size()), oracle::seed_table[2]));
    for (double t : {0.1, 2.0, 9.0}) {
      const Eigen::MatrixXcd want = oracle::expm_evolve(rho0.elements(), h, t);
      EXPECT_LT(max_abs(qrot::evolve_active(rho0, spec, t).elements() - want), 1e-11) << c.name;
    }
  }
}

TEST(Properties, CoulombActiveEqualsPassiveReversed) {
  const auto b = labels(3, 2, HalfInt::from_twice(3));
  for (auto conv : {qrot::FrameConvention::active_frame, qrot::FrameConvention::passive_frame}) {
    const RotationSpec rot{0.45, conv};
    const auto spec = qrot::build_spectrum(qrot::CoulombPotential{}, rot, b);
    const auto g = qrot::generator_matrices(b);
    for (auto seed : oracle::seed_table) {
      const qrot::DensityMatrix rho0(b, oracle::random_pure(static_cast<int>(b.size()), seed));
      for (double t : {0.5, 3.0, 70.0}) {
        const auto act = qrot::evolve_active(rho0, spec, t);
        const auto pas = qrot::evolve_passive(rho0, g, rot, -rot.sign() * t);
        EXPECT_LT(qrot::trace_distance(act, pas), 1e-11);
      }
    }
  }
}

TEST(Properties, RotationEntersAsMinusMOmega) {
  for (const auto& c : cases()) {
    const bool rapid = std::holds_alternative<qrot::CylindricalWell>(c.potential) &&
                       std::get<qrot::CylindricalWell>(c.potential).regime == qrot::WellRegime::rapid;
    const bool linear_map = std::holds_alternative<qrot::CoulombWellPotential>(c.potential);
    if (rapid || linear_map) continue;
    const auto e0 = qrot::build_spectrum(c.potential, RotationSpec{0.0}, c.basis);
    const auto e1 = qrot::build_spectrum(c.potential, RotationSpec{c.omega}, c.basis);
    for (std::size_t i = 0; i < c.basis.size(); ++i) {
      EXPECT_NEAR(e1[i].energy - e0[i].energy, -c.basis[i].M.value() * c.omega, 1e-12) << c.name;
    }
  }
}

TEST(Properties, RapidWellKeepsMinusMOmegaBetweenPartners) {
  // The rotation rate also scales the kinetic term, so compare M against -M at fixed rate.
  const qrot::CylindricalWell w{4.0, 1.0, 1.0, 0.0, qrot::WellRegime::rapid};
  for (double omega : {0.3, 0.5, 1.7}) {
    const auto b = labels(2, 2, HalfInt(0));
    const auto e = qrot::build_spectrum(w, RotationSpec{omega}, b);
    for (std::size_t i = 0; i < b.size(); ++i) {
      for (std::size_t j = 0; j < b.size(); ++j) {
        if (b[i].M == -b[j].M) {
          EXPECT_NEAR(e[i].energy - e[j].energy, -2.0 * b[i].M.value() * omega, 1e-12);
        }
      }
    }
  }
}

TEST(Properties, CoulombWellIdentityMapIsAdditive) {
  const auto b = labels(3, 1, HalfInt::from_twice(1));
  const auto e0 = qrot::build_spectrum(qrot::CoulombWellPotential{}, RotationSpec{0.0}, b);
  const auto e1 = qrot::build_spectrum(qrot::CoulombWellPotential{}, RotationSpec{0.8}, b);
  for (std::size_t i = 0; i < b.size(); ++i) {
    EXPECT_NEAR(e1[i].energy - e0[i].energy, -0.8 * b[i].M.value(), 1e-12);
  }
}

TEST(Properties, ConstantShiftLeavesVerdictsAlone) {
  for (const auto& c : cases()) {
    const RotationSpec rot{c.omega};
    auto spec = qrot::build_spectrum(c.potential, rot, c.basis);
    const double w = qrot::effective_rotation_rate(c.potential, rot);
    const auto base = qrot::check_criterion(qrot::CriterionInput{spec, w}, 1e-9);
    for (auto& e : spec) e.energy += 3.25;
    const auto shifted = qrot::check_criterion(qrot::CriterionInput{spec, w}, 1e-9);
    EXPECT_EQ(base.verdict, shifted.verdict) << c.name;
    EXPECT_NEAR(base.max_spread, shifted.max_spread, 1e-12) << c.name;
  }
}
