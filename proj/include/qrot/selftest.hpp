#pragma once

// Oracle cross-checks runnable from the command line.

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qrot/angmo.hpp"
#include "qrot/evolution.hpp"
#include "qrot/radial_fd.hpp"
#include "qrot/specfun.hpp"
#include "qrot/spectra.hpp"

namespace qrot {

struct SelftestResult {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

namespace detail {

/// Zero by plain bisection on sign changes of J_M sampled every 0.05.
inline double bisected_bessel_zero(int order, int index) {
  int found = 0;
  double a = order > 0 ? 0.05 : 0.0;
  double fa = bessel_j(order, a == 0.0 ? 1e-9 : a);
  for (double b = a + 0.05;; b += 0.05) {
    const double fb = bessel_j(order, b);
    if (fa * fb < 0.0 && ++found == index) {
      double lo = b - 0.05;
      double hi = b;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (bessel_j(order, lo) * bessel_j(order, mid) <= 0.0 ? hi : lo) = mid;
      }
      return 0.5 * (lo + hi);
    }
    fa = fb;
  }
}

}  // namespace detail

inline std::vector<SelftestResult> run_selftest() {
  std::vector<SelftestResult> out;
  auto add = [&](std::string name, double err, double tol) {
    out.push_back({std::move(name), err, tol, err < tol});
  };

  {
    double worst = 0.0;
    for (int l = 0; l <= 4; ++l) {
      for (int ts = 0; ts <= 3; ++ts) {
        const HalfInt s = HalfInt::from_twice(ts);
        const auto states = couple_basis(1 + l, l, s);
        const auto unc = uncoupled_basis(1 + l, l, s);
        Eigen::MatrixXd t = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(states.size()),
                                                  static_cast<Eigen::Index>(unc.size()));
        for (std::size_t i = 0; i < states.size(); ++i) {
          for (std::size_t a = 0; a < unc.size(); ++a) {
            const auto& c = states[i].label;
            t(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) =
                clebsch_gordan(l, HalfInt(unc[a].m_l), s, unc[a].m_s, c.J, c.M);
          }
        }
        const auto id = Eigen::MatrixXd::Identity(t.rows(), t.rows());
        worst = std::max(worst, (t * t.transpose() - id).cwiseAbs().maxCoeff());
        worst = std::max(worst, (t.transpose() * t - id).cwiseAbs().maxCoeff());
      }
    }
    add("clebsch-gordan orthonormality (l<=4, s<=3/2)", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (int m = 0; m <= 5; ++m) {
      for (int a = 1; a <= 5; ++a) {
        worst = std::max(worst, std::abs(bessel_zero(m, a) - detail::bisected_bessel_zero(m, a)));
      }
    }
    add("bessel zeros vs sign-change bisection (M, a <= 5)", worst, 1e-9);
  }
  {
    const RotationSpec still{};
    double worst = 0.0;
    for (int n = 0; n <= 3; ++n) {
      for (int l = 0; l <= 2; ++l) {
        const double e = magnetic_nu_energy(MagneticCoulombPotential{}, n, l, HalfInt::from_twice(1), still).energy;
        worst = std::max(worst, std::abs(e + 0.5 / ((n + l + 1.0) * (n + l + 1.0))));
      }
    }
    add("NU energy zero-field limit", worst, 1e-12);
  }
  {
    const auto fd = radial_fd_solve([](double r) { return -1.0 / r; }, 1.0, RadialGeometry::spherical,
                                    RadialGrid{60.0, 4000}, 1);
    add("FD Coulomb ground state vs -1/2", std::abs(fd.eigenvalues[0] + 0.5), 1e-5);
  }
  {
    const auto fd = radial_fd_solve([](double) { return 0.0; }, 1.0, RadialGeometry::cylindrical,
                                    RadialGrid{1.0, 2000}, 1, 0);
    const double x = bessel_zero(0, 1);
    add("FD hard-wall cylinder vs x01^2/2", std::abs(fd.eigenvalues[0] / (0.5 * x * x) - 1.0), 1e-4);
  }
  {
    MagneticCoulombPotential p;
    p.field_inverse_r = 0.1;
    const HalfInt mj = HalfInt::from_twice(1);
    const double e = magnetic_nu_energy(p, 0, 0, mj, RotationSpec{}).energy;
    const auto fd = radial_fd_solve(magnetic_effective_potential(p, mj, 0, RotationSpec{}), 1.0,
                                    RadialGeometry::spherical, RadialGrid{60.0, 4000}, 1);
    add("FD magnetic (inverse-r field) vs NU energy", std::abs(fd.eigenvalues[0] / e - 1.0), 1e-4);
  }
  {
    const CylindricalWell w{1.0, 50.0, 1.0, 0.0, WellRegime::slow};
    const double e = well_slow_energy(w, 0, 1, RotationSpec{}).energy;
    const auto fd = radial_fd_solve([](double r) { return r < 1.0 ? -50.0 : 0.0; }, 1.0,
                                    RadialGeometry::cylindrical, RadialGrid{8.0, 4000}, 1, 0);
    add("FD finite cylindrical well vs boundary matching", std::abs(fd.eigenvalues[0] / e - 1.0), 1e-4);
  }
  {
    const CylindricalWell w{4.0, 1.0, 1.0, 0.0, WellRegime::rapid};
    const RotationSpec rot{0.5, FrameConvention::active_frame};
    const double x = detail::bisected_bessel_zero(0, 1);
    add("rapid-well energy vs bisected Bessel zero",
        std::abs(well_rapid_energy(w, 0, 1, rot).energy - (0.25 * x * x / 2.0 - 1.0)), 1e-9);
  }
  {
    auto c = InitialCoefficients::spin_only(2, 1, 0, HalfInt::from_twice(1),
                                            (Eigen::MatrixXcd(2, 2) << 0.5, 0.5, 0.5, 0.5).finished());
    const DensityMatrix rho0 = build_rho0(c);
    const RotationSpec rot{0.3, FrameConvention::active_frame};
    const auto spec = build_spectrum(CoulombPotential{}, rot, rho0.basis());
    const auto h = diagonal_hamiltonian(rho0.basis(), spec);
    double worst = 0.0;
    for (double t : {0.0, 1.0, 7.5, 20.0}) {
      worst = std::max(worst, (evolve_active(rho0, spec, t).elements() - oracle_evolve(rho0, h, t).elements())
                                  .cwiseAbs()
                                  .maxCoeff());
    }
    add("phase-law evolution vs matrix exponential", worst, 1e-11);
  }
  return out;
}

}  // namespace qrot
