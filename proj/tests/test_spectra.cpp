#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qrot/radial_fd.hpp"
#include "qrot/spectra.hpp"
#include "qrot/wavefunctions.hpp"

using qrot::FrameConvention;
using qrot::HalfInt;
using qrot::RotationSpec;

namespace {

HalfInt h(int twice) { return HalfInt::from_twice(twice); }

RotationSpec rot(double w) { return RotationSpec{w, FrameConvention::active_frame}; }

qrot::MagneticCoulombPotential magnetic(double b0, double b1, double b2) {
  qrot::MagneticCoulombPotential p;
  p.field_uniform = b0;
  p.field_inverse_r = b1;
  p.field_inverse_r2 = b2;
  return p;
}

/// V(r) = c0 + c1/r + c2/r^2 recovered from three samples.
Eigen::Vector3d fit_inverse_powers(const std::function<double(double)>& v) {
  const double rs[3] = {0.7, 1.9, 4.3};
  Eigen::Matrix3d a;
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) {
    a(i, 0) = 1.0;
    a(i, 1) = 1.0 / rs[i];
    a(i, 2) = 1.0 / (rs[i] * rs[i]);
    b(i) = v(rs[i]);
  }
  return a.fullPivLu().solve(b);
}

}  // namespace

TEST(Coulomb, Examples) {
  EXPECT_DOUBLE_EQ(qrot::coulomb_energy({}, 1, HalfInt(0), rot(0.0)).energy, -0.5);
  EXPECT_NEAR(qrot::coulomb_energy({}, 2, h(3), rot(0.1)).energy, -0.275, 1e-15);
  const auto fd = qrot::radial_fd_solve([](double r) { return -1.0 / r; }, 1.0, qrot::RadialGeometry::spherical,
                                        qrot::RadialGrid{60.0, 4000}, 1);
  EXPECT_NEAR(fd.eigenvalues[0], -0.5, 1e-5);
  EXPECT_THROW(qrot::coulomb_energy({}, 0, HalfInt(0), rot(0.0)), qrot::ArgumentError);
}

TEST(MagneticCoeffs, Examples) {
  const auto c = qrot::magnetic_nu_coeffs(magnetic(0, 0, 0), HalfInt(0), 0, rot(0.0), -0.5);
  EXPECT_DOUBLE_EQ(c.h0, 1.0);
  EXPECT_DOUBLE_EQ(c.h1, 2.0);
  EXPECT_DOUBLE_EQ(c.h2, 0.0);
  const auto d = qrot::magnetic_nu_coeffs(magnetic(0.3, 0.2, 0.1), HalfInt(0), 2, rot(0.4), -0.2);
  EXPECT_DOUBLE_EQ(d.h1, 2.0);
}

TEST(MagneticCoeffs, MatchTheRadialOperator) {
  // chi'' = 2m (V_eff - E) chi  =>  H0 = 2m (c0 - E), H1 = -2m c1, H2 = -2m c2
  auto p = magnetic(0.3, 0.1, 0.05);
  p.mass = 1.7;
  p.gyromagnetic = 0.8;
  p.charge = 1.3;
  for (int l = 0; l <= 2; ++l) {
    for (int tm : {-5, -1, 1, 3}) {
      const double e = -0.37;
      const auto c = qrot::magnetic_nu_coeffs(p, h(tm), l, rot(0.21), e);
      const auto fit = fit_inverse_powers(qrot::magnetic_effective_potential(p, h(tm), l, rot(0.21)));
      EXPECT_NEAR(c.h0, 2.0 * p.mass * (fit(0) - e), 1e-10);
      EXPECT_NEAR(c.h1, -2.0 * p.mass * fit(1), 1e-10);
      EXPECT_NEAR(c.h2, -2.0 * p.mass * fit(2), 1e-10);
    }
  }
}

TEST(MagneticEnergy, ZeroFieldIsHydrogen) {
  for (int n = 0; n <= 3; ++n) {
    for (int l = 0; l <= 2; ++l) {
      const double e = qrot::magnetic_nu_energy(magnetic(0, 0, 0), n, l, h(1), rot(0.0)).energy;
      EXPECT_NEAR(e, -0.5 / ((n + l + 1.0) * (n + l + 1.0)), 1e-12);
      EXPECT_NEAR(e, qrot::coulomb_energy({}, n + l + 1, h(1), rot(0.0)).energy, 1e-12);
    }
  }
}

TEST(MagneticEnergy, UniformFieldOnlyShiftsByEffectiveRate) {
  auto p = magnetic(0.2, 0.0, 0.0);
  const double w = 0.3;
  for (int tm : {1, 3, 5}) {
    const double ep = qrot::magnetic_nu_energy(p, 1, 2, h(tm), rot(w)).energy;
    const double em = qrot::magnetic_nu_energy(p, 1, 2, h(-tm), rot(w)).energy;
    EXPECT_NEAR(ep - em, -2.0 * (tm / 2.0) * (w + p.coupling() * p.field_uniform), 1e-14);
  }
}

TEST(MagneticEnergy, GenericFieldsMatchFiniteDifferences) {
  // chi ~ r^s with s non-integer only when l = 0 and B2 != 0; those cases are covered below.
  for (int l = 0; l <= 1; ++l) {
    const auto p = magnetic(0.0, 0.1, l == 0 ? 0.0 : 0.05);
    for (int tm : {-3, -1, 1, 3}) {
      for (int n = 0; n <= 1; ++n) {
        const double e = qrot::magnetic_nu_energy(p, n, l, h(tm), rot(0.0)).energy;
        const auto fd = qrot::radial_fd_solve(qrot::magnetic_effective_potential(p, h(tm), l, rot(0.0)), 1.0,
                                              qrot::RadialGeometry::spherical, qrot::RadialGrid{150.0, 6000}, n + 1);
        EXPECT_NEAR(fd.eigenvalues[n] / e, 1.0, 1e-4) << "l=" << l << " 2M=" << tm << " n=" << n;
      }
    }
  }
}

TEST(MagneticEnergy, SWaveInverseSquareFieldConvergesUnderRefinement) {
  // Non-integer power at the origin limits the grid's order, so only check
  // that refinement moves the finite-difference value towards the formula.
  const auto p = magnetic(0.0, 0.1, 0.05);
  for (int tm : {-3, 3}) {
    const double e = qrot::magnetic_nu_energy(p, 0, 0, h(tm), rot(0.0)).energy;
    double prev = 1.0;
    for (int points : {1500, 6000, 24000}) {
      const auto fd = qrot::radial_fd_solve(qrot::magnetic_effective_potential(p, h(tm), 0, rot(0.0)), 1.0,
                                            qrot::RadialGeometry::spherical, qrot::RadialGrid{150.0, points}, 1);
      const double err = std::abs(fd.eigenvalues[0] / e - 1.0);
      EXPECT_LT(err, 0.6 * prev) << "2M=" << tm << " points=" << points;
      prev = err;
    }
    EXPECT_LT(prev, 2e-3);
  }
}

TEST(MagneticEnergy, WavefunctionSolvesTheRadialEquation) {
  // The NU solution at the NU energy must satisfy chi'' + (-H0 + H1/r + H2/r^2) chi = 0.
  const auto p = magnetic(0.0, 0.1, 0.05);
  for (int n = 0; n <= 2; ++n) {
    const int l = 1;
    const HalfInt mj = h(3);
    const double e = qrot::magnetic_nu_energy(p, n, l, mj, rot(0.0)).energy;
    const auto c = qrot::magnetic_nu_coeffs(p, mj, l, rot(0.0), e);
    const qrot::NuOrbital psi(c.h0, c.h1, n, l, 0);
    for (double r : {0.5, 1.5, 4.0, 9.0}) {
      const double step = 1e-3;
      auto chi = [&](double x) { return psi.reduced_radial_unnormalized(x); };
      const double second = (chi(r + step) - 2.0 * chi(r) + chi(r - step)) / (step * step);
      const double scale = std::abs(chi(r)) + std::abs(second) + 1e-300;
      const double residual = second + (-c.h0 + c.h1 / r + c.h2 / (r * r)) * chi(r);
      EXPECT_LT(std::abs(residual) / scale, 1e-5) << "n=" << n << " r=" << r;
    }
  }
}

TEST(MagneticEnergy, NegativeDiscriminantIsSolverError) {
  EXPECT_THROW(qrot::magnetic_nu_energy(magnetic(0, 0, 1.0), 0, 0, h(1), rot(0.0)), qrot::SolverError);
  EXPECT_THROW(qrot::magnetic_nu_energy(magnetic(0, -5.0, 0), 0, 0, h(1), rot(0.0)), qrot::SolverError);
}

TEST(SlowWell, DeepWellInteriorRootApproachesBesselZero) {
  const double j01 = oracle::bessel_zero(0, 1);
  double prev = 1e300;
  for (double depth : {1e2, 1e4, 1e6}) {
    const qrot::CylindricalWell w{1.0, depth, 1.0, 0.0, qrot::WellRegime::slow};
    const auto e = qrot::well_slow_energy(w, 0, 1, rot(0.1));
    const double err = std::abs(*e.interior_root - j01);
    EXPECT_LT(err, prev);
    EXPECT_LT(*e.interior_root, j01);
    prev = err;
  }
  EXPECT_LT(prev, 2e-3);
}

TEST(SlowWell, MZeroIndependentOfRotation) {
  const qrot::CylindricalWell w{1.0, 20.0, 1.0, 0.3, qrot::WellRegime::slow};
  EXPECT_DOUBLE_EQ(qrot::well_slow_energy(w, 0, 1, rot(0.0)).energy, qrot::well_slow_energy(w, 0, 1, rot(0.7)).energy);
}

TEST(SlowWell, FiniteWellMatchesFiniteDifferences) {
  const qrot::CylindricalWell w{1.0, 50.0, 1.0, 0.0, qrot::WellRegime::slow};
  for (int m = 0; m <= 2; ++m) {
    for (int n = 1; n <= 2; ++n) {
      const double e = qrot::well_slow_energy(w, m, n, rot(0.0)).energy;
      // r_max = 8 R puts the step on a cell face.
      const auto fd = qrot::radial_fd_solve([](double r) { return r < 1.0 ? -50.0 : 0.0; }, 1.0,
                                            qrot::RadialGeometry::cylindrical, qrot::RadialGrid{8.0, 4000}, n, m);
      EXPECT_NEAR(fd.eigenvalues[n - 1] / e, 1.0, 1e-4) << "M=" << m << " n=" << n;
    }
  }
}

TEST(SlowWell, ValidityAndErrors) {
  const qrot::CylindricalWell w{1.0, 50.0, 1.0, 0.0, qrot::WellRegime::slow};
  for (int m = -2; m <= 2; ++m) {
    const auto e = qrot::well_slow_energy(w, m, 1, rot(0.6));
    EXPECT_LT(e.energy + m * 0.6, 0.0);
    EXPECT_NEAR(*e.kappa, *e.y_root, 1e-15);
    EXPECT_NEAR((*e.y_root) * (*e.y_root) + (*e.interior_root) * (*e.interior_root), 100.0, 1e-9);
  }
  EXPECT_THROW(qrot::well_slow_energy(w, 0, 1, rot(1.5)), qrot::ArgumentError);
  EXPECT_THROW(qrot::well_slow_energy(w, 0, 9, rot(0.1)), qrot::SolverError);
}

TEST(RapidWell, SpectrumPoint) {
  const qrot::CylindricalWell w{4.0, 1.0, 1.0, 0.0, qrot::WellRegime::rapid};
  const double x = oracle::bessel_zero(0, 1);
  const double expected = 0.25 * x * x / 2.0 - 1.0;
  EXPECT_NEAR(expected, -0.2771017546, 1e-9);
  EXPECT_NEAR(qrot::well_rapid_energy(w, 0, 1, rot(0.5)).energy, expected, 1e-9);
}

TEST(RapidWell, KzAdditiveAndIncreasingInA) {
  qrot::CylindricalWell w{4.0, 1.0, 1.3, 0.0, qrot::WellRegime::rapid};
  auto w2 = w;
  w2.k_z = 0.7;
  for (int m = -2; m <= 2; ++m) {
    double prev = -1e300;
    for (int a = 1; a <= 5; ++a) {
      const double e0 = qrot::well_rapid_energy(w, m, a, rot(0.5)).energy;
      EXPECT_NEAR(qrot::well_rapid_energy(w2, m, a, rot(0.5)).energy - e0, 0.49 / 2.6, 1e-14);
      EXPECT_GT(e0, prev);
      prev = e0;
    }
  }
  EXPECT_THROW(qrot::well_rapid_energy(w, 0, 1, rot(0.1)), qrot::ArgumentError);
}

TEST(CoulombWell, Examples) {
  const qrot::CoulombWellPotential p;
  EXPECT_NEAR(qrot::coulomb_well_energy(p, 1, HalfInt(0), rot(0.8)).energy, -2.0, 1e-15);
  EXPECT_NEAR(qrot::coulomb_well_energy(p, 2, HalfInt(1), rot(0.3)).energy, -2.0 / 9.0 - 0.3, 1e-15);
  for (int m = -2; m <= 2; ++m) {
    for (double w = -1.0; w <= 1.0; w += 0.25) {
      const double de = qrot::coulomb_well_energy(p, 3, HalfInt(m), rot(w + 0.125)).energy -
                        qrot::coulomb_well_energy(p, 3, HalfInt(m), rot(w)).energy;
      EXPECT_NEAR(de / 0.125, -m, 1e-12);
    }
  }
  EXPECT_THROW(qrot::coulomb_well_energy(p, 2, HalfInt(2), rot(0.3)), qrot::ArgumentError);
}

TEST(CoulombWell, PlanarHydrogenCounterpart) {
  for (int np = 1; np <= 3; ++np) {
    for (int m = 0; m < np; ++m) {
      const double e = qrot::coulomb_well_energy({}, np, HalfInt(m), rot(0.0)).energy;
      const auto fd = qrot::radial_fd_solve([](double r) { return -1.0 / r; }, 1.0, qrot::RadialGeometry::cylindrical,
                                            qrot::RadialGrid{20.0 * np * np + 40.0, 4000}, np - m, m);
      EXPECT_NEAR(fd.eigenvalues.back() / e, 1.0, 1e-4);
    }
  }
}

TEST(CoulombWell, NPrimeMapEntersEnergy) {
  qrot::CoulombWellPotential p;
  p.nprime = qrot::NPrimeMap::linear(0.5, 0.0);
  const auto e = qrot::coulomb_well_energy(p, 2, HalfInt(1), rot(0.2));
  EXPECT_NEAR(*e.nprime_value, 2.1, 1e-15);
  EXPECT_NEAR(e.energy, -0.5 / (1.6 * 1.6) - 0.2, 1e-14);
}

TEST(BuildSpectrum, LabelsAndConstraints) {
  const auto basis = qrot::labels_of(qrot::couple_basis(2, 1, h(1)));
  const auto spec = qrot::build_spectrum(qrot::CoulombPotential{}, rot(0.1), basis);
  ASSERT_EQ(spec.size(), basis.size());
  for (std::size_t i = 0; i < spec.size(); ++i) EXPECT_EQ(spec[i].label, basis[i]);
  const auto bad = qrot::labels_of(qrot::couple_basis(1, 1, h(1)));
  EXPECT_THROW(qrot::build_spectrum(qrot::CoulombPotential{}, rot(0.1), bad), qrot::ArgumentError);
  EXPECT_THROW(qrot::build_spectrum(qrot::CylindricalWell{}, rot(0.1), basis), qrot::ArgumentError);
}
