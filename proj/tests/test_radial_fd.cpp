#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qrot/radial_fd.hpp"

using qrot::RadialGeometry;
using qrot::RadialGrid;

TEST(RadialFd, CoulombGroundState) {
  const auto fd = qrot::radial_fd_solve([](double r) { return -1.0 / r; }, 1.0, RadialGeometry::spherical,
                                        RadialGrid{60.0, 4000}, 3);
  EXPECT_NEAR(fd.eigenvalues[0], -0.5, 1e-5);
  EXPECT_NEAR(fd.eigenvalues[1], -0.125, 1e-5);
  EXPECT_NEAR(fd.eigenvalues[2], -1.0 / 18.0, 1e-5);
  EXPECT_FALSE(fd.accuracy_warning);
}

TEST(RadialFd, HardWallCylinder) {
  for (int m = 0; m <= 2; ++m) {
    const double radius = 1.5;
    const auto fd = qrot::radial_fd_solve([](double) { return 0.0; }, 1.0, RadialGeometry::cylindrical,
                                          RadialGrid{radius, 2000}, 2, m);
    for (int a = 1; a <= 2; ++a) {
      const double x = oracle::bessel_zero(m, a);
      EXPECT_NEAR(fd.eigenvalues[a - 1], x * x / (2.0 * radius * radius), 1e-5) << "M=" << m << " a=" << a;
    }
  }
}

TEST(RadialFd, PlanarHydrogen) {
  // -alpha/r in two dimensions: E = -alpha^2 m / (2 (n_r + |M| + 1/2)^2)
  for (int m = 0; m <= 2; ++m) {
    const auto fd = qrot::radial_fd_solve([](double r) { return -1.0 / r; }, 1.0, RadialGeometry::cylindrical,
                                          RadialGrid{80.0, 4000}, 2, m);
    for (int nr = 0; nr < 2; ++nr) {
      const double d = nr + m + 0.5;
      EXPECT_NEAR(fd.eigenvalues[nr] / (-0.5 / (d * d)), 1.0, 1e-5);
    }
  }
}

TEST(RadialFd, DirichletShrinkRaisesEigenvalues) {
  // At fixed spacing a smaller box deletes grid nodes, so each matrix is a
  // principal submatrix of the previous one and eigenvalues cannot drop.
  auto v = [](double r) { return 0.5 * r * r; };
  const double h = 0.005;
  std::vector<double> prev_coarse{-1e300, -1e300};
  std::vector<double> prev_fine{-1e300, -1e300};
  for (double rmax : {12.0, 6.0, 3.0, 2.0, 1.5}) {
    const int points = static_cast<int>(std::lround(rmax / h)) - 1;
    const auto fd = qrot::radial_fd_solve(v, 1.0, RadialGeometry::spherical, RadialGrid{rmax, points}, 2);
    for (std::size_t k = 0; k < 2; ++k) {
      EXPECT_GE(fd.coarse[k], prev_coarse[k] - 1e-12) << "rmax=" << rmax;
      EXPECT_GE(fd.fine[k], prev_fine[k] - 1e-12) << "rmax=" << rmax;
    }
    prev_coarse = fd.coarse;
    prev_fine = fd.fine;
  }
  // The smallest box is far from the oscillator's 3/2.
  EXPECT_GT(prev_fine[0], 2.0);
}

TEST(RadialFd, CoarseGridRaisesAccuracyWarning) {
  const auto fd = qrot::radial_fd_solve([](double r) { return -1.0 / r; }, 1.0, RadialGeometry::spherical,
                                        RadialGrid{400.0, 200}, 1);
  EXPECT_TRUE(fd.accuracy_warning);
  EXPECT_GT(fd.max_drift, 1e-3);
}

TEST(RadialFd, RejectsBadInput) {
  auto v = [](double) { return 0.0; };
  EXPECT_THROW(qrot::radial_fd_solve(v, 1.0, RadialGeometry::spherical, RadialGrid{1.0, 100}, 1), qrot::ArgumentError);
  EXPECT_THROW(qrot::radial_fd_solve(v, -1.0, RadialGeometry::spherical, RadialGrid{1.0, 400}, 1), qrot::ArgumentError);
  EXPECT_THROW(qrot::radial_fd_solve(v, 1.0, RadialGeometry::spherical, RadialGrid{1.0, 400}, 0), qrot::ArgumentError);
}
