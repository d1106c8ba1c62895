#pragma once

// Uniform-grid finite-difference radial eigensolver. Independent of every
// closed-form spectrum in spectra.hpp; used to certify them.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "qrot/errors.hpp"

namespace qrot {

enum class RadialGeometry { spherical, cylindrical };

struct RadialGrid {
  double r_max = 60.0;
  int points = 4000;
};

struct FdSpectrum {
  /// Richardson-extrapolated eigenvalues (spacings h and h/2).
  std::vector<double> eigenvalues;
  std::vector<double> coarse;
  std::vector<double> fine;
  /// max_k |E_k(h/2) - E_k(h)|
  double max_drift = 0.0;
  bool accuracy_warning = false;
};

namespace detail {

/// Number of eigenvalues of the symmetric tridiagonal (diag, off) below x.
inline int sturm_count(const std::vector<double>& diag, const std::vector<double>& off, double x) {
  int count = 0;
  double q = diag[0] - x;
  if (q < 0.0) ++count;
  for (std::size_t i = 1; i < diag.size(); ++i) {
    const double prev = (q == 0.0) ? std::numeric_limits<double>::epsilon() * (std::abs(x) + 1.0) : q;
    q = diag[i] - x - off[i - 1] * off[i - 1] / prev;
    if (q < 0.0) ++count;
  }
  return count;
}

/// Lowest `count` eigenvalues by Sturm-sequence bisection.
inline std::vector<double> tridiagonal_lowest(const std::vector<double>& diag,
                                              const std::vector<double>& off, int count) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double radius = (i > 0 ? std::abs(off[i - 1]) : 0.0) + (i < off.size() ? std::abs(off[i]) : 0.0);
    lo = std::min(lo, diag[i] - radius);
    hi = std::max(hi, diag[i] + radius);
  }
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    double a = lo;
    double b = hi;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (sturm_count(diag, off, mid) > k) {
        b = mid;
      } else {
        a = mid;
      }
    }
    out.push_back(0.5 * (a + b));
  }
  return out;
}

/// Spherical: nodes r_i = i h, h = r_max / (points + 1), chi = 0 at 0 and r_max.
inline std::vector<double> fd_spherical(const std::function<double(double)>& v_eff, double mass,
                                        double r_max, int points, int count) {
  const double h = r_max / (points + 1);
  const double kinetic = 1.0 / (2.0 * mass * h * h);
  std::vector<double> diag(static_cast<std::size_t>(points));
  std::vector<double> off(static_cast<std::size_t>(points - 1), -kinetic);
  for (int i = 0; i < points; ++i) diag[static_cast<std::size_t>(i)] = 2.0 * kinetic + v_eff((i + 1) * h);
  return tridiagonal_lowest(diag, off, count);
}

/// Cylindrical: cell centres r_i = (i - 1/2) h, h = r_max / points, in
/// flux form for (1/r)(r R')' - M^2 R / r^2, symmetrised with
/// chi_i = sqrt(r_i) R_i. Zero flux through r = 0, R = 0 on the outer face.
inline std::vector<double> fd_cylindrical(const std::function<double(double)>& v_eff, double mass,
                                          int order, double r_max, int points, int count) {
  const double h = r_max / points;
  const double scale = 1.0 / (2.0 * mass * h * h);
  const double m2 = static_cast<double>(order) * order;
  std::vector<double> diag(static_cast<std::size_t>(points));
  std::vector<double> off(static_cast<std::size_t>(points - 1));
  for (int i = 0; i < points; ++i) {
    const double r = (i + 0.5) * h;
    const double face_in = i * h;
    const double face_out = (i + 1) * h;
    const double outer = (i + 1 == points) ? 2.0 * face_out : face_out;  // ghost R_{N+1} = -R_N
    diag[static_cast<std::size_t>(i)] =
        scale * (face_in + outer) / r + m2 / (2.0 * mass * r * r) + v_eff(r);
    if (i + 1 < points) {
      const double r_next = (i + 1.5) * h;
      off[static_cast<std::size_t>(i)] = -scale * face_out / std::sqrt(r * r_next);
    }
  }
  return tridiagonal_lowest(diag, off, count);
}

}  // namespace detail

/// Lowest `count` eigenvalues of -(1/2m) chi'' + V_eff chi on (0, r_max)
/// with Dirichlet conditions. Spherical: chi = r R and V_eff carries any
/// centrifugal term. Cylindrical: chi = sqrt(r) R with the reduced
/// centrifugal term (M^2 - 1/4) / (2 m r^2) for `cyl_order` = M, discretised
/// in the equivalent flux form so that M = 0 converges at second order.
/// Results are Richardson-extrapolated from spacings h and h/2; a drift
/// between the two above `drift_tol` sets accuracy_warning.
inline FdSpectrum radial_fd_solve(const std::function<double(double)>& v_eff, double mass,
                                  RadialGeometry geometry, RadialGrid grid, int count,
                                  int cyl_order = 0, double drift_tol = 1e-3) {
  if (grid.points < 200) throw ArgumentError("radial_fd_solve: need at least 200 grid points");
  if (!(grid.r_max > 0.0) || !(mass > 0.0)) {
    throw ArgumentError("radial_fd_solve: r_max and mass must be positive");
  }
  if (count < 1 || count > grid.points / 4) throw ArgumentError("radial_fd_solve: bad eigenvalue count");
  if (cyl_order < 0) throw ArgumentError("radial_fd_solve: negative cylindrical order");

  FdSpectrum out;
  if (geometry == RadialGeometry::spherical) {
    out.coarse = detail::fd_spherical(v_eff, mass, grid.r_max, grid.points, count);
    out.fine = detail::fd_spherical(v_eff, mass, grid.r_max, 2 * grid.points + 1, count);
  } else {
    out.coarse = detail::fd_cylindrical(v_eff, mass, cyl_order, grid.r_max, grid.points, count);
    out.fine = detail::fd_cylindrical(v_eff, mass, cyl_order, grid.r_max, 2 * grid.points, count);
  }
  for (std::size_t k = 0; k < out.coarse.size(); ++k) {
    out.eigenvalues.push_back((4.0 * out.fine[k] - out.coarse[k]) / 3.0);
    out.max_drift = std::max(out.max_drift, std::abs(out.fine[k] - out.coarse[k]));
  }
  out.accuracy_warning = out.max_drift > drift_tol;
  return out;
}

}  // namespace qrot
