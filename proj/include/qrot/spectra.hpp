#pragma once

// Energy spectra of the four rotating-potential families (hbar = 1):
//   Coulomb            H = p^2/2m - alpha/r - w.J
//   magnetic Coulomb   ... - mu.B(r), B = (B0 + B1/r + B2/r^2) z
//   cylindrical well   H = p^2/2m - U0 theta(R - rho) - w.J, slow or rapid
//   Coulomb in well    E = -alpha^2 m / (2 (n' - 1/2)^2) - M w
// Every family carries the rotation as an additive -M w_eff term.

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <type_traits>
#include <variant>
#include <vector>

#include "qrot/angmo.hpp"
#include "qrot/errors.hpp"
#include "qrot/half_int.hpp"
#include "qrot/specfun.hpp"

namespace qrot {

enum class Family { coulomb, magnetic_coulomb, cyl_well_slow, cyl_well_rapid, coulomb_well };

inline std::string to_string(Family f) {
  switch (f) {
    case Family::coulomb: return "coulomb";
    case Family::magnetic_coulomb: return "magnetic_coulomb";
    case Family::cyl_well_slow: return "cyl_well_slow";
    case Family::cyl_well_rapid: return "cyl_well_rapid";
    case Family::coulomb_well: return "coulomb_well";
  }
  return "unknown";
}

/// Orientation in which the detector's rotation is reported. The passive
/// evolution is e^{+i s Jz w t} rho e^{-i s Jz w t} with s = +1 for
/// active_frame and s = -1 for passive_frame.
enum class FrameConvention { active_frame, passive_frame };

inline std::string to_string(FrameConvention c) {
  return c == FrameConvention::active_frame ? "active-frame" : "passive-frame";
}

struct RotationSpec {
  double omega_z = 0.0;
  FrameConvention convention = FrameConvention::active_frame;

  int sign() const { return convention == FrameConvention::active_frame ? 1 : -1; }
  void validate() const {
    if (!std::isfinite(omega_z)) throw ArgumentError("rotation rate must be finite");
  }
};

struct CoulombPotential {
  double alpha = 1.0;
  double mass = 1.0;
};

/// Coulomb potential plus -mu.B with mu = gamma q / (2m) S and
/// B(r) = field_uniform + field_inverse_r / r + field_inverse_r2 / r^2.
struct MagneticCoulombPotential {
  double alpha = 1.0;
  double mass = 1.0;
  double gyromagnetic = 1.0;
  double charge = 1.0;
  double field_uniform = 0.0;
  double field_inverse_r = 0.0;
  double field_inverse_r2 = 0.0;

  /// gamma q / (2m)
  double coupling() const { return gyromagnetic * charge / (2.0 * mass); }
};

enum class WellRegime { slow, rapid };

struct CylindricalWell {
  double radius = 1.0;
  double depth = 1.0;  // U0 > 0
  double mass = 1.0;
  double k_z = 0.0;
  WellRegime regime = WellRegime::slow;
};

/// n'(n', M, w) for the Coulomb potential in a rotating well. The default is
/// the identity n' -> n'.
struct NPrimeMap {
  std::string description = "identity";
  std::function<double(int, HalfInt, double)> map;

  double operator()(int nprime, HalfInt m, double omega) const {
    return map ? map(nprime, m, omega) : static_cast<double>(nprime);
  }
  bool is_identity() const { return !map; }

  static NPrimeMap identity() { return {}; }
  /// n' + omega_coeff * w + abs_m_coeff * |M|
  static NPrimeMap linear(double omega_coeff, double abs_m_coeff) {
    std::ostringstream d;
    d.precision(17);
    d << "n' + " << omega_coeff << "*omega + " << abs_m_coeff << "*|M|";
    return {d.str(), [=](int np, HalfInt m, double w) {
              return np + omega_coeff * w + abs_m_coeff * m.abs().value();
            }};
  }
};

struct CoulombWellPotential {
  double alpha = 1.0;
  double mass = 1.0;
  NPrimeMap nprime;
};

using PotentialSpec =
    std::variant<CoulombPotential, MagneticCoulombPotential, CylindricalWell, CoulombWellPotential>;

inline Family family_of(const PotentialSpec& p) {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, CoulombPotential>) return Family::coulomb;
        else if constexpr (std::is_same_v<T, MagneticCoulombPotential>) return Family::magnetic_coulomb;
        else if constexpr (std::is_same_v<T, CylindricalWell>)
          return v.regime == WellRegime::slow ? Family::cyl_well_slow : Family::cyl_well_rapid;
        else return Family::coulomb_well;
      },
      p);
}

/// Coefficients of chi'' + (-H0 + H1/r + H2/r^2) chi = 0.
struct NUCoefficients {
  double h0 = 0.0;
  double h1 = 0.0;
  double h2 = 0.0;
};

struct SpectrumEntry {
  Family family = Family::coulomb;
  CoupledLabel label;
  /// Family index: n (Coulomb), radial NU index (magnetic), n (slow well),
  /// a (rapid well), n' (Coulomb well).
  int extra_index = 0;
  double k_z = 0.0;
  double omega = 0.0;
  double energy = 0.0;
  std::optional<double> lambda;         // R w (wells)
  std::optional<double> kappa;          // exterior decay constant (slow well)
  std::optional<double> y_root;         // y_{Mn} = kappa R (slow well)
  std::optional<double> interior_root;  // q R, interior wavenumber times R (slow well)
  std::optional<double> bessel_root;    // x_{Ma} (rapid well)
  std::optional<double> nprime_value;   // n'(w) (Coulomb well)
};

/// E = -alpha^2 m / (2 n^2) - w M.
inline SpectrumEntry coulomb_energy(const CoulombPotential& p, int n, HalfInt m,
                                    const RotationSpec& rot) {
  rot.validate();
  if (n < 1) throw ArgumentError("coulomb_energy: n must be >= 1");
  if (!(p.alpha > 0.0) || !(p.mass > 0.0)) throw ArgumentError("coulomb_energy: alpha, m must be positive");
  SpectrumEntry e;
  e.family = Family::coulomb;
  e.label.n = n;
  e.label.M = m;
  e.extra_index = n;
  e.omega = rot.omega_z;
  e.energy = -p.alpha * p.alpha * p.mass / (2.0 * n * n) - rot.omega_z * m.value();
  return e;
}

inline NUCoefficients magnetic_nu_coeffs(const MagneticCoulombPotential& p, HalfInt mj, int l,
                                         const RotationSpec& rot, double energy) {
  const double c = p.coupling();
  const double m = p.mass;
  const double mjv = mj.value();
  return NUCoefficients{
      -2.0 * m * (rot.omega_z * mjv + c * mjv * p.field_uniform + energy),
      2.0 * m * (p.alpha + c * mjv * p.field_inverse_r),
      2.0 * m * (c * mjv * p.field_inverse_r2 - l * (l + 1.0) / (2.0 * m)),
  };
}

/// V_eff(r) whose spherical radial problem -(1/2m) chi'' + V_eff chi = E chi
/// is the magnetic-Coulomb radial equation (centrifugal term included).
inline std::function<double(double)> magnetic_effective_potential(const MagneticCoulombPotential& p,
                                                                  HalfInt mj, int l,
                                                                  const RotationSpec& rot) {
  const double c = p.coupling();
  const double mjv = mj.value();
  const double m = p.mass;
  return [=](double r) {
    return l * (l + 1.0) / (2.0 * m * r * r) - p.alpha / r - rot.omega_z * mjv -
           c * mjv * (p.field_uniform + p.field_inverse_r / r + p.field_inverse_r2 / (r * r));
  };
}

/// E = -2m [(alpha + c M B1) / (1 + 2n + sqrt(1 - 4(gamma q M B2 - l(l+1))))]^2 - M (w + c B0)
/// with c = gamma q / 2m and n >= 0 the radial index. The squared term is
/// binding, so the zero-field limit is -alpha^2 m / (2 (n + l + 1)^2).
inline SpectrumEntry magnetic_nu_energy(const MagneticCoulombPotential& p, int n, int l, HalfInt mj,
                                        const RotationSpec& rot) {
  rot.validate();
  if (n < 0 || l < 0) throw ArgumentError("magnetic_nu_energy: need n >= 0, l >= 0");
  if (!(p.mass > 0.0)) throw ArgumentError("magnetic_nu_energy: mass must be positive");
  const double c = p.coupling();
  const double mjv = mj.value();
  const double disc =
      1.0 - 4.0 * (p.gyromagnetic * p.charge * mjv * p.field_inverse_r2 - l * (l + 1.0));
  if (disc < 0.0) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no NU bound state: discriminant " << disc << " < 0";
    throw SolverError(msg.str());
  }
  const double strength = p.alpha + c * mjv * p.field_inverse_r;
  if (!(strength > 0.0)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "no NU bound state: effective Coulomb strength " << strength << " <= 0";
    throw SolverError(msg.str());
  }
  const double ratio = strength / (1.0 + 2.0 * n + std::sqrt(disc));
  SpectrumEntry e;
  e.family = Family::magnetic_coulomb;
  e.label.n = n + l + 1;
  e.label.l = l;
  e.label.M = mj;
  e.extra_index = n;
  e.omega = rot.omega_z;
  e.energy = -2.0 * p.mass * ratio * ratio - mjv * (rot.omega_z + c * p.field_uniform);
  return e;
}

namespace detail {

inline void check_well(const CylindricalWell& p) {
  if (!(p.radius > 0.0) || !(p.depth > 0.0) || !(p.mass > 0.0) || !std::isfinite(p.k_z)) {
    throw ArgumentError("cylindrical well: radius, depth and mass must be positive");
  }
}

/// y K_M'(y) / K_M(y) via K_M' = -K_{M-1} - (M/y) K_M.
inline double k_log_derivative(int order, double y) {
  if (order == 0) return -y * bessel_k_scaled(1, y) / bessel_k_scaled(0, y);
  return -order - y * bessel_k_scaled(order - 1, y) / bessel_k_scaled(order, y);
}

}  // namespace detail

/// Slow rotation (R w < 1): E = -y^2/(2 m R^2) - M w + k_z^2/(2m), where
/// y = kappa R and kappa is the exterior decay constant. The n-th state
/// matches u J_M'(u)/J_M(u) = y K_M'(y)/K_M(y) at r = R with interior
/// parameter u = sqrt(2 m U0 R^2 - y^2) in (j_{M,n-1}, j_{M,n}); the Bessel
/// order is |M|.
inline SpectrumEntry well_slow_energy(const CylindricalWell& p, int m, int n, const RotationSpec& rot) {
  detail::check_well(p);
  rot.validate();
  if (n < 1) throw ArgumentError("well_slow_energy: n must be >= 1");
  if (!(p.radius * std::abs(rot.omega_z) < 1.0)) {
    throw ArgumentError("well_slow_energy: slow regime requires R*omega < 1");
  }
  const int order = std::abs(m);
  const double ymax = p.radius * std::sqrt(2.0 * p.mass * p.depth);
  auto no_state = [&]() {
    return SolverError("no bound state n=" + std::to_string(n) + " for M=" + std::to_string(m) +
                       " in the slow well");
  };

  const double lower = (n == 1) ? 0.0 : bessel_zero(order, n - 1);
  if (lower >= ymax) throw no_state();
  const double upper = bessel_zero(order, n);

  auto mismatch = [&](double u) {
    const double y = std::sqrt(std::max(ymax * ymax - u * u, 0.0));
    return u * bessel_j_prime(order, u) / bessel_j(order, u) - detail::k_log_derivative(order, y);
  };
  const double width = std::min(upper, ymax) - lower;
  const double lo = lower + 1e-10 * width;
  const double hi = (upper < ymax) ? upper - 1e-10 * width : ymax * (1.0 - 1e-12);
  const RootBracket bracket = RootBracket::of(mismatch, lo, hi);
  if (bracket.f_lo * bracket.f_hi > 0.0) throw no_state();
  const double u = find_root(mismatch, bracket, 1e-13);
  const double y = std::sqrt(ymax * ymax - u * u);

  SpectrumEntry e;
  e.family = Family::cyl_well_slow;
  e.label.n = n;
  e.label.M = HalfInt(m);
  e.extra_index = n;
  e.k_z = p.k_z;
  e.omega = rot.omega_z;
  e.lambda = p.radius * rot.omega_z;
  e.y_root = y;
  e.interior_root = u;
  e.kappa = y / p.radius;
  e.energy = -y * y / (2.0 * p.mass * p.radius * p.radius) - m * (*e.lambda) / p.radius +
             p.k_z * p.k_z / (2.0 * p.mass);
  if (!(e.energy + m * rot.omega_z < 0.0)) throw no_state();
  return e;
}

/// Rapid rotation (R w > 1): E = (w^2 x_{|M|a}^2 + k_z^2)/(2m) - U0 - M w.
inline SpectrumEntry well_rapid_energy(const CylindricalWell& p, int m, int a, const RotationSpec& rot) {
  detail::check_well(p);
  rot.validate();
  if (a < 1) throw ArgumentError("well_rapid_energy: a must be >= 1");
  if (!(p.radius * std::abs(rot.omega_z) > 1.0)) {
    throw ArgumentError("well_rapid_energy: rapid regime requires R*omega > 1");
  }
  const double x = bessel_zero(std::abs(m), a);
  const double w = rot.omega_z;
  SpectrumEntry e;
  e.family = Family::cyl_well_rapid;
  e.label.n = a;
  e.label.M = HalfInt(m);
  e.extra_index = a;
  e.k_z = p.k_z;
  e.omega = w;
  e.lambda = p.radius * w;
  e.bessel_root = x;
  e.energy = (w * w * x * x + p.k_z * p.k_z) / (2.0 * p.mass) - p.depth - m * w;
  return e;
}

/// E = -alpha^2 m / (2 (n'(w) - 1/2)^2) - M w, |M| <= n' - 1.
inline SpectrumEntry coulomb_well_energy(const CoulombWellPotential& p, int nprime, HalfInt m,
                                         const RotationSpec& rot) {
  rot.validate();
  if (nprime < 1) throw ArgumentError("coulomb_well_energy: n' must be >= 1");
  if (m.abs() > HalfInt(nprime - 1)) {
    throw ArgumentError("coulomb_well_energy: |M| <= n' - 1 violated (M=" + m.str() +
                        ", n'=" + std::to_string(nprime) + ")");
  }
  if (!(p.alpha > 0.0) || !(p.mass > 0.0)) throw ArgumentError("coulomb_well_energy: alpha, m must be positive");
  const double np = p.nprime(nprime, m, rot.omega_z);
  if (!std::isfinite(np) || np == 0.5) throw SolverError("coulomb_well_energy: n'(omega) = 1/2 is singular");
  SpectrumEntry e;
  e.family = Family::coulomb_well;
  e.label.n = nprime;
  e.label.M = m;
  e.extra_index = nprime;
  e.omega = rot.omega_z;
  e.nprime_value = np;
  e.energy = -p.alpha * p.alpha * p.mass / (2.0 * (np - 0.5) * (np - 0.5)) - m.value() * rot.omega_z;
  return e;
}

/// Rate whose -M w_eff term carries all the rotation dependence:
/// w + gamma q B0 / 2m for the magnetic family, w otherwise.
inline double effective_rotation_rate(const PotentialSpec& p, const RotationSpec& rot) {
  if (const auto* mag = std::get_if<MagneticCoulombPotential>(&p)) {
    return rot.omega_z + mag->coupling() * mag->field_uniform;
  }
  return rot.omega_z;
}

/// One spectrum entry per basis label, with the full label attached.
/// Label n is the principal number for the spherical families (the NU
/// radial index is n - l - 1), n or a for the wells and n' for the
/// Coulomb well. Cylindrical wells need integer M.
inline std::vector<SpectrumEntry> build_spectrum(const PotentialSpec& potential, const RotationSpec& rot,
                                                 const std::vector<CoupledLabel>& basis) {
  std::vector<SpectrumEntry> out;
  out.reserve(basis.size());
  std::map<std::tuple<int, int, HalfInt>, SpectrumEntry> cache;  // (n, l, M)
  for (const auto& lab : basis) {
    lab.validate();
    const auto key = std::make_tuple(lab.n, lab.l, lab.M);
    auto it = cache.find(key);
    if (it == cache.end()) {
      SpectrumEntry e = std::visit(
          [&](const auto& p) -> SpectrumEntry {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, CoulombPotential>) {
              if (lab.l >= lab.n) throw ArgumentError("Coulomb family needs l < n: " + lab.str());
              return coulomb_energy(p, lab.n, lab.M, rot);
            } else if constexpr (std::is_same_v<T, MagneticCoulombPotential>) {
              if (lab.l >= lab.n) throw ArgumentError("magnetic family needs l < n: " + lab.str());
              return magnetic_nu_energy(p, lab.n - lab.l - 1, lab.l, lab.M, rot);
            } else if constexpr (std::is_same_v<T, CylindricalWell>) {
              if (!lab.M.is_integer()) {
                throw ArgumentError("cylindrical well needs integer M (integer spin): " + lab.str());
              }
              return p.regime == WellRegime::slow ? well_slow_energy(p, lab.M.as_int(), lab.n, rot)
                                                  : well_rapid_energy(p, lab.M.as_int(), lab.n, rot);
            } else {
              return coulomb_well_energy(p, lab.n, lab.M, rot);
            }
          },
          potential);
      it = cache.emplace(key, e).first;
    }
    SpectrumEntry e = it->second;
    e.label = lab;
    out.push_back(e);
  }
  return out;
}

}  // namespace qrot
