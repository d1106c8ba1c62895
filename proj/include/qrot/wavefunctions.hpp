#pragma once

// Closed-form bound-state wavefunctions: hydrogen-like orbitals of a
// -alpha/r potential, and the Nikiforov-Uvarov (Rodrigues-type) solution of
// the field-dressed radial problem. Normalisations are computed numerically.

#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>
#include <vector>

#include "qrot/errors.hpp"
#include "qrot/quadrature.hpp"
#include "qrot/specfun.hpp"

namespace qrot {

/// Coulomb-like problem V = -alpha / r (hbar = 1). The charges are
/// bookkeeping only: kappa = |Q_p Q_N| and alpha = kappa in Gaussian units.
struct HydrogenParams {
  double alpha = 1.0;
  double mass = 1.0;
  double charge_particle = 1.0;
  double charge_nucleus = 1.0;

  double kappa() const { return std::abs(charge_particle * charge_nucleus); }
  /// Generalised Bohr radius 1 / (m alpha).
  double bohr_radius() const { return 1.0 / (mass * alpha); }

  void validate() const {
    if (!(alpha > 0.0) || !(mass > 0.0)) {
      throw ArgumentError("HydrogenParams: alpha and mass must be positive");
    }
  }
};

/// psi_{n l m}(r, theta, phi) with its normalisation constant precomputed.
class HydrogenOrbital {
 public:
  HydrogenOrbital(const HydrogenParams& p, int n, int l, int m) : n_(n), l_(l), m_(m) {
    p.validate();
    if (n < 1 || l < 0 || l >= n || std::abs(m) > l) {
      throw ArgumentError("hydrogen orbital needs 0 <= l < n and |m| <= l");
    }
    scale_ = n * p.bohr_radius();
    // int r^2 |R|^2 dr = (n a / 2)^3 int e^{-rho} rho^{2l+2} L^2 d rho
    const auto rule = gauss_laguerre(n + 2, 2.0 * l + 2.0);
    double integral = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double lag = assoc_laguerre(n - l - 1, 2.0 * l + 1.0, rule.nodes[i]);
      integral += rule.weights[i] * lag * lag;
    }
    integral *= std::pow(0.5 * scale_, 3);
    norm_ = 1.0 / std::sqrt(integral);
  }

  /// A_{n l m} e^{-rho/2} rho^l L (rho), rho = 2 r / (n a).
  double radial(double r) const {
    if (!(r >= 0.0)) throw ArgumentError("hydrogen orbital: r must be >= 0");
    const double rho = 2.0 * r / scale_;
    const double decay = std::exp(-0.5 * rho);
    if (decay == 0.0) return 0.0;
    return norm_ * decay * std::pow(rho, l_) *
           assoc_laguerre(n_ - l_ - 1, 2.0 * l_ + 1.0, rho);
  }

  std::complex<double> operator()(double r, double theta, double phi) const {
    return radial(r) * spherical_harmonic(l_, m_, theta, phi);
  }

  double normalization() const { return norm_; }

 private:
  int n_;
  int l_;
  int m_;
  double scale_ = 1.0;
  double norm_ = 1.0;
};

inline std::complex<double> hydrogen_wavefunction(const HydrogenParams& p, int n, int l, int m,
                                                  double r, double theta, double phi) {
  return HydrogenOrbital(p, n, l, m)(r, theta, phi);
}

/// Nikiforov-Uvarov bound state of chi'' + (-H0 + H1/r + H2/r^2) chi = 0.
///
/// In x = 1/r the solution reads
///   chi = x^{H1/(2 sqrt H0)} e^{sqrt(H0)/x} d^n/dx^n [ x^{2n - H1/sqrt H0} e^{-2 sqrt(H0) x^{-1}} ],
/// and -r^2 d/dr is exactly d/dx. The n-fold derivative is expanded
/// symbolically, which leaves chi = e^{-sqrt(H0) r} sum_j a_j r^{q_j} with
/// q_j = H1/(2 sqrt H0) - j. The returned psi is chi / r times the angular
/// factor (-1)^m P^m_l(cos theta), normalised over all space.
class NuOrbital {
 public:
  NuOrbital(double h0, double h1, int n, int l, int m) : n_(n), l_(l), m_(std::abs(m)) {
    if (!(h0 > 0.0)) throw ArgumentError("NU wavefunction: H0 must be positive for a bound state");
    if (n < 0 || l < 0 || m_ > l) throw ArgumentError("NU wavefunction: need n >= 0, |m| <= l");
    root_h0_ = std::sqrt(h0);
    const double c = 2.0 * root_h0_;
    const double lead = h1 / (2.0 * root_h0_);
    const double p = 2.0 * n - h1 / root_h0_;

    // d^k/dx^k [x^p e^{-c/x}] = e^{-c/x} sum_j coef[j] x^{p - 2k + j}
    std::vector<double> coef{1.0};
    for (int k = 0; k < n; ++k) {
      std::vector<double> next(coef.size() + 1, 0.0);
      for (std::size_t j = 0; j < coef.size(); ++j) {
        const double e = p - 2.0 * k + static_cast<double>(j);
        next[j] += c * coef[j];
        next[j + 1] += e * coef[j];
      }
      coef = std::move(next);
    }
    coef_ = coef;
    powers_.resize(coef_.size());
    for (std::size_t j = 0; j < coef_.size(); ++j) powers_[j] = lead - static_cast<double>(j);

    // chi^2 dr = e^{-y} y^{2 q_n} P(y)^2 dy / c with y = c r.
    const double q_min = powers_.back();
    const double weight_exponent = 2.0 * q_min;
    if (!(weight_exponent > -1.0)) {
      std::ostringstream msg;
      msg << "NU wavefunction not normalizable: psi ~ r^" << (q_min - 1.0)
          << " at the origin (exponent must exceed -3/2)";
      throw ArgumentError(msg.str());
    }
    const auto rule = gauss_laguerre(n + 2, weight_exponent);
    double radial = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double y = rule.nodes[i];
      double poly = 0.0;
      for (std::size_t j = 0; j < coef_.size(); ++j) {
        poly += coef_[j] * std::pow(c, -powers_[j]) * std::pow(y, powers_[j] - q_min);
      }
      radial += rule.weights[i] * poly * poly;
    }
    radial /= c;

    double ratio = 1.0;  // (l+m)! / (l-m)!
    for (int k = l - m_ + 1; k <= l + m_; ++k) ratio *= k;
    const double angular = 2.0 * std::numbers::pi * 2.0 / (2.0 * l + 1.0) * ratio;
    norm_ = 1.0 / std::sqrt(radial * angular);
  }

  /// chi(r) = r R(r) without the normalisation constant.
  double reduced_radial_unnormalized(double r) const {
    const double decay = std::exp(-root_h0_ * r);
    if (decay == 0.0) return 0.0;
    double sum = 0.0;
    for (std::size_t j = 0; j < coef_.size(); ++j) sum += coef_[j] * std::pow(r, powers_[j]);
    return decay * sum;
  }

  double operator()(double r, double theta) const {
    if (!(r > 0.0)) throw ArgumentError("NU wavefunction: r must be positive");
    const double sign = (m_ % 2 == 0) ? 1.0 : -1.0;
    return norm_ * reduced_radial_unnormalized(r) / r * sign *
           assoc_legendre(l_, m_, std::cos(theta));
  }

  double normalization() const { return norm_; }
  /// Power of r governing psi at the origin.
  double origin_exponent() const { return powers_.back() - 1.0; }

 private:
  int n_;
  int l_;
  int m_;
  double root_h0_ = 1.0;
  std::vector<double> coef_;
  std::vector<double> powers_;
  double norm_ = 1.0;
};

inline double nu_wavefunction(double h0, double h1, int n, int l, int m, double r, double theta) {
  return NuOrbital(h0, h1, n, l, m)(r, theta);
}

}  // namespace qrot
