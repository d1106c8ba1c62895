#pragma once

// Special functions used by the spectra: associated Laguerre and Legendre
// polynomials, spherical harmonics, integer-order Bessel J and modified
// Bessel K, zeros of J, and a bracketed scalar root finder.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <utility>

#include <boost/math/tools/roots.hpp>

#include "qrot/errors.hpp"

namespace qrot {

/// Generalized Laguerre L^a_k(x) by the three-term recurrence. `a` may be
/// non-integer (> -1) for quadrature use; the public contract is a >= 0.
inline double assoc_laguerre(int k, double a, double x) {
  if (k < 0) throw ArgumentError("assoc_laguerre: negative degree");
  double prev = 1.0;
  if (k == 0) return prev;
  double cur = 1.0 + a - x;
  for (int j = 1; j < k; ++j) {
    const double next = ((2.0 * j + 1.0 + a - x) * cur - (j + a) * prev) / (j + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

inline double assoc_laguerre(int k, int a, double x) {
  if (a < 0) throw ArgumentError("assoc_laguerre: negative order");
  return assoc_laguerre(k, static_cast<double>(a), x);
}

/// P^m_l(u) without the Condon-Shortley phase, 0 <= m <= l, |u| <= 1.
inline double assoc_legendre(int l, int m, double u) {
  if (m < 0 || m > l) throw ArgumentError("assoc_legendre: need 0 <= m <= l");
  if (!(std::abs(u) <= 1.0)) throw ArgumentError("assoc_legendre: |u| > 1");
  // P^m_m = (2m-1)!! (1-u^2)^{m/2}
  double pmm = 1.0;
  const double root = std::sqrt((1.0 - u) * (1.0 + u));
  for (int i = 1; i <= m; ++i) pmm *= (2.0 * i - 1.0) * root;
  if (l == m) return pmm;
  double pm1 = u * (2.0 * m + 1.0) * pmm;
  if (l == m + 1) return pm1;
  double pll = 0.0;
  for (int ll = m + 2; ll <= l; ++ll) {
    pll = ((2.0 * ll - 1.0) * u * pm1 - (ll + m - 1.0) * pmm) / (ll - m);
    pmm = pm1;
    pm1 = pll;
  }
  return pll;
}

/// Orthonormal Y^m_l(theta, phi) with the Condon-Shortley phase.
inline std::complex<double> spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw ArgumentError("spherical_harmonic: need |m| <= l");
  const int am = std::abs(m);
  double ratio = 1.0;  // (l-|m|)! / (l+|m|)!
  for (int k = l - am + 1; k <= l + am; ++k) ratio /= k;
  const double norm = std::sqrt((2.0 * l + 1.0) / (4.0 * std::numbers::pi) * ratio);
  const double p = assoc_legendre(l, am, std::cos(theta));
  const double cs = (am % 2 == 0) ? 1.0 : -1.0;
  const std::complex<double> y = cs * norm * p * std::polar(1.0, am * phi);
  if (m >= 0) return y;
  return cs * std::conj(y);
}

namespace detail {

inline double bessel_j_series(int order, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= order; ++i) term *= half / i;
  const double q = -half * half;
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (k + order));
    sum += term;
    if (std::abs(term) <= 1e-17 * std::abs(sum) || term == 0.0) break;
  }
  return sum;
}

/// Miller's downward recurrence normalised by J_0 + 2 sum J_{2k} = 1.
inline double bessel_j_miller(int order, double x) {
  const int top = 2 * ((std::max(order, static_cast<int>(x)) + 40 +
                        static_cast<int>(std::sqrt(60.0 * std::max<double>(order, x)))) /
                       2);
  double jp1 = 0.0;
  double j = 1e-300;
  double norm = 0.0;
  double result = 0.0;
  for (int k = top; k > 0; --k) {
    const double jm1 = (2.0 * k / x) * j - jp1;
    jp1 = j;
    j = jm1;  // now J_{k-1}
    if (std::abs(j) > 1e200) {
      j *= 1e-200;
      jp1 *= 1e-200;
      norm *= 1e-200;
      result *= 1e-200;
    }
    if (k - 1 == order) result = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
  }
  norm += j;  // J_0
  return result / norm;
}

}  // namespace detail

/// J_M(x) for integer M >= 0 and x >= 0. Ascending series for x <= 12,
/// Miller's algorithm beyond.
inline double bessel_j(int order, double x) {
  if (order < 0) throw ArgumentError("bessel_j: negative order");
  if (!(x >= 0.0) || !std::isfinite(x)) throw ArgumentError("bessel_j: need finite x >= 0");
  if (x == 0.0) return order == 0 ? 1.0 : 0.0;
  if (x <= 12.0) return detail::bessel_j_series(order, x);
  return detail::bessel_j_miller(order, x);
}

/// d/dx J_M(x).
inline double bessel_j_prime(int order, double x) {
  if (order == 0) return -bessel_j(1, x);
  return 0.5 * (bessel_j(order - 1, x) - bessel_j(order + 1, x));
}

namespace detail {

/// e^x K_nu(x) = int_0^inf exp(-x (cosh t - 1)) cosh(nu t) dt by the
/// trapezoid rule, which converges geometrically for this analytic
/// integrand. The step shrinks like 1/sqrt(x) to resolve the peak at t = 0.
inline double bessel_k_scaled_integral(int order, double x) {
  const double h = std::min(0.05, 0.5 / std::sqrt(x));
  double sum = 0.5;  // t = 0
  for (int i = 1; i < 100000; ++i) {
    const double t = i * h;
    const double sh = std::sinh(0.5 * t);
    const double expo = -2.0 * x * sh * sh;  // -x (cosh t - 1) without cancellation
    const double term = std::exp(expo) * std::cosh(order * t);
    sum += term;
    if (term < 1e-18 * sum && expo < -40.0) break;
  }
  return h * sum;
}

}  // namespace detail

/// e^x K_M(x), finite for all x > 0: K_0 and K_1 by quadrature, higher
/// orders by the (stable) upward recurrence.
inline double bessel_k_scaled(int order, double x) {
  if (order < 0) throw ArgumentError("bessel_k: negative order");
  if (!(x > 0.0) || !std::isfinite(x)) throw ArgumentError("bessel_k: need finite x > 0");
  const double k0 = detail::bessel_k_scaled_integral(0, x);
  if (order == 0) return k0;
  double km1 = k0;
  double k = detail::bessel_k_scaled_integral(1, x);
  for (int n = 1; n < order; ++n) {
    const double kp1 = km1 + (2.0 * n / x) * k;
    km1 = k;
    k = kp1;
  }
  return k;
}

/// K_M(x) for integer M >= 0, x > 0 (underflows to 0 beyond x ~ 700).
inline double bessel_k(int order, double x) { return bessel_k_scaled(order, x) * std::exp(-x); }

/// Bracket [lo, hi] with f(lo) f(hi) <= 0.
struct RootBracket {
  double lo = 0.0;
  double hi = 0.0;
  double f_lo = 0.0;
  double f_hi = 0.0;

  static RootBracket of(const std::function<double(double)>& f, double lo, double hi) {
    return RootBracket{lo, hi, f(lo), f(hi)};
  }
};

/// Root of f inside `bracket`, returned as the midpoint of a final bracket
/// narrower than `tol` (or than a few ulps when tol is below resolution).
/// Uses TOMS 748 and finishes with bisection if it stalls.
inline double find_root(const std::function<double(double)>& f, RootBracket bracket, double tol) {
  if (!(bracket.lo < bracket.hi) || !std::isfinite(bracket.f_lo) || !std::isfinite(bracket.f_hi) ||
      bracket.f_lo * bracket.f_hi > 0.0) {
    throw ArgumentError("find_root: invalid bracket [" + std::to_string(bracket.lo) + ", " +
                        std::to_string(bracket.hi) + "]");
  }
  if (!(tol > 0.0)) throw ArgumentError("find_root: tolerance must be positive");
  if (bracket.f_lo == 0.0) return bracket.lo;
  if (bracket.f_hi == 0.0) return bracket.hi;

  const double scale = std::max(std::abs(bracket.lo), std::abs(bracket.hi));
  const double width_goal = std::max(tol, 8.0 * std::numeric_limits<double>::epsilon() * scale);
  auto narrow = [width_goal](double a, double b) { return std::abs(b - a) < width_goal; };

  std::uintmax_t iters = 200;
  auto [a, b] = boost::math::tools::toms748_solve(f, bracket.lo, bracket.hi, bracket.f_lo,
                                                  bracket.f_hi, narrow, iters);
  if (narrow(a, b)) return 0.5 * (a + b);

  double fa = f(a);
  while (!narrow(a, b)) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

/// a-th positive zero of J_M (a >= 1), located by a sign-change scan and
/// refined with find_root.
inline double bessel_zero(int order, int index) {
  if (order < 0 || index < 1) throw ArgumentError("bessel_zero: need M >= 0, a >= 1");
  auto f = [order](double x) { return bessel_j(order, x); };
  // No zero of J_M lies below M (and none of J_0 below 2).
  constexpr double step = 0.25;
  double x = (order == 0) ? 0.0 : static_cast<double>(order);
  double fx = f(x == 0.0 ? 1e-300 : x);
  int found = 0;
  const double limit = order + 4.0 * index + 4.0 * (index + 2) * std::numbers::pi;
  while (x < limit) {
    const double xn = x + step;
    const double fn = f(xn);
    if (fx * fn <= 0.0 && fn != 0.0) {
      if (++found == index) return find_root(f, RootBracket{x, xn, fx, fn}, 1e-14);
    } else if (fn == 0.0) {
      if (++found == index) return xn;
    }
    x = xn;
    fx = fn;
  }
  throw SolverError("bessel_zero: failed to bracket zero " + std::to_string(index) + " of J_" +
                    std::to_string(order));
}

}  // namespace qrot
