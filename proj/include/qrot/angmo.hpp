#pragma once

// Angular-momentum algebra: Clebsch-Gordan coefficients (Condon-Shortley
// phase), coupled |n l s; J M> bases and rotation generators on a truncated
// coupled basis. Units hbar = 1.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qrot/errors.hpp"
#include "qrot/half_int.hpp"

namespace qrot {

/// |n, l, m_l; s, m_s>
struct UncoupledLabel {
  int n = 1;
  int l = 0;
  int m_l = 0;
  HalfInt s;
  HalfInt m_s;

  friend bool operator==(const UncoupledLabel&, const UncoupledLabel&) = default;
  friend auto operator<=>(const UncoupledLabel&, const UncoupledLabel&) = default;

  void validate() const {
    if (n < 1 || l < 0 || std::abs(m_l) > l || s.twice() < 0 || m_s.abs() > s ||
        !same_parity(s, m_s)) {
      throw ArgumentError("invalid uncoupled label " + str());
    }
  }

  std::string str() const {
    return "n=" + std::to_string(n) + ";l=" + std::to_string(l) + ";ml=" + std::to_string(m_l) +
           ";s=" + s.str() + ";ms=" + m_s.str();
  }
};

/// |n, l, s; J, M>
struct CoupledLabel {
  int n = 1;
  int l = 0;
  HalfInt s;
  HalfInt J;
  HalfInt M;

  friend bool operator==(const CoupledLabel&, const CoupledLabel&) = default;
  friend auto operator<=>(const CoupledLabel&, const CoupledLabel&) = default;

  /// Same (n, l, s, J): the 2J+1 states a ladder operator connects.
  bool same_multiplet(const CoupledLabel& o) const {
    return n == o.n && l == o.l && s == o.s && J == o.J;
  }

  void validate() const {
    const HalfInt lo = (HalfInt(l) - s).abs();
    const HalfInt hi = HalfInt(l) + s;
    if (n < 1 || l < 0 || s.twice() < 0 || J < lo || J > hi || !same_parity(J, hi) ||
        M.abs() > J || !same_parity(M, J)) {
      throw ArgumentError("invalid coupled label " + str());
    }
  }

  std::string str() const {
    return "n=" + std::to_string(n) + ";l=" + std::to_string(l) + ";s=" + s.str() +
           ";J=" + J.str() + ";M=" + M.str();
  }
};

namespace detail {

inline double factorial(int k) {
  static const std::array<double, 171> table = [] {
    std::array<double, 171> t{};
    t[0] = 1.0;
    for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
    return t;
  }();
  if (k < 0 || k > 170) throw ArgumentError("factorial argument out of range");
  return table[static_cast<std::size_t>(k)];
}

}  // namespace detail

/// <j1 m1; j2 m2 | J M> in the Condon-Shortley convention, Racah's closed sum.
/// Zero when M != m1 + m2 or J violates the triangle rule; throws on
/// parity-inconsistent or out-of-range projections.
inline double clebsch_gordan(HalfInt j1, HalfInt m1, HalfInt j2, HalfInt m2, HalfInt J, HalfInt M) {
  if (j1.twice() < 0 || j2.twice() < 0 || J.twice() < 0) {
    throw ArgumentError("negative angular momentum in Clebsch-Gordan arguments");
  }
  if (!same_parity(j1, m1) || !same_parity(j2, m2) || !same_parity(J, M)) {
    throw ArgumentError("projection parity does not match its angular momentum");
  }
  if (m1.abs() > j1 || m2.abs() > j2 || M.abs() > J) {
    throw ArgumentError("projection exceeds its angular momentum");
  }
  if (!same_parity(J, j1 + j2)) {
    throw ArgumentError("J - (j1 + j2) must be an integer");
  }
  if (M != m1 + m2) return 0.0;
  if (J < (j1 - j2).abs() || J > j1 + j2) return 0.0;

  // All combinations below are integers by the parity checks above.
  const int a = (j1 + j2 - J).as_int();
  const int b = (j1 - m1).as_int();
  const int c = (j2 + m2).as_int();
  const int d = (J - j2 + m1).as_int();
  const int e = (J - j1 - m2).as_int();
  using detail::factorial;

  const double norm =
      std::sqrt((J.twice() + 1) * factorial(a) * factorial((j1 - j2 + J).as_int()) *
                factorial((j2 - j1 + J).as_int()) / factorial((j1 + j2 + J).as_int() + 1)) *
      std::sqrt(factorial((j1 + m1).as_int()) * factorial(b) * factorial(c) *
                factorial((j2 - m2).as_int()) * factorial((J + M).as_int()) *
                factorial((J - M).as_int()));

  const int kmin = std::max({0, -d, -e});
  const int kmax = std::min({a, b, c});
  double sum = 0.0;
  for (int k = kmin; k <= kmax; ++k) {
    const double term = 1.0 / (factorial(k) * factorial(a - k) * factorial(b - k) *
                               factorial(c - k) * factorial(d + k) * factorial(e + k));
    sum += (k % 2 == 0) ? term : -term;
  }
  return norm * sum;
}

/// <l m_l; s m_s | J M> with an integer orbital momentum.
inline double clebsch_gordan(int l, HalfInt m_l, HalfInt s, HalfInt m_s, HalfInt J, HalfInt M) {
  if (!m_l.is_integer()) throw ArgumentError("orbital projection must be an integer");
  return clebsch_gordan(HalfInt(l), m_l, s, m_s, J, M);
}

struct CoupledState {
  CoupledLabel label;
  /// Nonzero Clebsch-Gordan weights on the product basis.
  std::vector<std::pair<UncoupledLabel, double>> expansion;
};

/// All (2l+1)(2s+1) states of l (x) s. Order: J ascending, M descending.
inline std::vector<CoupledState> couple_basis(int n, int l, HalfInt s) {
  if (n < 1 || l < 0 || s.twice() < 0) {
    throw ArgumentError("couple_basis needs n >= 1, l >= 0, s >= 0");
  }
  std::vector<CoupledState> out;
  const HalfInt lo = (HalfInt(l) - s).abs();
  const HalfInt hi = HalfInt(l) + s;
  for (HalfInt J = lo; J <= hi; J += 1) {
    for (HalfInt M = J; M >= -J; M -= 1) {
      CoupledState st{CoupledLabel{n, l, s, J, M}, {}};
      for (int m_l = l; m_l >= -l; --m_l) {
        const HalfInt m_s = M - HalfInt(m_l);
        if (m_s.abs() > s) continue;
        const double c = clebsch_gordan(l, HalfInt(m_l), s, m_s, J, M);
        if (c != 0.0) st.expansion.emplace_back(UncoupledLabel{n, l, m_l, s, m_s}, c);
      }
      out.push_back(std::move(st));
    }
  }
  return out;
}

/// Product states of l (x) s in canonical order: m_l descending, then m_s descending.
inline std::vector<UncoupledLabel> uncoupled_basis(int n, int l, HalfInt s) {
  std::vector<UncoupledLabel> out;
  for (int m_l = l; m_l >= -l; --m_l) {
    for (HalfInt m_s = s; m_s >= -s; m_s -= 1) out.push_back(UncoupledLabel{n, l, m_l, s, m_s});
  }
  return out;
}

struct GeneratorSet {
  std::vector<CoupledLabel> basis;
  Eigen::MatrixXcd jx;
  Eigen::MatrixXcd jy;
  Eigen::MatrixXcd jz;
};

/// Jx, Jy, Jz on `basis`. Ladder elements only connect labels of the same
/// (n, l, s, J) multiplet that are both present in the basis.
inline GeneratorSet generator_matrices(const std::vector<CoupledLabel>& basis) {
  if (basis.empty()) throw ArgumentError("generator_matrices: empty basis");
  {
    std::set<CoupledLabel> seen;
    for (const auto& lab : basis) {
      lab.validate();
      if (!seen.insert(lab).second) {
        throw ArgumentError("generator_matrices: duplicate label " + lab.str());
      }
    }
  }
  const auto dim = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd jplus = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXcd jz = Eigen::MatrixXcd::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const auto& bi = basis[static_cast<std::size_t>(i)];
    jz(i, i) = bi.M.value();
    for (Eigen::Index k = 0; k < dim; ++k) {
      const auto& bk = basis[static_cast<std::size_t>(k)];
      if (bi.same_multiplet(bk) && bi.M == bk.M + 1) {
        const double j = bk.J.value();
        const double m = bk.M.value();
        jplus(i, k) = std::sqrt(j * (j + 1.0) - m * (m + 1.0));
      }
    }
  }
  const Eigen::MatrixXcd jminus = jplus.adjoint();
  const std::complex<double> two_i(0.0, 2.0);
  return GeneratorSet{basis, (jplus + jminus) / 2.0, (jplus - jminus) / two_i, jz};
}

inline std::vector<CoupledLabel> labels_of(const std::vector<CoupledState>& states) {
  std::vector<CoupledLabel> out;
  out.reserve(states.size());
  for (const auto& st : states) out.push_back(st.label);
  return out;
}

}  // namespace qrot
