#pragma once

// Scenario files: JSON documents describing one potential, rotation,
// basis, initial state and time grid. Format described in README.md.

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qrot/angmo.hpp"
#include "qrot/errors.hpp"
#include "qrot/evolution.hpp"
#include "qrot/half_int.hpp"
#include "qrot/spectra.hpp"

namespace qrot {

struct ScenarioBasis {
  std::vector<int> n;  // n, a or n' depending on the family
  int l = 0;
  HalfInt s;
};

struct ScenarioTolerances {
  double equivalence = 1e-9;
  double oracle = 1e-9;
  double fd_relative = 1e-4;
};

struct Scenario {
  std::string name;
  PotentialSpec potential;
  RotationSpec rotation;
  ScenarioBasis basis;
  InitialCoefficients initial;
  std::vector<double> times;
  ScenarioTolerances tolerances;
  std::string output_prefix;
  double energy_scale = 1.0;
  int fd_points = 4000;
  /// The parsed document, echoed into reports.
  nlohmann::json source;
};

namespace detail {

using nlohmann::json;

inline const json& require(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw ParseError("'" + path + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ParseError("missing field '" + (path.empty() ? key : path + "." + key) + "'");
  return *it;
}

inline std::string join_path(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

inline double as_number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ParseError("field '" + path + "' must be a number");
  return v.get<double>();
}

inline double number_or(const json& obj, const std::string& key, double fallback, const std::string& path) {
  auto it = obj.find(key);
  return it == obj.end() ? fallback : as_number(*it, join_path(path, key));
}

inline int as_int(const json& v, const std::string& path) {
  if (!v.is_number_integer()) throw ParseError("field '" + path + "' must be an integer");
  return v.get<int>();
}

/// 1.5, "3/2" or "1.5".
inline HalfInt as_half_int(const json& v, const std::string& path) {
  try {
    if (v.is_number()) return HalfInt::from_double(v.get<double>());
    if (v.is_string()) {
      const auto s = v.get<std::string>();
      const auto slash = s.find('/');
      if (slash != std::string::npos) {
        if (s.substr(slash + 1) != "2") throw ArgumentError("denominator must be 2");
        return HalfInt::from_twice(std::stoi(s.substr(0, slash)));
      }
      return HalfInt::from_double(std::stod(s));
    }
  } catch (const std::exception& e) {
    throw ParseError("field '" + path + "' is not an integer or half-integer (" + e.what() + ")");
  }
  throw ParseError("field '" + path + "' must be a number or a string like \"1/2\"");
}

inline cplx as_complex(const json& v, const std::string& path) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  throw ParseError("field '" + path + "' must be a number or a [re, im] pair");
}

inline Eigen::MatrixXcd as_matrix(const json& v, const std::string& path) {
  if (!v.is_array() || v.empty()) throw ParseError("field '" + path + "' must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(v.size());
  Eigen::MatrixXcd m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = v[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      throw ParseError("field '" + path + "' must be square (row " + std::to_string(i) + ")");
    }
    for (Eigen::Index j = 0; j < rows; ++j) {
      m(i, j) = as_complex(row[static_cast<std::size_t>(j)],
                           path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return m;
}

inline PotentialSpec parse_potential(const json& p) {
  const std::string path = "potential";
  const json& fam = require(p, "family", path);
  if (!fam.is_string()) throw ParseError("field 'potential.family' must be a string");
  const auto family = fam.get<std::string>();
  if (family == "coulomb") {
    return CoulombPotential{as_number(require(p, "alpha", path), "potential.alpha"),
                            number_or(p, "mass", 1.0, path)};
  }
  if (family == "magnetic_coulomb") {
    MagneticCoulombPotential m;
    m.alpha = as_number(require(p, "alpha", path), "potential.alpha");
    m.mass = number_or(p, "mass", 1.0, path);
    m.gyromagnetic = number_or(p, "gyromagnetic", 1.0, path);
    m.charge = number_or(p, "charge", 1.0, path);
    const json& f = require(p, "field", path);
    m.field_uniform = number_or(f, "uniform", 0.0, "potential.field");
    m.field_inverse_r = number_or(f, "inverse_r", 0.0, "potential.field");
    m.field_inverse_r2 = number_or(f, "inverse_r2", 0.0, "potential.field");
    return m;
  }
  if (family == "cyl_well") {
    CylindricalWell w;
    w.radius = as_number(require(p, "radius", path), "potential.radius");
    w.depth = as_number(require(p, "depth", path), "potential.depth");
    w.mass = number_or(p, "mass", 1.0, path);
    w.k_z = number_or(p, "k_z", 0.0, path);
    const json& reg = require(p, "regime", path);
    if (reg == "slow") w.regime = WellRegime::slow;
    else if (reg == "rapid") w.regime = WellRegime::rapid;
    else throw ParseError("field 'potential.regime' must be \"slow\" or \"rapid\"");
    return w;
  }
  if (family == "coulomb_well") {
    CoulombWellPotential c;
    c.alpha = as_number(require(p, "alpha", path), "potential.alpha");
    c.mass = number_or(p, "mass", 1.0, path);
    if (auto it = p.find("nprime_map"); it != p.end()) {
      const json& kind = require(*it, "kind", "potential.nprime_map");
      if (kind == "identity") {
        c.nprime = NPrimeMap::identity();
      } else if (kind == "linear") {
        c.nprime = NPrimeMap::linear(number_or(*it, "omega_coeff", 0.0, "potential.nprime_map"),
                                     number_or(*it, "abs_m_coeff", 0.0, "potential.nprime_map"));
      } else {
        throw ParseError("field 'potential.nprime_map.kind' must be \"identity\" or \"linear\"");
      }
    }
    return c;
  }
  throw ParseError("unknown potential family '" + family + "'");
}

inline InitialCoefficients parse_initial(const json& init, const ScenarioBasis& basis) {
  const std::string path = "initial";
  if (!init.is_object()) throw ParseError("field 'initial' must be an object");
  if (init.contains("states")) {
    const json& states = init["states"];
    if (!states.is_array() || states.empty()) throw ParseError("field 'initial.states' must be a non-empty array");
    InitialCoefficients c;
    c.l = basis.l;
    c.s = basis.s;
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string sp = "initial.states[" + std::to_string(i) + "]";
      const json& st = states[i];
      c.states.push_back(UncoupledLabel{as_int(require(st, "n", sp), sp + ".n"), basis.l,
                                        as_int(require(st, "m_l", sp), sp + ".m_l"), basis.s,
                                        as_half_int(require(st, "m_s", sp), sp + ".m_s")});
    }
    if (init.contains("amplitudes")) {
      const json& amp = init["amplitudes"];
      if (!amp.is_array() || amp.size() != states.size()) {
        throw ParseError("field 'initial.amplitudes' must match 'initial.states' in length");
      }
      Eigen::VectorXcd psi(static_cast<Eigen::Index>(amp.size()));
      for (std::size_t i = 0; i < amp.size(); ++i) {
        psi(static_cast<Eigen::Index>(i)) = as_complex(amp[i], "initial.amplitudes[" + std::to_string(i) + "]");
      }
      c.rho = psi * psi.adjoint();
    } else {
      c.rho = as_matrix(require(init, "rho", path), "initial.rho");
    }
    return c;
  }
  const int n = as_int(require(init, "n", path), "initial.n");
  const int m_l = as_int(require(init, "m_l", path), "initial.m_l");
  return InitialCoefficients::spin_only(n, basis.l, m_l, basis.s,
                                        as_matrix(require(init, "rho", path), "initial.rho"));
}

inline std::vector<double> parse_times(const json& doc, double omega) {
  constexpr int default_count = 64;
  constexpr double default_periods = 5.0;
  auto grid = [](double t_max, int count) {
    if (count < 1) throw ParseError("field 'times.count' must be >= 1");
    std::vector<double> t;
    if (count == 1) return std::vector<double>{t_max};
    for (int k = 0; k < count; ++k) t.push_back(t_max * k / (count - 1));
    return t;
  };
  auto periods_grid = [&](double periods, int count) {
    if (omega == 0.0) throw ValidationError("times: a period-based grid needs a nonzero rotation rate");
    return grid(periods * 2.0 * std::numbers::pi / std::abs(omega), count);
  };
  auto it = doc.find("times");
  if (it == doc.end()) return periods_grid(default_periods, default_count);
  const json& t = *it;
  if (t.is_array()) {
    std::vector<double> out;
    for (std::size_t i = 0; i < t.size(); ++i) out.push_back(as_number(t[i], "times[" + std::to_string(i) + "]"));
    return out;
  }
  if (!t.is_object()) throw ParseError("field 'times' must be an array or an object");
  const int count = t.contains("count") ? as_int(t["count"], "times.count") : default_count;
  if (t.contains("t_max")) return grid(as_number(t["t_max"], "times.t_max"), count);
  return periods_grid(number_or(t, "periods", default_periods, "times"), count);
}

}  // namespace detail

/// Parses scenario text. JSON syntax errors carry their line number.
inline Scenario parse_scenario(const std::string& text) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    int line = 1;
    for (std::size_t i = 0; i < std::min<std::size_t>(e.byte, text.size()); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw ParseError(std::string("malformed JSON: ") + e.what(), line);
  }
  if (!doc.is_object()) throw ParseError("scenario must be a JSON object");

  Scenario sc;
  sc.source = doc;
  const json& name = detail::require(doc, "name", "");
  if (!name.is_string()) throw ParseError("field 'name' must be a string");
  sc.name = name.get<std::string>();
  sc.potential = detail::parse_potential(detail::require(doc, "potential", ""));

  const json& rot = detail::require(doc, "rotation", "");
  sc.rotation.omega_z = detail::as_number(detail::require(rot, "omega_z", "rotation"), "rotation.omega_z");
  if (auto it = rot.find("convention"); it != rot.end()) {
    if (*it == "active-frame") sc.rotation.convention = FrameConvention::active_frame;
    else if (*it == "passive-frame") sc.rotation.convention = FrameConvention::passive_frame;
    else throw ParseError("field 'rotation.convention' must be \"active-frame\" or \"passive-frame\"");
  }

  const json& basis = detail::require(doc, "basis", "");
  const json& ns = detail::require(basis, "n", "basis");
  if (ns.is_array()) {
    for (std::size_t i = 0; i < ns.size(); ++i) sc.basis.n.push_back(detail::as_int(ns[i], "basis.n[" + std::to_string(i) + "]"));
  } else {
    sc.basis.n.push_back(detail::as_int(ns, "basis.n"));
  }
  if (sc.basis.n.empty()) throw ParseError("field 'basis.n' must list at least one value");
  sc.basis.l = detail::as_int(detail::require(basis, "l", "basis"), "basis.l");
  sc.basis.s = detail::as_half_int(detail::require(basis, "s", "basis"), "basis.s");

  sc.initial = detail::parse_initial(detail::require(doc, "initial", ""), sc.basis);
  sc.initial.basis_n = sc.basis.n;
  sc.times = detail::parse_times(doc, effective_rotation_rate(sc.potential, sc.rotation));

  if (auto it = doc.find("tolerances"); it != doc.end()) {
    sc.tolerances.equivalence = detail::number_or(*it, "equivalence", sc.tolerances.equivalence, "tolerances");
    sc.tolerances.oracle = detail::number_or(*it, "oracle", sc.tolerances.oracle, "tolerances");
    sc.tolerances.fd_relative = detail::number_or(*it, "fd_relative", sc.tolerances.fd_relative, "tolerances");
  }
  if (auto it = doc.find("outputs"); it != doc.end()) {
    const json& prefix = detail::require(*it, "prefix", "outputs");
    if (!prefix.is_string()) throw ParseError("field 'outputs.prefix' must be a string");
    sc.output_prefix = prefix.get<std::string>();
  }
  sc.energy_scale = detail::number_or(doc, "energy_scale", 1.0, "");
  if (auto it = doc.find("fd_points"); it != doc.end()) sc.fd_points = detail::as_int(*it, "fd_points");
  return sc;
}

/// Domain constraints not expressible in the grammar.
inline void validate_scenario(const Scenario& sc) {
  auto fail = [&](const std::string& msg) { throw ValidationError("scenario '" + sc.name + "': " + msg); };
  if (sc.times.empty()) fail("time list is empty");
  for (double t : sc.times) {
    if (!std::isfinite(t)) fail("non-finite time");
  }
  if (!(sc.tolerances.equivalence > 0.0) || !(sc.tolerances.oracle > 0.0) || !(sc.tolerances.fd_relative > 0.0)) {
    fail("tolerances must be positive");
  }
  if (!std::isfinite(sc.rotation.omega_z)) fail("rotation rate must be finite");
  if (sc.basis.l < 0 || sc.basis.s.twice() < 0) fail("basis needs l >= 0 and s >= 0");
  if (sc.fd_points < 200) fail("fd_points must be >= 200");
  for (int n : sc.basis.n) {
    if (n < 1) fail("basis n values must be >= 1");
  }
  for (const auto& st : sc.initial.states) {
    if (std::find(sc.basis.n.begin(), sc.basis.n.end(), st.n) == sc.basis.n.end()) {
      fail("initial state n=" + std::to_string(st.n) + " is not in basis.n");
    }
    if (std::abs(st.m_l) > sc.basis.l || st.m_s.abs() > sc.basis.s || !same_parity(st.m_s, sc.basis.s)) {
      fail("initial state " + st.str() + " is outside the basis");
    }
  }
  try {
    build_rho0(sc.initial);
  } catch (const ArgumentError& e) {
    fail(e.what());
  }
  const HalfInt max_m = HalfInt(sc.basis.l) + sc.basis.s;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, CoulombPotential> || std::is_same_v<T, MagneticCoulombPotential>) {
          if (!(p.alpha > 0.0) || !(p.mass > 0.0)) fail("alpha and mass must be positive");
          for (int n : sc.basis.n) {
            if (sc.basis.l >= n) fail("l < n required (n=" + std::to_string(n) + ")");
          }
        } else if constexpr (std::is_same_v<T, CylindricalWell>) {
          if (!(p.radius > 0.0) || !(p.depth > 0.0) || !(p.mass > 0.0)) fail("radius, depth and mass must be positive");
          if (!sc.basis.s.is_integer()) fail("cylindrical wells need integer spin so that M is an integer");
          const double lambda = p.radius * std::abs(sc.rotation.omega_z);
          if (p.regime == WellRegime::slow && !(lambda < 1.0)) fail("slow regime requires R*omega < 1");
          if (p.regime == WellRegime::rapid && !(lambda > 1.0)) fail("rapid regime requires R*omega > 1");
        } else {
          if (!(p.alpha > 0.0) || !(p.mass > 0.0)) fail("alpha and mass must be positive");
          for (int n : sc.basis.n) {
            if (max_m > HalfInt(n - 1)) {
              fail("|M| <= n' - 1 violated: l + s = " + max_m.str() + " with n'=" + std::to_string(n));
            }
          }
        }
      },
      sc.potential);
}

inline Scenario load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read scenario file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  Scenario sc = parse_scenario(ss.str());
  validate_scenario(sc);
  return sc;
}

}  // namespace qrot
