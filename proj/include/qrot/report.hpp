#pragma once

// Scenario pipeline and its outputs: report JSON plus spectrum and
// evolution CSV tables.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "qrot/angmo.hpp"
#include "qrot/equivalence.hpp"
#include "qrot/errors.hpp"
#include "qrot/evolution.hpp"
#include "qrot/radial_fd.hpp"
#include "qrot/scenario.hpp"
#include "qrot/spectra.hpp"

#ifndef QROT_VERSION
#define QROT_VERSION "0.0.0"
#endif

namespace qrot {

inline constexpr const char* phase_convention = "rho(t) = exp(+iHt) rho exp(-iHt)";

/// Closed-form energy vs finite-difference energy for one radial problem.
/// Energies are rotation-stripped (E + M w_eff, minus k_z^2/2m for wells).
struct FdCheck {
  std::string label;
  double analytic = 0.0;
  double fd = 0.0;
  double abs_diff = 0.0;
  double rel_diff = 0.0;
  double tolerance = 0.0;  // relative
  double drift = 0.0;
  bool accuracy_warning = false;
  bool passed = false;
};

struct OracleSummary {
  std::vector<FdCheck> fd;
  std::vector<std::string> notes;
  /// max over sampled t of |analytic - exp(iHt)| elementwise.
  double active_vs_exact = 0.0;
  double passive_vs_exact = 0.0;
  double evolution_tolerance = 0.0;
  bool fd_passed = true;
  bool evolution_passed = true;
};

struct ReportBundle {
  Scenario scenario;
  std::vector<SpectrumEntry> spectrum;
  double omega_eff = 0.0;
  CriterionResult criterion;
  EquivalenceReport equivalence;
  OracleSummary oracle;
  std::string version = QROT_VERSION;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct FdProblem {
  std::string label;
  std::function<double(double)> v;
  double mass = 1.0;
  RadialGeometry geometry = RadialGeometry::spherical;
  RadialGrid grid;
  int order = 0;
  int index = 0;
  double analytic = 0.0;
};

inline std::string fd_key(const SpectrumEntry& e, bool abs_m) {
  std::string m = abs_m ? e.label.M.abs().str() : e.label.M.str();
  return "n=" + std::to_string(e.label.n) + ";l=" + std::to_string(e.label.l) + ";M=" + m;
}

/// One FD problem per distinct radial equation in the spectrum.
inline std::vector<FdProblem> fd_problems(const Scenario& sc, const std::vector<SpectrumEntry>& spectrum,
                                          double omega_eff, std::vector<std::string>& notes) {
  std::vector<FdProblem> out;
  std::set<std::string> seen;
  for (const auto& e : spectrum) {
    std::optional<FdProblem> prob = std::visit(
        [&](const auto& p) -> std::optional<FdProblem> {
          using T = std::decay_t<decltype(p)>;
          FdProblem fp;
          const double mv = e.label.M.value();
          if constexpr (std::is_same_v<T, CoulombPotential>) {
            fp.label = fd_key(e, true);
            const int l = e.label.l;
            fp.v = [=](double r) { return l * (l + 1.0) / (2.0 * p.mass * r * r) - p.alpha / r; };
            fp.mass = p.mass;
            fp.grid = {(20.0 * e.label.n * e.label.n + 40.0) / (p.mass * p.alpha), sc.fd_points};
            fp.index = e.label.n - l - 1;
            fp.analytic = e.energy + mv * omega_eff;
          } else if constexpr (std::is_same_v<T, MagneticCoulombPotential>) {
            fp.label = fd_key(e, false);
            MagneticCoulombPotential stat = p;
            stat.field_uniform = 0.0;
            fp.v = magnetic_effective_potential(stat, e.label.M, e.label.l, RotationSpec{});
            fp.mass = p.mass;
            const double strength = p.alpha + p.coupling() * mv * p.field_inverse_r;
            fp.grid = {(20.0 * e.label.n * e.label.n + 40.0) / (p.mass * strength), sc.fd_points};
            fp.index = e.label.n - e.label.l - 1;
            fp.analytic = e.energy + mv * omega_eff;
          } else if constexpr (std::is_same_v<T, CylindricalWell>) {
            fp.label = fd_key(e, true);
            fp.mass = p.mass;
            fp.geometry = RadialGeometry::cylindrical;
            fp.order = e.label.M.abs().as_int();
            fp.index = e.label.n - 1;
            fp.analytic = e.energy + mv * omega_eff - p.k_z * p.k_z / (2.0 * p.mass);
            if (p.regime == WellRegime::slow) {
              // Outer boundary at an integer multiple of R so the step sits on a cell face.
              const int mult = std::max(4, static_cast<int>(std::ceil(1.0 + 30.0 / e.y_root.value())));
              const int pts = std::max(1, sc.fd_points / mult) * mult;
              fp.grid = {p.radius * mult, pts};
              const double radius = p.radius;
              const double depth = p.depth;
              fp.v = [=](double r) { return r < radius ? -depth : 0.0; };
            } else {
              fp.grid = {1.0 / std::abs(omega_eff), sc.fd_points};
              const double depth = p.depth;
              fp.v = [=](double) { return -depth; };
            }
          } else {
            if (!p.nprime.is_identity()) {
              notes.push_back("n' map '" + p.nprime.description + "' has no finite-difference counterpart; FD check skipped");
              return std::nullopt;
            }
            if (!e.label.M.is_integer()) {
              notes.push_back("half-integer M=" + e.label.M.str() + " has no planar finite-difference counterpart; skipped");
              return std::nullopt;
            }
            fp.label = fd_key(e, true);
            fp.mass = p.mass;
            fp.geometry = RadialGeometry::cylindrical;
            fp.order = e.label.M.abs().as_int();
            fp.index = e.label.n - fp.order - 1;
            const double alpha = p.alpha;
            fp.v = [=](double r) { return -alpha / r; };
            fp.grid = {(20.0 * e.label.n * e.label.n + 40.0) / (p.mass * p.alpha), sc.fd_points};
            fp.analytic = e.energy + mv * omega_eff;
          }
          return fp;
        },
        sc.potential);
    if (!prob) continue;
    if (seen.insert(prob->label).second) out.push_back(std::move(*prob));
  }
  return out;
}

inline OracleSummary run_oracles(const Scenario& sc, const std::vector<SpectrumEntry>& spectrum, double omega_eff,
                                 const DensityMatrix& rho0, const GeneratorSet& gens,
                                 const EquivalenceReport& rep) {
  OracleSummary o;
  const auto problems = fd_problems(sc, spectrum, omega_eff, o.notes);
  std::sort(o.notes.begin(), o.notes.end());
  o.notes.erase(std::unique(o.notes.begin(), o.notes.end()), o.notes.end());
  for (const auto& fp : problems) {
    const auto fd = radial_fd_solve(fp.v, fp.mass, fp.geometry, fp.grid, fp.index + 1, fp.order);
    FdCheck c;
    c.label = fp.label;
    c.analytic = fp.analytic;
    c.fd = fd.eigenvalues.back();
    c.abs_diff = std::abs(c.fd - c.analytic);
    c.rel_diff = c.abs_diff / std::max(std::abs(c.analytic), 1e-300);
    c.tolerance = sc.tolerances.fd_relative;
    c.drift = fd.max_drift;
    c.accuracy_warning = fd.accuracy_warning;
    c.passed = c.rel_diff < c.tolerance;
    o.fd_passed = o.fd_passed && c.passed;
    o.fd.push_back(c);
  }

  const Eigen::MatrixXcd h = diagonal_hamiltonian(rho0.basis(), spectrum);
  const Eigen::MatrixXcd hz = static_cast<double>(sc.rotation.sign()) * omega_eff * gens.jz;
  for (const auto& s : rep.samples) {
    const DensityMatrix act = oracle_evolve(rho0, h, s.t);
    const DensityMatrix pas = oracle_evolve(rho0, hz, s.passive_time);
    o.active_vs_exact = std::max(o.active_vs_exact, (act.elements() - s.active.elements()).cwiseAbs().maxCoeff());
    o.passive_vs_exact = std::max(o.passive_vs_exact, (pas.elements() - s.passive.elements()).cwiseAbs().maxCoeff());
  }
  o.evolution_tolerance = sc.tolerances.oracle;
  o.evolution_passed = o.active_vs_exact < o.evolution_tolerance && o.passive_vs_exact < o.evolution_tolerance;
  return o;
}

}  // namespace detail

/// Full pipeline on a parsed, validated scenario. Library argument errors
/// surface as ValidationError, solver failures as SolverError, both
/// prefixed with the scenario name.
inline ReportBundle run_scenario(const Scenario& sc) {
  const std::string ctx = "scenario '" + sc.name + "': ";
  try {
    ReportBundle b;
    b.scenario = sc;
    b.omega_eff = effective_rotation_rate(sc.potential, sc.rotation);
    const DensityMatrix rho0 = build_rho0(sc.initial);
    const GeneratorSet gens = generator_matrices(rho0.basis());
    b.spectrum = build_spectrum(sc.potential, sc.rotation, rho0.basis());
    b.criterion = check_criterion(CriterionInput{b.spectrum, b.omega_eff}, sc.tolerances.equivalence);
    const RotationSpec eff{b.omega_eff, sc.rotation.convention};
    b.equivalence = compare_evolutions(rho0, b.spectrum, gens, eff, sc.times, sc.tolerances.equivalence);
    b.oracle = detail::run_oracles(sc, b.spectrum, b.omega_eff, rho0, gens, b.equivalence);
    return b;
  } catch (const SolverError& e) {
    throw SolverError(ctx + e.what());
  } catch (const ArgumentError& e) {
    throw ValidationError(ctx + e.what());
  }
}

inline ReportBundle run_scenario(const std::string& path) { return run_scenario(load_scenario(path)); }

inline std::string spectrum_csv(const ReportBundle& b) {
  using detail::fmt17;
  std::string out = "family,n,l,s,J,M,extra_index,k_z,omega,E\n";
  for (const auto& e : b.spectrum) {
    out += to_string(e.family) + "," + std::to_string(e.label.n) + "," + std::to_string(e.label.l) + "," +
           e.label.s.decimal() + "," + e.label.J.decimal() + "," + e.label.M.decimal() + "," +
           std::to_string(e.extra_index) + "," + fmt17(e.k_z) + "," + fmt17(e.omega) + "," +
           fmt17(e.energy * b.scenario.energy_scale) + "\n";
  }
  return out;
}

inline std::string evolution_csv(const ReportBundle& b) {
  using detail::fmt17;
  std::string out = "t,row_label,col_label,re_active,im_active,re_passive,im_passive,abs_diff,trace_distance\n";
  for (const auto& s : b.equivalence.samples) {
    const auto& basis = s.active.basis();
    const auto dim = static_cast<Eigen::Index>(basis.size());
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        const cplx a = s.active(i, j);
        const cplx p = s.passive(i, j);
        out += fmt17(s.t) + "," + basis[static_cast<std::size_t>(i)].str() + "," +
               basis[static_cast<std::size_t>(j)].str() + "," + fmt17(a.real()) + "," + fmt17(a.imag()) + "," +
               fmt17(p.real()) + "," + fmt17(p.imag()) + "," + fmt17(std::abs(a - p)) + "," +
               fmt17(s.trace_distance) + "\n";
      }
    }
  }
  return out;
}

inline nlohmann::ordered_json report_json(const ReportBundle& b) {
  using nlohmann::ordered_json;
  const auto& sc = b.scenario;
  const auto& rep = b.equivalence;
  ordered_json j;
  j["tool"] = "qrot";
  j["version"] = b.version;
  j["conventions"] = {{"phase", phase_convention},
                      {"frame", to_string(sc.rotation.convention)},
                      {"units", "hbar = 1"},
                      {"energy_scale", sc.energy_scale}};
  j["scenario"] = sc.source;
  j["omega_eff"] = b.omega_eff;

  ordered_json spec = ordered_json::array();
  for (const auto& e : b.spectrum) {
    ordered_json row = {{"label", e.label.str()}, {"family", to_string(e.family)},
                        {"extra_index", e.extra_index}, {"k_z", e.k_z},
                        {"omega", e.omega}, {"energy", e.energy * sc.energy_scale}};
    if (e.lambda) row["lambda"] = *e.lambda;
    if (e.kappa) row["kappa"] = *e.kappa;
    if (e.y_root) row["y_root"] = *e.y_root;
    if (e.interior_root) row["interior_root"] = *e.interior_root;
    if (e.bessel_root) row["bessel_root"] = *e.bessel_root;
    if (e.nprime_value) row["nprime_value"] = *e.nprime_value;
    spec.push_back(row);
  }
  j["spectrum"] = spec;

  ordered_json mult = ordered_json::array();
  for (const auto& m : b.criterion.multiplets) {
    mult.push_back({{"multiplet", m.head.str()}, {"min_e0", m.min_e0}, {"max_e0", m.max_e0}, {"spread", m.spread()}});
  }
  j["criterion"] = {{"verdict", to_string(b.criterion.verdict)},
                    {"max_spread", b.criterion.max_spread},
                    {"tolerance", sc.tolerances.equivalence},
                    {"multiplets", mult}};

  j["equivalence"] = {{"family", to_string(rep.family)},
                      {"verdict_criterion", to_string(rep.verdict_criterion)},
                      {"verdict_dynamical", to_string(rep.verdict_dynamical)},
                      {"verdicts_agree", rep.verdicts_agree},
                      {"max_trace_distance", rep.max_trace_distance},
                      {"max_element_phase_error", rep.max_element_phase_error},
                      {"tolerance", rep.tolerance},
                      {"convention", to_string(rep.convention)},
                      {"times_sampled", rep.times_sampled.size()},
                      {"cross_n_coherence", rep.cross_n_coherence}};

  ordered_json fd = ordered_json::array();
  for (const auto& c : b.oracle.fd) {
    fd.push_back({{"label", c.label}, {"analytic", c.analytic}, {"fd", c.fd}, {"abs_diff", c.abs_diff},
                  {"rel_diff", c.rel_diff}, {"tolerance", c.tolerance}, {"drift", c.drift},
                  {"accuracy_warning", c.accuracy_warning}, {"passed", c.passed}});
  }
  j["oracle"] = {{"fd_energies", fd},
                 {"fd_passed", b.oracle.fd_passed},
                 {"evolution", {{"active_vs_exact", b.oracle.active_vs_exact},
                                {"passive_vs_exact", b.oracle.passive_vs_exact},
                                {"tolerance", b.oracle.evolution_tolerance},
                                {"passed", b.oracle.evolution_passed}}},
                 {"notes", b.oracle.notes}};
  return j;
}

struct OutputSelection {
  bool report = true;
  bool spectrum = true;
  bool evolution = true;
};

/// Writes the selected files under `prefix` (parent directories are
/// created) and returns their paths.
inline std::vector<std::string> emit_outputs(const ReportBundle& b, const std::string& prefix,
                                             OutputSelection which = {}) {
  namespace fs = std::filesystem;
  if (prefix.empty()) throw IoError("empty output prefix");
  std::error_code ec;
  const fs::path parent = fs::path(prefix).parent_path();
  if (!parent.empty()) {
    fs::create_directories(parent, ec);
    if (ec) throw IoError("cannot create directory '" + parent.string() + "': " + ec.message());
  }
  std::vector<std::string> written;
  auto put = [&](const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for '" + path + "'");
    written.push_back(path);
  };
  if (which.report) put(prefix + ".report.json", report_json(b).dump(2) + "\n");
  if (which.spectrum) put(prefix + ".spectrum.csv", spectrum_csv(b));
  if (which.evolution) put(prefix + ".evolution.csv", evolution_csv(b));
  return written;
}

}  // namespace qrot
