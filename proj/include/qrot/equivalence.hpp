#pragma once

// Active vs passive rotation: the degeneracy form of [J, H0] = 0, a direct
// comparison of the two evolutions, and the rank-1 (Wigner-Eckart) test of
// (J, J') blocks of a density matrix.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "qrot/angmo.hpp"
#include "qrot/errors.hpp"
#include "qrot/evolution.hpp"
#include "qrot/spectra.hpp"

namespace qrot {

enum class Verdict { equivalent, not_equivalent };

inline std::string to_string(Verdict v) {
  return v == Verdict::equivalent ? "equivalent" : "not-equivalent";
}

struct CriterionInput {
  std::vector<SpectrumEntry> spectrum;
  /// Rate whose -M w_eff term is stripped: E0 = E + M w_eff.
  double omega_eff = 0.0;
};

struct MultipletSpread {
  CoupledLabel head;  // label with M = J
  double min_e0 = 0.0;
  double max_e0 = 0.0;
  double spread() const { return max_e0 - min_e0; }
};

struct CriterionResult {
  Verdict verdict = Verdict::equivalent;
  double max_spread = 0.0;
  std::vector<MultipletSpread> multiplets;
};

/// Equivalent iff the rotation-stripped energies are M-degenerate (spread
/// below tol) in every (n, l, s, J) multiplet.
inline CriterionResult check_criterion(const CriterionInput& input, double tol) {
  if (input.spectrum.empty()) throw ArgumentError("check_criterion: empty spectrum");
  using Key = std::tuple<int, int, HalfInt, HalfInt>;
  std::map<Key, std::map<HalfInt, double>> groups;
  for (const auto& e : input.spectrum) {
    const Key key{e.label.n, e.label.l, e.label.s, e.label.J};
    groups[key][e.label.M] = e.energy + e.label.M.value() * input.omega_eff;
  }
  CriterionResult out;
  for (const auto& [key, by_m] : groups) {
    const auto& [n, l, s, J] = key;
    for (HalfInt m = -J; m <= J; m += 1) {
      if (!by_m.count(m)) {
        throw ArgumentError("check_criterion: multiplet n=" + std::to_string(n) + " l=" +
                            std::to_string(l) + " s=" + s.str() + " J=" + J.str() +
                            " is missing M=" + m.str());
      }
    }
    MultipletSpread ms;
    ms.head = CoupledLabel{n, l, s, J, J};
    ms.min_e0 = by_m.begin()->second;
    ms.max_e0 = ms.min_e0;
    for (const auto& [m, e0] : by_m) {
      ms.min_e0 = std::min(ms.min_e0, e0);
      ms.max_e0 = std::max(ms.max_e0, e0);
    }
    out.max_spread = std::max(out.max_spread, ms.spread());
    out.multiplets.push_back(ms);
  }
  out.verdict = out.max_spread < tol ? Verdict::equivalent : Verdict::not_equivalent;
  return out;
}

/// Matrix form of the criterion for an arbitrary Hermitian H on the
/// generators' basis: max over Jx, Jy, Jz of ||[J_k, H + w_eff Jz]||_max.
inline double commutator_residual(const Eigen::MatrixXcd& h, const GeneratorSet& g, double omega_eff) {
  const Eigen::MatrixXcd h0 = h + omega_eff * g.jz;
  double worst = 0.0;
  for (const Eigen::MatrixXcd* j : {&g.jx, &g.jy, &g.jz}) {
    const Eigen::MatrixXcd c = (*j) * h0 - h0 * (*j);
    worst = std::max(worst, c.cwiseAbs().maxCoeff());
  }
  return worst;
}

struct EvolutionSample {
  double t = 0.0;
  /// Evolution time handed to evolve_passive (-s t for convention sign s).
  double passive_time = 0.0;
  DensityMatrix active;
  DensityMatrix passive;
  double trace_distance = 0.0;
  double max_abs_diff = 0.0;
};

struct EquivalenceReport {
  Family family = Family::coulomb;
  Verdict verdict_criterion = Verdict::equivalent;
  Verdict verdict_dynamical = Verdict::equivalent;
  bool verdicts_agree = true;
  double criterion_spread = 0.0;
  std::vector<MultipletSpread> multiplets;
  double max_trace_distance = 0.0;
  double max_element_phase_error = 0.0;
  std::vector<double> times_sampled;
  double tolerance = 0.0;
  FrameConvention convention = FrameConvention::active_frame;
  double omega_eff = 0.0;
  /// rho0 has coherences between different n (outside the single-n phase law).
  bool cross_n_coherence = false;
  std::vector<EvolutionSample> samples;
};

/// Compares rho_act(t) with the passive evolution at -s t (s the convention
/// sign) for every sampled t. `rot.omega_z` is the detector rate, which is
/// also the w_eff stripped by the criterion.
inline EquivalenceReport compare_evolutions(const DensityMatrix& rho0,
                                            const std::vector<SpectrumEntry>& spectrum,
                                            const GeneratorSet& generators, const RotationSpec& rot,
                                            const std::vector<double>& times, double tol) {
  if (times.empty()) throw ArgumentError("compare_evolutions: empty time list");
  if (spectrum.empty()) throw ArgumentError("compare_evolutions: empty spectrum");
  EquivalenceReport rep;
  rep.family = spectrum.front().family;
  rep.times_sampled = times;
  rep.tolerance = tol;
  rep.convention = rot.convention;
  rep.omega_eff = rot.omega_z;

  const auto crit = check_criterion(CriterionInput{spectrum, rot.omega_z}, tol);
  rep.verdict_criterion = crit.verdict;
  rep.criterion_spread = crit.max_spread;
  rep.multiplets = crit.multiplets;

  const auto dim = static_cast<Eigen::Index>(rho0.dim());
  for (Eigen::Index i = 0; i < dim; ++i) {
    for (Eigen::Index j = 0; j < dim; ++j) {
      if (rho0.basis()[static_cast<std::size_t>(i)].n != rho0.basis()[static_cast<std::size_t>(j)].n &&
          std::abs(rho0(i, j)) > 1e-14) {
        rep.cross_n_coherence = true;
      }
    }
  }

  for (double t : times) {
    const double tp = -rot.sign() * t;
    DensityMatrix act = evolve_active(rho0, spectrum, t);
    DensityMatrix pas = evolve_passive(rho0, generators, rot, tp);
    const double td = trace_distance(act, pas);
    const double diff = (act.elements() - pas.elements()).cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < dim; ++i) {
      for (Eigen::Index j = 0; j < dim; ++j) {
        const cplx a = act(i, j);
        const cplx p = pas(i, j);
        if (std::abs(a) > 1e-12 && std::abs(p) > 1e-12) {
          rep.max_element_phase_error = std::max(rep.max_element_phase_error, std::abs(std::arg(a * std::conj(p))));
        }
      }
    }
    rep.max_trace_distance = std::max(rep.max_trace_distance, td);
    rep.samples.push_back(EvolutionSample{t, tp, std::move(act), std::move(pas), td, diff});
  }
  rep.verdict_dynamical = rep.max_trace_distance < tol ? Verdict::equivalent : Verdict::not_equivalent;
  rep.verdicts_agree = rep.verdict_dynamical == rep.verdict_criterion;
  return rep;
}

struct FactorizationResult {
  bool factorizes = true;
  /// Worst sigma_2 / sigma_1 over all (J, J') blocks.
  double residual = 0.0;
};

/// Rank-1 test of every (J, J') block, indexed by (M, M'), where blocks are
/// the (n, l, s, J) multiplets of rho's basis. Blocks with largest singular
/// value below 1e-13 count as empty and pass.
inline FactorizationResult wigner_eckart_check(const DensityMatrix& rho, double tol) {
  using Key = std::tuple<int, int, HalfInt, HalfInt>;
  std::map<Key, std::vector<Eigen::Index>> blocks;
  for (std::size_t i = 0; i < rho.dim(); ++i) {
    const auto& b = rho.basis()[i];
    blocks[Key{b.n, b.l, b.s, b.J}].push_back(static_cast<Eigen::Index>(i));
  }
  FactorizationResult out;
  for (const auto& [ka, rows] : blocks) {
    for (const auto& [kb, cols] : blocks) {
      Eigen::MatrixXcd sub(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          sub(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rho(rows[r], cols[c]);
        }
      }
      if (std::min(sub.rows(), sub.cols()) < 2) continue;
      const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(sub);
      const auto& sv = svd.singularValues();
      if (sv(0) < 1e-13) continue;  // numerically empty block
      out.residual = std::max(out.residual, sv(1) / sv(0));
    }
  }
  out.factorizes = out.residual < tol;
  return out;
}

}  // namespace qrot
