// qrot command-line front end.
//
// Exit status: 0 success, 1 usage, 2 parse, 3 validation, 4 solver,
// 5 I/O, 6 selftest failure.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qrot/errors.hpp"
#include "qrot/report.hpp"
#include "qrot/scenario.hpp"
#include "qrot/selftest.hpp"

namespace {

enum Exit { ok = 0, usage = 1, parse = 2, validation = 3, solver = 4, io = 5, selftest_failed = 6 };

struct Options {
  std::string scenario;
  std::string out;
  std::optional<double> tol;
  bool quiet = false;
};

qrot::ReportBundle load_and_run(const Options& opt) {
  qrot::Scenario sc = qrot::load_scenario(opt.scenario);
  if (opt.tol) {
    if (!(*opt.tol > 0.0)) throw qrot::ValidationError("--tol must be positive");
    sc.tolerances.equivalence = *opt.tol;
  }
  return qrot::run_scenario(sc);
}

std::string prefix_for(const Options& opt, const qrot::ReportBundle& b) {
  if (!opt.out.empty()) return opt.out;
  return b.scenario.output_prefix.empty() ? b.scenario.name : b.scenario.output_prefix;
}

void print_files(const Options& opt, const std::vector<std::string>& files) {
  if (opt.quiet) return;
  for (const auto& f : files) std::cout << "wrote " << f << "\n";
}

int cmd_spectrum(const Options& opt) {
  const auto b = load_and_run(opt);
  if (!opt.quiet) {
    for (const auto& e : b.spectrum) {
      std::printf("%-28s E = %.12g\n", e.label.str().c_str(), e.energy * b.scenario.energy_scale);
    }
    for (const auto& c : b.oracle.fd) {
      std::printf("fd %-20s rel_diff = %.3e (tol %.1e)%s%s\n", c.label.c_str(), c.rel_diff, c.tolerance,
                  c.passed ? "" : " FAILED", c.accuracy_warning ? " [accuracy warning]" : "");
    }
  }
  print_files(opt, qrot::emit_outputs(b, prefix_for(opt, b), {true, true, false}));
  return ok;
}

int cmd_criterion(const Options& opt) {
  const auto b = load_and_run(opt);
  if (!opt.quiet) {
    std::cout << "criterion: " << qrot::to_string(b.criterion.verdict) << " (max spread "
              << b.criterion.max_spread << ", tol " << b.scenario.tolerances.equivalence << ")\n";
  }
  print_files(opt, qrot::emit_outputs(b, prefix_for(opt, b), {true, true, false}));
  return ok;
}

int cmd_evolve(const Options& opt) {
  const auto b = load_and_run(opt);
  if (!opt.quiet) {
    std::cout << "sampled " << b.equivalence.samples.size() << " times; analytic vs exact evolution "
              << b.oracle.active_vs_exact << " (tol " << b.oracle.evolution_tolerance << ")\n";
  }
  print_files(opt, qrot::emit_outputs(b, prefix_for(opt, b)));
  return ok;
}

int cmd_compare(const Options& opt) {
  const auto b = load_and_run(opt);
  const auto& r = b.equivalence;
  if (!opt.quiet) {
    std::cout << "family: " << qrot::to_string(r.family) << "\n"
              << "criterion: " << qrot::to_string(r.verdict_criterion) << "\n"
              << "dynamical: " << qrot::to_string(r.verdict_dynamical) << "\n"
              << "max trace distance: " << r.max_trace_distance << " (tol " << r.tolerance << ")\n";
    if (!r.verdicts_agree) std::cout << "WARNING: criterion and dynamical verdicts disagree\n";
    if (r.cross_n_coherence) std::cout << "note: initial state has coherences between different n\n";
    if (!b.oracle.fd_passed) std::cout << "WARNING: finite-difference cross-check outside tolerance\n";
    if (!b.oracle.evolution_passed) std::cout << "WARNING: evolution cross-check outside tolerance\n";
  }
  print_files(opt, qrot::emit_outputs(b, prefix_for(opt, b)));
  return ok;
}

int cmd_selftest(const Options& opt) {
  bool all = true;
  for (const auto& r : qrot::run_selftest()) {
    all = all && r.passed;
    if (!opt.quiet || !r.passed) {
      std::printf("%s  %-52s err %.3e  tol %.1e\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.error,
                  r.tolerance);
    }
  }
  return all ? ok : selftest_failed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active vs passive rotation: spectra, evolution and equivalence checks"};
  app.set_version_flag("--version", std::string(QROT_VERSION));
  app.require_subcommand(1);

  Options opt;
  double tol = 0.0;
  auto add_common = [&](CLI::App* sub, bool needs_scenario) {
    auto* s = sub->add_option("--scenario", opt.scenario, "Scenario file (JSON)");
    if (needs_scenario) s->required();
    sub->add_option("--out", opt.out, "Output path prefix (default: scenario outputs.prefix or name)");
    sub->add_option("--tol", tol, "Equivalence tolerance override");
    sub->add_flag("--quiet", opt.quiet, "Suppress console summary");
  };
  auto* spectrum = app.add_subcommand("spectrum", "Energies only");
  auto* evolve = app.add_subcommand("evolve", "Density matrices over time");
  auto* compare = app.add_subcommand("compare", "Full equivalence pipeline");
  auto* criterion = app.add_subcommand("criterion", "Degeneracy criterion only");
  auto* selftest = app.add_subcommand("selftest", "Oracle cross-check suite");
  for (auto* sub : {spectrum, evolve, compare, criterion}) add_common(sub, true);
  add_common(selftest, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? ok : usage;
  }
  for (auto* sub : {spectrum, evolve, compare, criterion, selftest}) {
    if (sub->count("--tol") > 0) opt.tol = tol;
  }

  try {
    if (*spectrum) return cmd_spectrum(opt);
    if (*evolve) return cmd_evolve(opt);
    if (*compare) return cmd_compare(opt);
    if (*criterion) return cmd_criterion(opt);
    return cmd_selftest(opt);
  } catch (const qrot::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return parse;
  } catch (const qrot::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return validation;
  } catch (const qrot::ArgumentError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return validation;
  } catch (const qrot::SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return solver;
  } catch (const qrot::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return io;
  }
}
