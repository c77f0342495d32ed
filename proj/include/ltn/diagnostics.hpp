// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_DIAGNOSTICS_HPP
#define LTN_DIAGNOSTICS_HPP

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltn/config.hpp"
#include "ltn/solvers.hpp"

namespace ltn {

/// A config solved by whichever pipeline its method requires.
struct SolveOutcome {
  SolutionField field;
  std::optional<double> obm_objective;
  std::optional<IterationTrace> trace;
  std::optional<double> kkt_residual;
  std::optional<double> compat_mismatch;
  bool converged = true;
};

SolveOutcome solve_config(const RunConfig& cfg);

struct PatchTestReport {
  std::string method;
  int degree = 1;
  double sup_error = 0.0;
  double sup_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

/// Per-method patch tolerances (acceptance table; the "approximate" methods
/// carry documented engineering thresholds).
double patch_tolerance(RunMethod method, int degree);

PatchTestReport run_patch_test(const RunConfig& cfg, int degree);

/// Fixed-coefficient patch polynomial: sum_{i<=p} x^i.
AnalyticFunction patch_polynomial(int degree);

struct GhostForceReport {
  std::string method;
  std::vector<double> x;
  std::vector<double> residual;
  double sup = 0.0;
  double sup_location = 0.0;
  nlohmann::json to_json() const;
};

GhostForceReport compute_ghost_force(const RunConfig& cfg);

struct ConvergenceRow {
  double delta = 0.0;
  double l2_error = 0.0;
  double h1_error = 0.0;
};

struct ConvergenceReport {
  std::string method;
  std::vector<ConvergenceRow> rows;
  double l2_slope = 0.0;
  double h1_slope = 0.0;
  nlohmann::json to_json() const;
};

ConvergenceReport run_convergence_study(const RunConfig& cfg, std::vector<double> deltas);

struct EnergyReport {
  std::string method;
  double nonlocal_energy = 0.0;
  double local_energy = 0.0;
  std::optional<double> coupled_energy;
  double window_lo = 0.0, window_hi = 0.0;
  nlohmann::json to_json() const;
};

EnergyReport compute_energy(const RunConfig& cfg, const Eigen::VectorXd& u);

struct MaxPrincipleReport {
  std::string method;
  int samples = 0;
  std::uint64_t seed = 0;
  double worst_violation = 0.0;
  bool pass = false;
  nlohmann::json to_json() const;
};

MaxPrincipleReport check_maximum_principle(const RunConfig& cfg, int samples);

struct CompareReport {
  std::string method_a, method_b;
  double sup_diff = 0.0;
  double sup_diff_outside_overlap = 0.0;
  double l2_diff = 0.0;
  nlohmann::json to_json() const;
};

CompareReport compare_methods(const RunConfig& a, const RunConfig& b);

struct RobinSweepReport {
  std::vector<RobinSweepRow> rows;
  double best_R = 0.0;
  nlohmann::json to_json() const;
};

RobinSweepReport run_robin_sweep(const RunConfig& cfg);

/// Least-squares slope of log(err) against log(delta).
double fit_loglog_slope(const std::vector<double>& deltas, const std::vector<double>& errs);

/// Thread cap from LTN_LAB_THREADS (0 or unset = serial).
int thread_cap();

}  // namespace ltn

#endif
