// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_CONFIG_HPP
#define LTN_CONFIG_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ltn/functions.hpp"
#include "ltn/grid.hpp"
#include "ltn/kernels.hpp"
#include "ltn/operators.hpp"
#include "ltn/solvers.hpp"

namespace ltn {

/// Which method drives the run. Operator methods map onto ltn::Method; the
/// last three are solver-level couplings.
enum class RunMethod {
  Local,
  Nonlocal,
  Splice,
  Blended,
  QNL,
  Morphing,
  ShrinkingHorizon,
  PartialStress,
  Obm,
  Partitioned,
  Arlequin,
};

const char* to_string(RunMethod m);
bool is_operator_method(RunMethod m);
Method operator_method(RunMethod m);

enum class DiagnosticTask {
  Solve,
  PatchTest,
  GhostForce,
  Converge,
  SweepRobin,
  Compare,
  MaxPrinciple,
  Energy,
};

const char* to_string(DiagnosticTask t);

struct SolverParams {
  double tol = 1e-12;
  int max_iter = 200;
  double r1 = 1.0, r2 = 1.0;  // infinity = Dirichlet transmission
  RobinMode robin_mode = RobinMode::Implicit;
  int sweeps = 1;
  double kappa0 = 1.0, kappa1 = 1.0;
};

struct DiagnosticParams {
  DiagnosticTask task = DiagnosticTask::Solve;
  int degree = 1;
  std::vector<double> deltas;
  std::vector<double> robin_grid;
  int samples = 100;
  AnalyticFunction reference = AnalyticFunction::sine(1.0, 1.0);
  std::optional<nlohmann::json> compare_to;  // config overrides for `compare`
};

/// Full problem description parsed from JSON; see docs in README.
struct RunConfig {
  double domain_lo = 0.0, domain_hi = 1.0;
  double h = 0.0125;
  double delta = 0.05;
  DecompositionMode mode = DecompositionMode::SharpInterface;
  DecompositionParams dparams;
  RunMethod method = RunMethod::Splice;
  std::optional<BlendingFunction> blending;
  std::optional<HorizonFunction> horizon;
  Kernel kernel;
  SolverParams solver;
  DiagnosticParams diagnostics;
  AnalyticFunction f = AnalyticFunction::constant(0.0);
  AnalyticFunction g = AnalyticFunction::constant(0.0);
  std::uint64_t seed = 20260810ULL;
  std::string raw_text;  // canonical source for the manifest hash

  Grid1D make_grid() const;
  Decomposition make_decomposition() const;
  MethodSpec make_method_spec() const;        // operator methods only
  BlendingFunction arlequin_blending() const; // beta supported on the overlap

  static RunConfig from_json_text(const std::string& text);
  static RunConfig from_json(const nlohmann::json& j);
  void validate() const;
};

AnalyticFunction parse_function(const nlohmann::json& j);

}  // namespace ltn

#endif
