// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_SOLVERS_HPP
#define LTN_SOLVERS_HPP

#include <Eigen/Dense>
#include <limits>
#include <string>
#include <vector>

#include "ltn/operators.hpp"

namespace ltn {

struct SolutionField {
  Grid1D grid;
  Eigen::VectorXd u;
  std::string method;
  std::vector<int> constrained;
};

/// Deterministic dense LU solve; validates the residual against
/// 1e-10 * (|A| |u| + |b|) in the max norm.
SolutionField solve_linear_system(const LinearSystem& sys);

struct SaddleSolution {
  SolutionField field;  // reconstructed over the whole grid
  Eigen::VectorXd u1, u2, phi;
  double kkt_residual = 0.0;       // relative, on the reduced KKT system
  double compat_mismatch = 0.0;    // max_a |C(psi_a, u1 - u2)|
};

SaddleSolution solve_saddle_system(const SaddleSystem& saddle);

struct ObmResult {
  SolutionField field;         // glued field
  double objective = 0.0;      // J* = 1/2 ||u_nl - u_l||^2_{L2(overlap)}
  Eigen::VectorXd controls;    // [nu_nl (layer nodes), nu_l]
  Eigen::VectorXd u_nl, u_l;   // sub-problem solutions on their node sets
  std::vector<int> nl_nodes, l_nodes;
};

/// Optimization-based coupling: builds the reduced quadratic objective by unit
/// probing the affine control-to-state maps and solves the SPD normal
/// equations.
ObmResult solve_optimization_based(const Grid1D& grid, const Decomposition& decomp,
                                   const Kernel& kernel, const RealFn& f, const RealFn& g);

struct IterationTrace {
  std::vector<double> residuals;          // sup-norm change of the iterate pair
  std::vector<double> mismatches;         // sup-norm of u_nl - u_l on overlap nodes
  std::vector<double> reduction_factors;  // mismatch ratio, defined from iteration 2
  int iterations = 0;
  bool converged = false;

  double mean_reduction_factor() const;  // geometric mean of the recorded factors
};

enum class RobinMode { Implicit, Explicit };

struct RobinOptions {
  double r1 = 1.0;
  double r2 = 1.0;  // infinity selects Dirichlet transmission rows
  RobinMode mode = RobinMode::Implicit;
  double tol = 1e-12;
  int max_iter = 200;
  int sweeps = 1;  // Explicit mode sweep count
};

struct RobinResult {
  SolutionField field;
  IterationTrace trace;
  Eigen::VectorXd u_nl, u_l;
  std::vector<int> nl_nodes, l_nodes;
};

/// Partitioned Robin-Schwarz iteration on the overlap decomposition. The flux
/// operator is a second-order one-sided difference oriented outward from each
/// sub-domain. Non-convergence is reported through the trace, not thrown.
RobinResult solve_partitioned_robin(const Grid1D& grid, const Decomposition& decomp,
                                    const Kernel& kernel, const RealFn& f, const RealFn& g,
                                    const RobinOptions& opts);

struct RobinSweepRow {
  double R = 0.0;
  int iterations = 0;
  double mean_reduction = 0.0;
  bool converged = false;
};

struct RobinSweepResult {
  std::vector<RobinSweepRow> rows;
  double best_R = 0.0;  // argmin iterations among converged rows
};

RobinSweepResult sweep_robin_coefficient(const Grid1D& grid, const Decomposition& decomp,
                                         const Kernel& kernel, const RealFn& f, const RealFn& g,
                                         const RobinOptions& base,
                                         const std::vector<double>& r_grid);

inline constexpr double kRobinDirichlet = std::numeric_limits<double>::infinity();

}  // namespace ltn

#endif
