// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_GRID_HPP
#define LTN_GRID_HPP

#include <optional>
#include <string>
#include <vector>

#include "ltn/errors.hpp"

namespace ltn {

/// Uniform 1D node set over [x_lo, x_hi].
struct Grid1D {
  double x_lo = 0.0;
  double x_hi = 1.0;
  int n_nodes = 0;
  double h = 0.0;
  std::vector<double> x;

  static Grid1D uniform(double lo, double hi, int n);
  /// Builds the grid from a target spacing; (hi-lo)/h must be integral to 1e-9.
  static Grid1D with_spacing(double lo, double hi, double h);

  /// Index of the node nearest to xv; throws if xv is off-grid by more than tol*h.
  int index_near(double xv, double tol = 1e-6) const;
  bool contains_node(double xv, double tol = 1e-6) const;
};

enum class DecompositionMode { Overlap, BlendedTransition, SharpInterface, VariableHorizon };

enum class Region {
  PhysicalLayer,  // left nonlocal boundary layer, width delta
  Nonlocal,
  Transition,     // BlendedTransition only
  Overlap,        // Overlap mode only
  Local,
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double width() const { return hi - lo; }
  // half-open [lo, hi) membership; classification ties go to the right-hand region
  bool contains_half_open(double v) const { return v >= lo - 1e-12 && v < hi - 1e-12; }
};

/// Mode-specific parameters for build_decomposition.
struct DecompositionParams {
  std::optional<Interval> overlap;          // Overlap mode: Omega_o
  std::optional<Interval> blending_region;  // BlendedTransition: Omega_b
  std::optional<double> interface_x;        // SharpInterface / VariableHorizon / QNL-style transition
};

struct Decomposition {
  DecompositionMode mode = DecompositionMode::SharpInterface;
  double delta = 0.0;
  Interval domain;   // full constrained domain including the left physical layer
  Interval omega_p;  // [x_lo, x_lo+delta)
  Interval omega_nl;
  Interval omega_l;
  std::optional<Interval> omega_t;   // transition region
  std::optional<Interval> blending;  // Omega_b, when distinct from omega_t
  std::optional<Interval> overlap;   // Omega_o
  std::optional<Interval> omega_v;   // nonlocal virtual boundary (o_hi-delta, o_hi]
  std::optional<double> gamma_v;     // local virtual boundary point
  std::optional<double> interface_x; // sharp interface / Gamma / QNL x*
  double gamma_p = 0.0;              // right physical boundary point

  Region classify(double xv) const;
  /// Region label as stable lowercase text (used in CSV output).
  std::string region_label(double xv) const;
};

Decomposition build_decomposition(DecompositionMode mode, double x_lo, double x_hi,
                                  const DecompositionParams& params, double delta);

struct BlendingFunction {
  enum class Shape { PiecewiseConstant, PiecewiseLinear, CubicSmooth };
  Shape shape = Shape::CubicSmooth;
  double b_lo = 0.0;
  double b_hi = 1.0;

  /// 1 on the nonlocal side of Omega_b, 0 on the local side, monotone in between.
  double operator()(double xv) const;
};

double eval_blending(const BlendingFunction& beta, double xv);

const char* to_string(DecompositionMode m);
const char* to_string(Region r);

}  // namespace ltn

#endif
