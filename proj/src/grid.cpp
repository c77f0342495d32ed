// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/grid.hpp"

#include <cmath>

namespace ltn {

Grid1D Grid1D::uniform(double lo, double hi, int n) {
  if (n < 3) fail(ErrorCode::ConfigInvalid, "grid needs at least 3 nodes");
  if (!(hi > lo)) fail(ErrorCode::ConfigInvalid, "grid bounds must satisfy x_hi > x_lo");
  Grid1D g;
  g.x_lo = lo;
  g.x_hi = hi;
  g.n_nodes = n;
  g.h = (hi - lo) / static_cast<double>(n - 1);
  g.x.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    g.x[static_cast<size_t>(i)] = lo + g.h * static_cast<double>(i);
  g.x.back() = hi;
  return g;
}

Grid1D Grid1D::with_spacing(double lo, double hi, double h) {
  if (!(h > 0.0)) fail(ErrorCode::ConfigInvalid, "grid spacing must be positive");
  const double cells = (hi - lo) / h;
  const double rounded = std::round(cells);
  if (std::abs(cells - rounded) > 1e-9 * std::max(1.0, cells))
    fail(ErrorCode::ConfigInvalid, "domain length is not an integer multiple of h");
  return uniform(lo, hi, static_cast<int>(rounded) + 1);
}

int Grid1D::index_near(double xv, double tol) const {
  const double t = (xv - x_lo) / h;
  const int i = static_cast<int>(std::lround(t));
  if (i < 0 || i >= n_nodes || std::abs(t - static_cast<double>(i)) > tol)
    fail(ErrorCode::ConfigInvalid, "coordinate does not coincide with a grid node");
  return i;
}

bool Grid1D::contains_node(double xv, double tol) const {
  const double t = (xv - x_lo) / h;
  const int i = static_cast<int>(std::lround(t));
  return i >= 0 && i < n_nodes && std::abs(t - static_cast<double>(i)) <= tol;
}

namespace {

void require_inside(double v, double lo, double hi, const char* what) {
  if (v < lo - 1e-12 || v > hi + 1e-12)
    fail(ErrorCode::InconsistentIntervals, std::string(what) + " lies outside the domain");
}

}  // namespace

Decomposition build_decomposition(DecompositionMode mode, double x_lo, double x_hi,
                                  const DecompositionParams& params, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::ConfigInvalid, "delta must be positive");
  if (!(x_hi > x_lo + 2.0 * delta))
    fail(ErrorCode::InconsistentIntervals, "domain too short for the requested horizon");

  Decomposition d;
  d.mode = mode;
  d.delta = delta;
  d.domain = {x_lo, x_hi};
  d.omega_p = {x_lo, x_lo + delta};
  d.gamma_p = x_hi;

  switch (mode) {
    case DecompositionMode::Overlap: {
      if (!params.overlap) fail(ErrorCode::ConfigInvalid, "Overlap mode requires an overlap interval");
      const Interval o = *params.overlap;
      require_inside(o.lo, x_lo + delta, x_hi, "overlap");
      require_inside(o.hi, x_lo + delta, x_hi, "overlap");
      if (o.hi <= o.lo) fail(ErrorCode::InconsistentIntervals, "overlap interval is empty");
      if (o.width() < delta - 1e-12)
        fail(ErrorCode::OverlapTooSmall, "overlap width must be at least delta");
      if (o.hi - delta < x_lo + delta - 1e-12)
        fail(ErrorCode::InconsistentIntervals, "overlap leaves no room for the nonlocal sub-domain");
      d.overlap = o;
      d.omega_nl = {x_lo + delta, o.hi - delta};
      d.omega_l = {o.lo, x_hi};
      d.omega_v = Interval{o.hi - delta, o.hi};
      d.gamma_v = o.lo;
      break;
    }
    case DecompositionMode::BlendedTransition: {
      Interval t;
      if (params.blending_region) {
        const Interval b = *params.blending_region;
        if (b.hi <= b.lo) fail(ErrorCode::InconsistentIntervals, "blending region is empty");
        t = {b.lo - delta, b.hi + delta};  // Omega_t = Omega_b dilated by delta
        d.blending = b;
      } else if (params.interface_x) {
        // QNL-style transition of width exactly delta starting at the interface
        t = {*params.interface_x, *params.interface_x + delta};
        d.interface_x = *params.interface_x;
      } else {
        fail(ErrorCode::ConfigInvalid,
             "BlendedTransition mode requires a blending region or an interface");
      }
      require_inside(t.lo, x_lo + delta, x_hi, "transition region");
      require_inside(t.hi, x_lo + delta, x_hi, "transition region");
      d.omega_t = t;
      d.omega_nl = {x_lo + delta, t.lo};
      d.omega_l = {t.hi, x_hi};
      break;
    }
    case DecompositionMode::SharpInterface:
    case DecompositionMode::VariableHorizon: {
      if (!params.interface_x)
        fail(ErrorCode::ConfigInvalid, "mode requires an interface location");
      const double xi = *params.interface_x;
      require_inside(xi, x_lo + delta, x_hi, "interface");
      if (xi - (x_lo + delta) < delta - 1e-12 || x_hi - xi < delta - 1e-12)
        fail(ErrorCode::InconsistentIntervals, "interface too close to the domain ends");
      d.interface_x = xi;
      d.omega_nl = {x_lo + delta, xi};
      d.omega_l = {xi, x_hi};
      break;
    }
  }
  return d;
}

Region Decomposition::classify(double xv) const {
  // half-open intervals; the last node belongs to the local region
  if (omega_p.contains_half_open(xv)) return Region::PhysicalLayer;
  switch (mode) {
    case DecompositionMode::Overlap:
      if (xv < overlap->lo - 1e-12) return Region::Nonlocal;
      if (xv < overlap->hi - 1e-12) return Region::Overlap;
      return Region::Local;
    case DecompositionMode::BlendedTransition:
      if (xv < omega_t->lo - 1e-12) return Region::Nonlocal;
      if (xv < omega_t->hi - 1e-12) return Region::Transition;
      return Region::Local;
    case DecompositionMode::SharpInterface:
      return xv < *interface_x - 1e-12 ? Region::Nonlocal : Region::Local;
    case DecompositionMode::VariableHorizon:
      return xv < *interface_x - 1e-12 ? Region::Nonlocal : Region::Local;
  }
  return Region::Local;
}

std::string Decomposition::region_label(double xv) const { return to_string(classify(xv)); }

double BlendingFunction::operator()(double xv) const {
  if (xv <= b_lo) return 1.0;
  if (xv >= b_hi) return 0.0;
  const double t = (xv - b_lo) / (b_hi - b_lo);
  switch (shape) {
    case Shape::PiecewiseConstant: return t < 0.5 ? 1.0 : 0.0;
    case Shape::PiecewiseLinear: return 1.0 - t;
    case Shape::CubicSmooth: return 1.0 - (3.0 * t * t - 2.0 * t * t * t);
  }
  return 0.0;
}

double eval_blending(const BlendingFunction& beta, double xv) { return beta(xv); }

const char* to_string(DecompositionMode m) {
  switch (m) {
    case DecompositionMode::Overlap: return "overlap";
    case DecompositionMode::BlendedTransition: return "blended_transition";
    case DecompositionMode::SharpInterface: return "sharp_interface";
    case DecompositionMode::VariableHorizon: return "variable_horizon";
  }
  return "?";
}

const char* to_string(Region r) {
  switch (r) {
    case Region::PhysicalLayer: return "physical_layer";
    case Region::Nonlocal: return "nonlocal";
    case Region::Transition: return "transition";
    case Region::Overlap: return "overlap";
    case Region::Local: return "local";
  }
  return "?";
}

}  // namespace ltn
