// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace ltn {

double Kernel::operator()(double xi) const {
  const double a = std::abs(xi);
  if (a > delta + 1e-15) return 0.0;
  if (model == ModelType::Diffusion) {
    switch (family) {
      case KernelFamily::Constant:
        return 3.0 / (delta * delta * delta);
      case KernelFamily::InverseDistance:
        if (a == 0.0) fail(ErrorCode::ZeroBond, "inverse-distance kernel at xi = 0");
        return (2.0 / (delta * delta)) / a;
    }
  } else {
    // micromodulus normalized so that (1/2) * Int lambda xi^4 = E
    switch (family) {
      case KernelFamily::Constant:
        return 5.0 * youngs_modulus / std::pow(delta, 5);
      case KernelFamily::InverseDistance:
        if (a == 0.0) fail(ErrorCode::ZeroBond, "inverse-distance micromodulus at xi = 0");
        return 4.0 * youngs_modulus / (std::pow(delta, 4) * a);
    }
  }
  return 0.0;
}

double Kernel::bond_coefficient(double xi) const {
  const double v = (*this)(xi);
  return model == ModelType::Diffusion ? v : v * xi * xi;
}

double eval_kernel(const Kernel& k, double xi) { return k(xi); }

double BondTable::moment(int p) const {
  double s = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double xi = static_cast<double>(k) * h;
    const double pos = std::pow(xi, p);
    const double neg = std::pow(-xi, p);
    s += coeff[static_cast<size_t>(k - 1)] * (pos + neg);  // exactly 0 for odd p
  }
  return s;
}

BondTable discrete_moments(const Kernel& k, const Grid1D& grid, MomentTable* table) {
  const double h = grid.h;
  const double ratio = k.delta / h;
  const int m = static_cast<int>(std::lround(ratio));
  if (std::abs(ratio - static_cast<double>(m)) > 1e-9)
    fail(ErrorCode::ConfigInvalid, "delta must be an integer multiple of h");
  if (m < 2) fail(ErrorCode::HorizonNotResolved, "delta/h must be at least 2");

  BondTable t;
  t.m = m;
  t.h = h;
  t.coeff.resize(static_cast<size_t>(m));
  for (int j = 1; j <= m; ++j) {
    const double w = (j == m) ? 0.5 * h : h;  // trapezoid endpoint rule
    t.coeff[static_cast<size_t>(j - 1)] = w * k.bond_coefficient(static_cast<double>(j) * h);
  }
  const double target = k.moment_target();
  const double raw = t.moment(2);
  if (!(raw > 0.0)) fail(ErrorCode::Internal, "non-positive raw second moment");
  const double rescale = target / raw;
  for (auto& c : t.coeff) c *= rescale;
  if (table) {
    table->rescale = rescale;
    for (int p = 0; p <= 4; ++p) table->moments[static_cast<size_t>(p)] = t.moment(p);
  }
  return t;
}

namespace {
double quintic_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}
}  // namespace

BondTable variable_point_table(const Kernel& shape, double delta_point, double h) {
  if (delta_point < h - 1e-12)
    fail(ErrorCode::HorizonNotResolved, "point horizon below the grid resolution");
  Kernel local = shape;
  local.delta = delta_point;
  const int jmax = std::max(1, static_cast<int>(std::ceil(delta_point / h - 1e-12)));
  BondTable t;
  t.h = h;
  t.coeff.reserve(static_cast<size_t>(jmax));
  constexpr double taper_width = 2.0;  // in units of h
  for (int j = 1; j <= jmax; ++j) {
    const double xi = static_cast<double>(j) * h;
    const double w = h * quintic_step((delta_point - xi) / (taper_width * h) + 0.5);
    if (w <= 1e-300) break;
    t.coeff.push_back(w * local.bond_coefficient(xi));
  }
  if (t.coeff.empty()) t.coeff.push_back(h * local.bond_coefficient(h));
  t.m = static_cast<int>(t.coeff.size());
  const double raw = t.moment(2);
  if (!(raw > 0.0)) fail(ErrorCode::Internal, "non-positive raw second moment");
  const double rescale = local.moment_target() / raw;
  for (auto& c : t.coeff) c *= rescale;
  return t;
}

double HorizonFunction::operator()(double xv) const {
  const double dist = std::abs(xv - interface_x);
  double d = delta_max;
  switch (kind) {
    case HorizonKind::Constant:
      d = delta_max;
      break;
    case HorizonKind::PiecewiseLinear:
      d = std::min(delta_max, dist);
      break;
    case HorizonKind::SmoothC2:
      d = delta_max * quintic_step(std::min(1.0, dist / ramp_width));
      break;
  }
  return std::max(d, delta_min);
}

double eval_horizon(const HorizonFunction& hf, double xv) { return hf(xv); }

}  // namespace ltn
