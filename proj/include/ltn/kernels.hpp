// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_KERNELS_HPP
#define LTN_KERNELS_HPP

#include <array>
#include <vector>

#include "ltn/errors.hpp"
#include "ltn/grid.hpp"

namespace ltn {

enum class KernelFamily { Constant, InverseDistance };
enum class ModelType { Diffusion, Peridynamic };

/// Scaled nonlocal kernel. For Diffusion the continuum second moment of gamma is 2,
/// so the operator tends to d^2/dx^2; for Peridynamic the weighted fourth moment of
/// the micromodulus is 2E, so the operator tends to E d^2/dx^2.
struct Kernel {
  KernelFamily family = KernelFamily::Constant;
  ModelType model = ModelType::Diffusion;
  double delta = 0.1;
  double youngs_modulus = 1.0;  // used by Peridynamic only

  /// gamma(|xi|) for Diffusion, micromodulus lambda(|xi|) for Peridynamic.
  double operator()(double xi) const;
  /// Coefficient of u'' in the local limit: 1 (diffusion) or E (peridynamic).
  double local_coefficient() const {
    return model == ModelType::Diffusion ? 1.0 : youngs_modulus;
  }
  /// Bond stiffness entering the operator sum: gamma for diffusion, lambda*xi^2 for PD.
  double bond_coefficient(double xi) const;
  /// Moment normalization target: Sum c_j xi_j^2 = 2 (diffusion) or 2E (PD).
  double moment_target() const { return 2.0 * local_coefficient(); }
};

double eval_kernel(const Kernel& k, double xi);

/// Normalized bond coefficients on the symmetric stencil {+-h, ..., +-m h}.
/// coeff[k-1] is the weight-times-kernel value for bond length k*h (one side);
/// the table satisfies moment(2) == moment_target exactly and odd moments are 0
/// by stencil symmetry.
struct BondTable {
  int m = 0;
  double h = 0.0;
  std::vector<double> coeff;

  /// Two-sided discrete moment Sum_{+-k} c_k (k h)^p, computed pairwise so odd
  /// moments are exactly zero in floating point.
  double moment(int p) const;
};

struct MomentTable {
  std::array<double, 5> moments{};  // orders 0..4
  double rescale = 1.0;             // single positive normalization factor applied
};

/// Trapezoid-style quadrature weights on the stencil, rescaled by one positive
/// factor so the normalization moment is exact. Requires delta = m h, m >= 2.
BondTable discrete_moments(const Kernel& k, const Grid1D& grid, MomentTable* table = nullptr);

/// Per-point table for a spatially varying horizon: bond weights enter through a
/// quintic smoothstep taper of width 2h at the stencil edge (so the table varies
/// smoothly with delta_point), then one rescale makes the normalization moment
/// exact. Allows delta_point >= h.
BondTable variable_point_table(const Kernel& shape, double delta_point, double h);

enum class HorizonKind { Constant, PiecewiseLinear, SmoothC2 };

/// Spatially varying horizon delta(x) on the nonlocal side of the interface.
struct HorizonFunction {
  HorizonKind kind = HorizonKind::Constant;
  double delta_max = 0.1;
  double interface_x = 0.0;  // Gamma
  double ramp_width = 0.4;   // SmoothC2 only
  double delta_min = 0.0;    // floor (2h is used by the partial-stress assembler)

  double operator()(double xv) const;
};

double eval_horizon(const HorizonFunction& hf, double xv);

}  // namespace ltn

#endif
