// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_OPERATORS_HPP
#define LTN_OPERATORS_HPP

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

#include "ltn/grid.hpp"
#include "ltn/kernels.hpp"

namespace ltn {

using RealFn = std::function<double(double)>;

/// Dense assembled operator with Dirichlet bookkeeping. Row convention: A acts
/// like the continuum operator (A maps x^2 to 2 for diffusion, 2E for
/// peridynamics on interior rows), and the discrete problem -Lu = f is stored
/// as A u = b with b = -f on unconstrained rows. Constrained rows are identity
/// rows; columns are not eliminated so the unconstrained block stays
/// symmetric for diagnostics.
struct LinearSystem {
  Grid1D grid;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  std::vector<uint8_t> constrained;       // per-node flag
  std::vector<double> constrained_value;  // imposed value where flagged

  void init(const Grid1D& g);
  void set_dirichlet(int i, double value);
  std::vector<int> constrained_indices() const;
  int n() const { return grid.n_nodes; }

  /// Plain-text triplet export (row col value per line) for external inspection.
  void export_triplets(std::ostream& os) const;
};

enum class Method {
  LocalOnly,
  NonlocalOnly,
  Splice,
  Blended,
  QNL,
  Morphing,
  ShrinkingHorizon,
  PartialStress,
};

const char* to_string(Method m);

struct MethodSpec {
  Method method = Method::LocalOnly;
  std::optional<BlendingFunction> blending;  // Blended, Morphing
  std::optional<HorizonFunction> horizon;    // ShrinkingHorizon, PartialStress
  std::optional<double> interface_x;         // Splice, QNL

  void validate() const;  // method-required parameters present
};

/// Local rows (3-point centered second difference scaled by the local
/// coefficient) at the interior nodes of `region`.
LinearSystem assemble_local_operator(const Grid1D& grid, const Interval& region,
                                     const Kernel& kernel);

/// Nonlocal rows at every node of `region`; each row needs the full
/// delta-neighborhood inside the grid.
LinearSystem assemble_nonlocal_operator(const Grid1D& grid, const Interval& region,
                                        const Kernel& kernel);

/// Fully coupled operator for the method in `spec` on `decomp`.
LinearSystem assemble_coupled_operator(const Grid1D& grid, const Decomposition& decomp,
                                       const MethodSpec& spec, const Kernel& kernel);

/// Dirichlet volume constraint on a layer: every node in [layer.lo, layer.hi)
/// becomes an identity row with value g(x). The layer must be at least
/// `required_width` wide (IncompleteVolumeConstraint otherwise).
void apply_dirichlet_layer(LinearSystem& sys, const Interval& layer, double required_width,
                           const RealFn& g);

/// Dirichlet constraint at a single boundary node.
void apply_dirichlet_point(LinearSystem& sys, double xv, const RealFn& g);

/// Constrains the standard sets for a method: the left physical layer plus the
/// right boundary node (both layers for NonlocalOnly, both end points for
/// LocalOnly).
void apply_standard_constraints(LinearSystem& sys, const Decomposition& decomp, Method method,
                                const RealFn& g);

/// Fills b = -f(x) on unconstrained rows.
void set_load(LinearSystem& sys, const RealFn& f);

/// Arlequin saddle system. Block unknowns (u1 on the local sub-domain grid,
/// u2 on the nonlocal sub-domain grid, phi on the overlap); the KKT matrix
/// [[A1, 0, C1^T], [0, A2, -C2^T], [C1, -C2, 0]] is symmetric.
struct SaddleSystem {
  Grid1D grid;
  Decomposition decomp;
  double kappa0 = 0.0, kappa1 = 1.0;
  bool ill_posed = false;  // kappa1 == 0: flagged at assembly, refused by the solver

  std::vector<int> local_nodes;      // global node index per u1 dof
  std::vector<int> nonlocal_nodes;   // global node index per u2 dof
  std::vector<int> multiplier_nodes; // global node index per phi dof

  Eigen::MatrixXd A1, A2;  // weighted stiffness blocks
  Eigen::MatrixXd C1, C2;  // coupling blocks (multiplier x dof)
  Eigen::VectorXd l1, l2;  // load vectors (alpha-weighted)

  std::vector<uint8_t> fixed1, fixed2;  // Dirichlet flags per block dof
  std::vector<double> fixed1_value, fixed2_value;

  BlendingFunction alpha_blend;  // beta over the overlap; alpha1 = 1 - beta

  void set_loads(const RealFn& f, const RealFn& g);
};

/// kappa0 >= 0, kappa1 > 0 for well-posedness; kappa1 == 0 flags ill_posed.
/// Requires overlap width >= 2*delta.
SaddleSystem assemble_arlequin_saddle(const Grid1D& grid, const Decomposition& decomp,
                                      const Kernel& kernel, const BlendingFunction& beta,
                                      double kappa0, double kappa1);

/// Discrete energies evaluated with an outer trapezoid rule over the audit
/// window [window.lo, window.hi] (same bond tables as assembly).
struct EnergyWindow {
  Interval window;
};

double nonlocal_energy(const Grid1D& grid, const Kernel& kernel, const Eigen::VectorXd& u,
                       const Interval& window);
double local_energy(const Grid1D& grid, const Kernel& kernel, const Eigen::VectorXd& u,
                    const Interval& window);
/// Coupled energy for QNL / Morphing / ShrinkingHorizon; nullopt for methods
/// without an energy functional.
std::optional<double> coupled_energy(const Grid1D& grid, const Decomposition& decomp,
                                     const MethodSpec& spec, const Kernel& kernel,
                                     const Eigen::VectorXd& u, const Interval& window);

}  // namespace ltn

#endif
