// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/operators.hpp"

#include <cmath>
#include <ostream>

namespace ltn {

void LinearSystem::init(const Grid1D& g) {
  grid = g;
  const int n = g.n_nodes;
  A = Eigen::MatrixXd::Zero(n, n);
  b = Eigen::VectorXd::Zero(n);
  constrained.assign(static_cast<size_t>(n), 0);
  constrained_value.assign(static_cast<size_t>(n), 0.0);
}

void LinearSystem::set_dirichlet(int i, double value) {
  A.row(i).setZero();
  A(i, i) = 1.0;
  b(i) = value;
  constrained[static_cast<size_t>(i)] = 1;
  constrained_value[static_cast<size_t>(i)] = value;
}

std::vector<int> LinearSystem::constrained_indices() const {
  std::vector<int> out;
  for (int i = 0; i < n(); ++i)
    if (constrained[static_cast<size_t>(i)]) out.push_back(i);
  return out;
}

void LinearSystem::export_triplets(std::ostream& os) const {
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j)
      if (A(i, j) != 0.0) os << i << ' ' << j << ' ' << A(i, j) << '\n';
}

const char* to_string(Method m) {
  switch (m) {
    case Method::LocalOnly: return "local";
    case Method::NonlocalOnly: return "nonlocal";
    case Method::Splice: return "splice";
    case Method::Blended: return "blended";
    case Method::QNL: return "qnl";
    case Method::Morphing: return "morphing";
    case Method::ShrinkingHorizon: return "shrinking_horizon";
    case Method::PartialStress: return "partial_stress";
  }
  return "?";
}

void MethodSpec::validate() const {
  switch (method) {
    case Method::Blended:
    case Method::Morphing:
      if (!blending) fail(ErrorCode::ConfigInvalid, "method requires a blending function");
      break;
    case Method::ShrinkingHorizon:
    case Method::PartialStress:
      if (!horizon) fail(ErrorCode::ConfigInvalid, "method requires a horizon function");
      break;
    default:
      break;
  }
}

namespace {

// Symmetric contribution of the quadratic energy term w*(u_j - u_i)^2 under the
// operator convention A = -(1/h) * Hessian.
void add_pair(LinearSystem& sys, int i, int j, double w) {
  const double c = 2.0 * w / sys.grid.h;
  sys.A(i, j) += c;
  sys.A(i, i) -= c;
  sys.A(j, i) += c;
  sys.A(j, j) -= c;
}

void add_local_row(LinearSystem& sys, int i, double coef) {
  const double c = coef / (sys.grid.h * sys.grid.h);
  sys.A(i, i - 1) += c;
  sys.A(i, i) -= 2.0 * c;
  sys.A(i, i + 1) += c;
}

void add_nonlocal_row(LinearSystem& sys, int i, const BondTable& t) {
  const int n = sys.n();
  if (i - t.m < 0 || i + t.m >= n)
    fail(ErrorCode::MissingBoundaryLayer, "nonlocal neighborhood exits the grid");
  for (int k = 1; k <= t.m; ++k) {
    const double c = t.coeff[static_cast<size_t>(k - 1)];
    sys.A(i, i - k) += c;
    sys.A(i, i + k) += c;
    sys.A(i, i) -= 2.0 * c;
  }
}

int interface_node(const Grid1D& grid, double xv) { return grid.index_near(xv); }

void check_mode(bool ok, const char* what) {
  if (!ok) fail(ErrorCode::ModeMismatch, what);
}

// Blended transition row: bond force weighted by (beta_i + beta_j)/2, first-
// and second-derivative Taylor corrections, plus the full local term. The
// discrete moments make the reduction to the pure models exact through
// quadratic displacements.
void add_blended_row(LinearSystem& sys, int i, const BondTable& t, const BlendingFunction& beta,
                     double Ebar) {
  const Grid1D& g = sys.grid;
  const int n = sys.n();
  if (i - t.m < 0 || i + t.m >= n)
    fail(ErrorCode::MissingBoundaryLayer, "blended neighborhood exits the grid");
  const double bi = beta(g.x[static_cast<size_t>(i)]);
  double m1 = 0.0;  // sum c_j beta_j xi_j
  double m2 = 0.0;  // sum c_j alpha-bar xi_j^2
  for (int k = 1; k <= t.m; ++k) {
    const double c = t.coeff[static_cast<size_t>(k - 1)];
    for (int s : {1, -1}) {
      const double xi = static_cast<double>(s * k) * g.h;
      const double bj = beta(g.x[static_cast<size_t>(i)] + xi);
      const double ab = 0.5 * (bi + bj);
      sys.A(i, i + s * k) += c * ab;
      sys.A(i, i) -= c * ab;
      m1 += c * bj * xi;
      m2 += c * ab * xi * xi;
    }
  }
  // -(1/2) m1 u'(x_i), centered
  const double d1 = 0.5 * m1 / (2.0 * g.h);
  sys.A(i, i + 1) -= d1;
  sys.A(i, i - 1) += d1;
  // (-(1/2) m2 + Ebar) u''(x_i), centered
  const double c2 = (-0.5 * m2 + Ebar) / (g.h * g.h);
  sys.A(i, i - 1) += c2;
  sys.A(i, i) -= 2.0 * c2;
  sys.A(i, i + 1) += c2;
}

void assemble_splice(LinearSystem& sys, const Decomposition& d, const Kernel& kernel) {
  const Grid1D& g = sys.grid;
  const BondTable t = discrete_moments(kernel, g);
  const double E = kernel.local_coefficient();
  for (int i = 0; i < g.n_nodes; ++i) {
    const double xv = g.x[static_cast<size_t>(i)];
    if (xv >= *d.interface_x - 1e-12) {
      if (i > 0 && i < g.n_nodes - 1) add_local_row(sys, i, E);
    } else if (i - t.m >= 0 && i + t.m < g.n_nodes) {
      add_nonlocal_row(sys, i, t);  // may reference nodes across the interface
    }
  }
}

void assemble_blended(LinearSystem& sys, const Decomposition& d, const MethodSpec& spec,
                      const Kernel& kernel) {
  const Grid1D& g = sys.grid;
  const BondTable t = discrete_moments(kernel, g);
  const double Ebar = 0.5 * t.moment(2);  // discrete local coefficient; exact reduction
  const Interval& tr = *d.omega_t;
  for (int i = 0; i < g.n_nodes; ++i) {
    const double xv = g.x[static_cast<size_t>(i)];
    if (xv < tr.lo - 1e-12) {
      if (i - t.m >= 0 && i + t.m < g.n_nodes) add_nonlocal_row(sys, i, t);
    } else if (xv >= tr.hi - 1e-12) {
      if (i > 0 && i < g.n_nodes - 1) add_local_row(sys, i, Ebar);
    } else {
      add_blended_row(sys, i, t, *spec.blending, Ebar);
    }
  }
}

// QNL stiffness as the Hessian of the discrete energy: bonds with
// min(x, x') <= x* keep the nonlocal form; bonds entirely on the local side are
// rewritten as path integrals of |u'|^2 with piecewise-linear interpolation and
// attributed to cells. Cell weights use virtual right-completion so rows near
// the right boundary reduce to the exact local stencil.
void assemble_qnl(LinearSystem& sys, const Decomposition& d, const Kernel& kernel) {
  const Grid1D& g = sys.grid;
  const BondTable t = discrete_moments(kernel, g);
  const int n = g.n_nodes;
  const int iStar = interface_node(g, *d.interface_x);
  // nonlocal-form pairs
  for (int i = 0; i < n; ++i) {
    for (int k = 1; k <= t.m; ++k) {
      const int j = i + k;
      if (j >= n) break;
      if (i <= iStar) add_pair(sys, i, j, 0.5 * g.h * t.coeff[static_cast<size_t>(k - 1)]);
    }
  }
  // reconstructed bonds as cell weights
  for (int c = iStar; c < n - 1; ++c) {
    double s = 0.0;
    for (int k = 1; k <= t.m; ++k) {
      const int lo = std::max(iStar + 1, c - k + 1);
      const int cnt = c - lo + 1;
      if (cnt > 0) s += t.coeff[static_cast<size_t>(k - 1)] * static_cast<double>(k * cnt);
    }
    if (s > 0.0) add_pair(sys, c, c + 1, 0.5 * g.h * s);
  }
}

void assemble_morphing(LinearSystem& sys, const Decomposition& d, const MethodSpec& spec,
                       const Kernel& kernel) {
  const Grid1D& g = sys.grid;
  const BondTable t = discrete_moments(kernel, g);
  const double Ebar = 0.5 * t.moment(2);
  const BlendingFunction& beta = *spec.blending;
  const int n = g.n_nodes;
  (void)d;
  // beta-weighted bond energy
  for (int i = 0; i < n; ++i) {
    const double bi = beta(g.x[static_cast<size_t>(i)]);
    for (int k = 1; k <= t.m; ++k) {
      const int j = i + k;
      if (j >= n) break;
      const double ab = 0.5 * (bi + beta(g.x[static_cast<size_t>(j)]));
      if (ab > 0.0)
        add_pair(sys, i, j, 0.5 * g.h * t.coeff[static_cast<size_t>(k - 1)] * ab);
    }
  }
  // morphed local stiffness on cells
  for (int c = 0; c < n - 1; ++c) {
    const double xm = 0.5 * (g.x[static_cast<size_t>(c)] + g.x[static_cast<size_t>(c + 1)]);
    const double bm = beta(xm);
    double Cx = (1.0 - bm) * Ebar;
    for (int k = 1; k <= t.m; ++k) {
      const double ck = t.coeff[static_cast<size_t>(k - 1)];
      for (int s : {1, -1}) {
        const double xi = static_cast<double>(s * k) * g.h;
        Cx += 0.25 * ck * (bm - beta(xm + xi)) * xi * xi;
      }
    }
    if (Cx != 0.0) add_pair(sys, c, c + 1, 0.5 * Cx / g.h);
  }
}

double capped_point_horizon(const HorizonFunction& hf, double xv, double h) {
  const double dist = std::abs(xv - hf.interface_x);
  double r = std::min(hf(xv), dist);  // neighborhoods never cross the interface
  return std::max(r, h);              // discrete floor of one cell
}

void assemble_shrinking(LinearSystem& sys, const Decomposition& d, const MethodSpec& spec,
                        const Kernel& kernel) {
  const Grid1D& g = sys.grid;
  const int n = g.n_nodes;
  const int iG = interface_node(g, *d.interface_x);
  const HorizonFunction& hf = *spec.horizon;
  const double Ebar = kernel.local_coefficient();
  for (int i = 0; i < iG; ++i) {
    const double r = capped_point_horizon(hf, g.x[static_cast<size_t>(i)], g.h);
    const BondTable t = variable_point_table(kernel, r, g.h);
    for (int k = 1; k <= t.m; ++k) {
      const double ck = t.coeff[static_cast<size_t>(k - 1)];
      if (ck == 0.0) continue;
      for (int s : {1, -1}) {
        const int j = i + s * k;
        if (j >= 0 && j < n) add_pair(sys, i, j, 0.25 * g.h * ck);
      }
    }
  }
  // interface node: one-sided localization limit with outer trapezoid weight h/2
  add_pair(sys, iG - 1, iG, 0.25 * (0.5 * g.h) * (2.0 * Ebar / (g.h * g.h)));
  // local cells to the right of the interface
  for (int c = iG; c < n - 1; ++c) add_pair(sys, c, c + 1, 0.5 * Ebar / g.h);
}

// Partial stress nu(x) = 1/2 sum c_k xi_k (u(x+xi_k) - u(x)) with per-point
// normalized coefficients; the transition rows take the centered divergence of
// the stress at the flanking nodes.
void accumulate_stress(Eigen::VectorXd& row, double scale, int f, const Grid1D& g,
                       const HorizonFunction& hf, const Kernel& kernel, double floor_h) {
  const double df = std::max(hf(g.x[static_cast<size_t>(f)]), floor_h);
  const BondTable t = variable_point_table(kernel, df, g.h);
  if (f - t.m < 0 || f + t.m >= g.n_nodes)
    fail(ErrorCode::MissingBoundaryLayer, "stress stencil exits the grid");
  for (int k = 1; k <= t.m; ++k) {
    const double ck = t.coeff[static_cast<size_t>(k - 1)];
    for (int s : {1, -1}) {
      const double xi = static_cast<double>(s * k) * g.h;
      row(f + s * k) += scale * 0.5 * ck * xi;
      row(f) -= scale * 0.5 * ck * xi;
    }
  }
}

void assemble_partial_stress(LinearSystem& sys, const Decomposition& d, const MethodSpec& spec,
                             const Kernel& kernel) {
  const Grid1D& g = sys.grid;
  const int n = g.n_nodes;
  const HorizonFunction& hf = *spec.horizon;
  const double floor_h = std::max(hf.delta_min, 2.0 * g.h);
  const double ramp =
      hf.kind == HorizonKind::SmoothC2 ? hf.ramp_width : hf.delta_max;
  const BondTable t = discrete_moments(kernel, g);
  const double E = kernel.local_coefficient();
  const double Gamma = *d.interface_x;
  Eigen::VectorXd row(n);
  for (int i = 0; i < n; ++i) {
    const double xv = g.x[static_cast<size_t>(i)];
    if (xv >= Gamma - 1e-12) {
      if (i > 0 && i < n - 1) add_local_row(sys, i, E);
    } else if (Gamma - xv > ramp + 1e-12) {
      if (i - t.m >= 0 && i + t.m < n) add_nonlocal_row(sys, i, t);
    } else {
      row.setZero();
      accumulate_stress(row, 1.0 / (2.0 * g.h), i + 1, g, hf, kernel, floor_h);
      accumulate_stress(row, -1.0 / (2.0 * g.h), i - 1, g, hf, kernel, floor_h);
      sys.A.row(i) += row.transpose();
    }
  }
}

}  // namespace

LinearSystem assemble_local_operator(const Grid1D& grid, const Interval& region,
                                     const Kernel& kernel) {
  const int i0 = grid.index_near(region.lo);
  const int i1 = grid.index_near(region.hi);
  if (i1 - i0 + 1 < 3) fail(ErrorCode::RegionTooSmall, "local region needs at least 3 nodes");
  LinearSystem sys;
  sys.init(grid);
  for (int i = i0 + 1; i < i1; ++i) add_local_row(sys, i, kernel.local_coefficient());
  return sys;
}

LinearSystem assemble_nonlocal_operator(const Grid1D& grid, const Interval& region,
                                        const Kernel& kernel) {
  const int i0 = grid.index_near(region.lo);
  const int i1 = grid.index_near(region.hi);
  if (i1 - i0 + 1 < 3) fail(ErrorCode::RegionTooSmall, "nonlocal region needs at least 3 nodes");
  LinearSystem sys;
  sys.init(grid);
  const BondTable t = discrete_moments(kernel, grid);
  for (int i = i0; i <= i1; ++i) add_nonlocal_row(sys, i, t);
  return sys;
}

LinearSystem assemble_coupled_operator(const Grid1D& grid, const Decomposition& decomp,
                                       const MethodSpec& spec, const Kernel& kernel) {
  spec.validate();
  LinearSystem sys;
  sys.init(grid);
  switch (spec.method) {
    case Method::LocalOnly:
      for (int i = 1; i < grid.n_nodes - 1; ++i)
        add_local_row(sys, i, kernel.local_coefficient());
      break;
    case Method::NonlocalOnly: {
      const BondTable t = discrete_moments(kernel, grid);
      for (int i = t.m; i < grid.n_nodes - t.m; ++i) add_nonlocal_row(sys, i, t);
      break;
    }
    case Method::Splice:
      check_mode(decomp.mode == DecompositionMode::SharpInterface,
                 "splice requires a sharp-interface decomposition");
      assemble_splice(sys, decomp, kernel);
      break;
    case Method::Blended:
      check_mode(decomp.mode == DecompositionMode::BlendedTransition && decomp.blending.has_value(),
                 "blended requires a blended-transition decomposition with a blending region");
      assemble_blended(sys, decomp, spec, kernel);
      break;
    case Method::QNL:
      check_mode(decomp.mode == DecompositionMode::BlendedTransition &&
                     decomp.interface_x.has_value() &&
                     std::abs(decomp.omega_t->width() - decomp.delta) < 1e-12,
                 "qnl requires a blended-transition decomposition of width exactly delta");
      assemble_qnl(sys, decomp, kernel);
      break;
    case Method::Morphing:
      check_mode(decomp.mode == DecompositionMode::BlendedTransition && decomp.blending.has_value(),
                 "morphing requires a blended-transition decomposition with a blending region");
      assemble_morphing(sys, decomp, spec, kernel);
      break;
    case Method::ShrinkingHorizon:
      check_mode(decomp.mode == DecompositionMode::VariableHorizon,
                 "shrinking horizon requires a variable-horizon decomposition");
      assemble_shrinking(sys, decomp, spec, kernel);
      break;
    case Method::PartialStress:
      check_mode(decomp.mode == DecompositionMode::VariableHorizon,
                 "partial stress requires a variable-horizon decomposition");
      assemble_partial_stress(sys, decomp, spec, kernel);
      break;
  }
  return sys;
}

void apply_dirichlet_layer(LinearSystem& sys, const Interval& layer, double required_width,
                           const RealFn& g) {
  if (layer.width() < required_width - 1e-12)
    fail(ErrorCode::IncompleteVolumeConstraint, "constraint layer thinner than delta");
  const Grid1D& gr = sys.grid;
  for (int i = 0; i < gr.n_nodes; ++i) {
    const double xv = gr.x[static_cast<size_t>(i)];
    if (xv >= layer.lo - 1e-12 && xv < layer.hi - 1e-12) sys.set_dirichlet(i, g(xv));
  }
}

void apply_dirichlet_point(LinearSystem& sys, double xv, const RealFn& g) {
  const int i = sys.grid.index_near(xv);
  sys.set_dirichlet(i, g(sys.grid.x[static_cast<size_t>(i)]));
}

void apply_standard_constraints(LinearSystem& sys, const Decomposition& decomp, Method method,
                                const RealFn& g) {
  switch (method) {
    case Method::LocalOnly:
      apply_dirichlet_point(sys, decomp.domain.lo, g);
      apply_dirichlet_point(sys, decomp.domain.hi, g);
      break;
    case Method::NonlocalOnly: {
      apply_dirichlet_layer(sys, decomp.omega_p, decomp.delta, g);
      // mirrored right layer (x_hi - delta, x_hi]
      const Grid1D& gr = sys.grid;
      for (int i = 0; i < gr.n_nodes; ++i) {
        const double xv = gr.x[static_cast<size_t>(i)];
        if (xv > decomp.domain.hi - decomp.delta + 1e-12) sys.set_dirichlet(i, g(xv));
      }
      break;
    }
    default:
      apply_dirichlet_layer(sys, decomp.omega_p, decomp.delta, g);
      apply_dirichlet_point(sys, decomp.gamma_p, g);
      break;
  }
}

void set_load(LinearSystem& sys, const RealFn& f) {
  for (int i = 0; i < sys.n(); ++i)
    if (!sys.constrained[static_cast<size_t>(i)])
      sys.b(i) = -f(sys.grid.x[static_cast<size_t>(i)]);
}

void SaddleSystem::set_loads(const RealFn& f, const RealFn& g) {
  const auto beta = alpha_blend;
  l1 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(local_nodes.size()));
  l2 = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(nonlocal_nodes.size()));
  const double h = grid.h;
  for (size_t a = 0; a < local_nodes.size(); ++a) {
    const double xv = grid.x[static_cast<size_t>(local_nodes[a])];
    const double w = (a == 0 || a + 1 == local_nodes.size()) ? 0.5 * h : h;
    l1(static_cast<Eigen::Index>(a)) = (1.0 - beta(xv)) * (-f(xv)) * w / h;
  }
  for (size_t a = 0; a < nonlocal_nodes.size(); ++a) {
    const double xv = grid.x[static_cast<size_t>(nonlocal_nodes[a])];
    const double w = (a == 0 || a + 1 == nonlocal_nodes.size()) ? 0.5 * h : h;
    l2(static_cast<Eigen::Index>(a)) = beta(xv) * (-f(xv)) * w / h;
  }
  for (size_t a = 0; a < local_nodes.size(); ++a) {
    if (fixed1[a]) fixed1_value[a] = g(grid.x[static_cast<size_t>(local_nodes[a])]);
  }
  for (size_t a = 0; a < nonlocal_nodes.size(); ++a) {
    if (fixed2[a]) fixed2_value[a] = g(grid.x[static_cast<size_t>(nonlocal_nodes[a])]);
  }
}

SaddleSystem assemble_arlequin_saddle(const Grid1D& grid, const Decomposition& decomp,
                                      const Kernel& kernel, const BlendingFunction& beta,
                                      double kappa0, double kappa1) {
  if (decomp.mode != DecompositionMode::Overlap)
    fail(ErrorCode::ModeMismatch, "arlequin requires an overlap decomposition");
  if (kappa0 < 0.0 || kappa1 < 0.0)
    fail(ErrorCode::ConfigInvalid, "coupling parameters must be non-negative");
  const Interval o = *decomp.overlap;
  if (o.width() < 2.0 * decomp.delta - 1e-12)
    fail(ErrorCode::OverlapTooSmall, "arlequin overlap must be at least 2*delta wide");

  SaddleSystem s;
  s.grid = grid;
  s.decomp = decomp;
  s.kappa0 = kappa0;
  s.kappa1 = kappa1;
  s.ill_posed = (kappa1 == 0.0);
  s.alpha_blend = beta;

  const int i_olo = grid.index_near(o.lo);
  const int i_ohi = grid.index_near(o.hi);
  for (int i = i_olo; i < grid.n_nodes; ++i) s.local_nodes.push_back(i);
  for (int i = 0; i <= i_ohi; ++i) s.nonlocal_nodes.push_back(i);
  const int oN = i_ohi - i_olo + 1;
  // H1-seminorm coupling determines the multiplier only up to a constant;
  // drop the trailing dof in that case.
  const int mN = kappa0 > 0.0 ? oN : oN - 1;
  for (int a = 0; a < mN; ++a) s.multiplier_nodes.push_back(i_olo + a);

  const double h = grid.h;
  const auto lN = static_cast<Eigen::Index>(s.local_nodes.size());
  const auto nlN = static_cast<Eigen::Index>(s.nonlocal_nodes.size());

  // A1: alpha1-weighted local stiffness (cell midpoints), Hessian/h convention
  s.A1 = Eigen::MatrixXd::Zero(lN, lN);
  const double E = kernel.local_coefficient();
  for (Eigen::Index a = 0; a + 1 < lN; ++a) {
    const double xm = 0.5 * (grid.x[static_cast<size_t>(s.local_nodes[static_cast<size_t>(a)])] +
                             grid.x[static_cast<size_t>(s.local_nodes[static_cast<size_t>(a + 1)])]);
    const double a1 = 1.0 - beta(xm);
    const double c = a1 * E / (h * h);
    s.A1(a, a) += c;
    s.A1(a + 1, a + 1) += c;
    s.A1(a, a + 1) -= c;
    s.A1(a + 1, a) -= c;
  }
  // A2: alpha2((x+x')/2)-weighted nonlocal stiffness
  s.A2 = Eigen::MatrixXd::Zero(nlN, nlN);
  const BondTable t = discrete_moments(kernel, grid);
  for (Eigen::Index i = 0; i < nlN; ++i) {
    for (int k = 1; k <= t.m; ++k) {
      const Eigen::Index j = i + k;
      if (j >= nlN) break;
      const double mid = 0.5 * (grid.x[static_cast<size_t>(i)] + grid.x[static_cast<size_t>(j)]);
      const double a2 = beta(mid);
      if (a2 == 0.0) continue;
      const double c = t.coeff[static_cast<size_t>(k - 1)] * a2;
      s.A2(i, i) += c;
      s.A2(j, j) += c;
      s.A2(i, j) -= c;
      s.A2(j, i) -= c;
    }
  }
  // C = kappa0 * mass + kappa1 * stiffness on the overlap (P1 elements),
  // composed with the trace maps onto each block.
  Eigen::MatrixXd Cov = Eigen::MatrixXd::Zero(oN, oN);
  for (int a = 0; a + 1 < oN; ++a) {
    Cov(a, a) += kappa0 * h / 3.0 + kappa1 / h;
    Cov(a + 1, a + 1) += kappa0 * h / 3.0 + kappa1 / h;
    Cov(a, a + 1) += kappa0 * h / 6.0 - kappa1 / h;
    Cov(a + 1, a) += kappa0 * h / 6.0 - kappa1 / h;
  }
  s.C1 = Eigen::MatrixXd::Zero(mN, lN);
  s.C2 = Eigen::MatrixXd::Zero(mN, nlN);
  for (int a = 0; a < mN; ++a)
    for (int bcol = 0; bcol < oN; ++bcol) {
      s.C1(a, bcol) = Cov(a, bcol);                       // overlap nodes head the local block
      s.C2(a, (i_olo - 0) + bcol) = Cov(a, bcol);         // global index == block index for u2
    }

  // rank of the coupling on the multiplier space; the trace maps have full row
  // rank, so the retained Cov rows carry the rank of [C1 -C2]
  Eigen::FullPivLU<Eigen::MatrixXd> lu(Cov.topRows(mN));
  if (lu.rank() < mN)
    fail(ErrorCode::RankDeficientCoupling, "coupling block is rank deficient");

  s.fixed1.assign(s.local_nodes.size(), 0);
  s.fixed2.assign(s.nonlocal_nodes.size(), 0);
  s.fixed1_value.assign(s.local_nodes.size(), 0.0);
  s.fixed2_value.assign(s.nonlocal_nodes.size(), 0.0);
  s.fixed1[s.local_nodes.size() - 1] = 1;  // Gamma_p
  for (size_t a = 0; a < s.nonlocal_nodes.size(); ++a) {
    const double xv = grid.x[static_cast<size_t>(s.nonlocal_nodes[a])];
    if (xv < decomp.omega_p.hi - 1e-12) s.fixed2[a] = 1;
  }
  s.l1 = Eigen::VectorXd::Zero(lN);
  s.l2 = Eigen::VectorXd::Zero(nlN);
  return s;
}

double nonlocal_energy(const Grid1D& grid, const Kernel& kernel, const Eigen::VectorXd& u,
                       const Interval& window) {
  const BondTable t = discrete_moments(kernel, grid);
  const int i0 = grid.index_near(window.lo);
  const int i1 = grid.index_near(window.hi);
  double e = 0.0;
  for (int i = i0; i <= i1; ++i) {
    const double tau = (i == i0 || i == i1) ? 0.5 * grid.h : grid.h;
    for (int k = 1; k <= t.m; ++k) {
      const double c = t.coeff[static_cast<size_t>(k - 1)];
      for (int s : {1, -1}) {
        const int j = i + s * k;
        if (j < 0 || j >= grid.n_nodes)
          fail(ErrorCode::MissingBoundaryLayer, "energy window not inset by delta");
        const double du = u(j) - u(i);
        e += 0.25 * tau * c * du * du;
      }
    }
  }
  return e;
}

double local_energy(const Grid1D& grid, const Kernel& kernel, const Eigen::VectorXd& u,
                    const Interval& window) {
  const int i0 = grid.index_near(window.lo);
  const int i1 = grid.index_near(window.hi);
  const double E = kernel.local_coefficient();
  double e = 0.0;
  for (int c = i0; c < i1; ++c) {
    const double du = (u(c + 1) - u(c)) / grid.h;
    e += 0.5 * E * du * du * grid.h;
  }
  return e;
}

std::optional<double> coupled_energy(const Grid1D& grid, const Decomposition& decomp,
                                     const MethodSpec& spec, const Kernel& kernel,
                                     const Eigen::VectorXd& u, const Interval& window) {
  const int i0 = grid.index_near(window.lo);
  const int i1 = grid.index_near(window.hi);
  const double h = grid.h;
  switch (spec.method) {
    case Method::QNL: {
      const BondTable t = discrete_moments(kernel, grid);
      const int iStar = grid.index_near(*decomp.interface_x);
      double e = 0.0;
      for (int i = i0; i <= i1; ++i) {
        const double tau = (i == i0 || i == i1) ? 0.5 * h : h;
        for (int k = 1; k <= t.m; ++k) {
          const double c = t.coeff[static_cast<size_t>(k - 1)];
          for (int s : {1, -1}) {
            const int j = i + s * k;
            if (j < 0 || j >= grid.n_nodes)
              fail(ErrorCode::MissingBoundaryLayer, "energy window not inset by delta");
            if (std::min(i, j) <= iStar) {
              const double du = u(j) - u(i);
              e += 0.25 * tau * c * du * du;
            } else {
              // path-integral reconstruction over the cells between i and j
              const int lo = std::min(i, j);
              double acc = 0.0;
              for (int cc = lo; cc < lo + k; ++cc) {
                const double du = (u(cc + 1) - u(cc)) / h;
                acc += du * du;
              }
              const double xi = static_cast<double>(k) * h;
              e += 0.25 * tau * c * xi * xi * (acc / static_cast<double>(k));
            }
          }
        }
      }
      return e;
    }
    case Method::Morphing: {
      const BondTable t = discrete_moments(kernel, grid);
      const double Ebar = 0.5 * t.moment(2);
      const BlendingFunction& beta = *spec.blending;
      double e = 0.0;
      for (int i = i0; i <= i1; ++i) {
        const double tau = (i == i0 || i == i1) ? 0.5 * h : h;
        const double bi = beta(grid.x[static_cast<size_t>(i)]);
        for (int k = 1; k <= t.m; ++k) {
          const double c = t.coeff[static_cast<size_t>(k - 1)];
          for (int s : {1, -1}) {
            const int j = i + s * k;
            if (j < 0 || j >= grid.n_nodes) continue;
            const double ab = 0.5 * (bi + beta(grid.x[static_cast<size_t>(j)]));
            const double du = u(j) - u(i);
            e += 0.25 * tau * c * ab * du * du;
          }
        }
      }
      for (int c = i0; c < i1; ++c) {
        const double xm = 0.5 * (grid.x[static_cast<size_t>(c)] + grid.x[static_cast<size_t>(c + 1)]);
        const double bm = beta(xm);
        double Cx = (1.0 - bm) * Ebar;
        for (int k = 1; k <= t.m; ++k) {
          const double ck = t.coeff[static_cast<size_t>(k - 1)];
          for (int s : {1, -1}) {
            const double xi = static_cast<double>(s * k) * h;
            Cx += 0.25 * ck * (bm - beta(xm + xi)) * xi * xi;
          }
        }
        const double du = (u(c + 1) - u(c)) / h;
        e += 0.5 * Cx * du * du * h;
      }
      return e;
    }
    case Method::ShrinkingHorizon: {
      const HorizonFunction& hf = *spec.horizon;
      const int iG = grid.index_near(*decomp.interface_x);
      const double E = kernel.local_coefficient();
      double e = 0.0;
      for (int i = i0; i <= i1; ++i) {
        if (i >= iG) break;
        const double tau = (i == i0) ? 0.5 * h : h;
        const double r = capped_point_horizon(hf, grid.x[static_cast<size_t>(i)], h);
        const BondTable t = variable_point_table(kernel, r, h);
        for (int k = 1; k <= t.m; ++k) {
          const double c = t.coeff[static_cast<size_t>(k - 1)];
          for (int s : {1, -1}) {
            const int j = i + s * k;
            if (j < 0 || j >= grid.n_nodes) continue;
            const double du = u(j) - u(i);
            e += 0.25 * tau * c * du * du;
          }
        }
      }
      if (iG >= i0 && iG <= i1) {
        const double du = u(iG) - u(iG - 1);
        e += 0.25 * (0.5 * h) * (2.0 * E / (h * h)) * du * du;
      }
      for (int c = std::max(iG, i0); c < i1; ++c) {
        const double du = (u(c + 1) - u(c)) / h;
        e += 0.5 * E * du * du * h;
      }
      return e;
    }
    default:
      return std::nullopt;
  }
}

}  // namespace ltn
