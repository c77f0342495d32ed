// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/solvers.hpp"

#include <algorithm>
#include <cmath>

namespace ltn {

namespace {

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

SolutionField solve_linear_system(const LinearSystem& sys) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.A);
  Eigen::VectorXd u = lu.solve(sys.b);
  const double res = inf_norm(sys.A * u - sys.b);
  const double scale = sys.A.cwiseAbs().rowwise().sum().maxCoeff() * inf_norm(u) + inf_norm(sys.b);
  if (!(res <= 1e-10 * std::max(scale, 1e-300)))
    fail(ErrorCode::SingularSystem, "linear solve residual check failed");
  SolutionField out;
  out.grid = sys.grid;
  out.u = std::move(u);
  out.constrained = sys.constrained_indices();
  return out;
}

SaddleSolution solve_saddle_system(const SaddleSystem& s) {
  if (s.ill_posed)
    fail(ErrorCode::IllPosedCoupling, "kappa1 = 0: L2-only coupling is flagged ill-posed");
  const auto lN = static_cast<Eigen::Index>(s.local_nodes.size());
  const auto nlN = static_cast<Eigen::Index>(s.nonlocal_nodes.size());
  const auto mN = static_cast<Eigen::Index>(s.multiplier_nodes.size());

  std::vector<Eigen::Index> free1, free2;
  for (Eigen::Index a = 0; a < lN; ++a)
    if (!s.fixed1[static_cast<size_t>(a)]) free1.push_back(a);
  for (Eigen::Index a = 0; a < nlN; ++a)
    if (!s.fixed2[static_cast<size_t>(a)]) free2.push_back(a);
  const auto n1 = static_cast<Eigen::Index>(free1.size());
  const auto n2 = static_cast<Eigen::Index>(free2.size());

  Eigen::VectorXd g1 = Eigen::VectorXd::Zero(lN), g2 = Eigen::VectorXd::Zero(nlN);
  for (Eigen::Index a = 0; a < lN; ++a)
    if (s.fixed1[static_cast<size_t>(a)]) g1(a) = s.fixed1_value[static_cast<size_t>(a)];
  for (Eigen::Index a = 0; a < nlN; ++a)
    if (s.fixed2[static_cast<size_t>(a)]) g2(a) = s.fixed2_value[static_cast<size_t>(a)];

  const Eigen::Index N = n1 + n2 + mN;
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  for (Eigen::Index a = 0; a < n1; ++a) {
    for (Eigen::Index c = 0; c < n1; ++c) K(a, c) = s.A1(free1[a], free1[c]);
    for (Eigen::Index m = 0; m < mN; ++m) {
      K(a, n1 + n2 + m) = s.C1(m, free1[a]);
      K(n1 + n2 + m, a) = s.C1(m, free1[a]);
    }
    rhs(a) = s.l1(free1[a]) - (s.A1.row(free1[a]) * g1)(0);
  }
  for (Eigen::Index a = 0; a < n2; ++a) {
    for (Eigen::Index c = 0; c < n2; ++c) K(n1 + a, n1 + c) = s.A2(free2[a], free2[c]);
    for (Eigen::Index m = 0; m < mN; ++m) {
      K(n1 + a, n1 + n2 + m) = -s.C2(m, free2[a]);
      K(n1 + n2 + m, n1 + a) = -s.C2(m, free2[a]);
    }
    rhs(n1 + a) = s.l2(free2[a]) - (s.A2.row(free2[a]) * g2)(0);
  }
  for (Eigen::Index m = 0; m < mN; ++m)
    rhs(n1 + n2 + m) = -(s.C1.row(m) * g1)(0) + (s.C2.row(m) * g2)(0);

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  Eigen::VectorXd sol = lu.solve(rhs);
  const double res = inf_norm(K * sol - rhs);
  const double kkt_rel = res / std::max(1.0, inf_norm(rhs));
  if (!(kkt_rel <= 1e-9))
    fail(ErrorCode::RankDeficientCoupling, "saddle KKT solve did not meet the residual bound");

  Eigen::VectorXd u1 = g1, u2 = g2;
  for (Eigen::Index a = 0; a < n1; ++a) u1(free1[a]) = sol(a);
  for (Eigen::Index a = 0; a < n2; ++a) u2(free2[a]) = sol(n1 + a);
  Eigen::VectorXd phi = sol.segment(n1 + n2, mN);

  // weak compatibility C(psi, u1 - u2) at the solution
  Eigen::VectorXd compat = s.C1 * u1 - s.C2 * u2;

  SaddleSolution out;
  out.u1 = u1;
  out.u2 = u2;
  out.phi = phi;
  out.kkt_residual = kkt_rel;
  out.compat_mismatch = inf_norm(compat);

  // reconstruction: u1 outside the overlap on the local side, u2 on the
  // nonlocal side, alpha-blended combination inside the overlap
  SolutionField f;
  f.grid = s.grid;
  f.method = "arlequin";
  f.u = Eigen::VectorXd::Zero(s.grid.n_nodes);
  const Interval o = *s.decomp.overlap;
  const int i_olo = s.grid.index_near(o.lo);
  const int i_ohi = s.grid.index_near(o.hi);
  for (int i = 0; i < s.grid.n_nodes; ++i) {
    const double xv = s.grid.x[static_cast<size_t>(i)];
    if (i < i_olo) {
      f.u(i) = u2(i);
    } else if (i > i_ohi) {
      f.u(i) = u1(i - i_olo);
    } else {
      const double a1 = 1.0 - s.alpha_blend(xv);
      f.u(i) = a1 * u1(i - i_olo) + (1.0 - a1) * u2(i);
    }
  }
  out.field = std::move(f);
  return out;
}

namespace {

struct OverlapLayout {
  int i_olo = 0, i_ohi = 0, m = 0;
  std::vector<int> nl_nodes, l_nodes;          // global node sets of the two sub-problems
  std::vector<int> nl_layer;                   // constrained physical layer (block idx)
  std::vector<int> nl_ctrl;                    // virtual boundary nodes (block idx)
};

OverlapLayout overlap_layout(const Grid1D& grid, const Decomposition& d, const Kernel& kernel) {
  if (d.mode != DecompositionMode::Overlap)
    fail(ErrorCode::ModeMismatch, "solver requires an overlap decomposition");
  OverlapLayout L;
  const BondTable t = discrete_moments(kernel, grid);
  L.m = t.m;
  L.i_olo = grid.index_near(d.overlap->lo);
  L.i_ohi = grid.index_near(d.overlap->hi);
  for (int i = 0; i <= L.i_ohi; ++i) L.nl_nodes.push_back(i);
  for (int i = L.i_olo; i < grid.n_nodes; ++i) L.l_nodes.push_back(i);
  for (int i = 0; i <= L.i_ohi; ++i) {
    const double xv = grid.x[static_cast<size_t>(i)];
    if (xv < d.omega_p.hi - 1e-12) L.nl_layer.push_back(i);
    if (xv > d.omega_v->lo + 1e-12) L.nl_ctrl.push_back(i);
  }
  if (static_cast<int>(L.nl_ctrl.size()) != L.m)
    fail(ErrorCode::Internal, "unexpected virtual-boundary node count");
  return L;
}

Eigen::MatrixXd nl_subproblem_matrix(const Grid1D& grid, const Kernel& kernel,
                                     const OverlapLayout& L) {
  const BondTable t = discrete_moments(kernel, grid);
  const auto N = static_cast<Eigen::Index>(L.nl_nodes.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  for (Eigen::Index i = 0; i < N; ++i) {
    const bool layer = std::find(L.nl_layer.begin(), L.nl_layer.end(), static_cast<int>(i)) !=
                       L.nl_layer.end();
    const bool ctrl = std::find(L.nl_ctrl.begin(), L.nl_ctrl.end(), static_cast<int>(i)) !=
                      L.nl_ctrl.end();
    if (layer || ctrl) {
      A(i, i) = 1.0;  // value row; Robin callers overwrite the ctrl rows
      continue;
    }
    for (int k = 1; k <= t.m; ++k) {
      const double c = t.coeff[static_cast<size_t>(k - 1)];
      A(i, i - k) += c;
      A(i, i + k) += c;
      A(i, i) -= 2.0 * c;
    }
  }
  return A;
}

Eigen::MatrixXd local_subproblem_matrix(const Grid1D& grid, const Kernel& kernel,
                                        const OverlapLayout& L) {
  const auto N = static_cast<Eigen::Index>(L.l_nodes.size());
  const double E = kernel.local_coefficient();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N, N);
  A(0, 0) = 1.0;
  A(N - 1, N - 1) = 1.0;
  for (Eigen::Index a = 1; a + 1 < N; ++a) {
    const double c = E / (grid.h * grid.h);
    A(a, a - 1) += c;
    A(a, a) -= 2.0 * c;
    A(a, a + 1) += c;
  }
  return A;
}

}  // namespace

ObmResult solve_optimization_based(const Grid1D& grid, const Decomposition& decomp,
                                   const Kernel& kernel, const RealFn& f, const RealFn& g) {
  const OverlapLayout L = overlap_layout(grid, decomp, kernel);
  const Eigen::MatrixXd Anl = nl_subproblem_matrix(grid, kernel, L);
  const Eigen::MatrixXd Al = local_subproblem_matrix(grid, kernel, L);
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_nl(Anl), lu_l(Al);

  const auto Nnl = static_cast<Eigen::Index>(L.nl_nodes.size());
  const auto Nl = static_cast<Eigen::Index>(L.l_nodes.size());
  const int nc = L.m + 1;  // controls: layer values on omega_v plus one on gamma_v

  auto solve_nl = [&](const Eigen::VectorXd& nu, bool with_load) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(Nnl);
    for (Eigen::Index i = 0; i < Nnl; ++i) {
      const double xv = grid.x[static_cast<size_t>(i)];
      b(i) = with_load ? -f(xv) : 0.0;
    }
    for (int i : L.nl_layer) b(i) = with_load ? g(grid.x[static_cast<size_t>(i)]) : 0.0;
    for (size_t a = 0; a < L.nl_ctrl.size(); ++a) b(L.nl_ctrl[a]) = nu(static_cast<Eigen::Index>(a));
    return Eigen::VectorXd(lu_nl.solve(b));
  };
  auto solve_l = [&](double nul, bool with_load) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(Nl);
    for (Eigen::Index a = 0; a < Nl; ++a)
      b(a) = with_load ? -f(grid.x[static_cast<size_t>(L.l_nodes[static_cast<size_t>(a)])]) : 0.0;
    b(0) = nul;
    b(Nl - 1) = with_load ? g(grid.x.back()) : 0.0;
    return Eigen::VectorXd(lu_l.solve(b));
  };

  // trapezoid L2 weights on the overlap nodes
  const int oN = L.i_ohi - L.i_olo + 1;
  Eigen::VectorXd w(oN);
  for (int a = 0; a < oN; ++a) w(a) = (a == 0 || a == oN - 1) ? 0.5 * grid.h : grid.h;

  const Eigen::VectorXd u_nl0 = solve_nl(Eigen::VectorXd::Zero(L.m), true);
  const Eigen::VectorXd u_l0 = solve_l(0.0, true);
  Eigen::VectorXd d0(oN);
  for (int a = 0; a < oN; ++a) d0(a) = u_nl0(L.i_olo + a) - u_l0(a);

  Eigen::MatrixXd Z(oN, nc);
  for (int t = 0; t < L.m; ++t) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(L.m);
    e(t) = 1.0;
    const Eigen::VectorXd du = solve_nl(e, false);
    for (int a = 0; a < oN; ++a) Z(a, t) = du(L.i_olo + a);
  }
  {
    const Eigen::VectorXd du = solve_l(1.0, false);
    for (int a = 0; a < oN; ++a) Z(a, L.m) = -du(a);
  }

  const Eigen::MatrixXd H = Z.transpose() * w.asDiagonal() * Z;
  const Eigen::VectorXd rhs = -Z.transpose() * (w.asDiagonal() * d0);
  Eigen::LLT<Eigen::MatrixXd> llt(H);
  if (llt.info() != Eigen::Success)
    fail(ErrorCode::ReducedSystemSingular, "reduced Hessian not positive definite (overlap too small?)");
  const Eigen::VectorXd nu = llt.solve(rhs);

  const Eigen::VectorXd u_nl = solve_nl(nu.head(L.m), true);
  const Eigen::VectorXd u_l = solve_l(nu(L.m), true);
  double J = 0.0;
  for (int a = 0; a < oN; ++a) {
    const double r = u_nl(L.i_olo + a) - u_l(a);
    J += 0.5 * w(a) * r * r;
  }

  ObmResult out;
  out.objective = J;
  out.controls = nu;
  out.u_nl = u_nl;
  out.u_l = u_l;
  out.nl_nodes = L.nl_nodes;
  out.l_nodes = L.l_nodes;
  out.field.grid = grid;
  out.field.method = "obm";
  out.field.u = Eigen::VectorXd::Zero(grid.n_nodes);
  // glue: nonlocal solution up to the start of its virtual layer, local beyond
  const int cut = L.i_ohi - L.m;
  for (int i = 0; i < grid.n_nodes; ++i)
    out.field.u(i) = i <= cut ? u_nl(i) : u_l(i - L.i_olo);
  return out;
}

double IterationTrace::mean_reduction_factor() const {
  if (reduction_factors.empty()) return 0.0;
  double s = 0.0;
  int n = 0;
  for (double r : reduction_factors) {
    if (r > 0.0) {
      s += std::log(r);
      ++n;
    }
  }
  return n ? std::exp(s / n) : 0.0;
}

RobinResult solve_partitioned_robin(const Grid1D& grid, const Decomposition& decomp,
                                    const Kernel& kernel, const RealFn& f, const RealFn& g,
                                    const RobinOptions& opts) {
  if (opts.r1 < 0.0 || opts.r2 < 0.0) fail(ErrorCode::InvalidRobin, "Robin coefficients must be >= 0");
  const bool dirichlet = std::isinf(opts.r1) || std::isinf(opts.r2);
  const OverlapLayout L = overlap_layout(grid, decomp, kernel);
  const double h = grid.h;

  Eigen::MatrixXd Anl = nl_subproblem_matrix(grid, kernel, L);
  // Robin rows on the nonlocal virtual boundary: R1 u + u' (outward = +x),
  // one-sided second-order difference
  for (int i : L.nl_ctrl) {
    Anl.row(i).setZero();
    if (dirichlet) {
      Anl(i, i) = 1.0;
    } else {
      Anl(i, i) = opts.r1 + 3.0 / (2.0 * h);
      Anl(i, i - 1) = -4.0 / (2.0 * h);
      Anl(i, i - 2) = 1.0 / (2.0 * h);
    }
  }
  Eigen::MatrixXd Al = local_subproblem_matrix(grid, kernel, L);
  if (!dirichlet) {
    Al(0, 0) = opts.r2 + 3.0 / (2.0 * h);
    Al(0, 1) = -4.0 / (2.0 * h);
    Al(0, 2) = 1.0 / (2.0 * h);
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu_nl(Anl), lu_l(Al);

  const auto Nnl = static_cast<Eigen::Index>(L.nl_nodes.size());
  const auto Nl = static_cast<Eigen::Index>(L.l_nodes.size());
  Eigen::VectorXd u_nl = Eigen::VectorXd::Zero(Nnl), u_l = Eigen::VectorXd::Zero(Nl);

  IterationTrace trace;
  const int limit = opts.mode == RobinMode::Implicit ? opts.max_iter : opts.sweeps;
  for (int it = 1; it <= limit; ++it) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(Nnl);
    for (Eigen::Index i = 0; i < Nnl; ++i) b(i) = -f(grid.x[static_cast<size_t>(i)]);
    for (int i : L.nl_layer) b(i) = g(grid.x[static_cast<size_t>(i)]);
    for (int i : L.nl_ctrl) {
      const Eigen::Index a = i - L.i_olo;  // local-block index of the same node
      if (dirichlet) {
        b(i) = u_l(a);
      } else {
        b(i) = opts.r1 * u_l(a) + (3.0 * u_l(a) - 4.0 * u_l(a - 1) + u_l(a - 2)) / (2.0 * h);
      }
    }
    const Eigen::VectorXd new_nl = lu_nl.solve(b);

    Eigen::VectorXd bl = Eigen::VectorXd::Zero(Nl);
    for (Eigen::Index a = 0; a < Nl; ++a)
      bl(a) = -f(grid.x[static_cast<size_t>(L.l_nodes[static_cast<size_t>(a)])]);
    bl(Nl - 1) = g(grid.x.back());
    const Eigen::Index k = L.i_olo;  // gamma_v in the nonlocal block
    if (dirichlet) {
      bl(0) = new_nl(k);
    } else {
      bl(0) = opts.r2 * new_nl(k) + (3.0 * new_nl(k) - 4.0 * new_nl(k + 1) + new_nl(k + 2)) / (2.0 * h);
    }
    const Eigen::VectorXd new_l = lu_l.solve(bl);

    const double change = std::max((new_nl - u_nl).cwiseAbs().maxCoeff(),
                                   (new_l - u_l).cwiseAbs().maxCoeff());
    u_nl = new_nl;
    u_l = new_l;
    double mm = 0.0;
    for (int a = 0; a <= L.i_ohi - L.i_olo; ++a)
      mm = std::max(mm, std::abs(u_nl(L.i_olo + a) - u_l(a)));
    trace.residuals.push_back(change);
    trace.mismatches.push_back(mm);
    const size_t nmi = trace.mismatches.size();
    if (nmi >= 2 && trace.mismatches[nmi - 2] > 0.0)
      trace.reduction_factors.push_back(trace.mismatches[nmi - 1] / trace.mismatches[nmi - 2]);
    trace.iterations = it;
    if (opts.mode == RobinMode::Implicit && change <= opts.tol) {
      trace.converged = true;
      break;
    }
  }
  if (opts.mode == RobinMode::Explicit)
    trace.converged = !trace.residuals.empty() && trace.residuals.back() <= opts.tol;

  RobinResult out;
  out.trace = std::move(trace);
  out.u_nl = u_nl;
  out.u_l = u_l;
  out.nl_nodes = L.nl_nodes;
  out.l_nodes = L.l_nodes;
  out.field.grid = grid;
  out.field.method = "partitioned";
  out.field.u = Eigen::VectorXd::Zero(grid.n_nodes);
  const int cut = L.i_ohi - L.m;
  for (int i = 0; i < grid.n_nodes; ++i)
    out.field.u(i) = i <= cut ? u_nl(i) : u_l(i - L.i_olo);
  return out;
}

RobinSweepResult sweep_robin_coefficient(const Grid1D& grid, const Decomposition& decomp,
                                         const Kernel& kernel, const RealFn& f, const RealFn& g,
                                         const RobinOptions& base,
                                         const std::vector<double>& r_grid) {
  if (base.mode != RobinMode::Implicit)
    fail(ErrorCode::ConfigInvalid, "robin sweep requires implicit mode");
  RobinSweepResult out;
  int best_it = -1;
  for (double R : r_grid) {
    RobinOptions o = base;
    o.r1 = R;
    o.r2 = R;
    const RobinResult r = solve_partitioned_robin(grid, decomp, kernel, f, g, o);
    RobinSweepRow row;
    row.R = R;
    row.iterations = r.trace.iterations;
    row.mean_reduction = r.trace.mean_reduction_factor();
    row.converged = r.trace.converged;
    out.rows.push_back(row);
    if (row.converged && (best_it < 0 || row.iterations < best_it)) {
      best_it = row.iterations;
      out.best_R = R;
    }
  }
  return out;
}

}  // namespace ltn
