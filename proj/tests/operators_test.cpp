// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "ltn/operators.hpp"
#include "oracles.hpp"

using namespace ltn;

namespace {

Eigen::VectorXd eval_on_grid(const Grid1D& g, const std::function<double(double)>& f) {
  Eigen::VectorXd v(g.n_nodes);
  for (int i = 0; i < g.n_nodes; ++i) v(i) = f(g.x[static_cast<size_t>(i)]);
  return v;
}

double residual_sup_free(const LinearSystem& sys, const Eigen::VectorXd& r) {
  double s = 0.0;
  for (int i = 0; i < sys.n(); ++i)
    if (!sys.constrained[static_cast<size_t>(i)]) s = std::max(s, std::abs(r(i)));
  return s;
}

Kernel diffusion_kernel(double delta) { return {KernelFamily::Constant, ModelType::Diffusion, delta}; }

}  // namespace

TEST_CASE("local operator rows reproduce polynomials") {
  const Grid1D g = Grid1D::with_spacing(0.0, 1.0, 0.01);
  const LinearSystem sys = assemble_local_operator(g, {0.0, 1.0}, diffusion_kernel(0.04));
  const int i = g.index_near(0.5);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n_nodes);
  CHECK(std::abs((sys.A.row(i) * ones)(0)) <= 1e-12);
  const Eigen::VectorXd x2 = eval_on_grid(g, [](double x) { return x * x; });
  CHECK((sys.A.row(i) * x2)(0) == doctest::Approx(2.0).epsilon(1e-12));
  // centered differences are exact on cubics
  const Eigen::VectorXd x3 = eval_on_grid(g, [](double x) { return x * x * x; });
  CHECK(std::abs((sys.A.row(i) * x3)(0) - 3.0) <= 1e-10);
  CHECK_THROWS_AS(assemble_local_operator(g, {0.5, 0.51}, diffusion_kernel(0.04)), LtnError);
}

TEST_CASE("nonlocal operator rows: moment identities and quadrature oracle") {
  const double delta = 0.2;
  const double h = 1.0 / 800.0;
  const Grid1D g = Grid1D::with_spacing(-0.5, 0.5, h);
  const LinearSystem sys =
      assemble_nonlocal_operator(g, {-0.25, 0.25}, diffusion_kernel(delta));
  const int i = g.index_near(0.0);
  const Eigen::VectorXd x2 = eval_on_grid(g, [](double x) { return x * x; });
  CHECK(std::abs((sys.A.row(i) * x2)(0) - 2.0) <= 1e-12);  // forced by normalization
  const Eigen::VectorXd x1 = eval_on_grid(g, [](double x) { return x; });
  CHECK((sys.A.row(i) * x1)(0) == 0.0);  // odd symmetry, exact in fp
  // compare against brute-force quadrature of the integral for a smooth field
  const auto usin = [](double x) { return std::sin(3.0 * x + 0.7); };
  const Eigen::VectorXd us = eval_on_grid(g, usin);
  const double row_val = (sys.A.row(i) * us)(0);
  const double oracle_val = oracle::nonlocal_apply(usin, 0.0, delta);
  CHECK(std::abs(row_val - oracle_val) <= 1e-5);  // both within O(h^2) of each other
  // and |L u - u''| = O(delta^2)
  CHECK(std::abs(row_val - (-9.0 * std::sin(0.7))) <= 1.0 * delta * delta);

  CHECK_THROWS_AS(assemble_nonlocal_operator(g, {-0.45, 0.0}, diffusion_kernel(delta)), LtnError);
}

TEST_CASE("splice rows coincide with the pure operators") {
  const double delta = 0.05, h = delta / 4.0;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  DecompositionParams p;
  p.interface_x = 0.5;
  const Decomposition d = build_decomposition(DecompositionMode::SharpInterface, -delta, 1.0, p, delta);
  MethodSpec spec;
  spec.method = Method::Splice;
  spec.interface_x = 0.5;
  const Kernel k = diffusion_kernel(delta);
  const LinearSystem sys = assemble_coupled_operator(g, d, spec, k);

  MethodSpec nl_spec;
  nl_spec.method = Method::NonlocalOnly;
  const LinearSystem nl = assemble_coupled_operator(g, d, nl_spec, k);
  MethodSpec lo_spec;
  lo_spec.method = Method::LocalOnly;
  const LinearSystem lo = assemble_coupled_operator(g, d, lo_spec, k);
  for (int i = 4; i < g.n_nodes - 4; ++i) {
    const double xv = g.x[static_cast<size_t>(i)];
    if (xv < 0.5 - 1e-12) {
      CHECK((sys.A.row(i) - nl.A.row(i)).cwiseAbs().maxCoeff() == 0.0);
    } else if (i < g.n_nodes - 1) {
      CHECK((sys.A.row(i) - lo.A.row(i)).cwiseAbs().maxCoeff() == 0.0);
    }
  }
}

TEST_CASE("splice passes a cubic patch residual check") {
  const double delta = 0.05, h = delta / 4.0;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  DecompositionParams p;
  p.interface_x = 0.5;
  const Decomposition d = build_decomposition(DecompositionMode::SharpInterface, -delta, 1.0, p, delta);
  MethodSpec spec;
  spec.method = Method::Splice;
  spec.interface_x = 0.5;
  LinearSystem sys = assemble_coupled_operator(g, d, spec, diffusion_kernel(delta));
  apply_standard_constraints(sys, d, Method::Splice, [](double x) { return x * x * x; });
  set_load(sys, [](double x) { return -6.0 * x; });
  const Eigen::VectorXd u3 = eval_on_grid(g, [](double x) { return x * x * x; });
  CHECK(residual_sup_free(sys, sys.A * u3 - sys.b) <= 1e-10);
}

TEST_CASE("blended operator annihilates linear fields exactly") {
  const double delta = 0.05, h = delta / 4.0;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  DecompositionParams p;
  p.blending_region = Interval{0.4, 0.6};
  const Decomposition d =
      build_decomposition(DecompositionMode::BlendedTransition, -delta, 1.0, p, delta);
  for (auto shape : {BlendingFunction::Shape::PiecewiseConstant,
                     BlendingFunction::Shape::PiecewiseLinear,
                     BlendingFunction::Shape::CubicSmooth}) {
    MethodSpec spec;
    spec.method = Method::Blended;
    spec.blending = BlendingFunction{shape, 0.4, 0.6};
    LinearSystem sys = assemble_coupled_operator(g, d, spec, diffusion_kernel(delta));
    apply_standard_constraints(sys, d, Method::Blended, [](double x) { return x; });
    const Eigen::VectorXd x1 = eval_on_grid(g, [](double x) { return x; });
    CHECK(residual_sup_free(sys, sys.A * x1) <= 1e-12);
    const Eigen::VectorXd x2 = eval_on_grid(g, [](double x) { return x * x; });
    Eigen::VectorXd r = sys.A * x2;
    for (int i = 0; i < g.n_nodes; ++i)
      if (!sys.constrained[static_cast<size_t>(i)]) r(i) -= 2.0;
    CHECK(residual_sup_free(sys, r) <= 1e-10);
  }
}

TEST_CASE("QNL stiffness is exactly symmetric and PSD") {
  const double delta = 0.04, h = 0.01;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  DecompositionParams p;
  p.interface_x = 0.5;
  const Decomposition d =
      build_decomposition(DecompositionMode::BlendedTransition, -delta, 1.0, p, delta);
  MethodSpec spec;
  spec.method = Method::QNL;
  spec.interface_x = 0.5;
  const LinearSystem sys = assemble_coupled_operator(g, d, spec, diffusion_kernel(delta));
  const Eigen::MatrixXd K = -g.h * sys.A;  // Hessian of the discrete energy
  CHECK((K - K.transpose()).cwiseAbs().maxCoeff() == 0.0);
  std::mt19937_64 rng(123456789ULL);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const double scale = K.cwiseAbs().maxCoeff();
  for (int s = 0; s < 100; ++s) {
    Eigen::VectorXd v(g.n_nodes);
    for (int i = 0; i < g.n_nodes; ++i) v(i) = dist(rng);
    CHECK(v.dot(K * v) >= -1e-10 * scale * v.squaredNorm());
  }
  // constants span the unconstrained nullspace
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n_nodes);
  CHECK((K * ones).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("partial stress of a quadratic field is exactly 2 E x") {
  const double delta = 0.05, h = delta / 4.0, E = 1.0;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  const Kernel k{KernelFamily::Constant, ModelType::Peridynamic, delta, E};
  HorizonFunction hf{HorizonKind::SmoothC2, delta, 0.5, 0.2, 2.0 * h};
  // brute-force bond sum of the stress at transition nodes
  for (double xv : {0.35, 0.4, 0.45, 0.475}) {
    const double dp = std::max(hf(xv), 2.0 * h);
    const BondTable t = variable_point_table(k, dp, h);
    double nu = 0.0;
    for (int kk = 1; kk <= t.m; ++kk) {
      const double c = t.coeff[static_cast<size_t>(kk - 1)];
      for (int s : {1, -1}) {
        const double xi = s * kk * h;
        const double du = (xv + xi) * (xv + xi) - xv * xv;
        nu += 0.5 * c * xi * du;
      }
    }
    CHECK(std::abs(nu - 2.0 * E * xv) <= 1e-12);
  }
  // and the assembled rows annihilate linears / map x^2 to 2E
  DecompositionParams p;
  p.interface_x = 0.5;
  const Decomposition d =
      build_decomposition(DecompositionMode::VariableHorizon, -delta, 1.0, p, delta);
  MethodSpec spec;
  spec.method = Method::PartialStress;
  spec.horizon = hf;
  LinearSystem sys = assemble_coupled_operator(g, d, spec, k);
  apply_standard_constraints(sys, d, Method::PartialStress, [](double x) { return x; });
  const Eigen::VectorXd x1 = eval_on_grid(g, [](double x) { return x; });
  CHECK(residual_sup_free(sys, sys.A * x1) <= 1e-12);
}

TEST_CASE("every coupled operator reproduces constants") {
  const double delta = 0.05, h = delta / 4.0;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  const Kernel k = diffusion_kernel(delta);
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(g.n_nodes);

  auto check_const = [&](const Decomposition& d, const MethodSpec& spec) {
    LinearSystem sys = assemble_coupled_operator(g, d, spec, k);
    apply_standard_constraints(sys, d, spec.method, [](double) { return 1.0; });
    Eigen::VectorXd r = sys.A * ones;
    for (int i : sys.constrained_indices()) r(i) = 0.0;
    CHECK(r.cwiseAbs().maxCoeff() <= 1e-12);
  };

  {
    DecompositionParams p;
    p.interface_x = 0.5;
    const auto d = build_decomposition(DecompositionMode::SharpInterface, -delta, 1.0, p, delta);
    MethodSpec s;
    s.method = Method::Splice;
    s.interface_x = 0.5;
    check_const(d, s);
  }
  {
    DecompositionParams p;
    p.blending_region = Interval{0.4, 0.6};
    const auto d =
        build_decomposition(DecompositionMode::BlendedTransition, -delta, 1.0, p, delta);
    for (Method m : {Method::Blended, Method::Morphing}) {
      MethodSpec s;
      s.method = m;
      s.blending = BlendingFunction{BlendingFunction::Shape::CubicSmooth, 0.4, 0.6};
      check_const(d, s);
    }
  }
  {
    DecompositionParams p;
    p.interface_x = 0.5;
    const auto d =
        build_decomposition(DecompositionMode::BlendedTransition, -delta, 1.0, p, delta);
    MethodSpec s;
    s.method = Method::QNL;
    s.interface_x = 0.5;
    check_const(d, s);
  }
  {
    DecompositionParams p;
    p.interface_x = 0.5;
    const auto d = build_decomposition(DecompositionMode::VariableHorizon, -delta, 1.0, p, delta);
    for (auto kind : {HorizonKind::PiecewiseLinear, HorizonKind::SmoothC2}) {
      MethodSpec s;
      s.method = Method::ShrinkingHorizon;
      s.horizon = HorizonFunction{kind, delta, 0.5, 0.2, 0.0};
      check_const(d, s);
      MethodSpec s2;
      s2.method = Method::PartialStress;
      s2.horizon = HorizonFunction{kind, delta, 0.5, 0.2, 2.0 * h};
      check_const(d, s2);
    }
  }
}

TEST_CASE("dirichlet layer bookkeeping") {
  const Grid1D g = Grid1D::with_spacing(-0.05, 1.0, 0.0125);
  DecompositionParams p;
  p.interface_x = 0.5;
  const Decomposition d = build_decomposition(DecompositionMode::SharpInterface, -0.05, 1.0, p, 0.05);
  MethodSpec spec;
  spec.method = Method::Splice;
  spec.interface_x = 0.5;
  LinearSystem sys = assemble_coupled_operator(g, d, spec, diffusion_kernel(0.05));
  apply_dirichlet_layer(sys, d.omega_p, d.delta, [](double x) { return x; });
  const auto cons = sys.constrained_indices();
  REQUIRE(cons.size() == 4);  // -0.05, -0.0375, -0.025, -0.0125
  CHECK(sys.b(cons[0]) == doctest::Approx(-0.05));
  CHECK(sys.b(cons[3]) == doctest::Approx(-0.0125));

  LinearSystem sys2 = assemble_coupled_operator(g, d, spec, diffusion_kernel(0.05));
  CHECK_THROWS_AS(apply_dirichlet_layer(sys2, {-0.05, -0.025}, d.delta, [](double) { return 0.0; }),
                  LtnError);
  // zero data stays zero
  LinearSystem sys3 = assemble_coupled_operator(g, d, spec, diffusion_kernel(0.05));
  apply_dirichlet_layer(sys3, d.omega_p, d.delta, [](double) { return 0.0; });
  for (int i : sys3.constrained_indices()) CHECK(sys3.b(i) == 0.0);
}

TEST_CASE("arlequin assembly: weights, symmetry, flags") {
  const double delta = 0.05, h = delta / 4.0;
  const Grid1D g = Grid1D::with_spacing(-delta, 1.0, h);
  DecompositionParams p;
  p.overlap = Interval{0.4, 0.6};
  const Decomposition d = build_decomposition(DecompositionMode::Overlap, -delta, 1.0, p, delta);
  const BlendingFunction beta{BlendingFunction::Shape::PiecewiseLinear, 0.4, 0.6};
  // alpha1 + beta = 1 on every node
  for (double xv : g.x) CHECK((1.0 - beta(xv)) + beta(xv) == doctest::Approx(1.0));

  const Kernel k = diffusion_kernel(delta);
  const SaddleSystem s = assemble_arlequin_saddle(g, d, k, beta, 0.0, 1.0);
  CHECK_FALSE(s.ill_posed);
  CHECK((s.A1 - s.A1.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((s.A2 - s.A2.transpose()).cwiseAbs().maxCoeff() == 0.0);

  const SaddleSystem bad = assemble_arlequin_saddle(g, d, k, beta, 1.0, 0.0);
  CHECK(bad.ill_posed);

  DecompositionParams tight;
  tight.overlap = Interval{0.45, 0.52};  // width < 2 delta
  const Decomposition dt = build_decomposition(DecompositionMode::Overlap, -delta, 1.0, tight, delta);
  CHECK_THROWS_AS(assemble_arlequin_saddle(g, dt, k, beta, 1.0, 1.0), LtnError);
}

TEST_CASE("triplet export emits every stored entry") {
  const Grid1D g = Grid1D::with_spacing(0.0, 1.0, 0.25);
  const LinearSystem sys = assemble_local_operator(g, {0.0, 1.0}, diffusion_kernel(0.5));
  std::ostringstream os;
  sys.export_triplets(os);
  CHECK(os.str().find("1 0 ") != std::string::npos);
  CHECK(os.str().find("1 1 ") != std::string::npos);
}
