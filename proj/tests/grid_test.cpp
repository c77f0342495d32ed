// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include "ltn/grid.hpp"
#include "oracles.hpp"

using namespace ltn;

TEST_CASE("grid construction and invariants") {
  const Grid1D g = Grid1D::with_spacing(-0.05, 1.0, 0.0125);
  CHECK(g.n_nodes == 85);
  CHECK(g.h == doctest::Approx(0.0125).epsilon(1e-14));
  for (int i = 1; i < g.n_nodes; ++i) {
    const double step = g.x[i] - g.x[i - 1];
    CHECK(std::abs(step - g.h) <= 1e-14 * g.h);  // uniform to 1e-14 h
  }
  CHECK_THROWS_AS(Grid1D::uniform(0.0, 1.0, 2), LtnError);
  CHECK_THROWS_AS(Grid1D::with_spacing(0.0, 1.0, 0.3), LtnError);
}

TEST_CASE("blended-transition decomposition matches the reference setup") {
  DecompositionParams p;
  p.blending_region = Interval{0.4, 0.6};
  const Decomposition d =
      build_decomposition(DecompositionMode::BlendedTransition, -0.05, 1.0, p, 0.05);
  CHECK(d.omega_p.lo == doctest::Approx(-0.05));
  CHECK(d.omega_p.hi == doctest::Approx(0.0));
  CHECK(d.omega_nl.lo == doctest::Approx(0.0));
  CHECK(d.omega_nl.hi == doctest::Approx(0.35));
  CHECK(d.omega_t->lo == doctest::Approx(0.35));
  CHECK(d.omega_t->hi == doctest::Approx(0.65));
  CHECK(d.omega_l.lo == doctest::Approx(0.65));
  CHECK(d.omega_l.hi == doctest::Approx(1.0));
}

TEST_CASE("sharp-interface decomposition") {
  DecompositionParams p;
  p.interface_x = 0.5;
  const Decomposition d =
      build_decomposition(DecompositionMode::SharpInterface, -0.05, 1.0, p, 0.05);
  CHECK(d.omega_p.hi == doctest::Approx(0.0));
  CHECK(d.omega_nl.hi == doctest::Approx(0.5));
  CHECK(d.omega_l.lo == doctest::Approx(0.5));
}

TEST_CASE("overlap narrower than delta is rejected") {
  DecompositionParams p;
  p.overlap = Interval{0.5, 0.525};  // width = delta/2
  CHECK_THROWS_AS(build_decomposition(DecompositionMode::Overlap, -0.05, 1.0, p, 0.05), LtnError);
  try {
    build_decomposition(DecompositionMode::Overlap, -0.05, 1.0, p, 0.05);
  } catch (const LtnError& e) {
    CHECK(e.code() == ErrorCode::OverlapTooSmall);
  }
}

TEST_CASE("node classification partitions the grid") {
  DecompositionParams p;
  p.blending_region = Interval{0.4, 0.6};
  const Decomposition d =
      build_decomposition(DecompositionMode::BlendedTransition, -0.05, 1.0, p, 0.05);
  const Grid1D g = Grid1D::with_spacing(-0.05, 1.0, 0.0125);
  int counts[5] = {0, 0, 0, 0, 0};
  for (double xv : g.x) counts[static_cast<int>(d.classify(xv))]++;
  int total = 0;
  for (int c : counts) total += c;
  CHECK(total == g.n_nodes);
  CHECK(counts[static_cast<int>(Region::PhysicalLayer)] == 4);  // [-0.05, 0)
  // the interface node of a sharp split belongs to the right-hand region
  DecompositionParams ps;
  ps.interface_x = 0.5;
  const Decomposition ds =
      build_decomposition(DecompositionMode::SharpInterface, -0.05, 1.0, ps, 0.05);
  CHECK(ds.classify(0.5) == Region::Local);
}

TEST_CASE("blending function values") {
  BlendingFunction lin{BlendingFunction::Shape::PiecewiseLinear, 0.4, 0.6};
  CHECK(eval_blending(lin, 0.5) == doctest::Approx(0.5));
  CHECK(eval_blending(lin, 0.2) == 1.0);
  CHECK(eval_blending(lin, 0.8) == 0.0);

  BlendingFunction cub{BlendingFunction::Shape::CubicSmooth, 0.4, 0.6};
  // hand-evaluated Hermite cubic: 1 - s((0.45-0.4)/0.2), s(t) = 3t^2 - 2t^3
  const double expected = 1.0 - oracle::hermite_step(0.25);
  CHECK(expected == doctest::Approx(0.84375).epsilon(1e-15));
  CHECK(eval_blending(cub, 0.45) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("blending is monotone non-increasing for all shapes") {
  for (auto shape : {BlendingFunction::Shape::PiecewiseConstant,
                     BlendingFunction::Shape::PiecewiseLinear,
                     BlendingFunction::Shape::CubicSmooth}) {
    BlendingFunction b{shape, 0.3, 0.7};
    double prev = 2.0;
    for (int i = 0; i <= 400; ++i) {
      const double v = b(0.0 + i * 0.0025);
      CHECK(v <= prev + 1e-15);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("decomposition rebuild is bit-exact") {
  DecompositionParams p;
  p.blending_region = Interval{0.4, 0.6};
  const Decomposition a =
      build_decomposition(DecompositionMode::BlendedTransition, -0.05, 1.0, p, 0.05);
  const Decomposition b =
      build_decomposition(DecompositionMode::BlendedTransition, -0.05, 1.0, p, 0.05);
  CHECK(a.omega_p.lo == b.omega_p.lo);
  CHECK(a.omega_t->lo == b.omega_t->lo);
  CHECK(a.omega_t->hi == b.omega_t->hi);
  CHECK(a.omega_l.hi == b.omega_l.hi);
}
