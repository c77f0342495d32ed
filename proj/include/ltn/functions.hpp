// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_FUNCTIONS_HPP
#define LTN_FUNCTIONS_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ltn/errors.hpp"

namespace ltn {

/// Named analytic functions available in run configurations. Keeping the set
/// closed makes runs reproducible and diff-able.
struct AnalyticFunction {
  enum class Kind { Polynomial, Sin, Const, PointLoad };
  Kind kind = Kind::Const;
  std::vector<double> coeffs;  // Polynomial: u = sum coeffs[i] x^i
  double amplitude = 1.0;      // Sin: a * sin(mode * pi * x)
  double mode = 1.0;
  double value_c = 0.0;        // Const
  double location = 0.5;       // PointLoad: hat of unit integral times magnitude
  double magnitude = 1.0;
  double width = 0.05;

  static AnalyticFunction polynomial(std::vector<double> c) {
    AnalyticFunction f;
    f.kind = Kind::Polynomial;
    f.coeffs = std::move(c);
    return f;
  }
  static AnalyticFunction sine(double a, double m) {
    AnalyticFunction f;
    f.kind = Kind::Sin;
    f.amplitude = a;
    f.mode = m;
    return f;
  }
  static AnalyticFunction constant(double v) {
    AnalyticFunction f;
    f.kind = Kind::Const;
    f.value_c = v;
    return f;
  }

  double operator()(double x) const {
    switch (kind) {
      case Kind::Polynomial: {
        double v = 0.0;
        for (size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
        return v;
      }
      case Kind::Sin:
        return amplitude * std::sin(mode * std::numbers::pi * x);
      case Kind::Const:
        return value_c;
      case Kind::PointLoad: {
        const double t = 1.0 - std::abs(x - location) / width;
        return t > 0.0 ? magnitude * t / width : 0.0;
      }
    }
    return 0.0;
  }

  bool has_second_derivative() const { return kind != Kind::PointLoad; }

  double second_derivative(double x) const {
    switch (kind) {
      case Kind::Polynomial: {
        double v = 0.0;
        for (size_t i = coeffs.size(); i-- > 2;)
          v = v * x + coeffs[i] * static_cast<double>(i) * static_cast<double>(i - 1);
        return v;
      }
      case Kind::Sin: {
        const double w = mode * std::numbers::pi;
        return -amplitude * w * w * std::sin(w * x);
      }
      case Kind::Const:
        return 0.0;
      case Kind::PointLoad:
        fail(ErrorCode::ConfigInvalid, "pointload has no classical second derivative");
    }
    return 0.0;
  }

  double first_derivative(double x) const {
    switch (kind) {
      case Kind::Polynomial: {
        double v = 0.0;
        for (size_t i = coeffs.size(); i-- > 1;) v = v * x + coeffs[i] * static_cast<double>(i);
        return v;
      }
      case Kind::Sin: {
        const double w = mode * std::numbers::pi;
        return amplitude * w * std::cos(w * x);
      }
      case Kind::Const:
        return 0.0;
      case Kind::PointLoad:
        fail(ErrorCode::ConfigInvalid, "pointload has no classical derivative");
    }
    return 0.0;
  }
};

}  // namespace ltn

#endif
