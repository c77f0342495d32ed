// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/config.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace ltn {

using nlohmann::json;

const char* to_string(RunMethod m) {
  switch (m) {
    case RunMethod::Local: return "local";
    case RunMethod::Nonlocal: return "nonlocal";
    case RunMethod::Splice: return "splice";
    case RunMethod::Blended: return "blended";
    case RunMethod::QNL: return "qnl";
    case RunMethod::Morphing: return "morphing";
    case RunMethod::ShrinkingHorizon: return "shrinking_horizon";
    case RunMethod::PartialStress: return "partial_stress";
    case RunMethod::Obm: return "obm";
    case RunMethod::Partitioned: return "partitioned";
    case RunMethod::Arlequin: return "arlequin";
  }
  return "?";
}

bool is_operator_method(RunMethod m) {
  return m != RunMethod::Obm && m != RunMethod::Partitioned && m != RunMethod::Arlequin;
}

Method operator_method(RunMethod m) {
  switch (m) {
    case RunMethod::Local: return Method::LocalOnly;
    case RunMethod::Nonlocal: return Method::NonlocalOnly;
    case RunMethod::Splice: return Method::Splice;
    case RunMethod::Blended: return Method::Blended;
    case RunMethod::QNL: return Method::QNL;
    case RunMethod::Morphing: return Method::Morphing;
    case RunMethod::ShrinkingHorizon: return Method::ShrinkingHorizon;
    case RunMethod::PartialStress: return Method::PartialStress;
    default: fail(ErrorCode::ConfigInvalid, "not an operator method");
  }
}

const char* to_string(DiagnosticTask t) {
  switch (t) {
    case DiagnosticTask::Solve: return "solve";
    case DiagnosticTask::PatchTest: return "patch-test";
    case DiagnosticTask::GhostForce: return "ghost-force";
    case DiagnosticTask::Converge: return "converge";
    case DiagnosticTask::SweepRobin: return "sweep-robin";
    case DiagnosticTask::Compare: return "compare";
    case DiagnosticTask::MaxPrinciple: return "max-principle";
    case DiagnosticTask::Energy: return "energy";
  }
  return "?";
}

namespace {

template <typename T>
T lookup(const std::map<std::string, T>& table, const std::string& key, const char* what) {
  const auto it = table.find(key);
  if (it == table.end()) fail(ErrorCode::ConfigInvalid, std::string("unknown ") + what + ": " + key);
  return it->second;
}

double number_or(const json& j, const char* key, double dflt) {
  if (!j.contains(key)) return dflt;
  if (j.at(key).is_string() && j.at(key).get<std::string>() == "inf")
    return std::numeric_limits<double>::infinity();
  return j.at(key).get<double>();
}

}  // namespace

AnalyticFunction parse_function(const json& j) {
  if (!j.is_object() || !j.contains("name"))
    fail(ErrorCode::ConfigInvalid, "function spec must be an object with a name");
  const std::string name = j.at("name").get<std::string>();
  if (name == "polynomial") {
    if (!j.contains("coeffs")) fail(ErrorCode::ConfigInvalid, "polynomial needs coeffs");
    return AnalyticFunction::polynomial(j.at("coeffs").get<std::vector<double>>());
  }
  if (name == "sin")
    return AnalyticFunction::sine(number_or(j, "amplitude", 1.0), number_or(j, "mode", 1.0));
  if (name == "const") return AnalyticFunction::constant(number_or(j, "value", 0.0));
  if (name == "pointload") {
    AnalyticFunction f;
    f.kind = AnalyticFunction::Kind::PointLoad;
    f.location = number_or(j, "location", 0.5);
    f.magnitude = number_or(j, "magnitude", 1.0);
    f.width = number_or(j, "width", 0.05);
    return f;
  }
  fail(ErrorCode::ConfigInvalid, "unknown function name: " + name +
                                     " (registry: polynomial, sin, const, pointload)");
}

RunConfig RunConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigInvalid, std::string("JSON parse error: ") + e.what());
  }
  RunConfig c = from_json(j);
  c.raw_text = text;
  return c;
}

RunConfig RunConfig::from_json(const json& j) {
  RunConfig c;
  try {
    const json& prob = j.at("problem");
    const auto dom = prob.at("domain").get<std::vector<double>>();
    if (dom.size() != 2) fail(ErrorCode::ConfigInvalid, "problem.domain must be [lo, hi]");
    c.domain_lo = dom[0];
    c.domain_hi = dom[1];
    if (prob.contains("f")) c.f = parse_function(prob.at("f"));
    if (prob.contains("g")) c.g = parse_function(prob.at("g"));

    c.h = j.at("grid").at("h").get<double>();

    const json& dec = j.at("decomposition");
    c.delta = dec.at("delta").get<double>();
    static const std::map<std::string, DecompositionMode> modes = {
        {"overlap", DecompositionMode::Overlap},
        {"blended_transition", DecompositionMode::BlendedTransition},
        {"sharp_interface", DecompositionMode::SharpInterface},
        {"variable_horizon", DecompositionMode::VariableHorizon}};
    c.mode = lookup(modes, dec.at("mode").get<std::string>(), "decomposition mode");
    if (dec.contains("overlap")) {
      const auto o = dec.at("overlap").get<std::vector<double>>();
      if (o.size() != 2) fail(ErrorCode::ConfigInvalid, "decomposition.overlap must be [lo, hi]");
      c.dparams.overlap = Interval{o[0], o[1]};
    }
    if (dec.contains("blending_region")) {
      const auto b = dec.at("blending_region").get<std::vector<double>>();
      if (b.size() != 2)
        fail(ErrorCode::ConfigInvalid, "decomposition.blending_region must be [lo, hi]");
      c.dparams.blending_region = Interval{b[0], b[1]};
    }
    if (dec.contains("interface")) c.dparams.interface_x = dec.at("interface").get<double>();

    const json& met = j.at("method");
    static const std::map<std::string, RunMethod> methods = {
        {"local", RunMethod::Local},
        {"nonlocal", RunMethod::Nonlocal},
        {"splice", RunMethod::Splice},
        {"blended", RunMethod::Blended},
        {"qnl", RunMethod::QNL},
        {"morphing", RunMethod::Morphing},
        {"shrinking_horizon", RunMethod::ShrinkingHorizon},
        {"partial_stress", RunMethod::PartialStress},
        {"obm", RunMethod::Obm},
        {"partitioned", RunMethod::Partitioned},
        {"arlequin", RunMethod::Arlequin}};
    c.method = lookup(methods, met.at("name").get<std::string>(), "method");
    if (met.contains("blending")) {
      static const std::map<std::string, BlendingFunction::Shape> shapes = {
          {"piecewise_constant", BlendingFunction::Shape::PiecewiseConstant},
          {"piecewise_linear", BlendingFunction::Shape::PiecewiseLinear},
          {"cubic_smooth", BlendingFunction::Shape::CubicSmooth}};
      BlendingFunction b;
      b.shape = lookup(shapes, met.at("blending").at("shape").get<std::string>(), "blending shape");
      c.blending = b;  // support interval attached from the decomposition at validate()
    }
    if (met.contains("horizon")) {
      static const std::map<std::string, HorizonKind> kinds = {
          {"constant", HorizonKind::Constant},
          {"piecewise_linear", HorizonKind::PiecewiseLinear},
          {"smooth_c2", HorizonKind::SmoothC2}};
      const json& hz = met.at("horizon");
      HorizonFunction hf;
      hf.kind = lookup(kinds, hz.at("kind").get<std::string>(), "horizon kind");
      hf.ramp_width = number_or(hz, "ramp_width", 0.4);
      hf.delta_min = number_or(hz, "delta_min", 0.0);
      c.horizon = hf;  // delta_max / interface attached at validate()
    }

    const json& ker = j.at("kernel");
    static const std::map<std::string, KernelFamily> families = {
        {"constant", KernelFamily::Constant},
        {"inverse_distance", KernelFamily::InverseDistance}};
    static const std::map<std::string, ModelType> kmodels = {
        {"diffusion", ModelType::Diffusion}, {"peridynamic", ModelType::Peridynamic}};
    c.kernel.family = lookup(families, ker.at("family").get<std::string>(), "kernel family");
    c.kernel.model = lookup(kmodels, ker.at("model").get<std::string>(), "kernel model");
    c.kernel.youngs_modulus = number_or(ker, "youngs_modulus", 1.0);
    c.kernel.delta = c.delta;

    if (j.contains("solver")) {
      const json& s = j.at("solver");
      c.solver.tol = number_or(s, "tol", 1e-12);
      c.solver.max_iter = s.contains("max_iter") ? s.at("max_iter").get<int>() : 200;
      c.solver.r1 = number_or(s, "r1", 1.0);
      c.solver.r2 = number_or(s, "r2", 1.0);
      c.solver.kappa0 = number_or(s, "kappa0", 1.0);
      c.solver.kappa1 = number_or(s, "kappa1", 1.0);
      if (s.contains("robin_mode")) {
        const std::string m = s.at("robin_mode").get<std::string>();
        if (m == "implicit") c.solver.robin_mode = RobinMode::Implicit;
        else if (m == "explicit") c.solver.robin_mode = RobinMode::Explicit;
        else fail(ErrorCode::ConfigInvalid, "robin_mode must be implicit or explicit");
      }
      c.solver.sweeps = s.contains("sweeps") ? s.at("sweeps").get<int>() : 1;
    }

    if (j.contains("diagnostics")) {
      const json& d = j.at("diagnostics");
      static const std::map<std::string, DiagnosticTask> tasks = {
          {"solve", DiagnosticTask::Solve},         {"patch-test", DiagnosticTask::PatchTest},
          {"ghost-force", DiagnosticTask::GhostForce}, {"converge", DiagnosticTask::Converge},
          {"sweep-robin", DiagnosticTask::SweepRobin}, {"compare", DiagnosticTask::Compare},
          {"max-principle", DiagnosticTask::MaxPrinciple}, {"energy", DiagnosticTask::Energy}};
      if (d.contains("task"))
        c.diagnostics.task = lookup(tasks, d.at("task").get<std::string>(), "diagnostic task");
      if (d.contains("degree")) c.diagnostics.degree = d.at("degree").get<int>();
      if (d.contains("deltas")) c.diagnostics.deltas = d.at("deltas").get<std::vector<double>>();
      if (d.contains("robin_grid"))
        c.diagnostics.robin_grid = d.at("robin_grid").get<std::vector<double>>();
      if (d.contains("samples")) c.diagnostics.samples = d.at("samples").get<int>();
      if (d.contains("reference")) c.diagnostics.reference = parse_function(d.at("reference"));
      if (d.contains("compare_to")) c.diagnostics.compare_to = d.at("compare_to");
    }
    if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  } catch (const LtnError&) {
    throw;
  } catch (const std::exception& e) {
    fail(ErrorCode::ConfigInvalid, std::string("config schema error: ") + e.what());
  }
  c.raw_text = j.dump();
  c.validate();
  return c;
}

void RunConfig::validate() const {
  if (!(h > 0.0)) fail(ErrorCode::ConfigInvalid, "grid.h must be positive");
  if (!(delta > 0.0)) fail(ErrorCode::ConfigInvalid, "decomposition.delta must be positive");
  const double ratio = delta / h;
  if (std::abs(ratio - std::round(ratio)) > 1e-9)
    fail(ErrorCode::ConfigInvalid,
         "decomposition.delta and grid.h: delta/h must be an integer (got delta=" +
             std::to_string(delta) + ", h=" + std::to_string(h) + ")");
  if (std::lround(ratio) < 2 && method != RunMethod::Local)
    fail(ErrorCode::HorizonNotResolved, "delta/h must be at least 2");
  switch (method) {
    case RunMethod::Blended:
    case RunMethod::Morphing:
      if (!blending) fail(ErrorCode::ConfigInvalid, "method requires method.blending");
      if (mode != DecompositionMode::BlendedTransition || !dparams.blending_region)
        fail(ErrorCode::ModeMismatch, "method requires a blended_transition decomposition");
      break;
    case RunMethod::QNL:
      if (mode != DecompositionMode::BlendedTransition || !dparams.interface_x)
        fail(ErrorCode::ModeMismatch, "qnl requires blended_transition with an interface");
      break;
    case RunMethod::Splice:
      if (mode != DecompositionMode::SharpInterface)
        fail(ErrorCode::ModeMismatch, "splice requires a sharp_interface decomposition");
      break;
    case RunMethod::ShrinkingHorizon:
    case RunMethod::PartialStress:
      if (!horizon) fail(ErrorCode::ConfigInvalid, "method requires method.horizon");
      if (mode != DecompositionMode::VariableHorizon)
        fail(ErrorCode::ModeMismatch, "method requires a variable_horizon decomposition");
      break;
    case RunMethod::Obm:
    case RunMethod::Partitioned:
    case RunMethod::Arlequin:
      if (mode != DecompositionMode::Overlap)
        fail(ErrorCode::ModeMismatch, "method requires an overlap decomposition");
      break;
    default:
      break;
  }
  if (solver.r1 < 0.0 || solver.r2 < 0.0) fail(ErrorCode::InvalidRobin, "Robin coefficients >= 0");
  // build once to surface geometry errors early
  (void)make_grid();
  (void)make_decomposition();
}

Grid1D RunConfig::make_grid() const { return Grid1D::with_spacing(domain_lo, domain_hi, h); }

Decomposition RunConfig::make_decomposition() const {
  return build_decomposition(mode, domain_lo, domain_hi, dparams, delta);
}

BlendingFunction RunConfig::arlequin_blending() const {
  BlendingFunction b;
  b.shape = blending ? blending->shape : BlendingFunction::Shape::PiecewiseLinear;
  const Decomposition d = make_decomposition();
  b.b_lo = d.overlap->lo;
  b.b_hi = d.overlap->hi;
  return b;
}

MethodSpec RunConfig::make_method_spec() const {
  MethodSpec spec;
  spec.method = operator_method(method);
  const Decomposition d = make_decomposition();
  if (blending) {
    BlendingFunction b = *blending;
    if (d.blending) {
      b.b_lo = d.blending->lo;
      b.b_hi = d.blending->hi;
    } else if (d.overlap) {
      b.b_lo = d.overlap->lo;
      b.b_hi = d.overlap->hi;
    }
    spec.blending = b;
  }
  if (horizon) {
    HorizonFunction hf = *horizon;
    hf.delta_max = delta;
    if (d.interface_x) hf.interface_x = *d.interface_x;
    spec.horizon = hf;
  }
  if (d.interface_x) spec.interface_x = d.interface_x;
  return spec;
}

}  // namespace ltn
