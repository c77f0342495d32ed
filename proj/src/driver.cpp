// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/driver.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltn/version.hpp"

namespace ltn {

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

void dump_rec(const json& j, std::string& out) {
  switch (j.type()) {
    case json::value_t::object: {
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // nlohmann objects iterate sorted
        if (!first) out += ',';
        first = false;
        out += json(it.key()).dump();
        out += ':';
        dump_rec(it.value(), out);
      }
      out += '}';
      break;
    }
    case json::value_t::array: {
      out += '[';
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += ',';
        dump_rec(j[i], out);
      }
      out += ']';
      break;
    }
    case json::value_t::number_float:
      out += format_double(j.get<double>());
      break;
    default:
      out += j.dump();
      break;
  }
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorCode::IoFailure, "cannot open " + path + " for writing");
  os << text;
  if (!os) fail(ErrorCode::IoFailure, "write failed: " + path);
}

std::string csv_row_end() { return "\n"; }

}  // namespace

std::string dump_canonical(const json& j) {
  std::string out;
  dump_rec(j, out);
  out += '\n';
  return out;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string report_to_csv(const json& report) {
  std::ostringstream os;
  const std::string type = report.value("type", "");
  if (type == "patch_test") {
    os << "method,degree,sup_error,sup_residual,pass" << csv_row_end();
    os << report.at("method").get<std::string>() << ',' << report.at("degree").get<int>() << ','
       << format_double(report.at("sup_error").get<double>()) << ','
       << format_double(report.at("sup_residual").get<double>()) << ','
       << (report.at("pass").get<bool>() ? "true" : "false") << csv_row_end();
  } else if (type == "convergence") {
    os << "delta,l2_error,h1_error" << csv_row_end();
    for (const auto& r : report.at("rows"))
      os << format_double(r.at("delta").get<double>()) << ','
         << format_double(r.at("l2_error").get<double>()) << ','
         << format_double(r.at("h1_error").get<double>()) << csv_row_end();
    os << "slope," << format_double(report.at("l2_slope").get<double>()) << ','
       << format_double(report.at("h1_slope").get<double>()) << csv_row_end();
  } else if (type == "ghost_force") {
    os << "x,ghost_force" << csv_row_end();
    const auto& xs = report.at("x");
    const auto& rs = report.at("residual");
    for (size_t i = 0; i < xs.size(); ++i)
      os << format_double(xs[i].get<double>()) << ',' << format_double(rs[i].get<double>())
         << csv_row_end();
  } else if (type == "robin_sweep") {
    os << "R,iterations,mean_reduction_factor,converged" << csv_row_end();
    for (const auto& r : report.at("rows"))
      os << format_double(r.at("R").get<double>()) << ',' << r.at("iterations").get<int>() << ','
         << format_double(r.at("mean_reduction_factor").get<double>()) << ','
         << (r.at("converged").get<bool>() ? "true" : "false") << csv_row_end();
  } else {
    // generic flat key,value rendering
    os << "key,value" << csv_row_end();
    for (auto it = report.begin(); it != report.end(); ++it) {
      if (it.value().is_structured()) continue;
      os << it.key() << ',';
      if (it.value().is_number_float())
        os << format_double(it.value().get<double>());
      else
        os << it.value().dump();
      os << csv_row_end();
    }
  }
  return os.str();
}

std::string trace_to_csv(const IterationTrace& t) {
  std::ostringstream os;
  os << "iteration,residual,mismatch,reduction_factor" << csv_row_end();
  for (size_t i = 0; i < t.residuals.size(); ++i) {
    os << (i + 1) << ',' << format_double(t.residuals[i]) << ','
       << format_double(t.mismatches[i]) << ',';
    if (i >= 1 && i - 1 < t.reduction_factors.size())
      os << format_double(t.reduction_factors[i - 1]);
    os << csv_row_end();
  }
  return os.str();
}

void emit_report(const json& report, ReportFormat format, const std::string& path) {
  const std::string text =
      format == ReportFormat::Json ? dump_canonical(report) : report_to_csv(report);
  write_file(path, text);
}

namespace {

std::string solution_csv(const SolutionField& field, const Decomposition& decomp) {
  std::ostringstream os;
  os << "x,u,region\n";
  for (int i = 0; i < field.grid.n_nodes; ++i) {
    const double xv = field.grid.x[static_cast<size_t>(i)];
    os << format_double(xv) << ',' << format_double(field.u(i)) << ','
       << decomp.region_label(xv) << '\n';
  }
  return os.str();
}

}  // namespace

RunArtifacts run_config(const RunConfig& cfg, const std::string& command,
                        const std::string& out_dir, ReportFormat format) {
  const auto t0 = std::chrono::steady_clock::now();
  DiagnosticTask task = cfg.diagnostics.task;
  if (command == "patch-test") task = DiagnosticTask::PatchTest;
  else if (command == "ghost-force") task = DiagnosticTask::GhostForce;
  else if (command == "converge") task = DiagnosticTask::Converge;
  else if (command == "sweep-robin") task = DiagnosticTask::SweepRobin;
  else if (command == "compare") task = DiagnosticTask::Compare;
  else if (command != "run" && !command.empty())
    fail(ErrorCode::ConfigInvalid, "unknown command: " + command);

  RunArtifacts art;
  json report;
  bool have_solution = false;
  SolutionField solution;

  switch (task) {
    case DiagnosticTask::Solve: {
      const SolveOutcome out = solve_config(cfg);
      if (!out.converged) fail(ErrorCode::NotConverged, "partitioned iteration hit max_iter");
      solution = out.field;
      have_solution = true;
      report = json{{"type", "solve"},
                    {"method", to_string(cfg.method)},
                    {"n_nodes", solution.grid.n_nodes}};
      if (out.obm_objective) report["objective"] = *out.obm_objective;
      if (out.kkt_residual) report["kkt_residual"] = *out.kkt_residual;
      if (out.compat_mismatch) report["compat_mismatch"] = *out.compat_mismatch;
      if (out.trace) {
        report["iterations"] = out.trace->iterations;
        report["converged"] = out.trace->converged;
        report["mean_reduction_factor"] = out.trace->mean_reduction_factor();
      }
      break;
    }
    case DiagnosticTask::PatchTest:
      report = run_patch_test(cfg, cfg.diagnostics.degree).to_json();
      break;
    case DiagnosticTask::GhostForce:
      report = compute_ghost_force(cfg).to_json();
      break;
    case DiagnosticTask::Converge:
      report = run_convergence_study(cfg, cfg.diagnostics.deltas).to_json();
      break;
    case DiagnosticTask::SweepRobin:
      report = run_robin_sweep(cfg).to_json();
      break;
    case DiagnosticTask::Compare: {
      if (!cfg.diagnostics.compare_to)
        fail(ErrorCode::ConfigInvalid, "compare needs diagnostics.compare_to");
      json base = json::parse(cfg.raw_text);
      json other = base;
      other.merge_patch(*cfg.diagnostics.compare_to);
      other.erase("diagnostics");
      const RunConfig cfg_b = RunConfig::from_json(other);
      RunConfig cfg_a = cfg;
      report = compare_methods(cfg_a, cfg_b).to_json();
      break;
    }
    case DiagnosticTask::MaxPrinciple:
      report = check_maximum_principle(cfg, cfg.diagnostics.samples).to_json();
      break;
    case DiagnosticTask::Energy: {
      const SolveOutcome out = solve_config(cfg);
      solution = out.field;
      have_solution = true;
      report = compute_energy(cfg, solution.u).to_json();
      break;
    }
  }

  art.report_json = report;
  art.report_text = format == ReportFormat::Json ? dump_canonical(report) : report_to_csv(report);
  if (have_solution) {
    art.solution_csv = solution_csv(solution, cfg.make_decomposition());
    art.solution_x.assign(solution.grid.x.begin(), solution.grid.x.end());
    art.solution_u.resize(static_cast<size_t>(solution.u.size()));
    for (int i = 0; i < solution.u.size(); ++i)
      art.solution_u[static_cast<size_t>(i)] = solution.u(i);
  }

  const auto t1 = std::chrono::steady_clock::now();
  const double ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  char hash[32];
  std::snprintf(hash, sizeof(hash), "%016llx",
                static_cast<unsigned long long>(fnv1a64(cfg.raw_text)));
  const json manifest{{"config_hash", hash},
                      {"version", kVersion},
                      {"command", command.empty() ? "run" : command},
                      {"wall_time_ms", ms}};
  art.manifest_text = dump_canonical(manifest);

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::string ext = format == ReportFormat::Json ? ".json" : ".csv";
    art.report_path = out_dir + "/report" + ext;
    write_file(art.report_path, art.report_text);
    if (have_solution) {
      art.solution_path = out_dir + "/solution.csv";
      write_file(art.solution_path, art.solution_csv);
    }
    art.manifest_path = out_dir + "/manifest.json";
    write_file(art.manifest_path, art.manifest_text);
  }
  return art;
}

}  // namespace ltn
