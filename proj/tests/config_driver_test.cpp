// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltn/driver.hpp"

using namespace ltn;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const char* kSpliceCfg = R"({
  "problem": {"domain": [-0.05, 1.0], "g": {"name": "polynomial", "coeffs": [1.0, 1.0]}},
  "grid": {"h": 0.0125},
  "decomposition": {"mode": "sharp_interface", "delta": 0.05, "interface": 0.5},
  "method": {"name": "splice"},
  "kernel": {"family": "constant", "model": "diffusion"},
  "diagnostics": {"task": "patch-test", "degree": 1}
})";

}  // namespace

TEST_CASE("non-integer delta/h is rejected with the offending fields named") {
  const std::string bad = R"({
    "problem": {"domain": [-0.05, 1.0]},
    "grid": {"h": 0.012},
    "decomposition": {"mode": "sharp_interface", "delta": 0.05, "interface": 0.5},
    "method": {"name": "splice"},
    "kernel": {"family": "constant", "model": "diffusion"}
  })";
  try {
    RunConfig::from_json_text(bad);
    FAIL("expected a validation error");
  } catch (const LtnError& e) {
    CHECK(e.code() == ErrorCode::ConfigInvalid);
    const std::string what = e.what();
    CHECK(what.find("delta") != std::string::npos);
    CHECK(what.find("h") != std::string::npos);
  }
}

TEST_CASE("unknown function names are rejected") {
  const std::string bad = R"({
    "problem": {"domain": [-0.05, 1.0], "f": {"name": "gaussian"}},
    "grid": {"h": 0.0125},
    "decomposition": {"mode": "sharp_interface", "delta": 0.05, "interface": 0.5},
    "method": {"name": "splice"},
    "kernel": {"family": "constant", "model": "diffusion"}
  })";
  CHECK_THROWS_AS(RunConfig::from_json_text(bad), LtnError);
}

TEST_CASE("canonical dump is stable and 17-digit") {
  nlohmann::json j{{"b", 0.1}, {"a", 1.0 / 3.0}};
  const std::string s1 = dump_canonical(j);
  const std::string s2 = dump_canonical(j);
  CHECK(s1 == s2);
  CHECK(s1.find("0.33333333333333331") != std::string::npos);
  CHECK(s1.find("\"a\"") < s1.find("\"b\""));  // sorted keys
}

TEST_CASE("emit_report writes byte-identical files for the same report") {
  const RunConfig cfg = RunConfig::from_json_text(kSpliceCfg);
  const auto art1 = run_config(cfg, "run", "", ReportFormat::Json);
  const std::string dir = (std::filesystem::temp_directory_path() / "ltn_emit_test").string();
  std::filesystem::create_directories(dir);
  emit_report(art1.report_json, ReportFormat::Json, dir + "/a.json");
  emit_report(art1.report_json, ReportFormat::Json, dir + "/b.json");
  CHECK(read_file(dir + "/a.json") == read_file(dir + "/b.json"));
}

TEST_CASE("patch-test CSV header matches the documented schema") {
  const RunConfig cfg = RunConfig::from_json_text(kSpliceCfg);
  const auto art = run_config(cfg, "patch-test", "", ReportFormat::Csv);
  CHECK(art.report_text.rfind("method,degree,sup_error,sup_residual,pass", 0) == 0);
}

TEST_CASE("convergence CSV has one row per delta plus a trailing slope row") {
  const std::string cfg_text = R"({
    "problem": {"domain": [-0.04, 1.0]},
    "grid": {"h": 0.01},
    "decomposition": {"mode": "blended_transition", "delta": 0.04, "interface": 0.5},
    "method": {"name": "qnl"},
    "kernel": {"family": "constant", "model": "diffusion"},
    "diagnostics": {"task": "converge", "deltas": [0.08, 0.04, 0.02, 0.01]}
  })";
  const RunConfig cfg = RunConfig::from_json_text(cfg_text);
  const auto art = run_config(cfg, "converge", "", ReportFormat::Csv);
  std::istringstream is(art.report_text);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(is, line)) lines.push_back(line);
  REQUIRE(lines.size() == 6);  // header + 4 deltas + slope row
  CHECK(lines[0] == "delta,l2_error,h1_error");
  CHECK(lines[5].rfind("slope,", 0) == 0);
}

TEST_CASE("identical configs produce byte-identical artifacts") {
  const RunConfig cfg = RunConfig::from_json_text(kSpliceCfg);
  const std::string d1 = (std::filesystem::temp_directory_path() / "ltn_det_1").string();
  const std::string d2 = (std::filesystem::temp_directory_path() / "ltn_det_2").string();
  run_config(cfg, "run", d1, ReportFormat::Json);
  run_config(cfg, "run", d2, ReportFormat::Json);
  CHECK(read_file(d1 + "/report.json") == read_file(d2 + "/report.json"));
}

TEST_CASE("solution CSV carries region labels") {
  const std::string cfg_text = R"({
    "problem": {"domain": [-0.05, 1.0], "g": {"name": "polynomial", "coeffs": [0.0, 1.0]}},
    "grid": {"h": 0.0125},
    "decomposition": {"mode": "sharp_interface", "delta": 0.05, "interface": 0.5},
    "method": {"name": "splice"},
    "kernel": {"family": "constant", "model": "diffusion"},
    "diagnostics": {"task": "solve"}
  })";
  const RunConfig cfg = RunConfig::from_json_text(cfg_text);
  const auto art = run_config(cfg, "run", "", ReportFormat::Json);
  CHECK(art.solution_csv.rfind("x,u,region", 0) == 0);
  CHECK(art.solution_csv.find("physical_layer") != std::string::npos);
  CHECK(art.solution_csv.find("nonlocal") != std::string::npos);
  CHECK(art.solution_csv.find("local") != std::string::npos);
}

TEST_CASE("compare task merges overrides") {
  const std::string cfg_text = R"({
    "problem": {"domain": [-0.05, 1.0], "g": {"name": "polynomial", "coeffs": [1.0, 1.0, 1.0, 1.0]},
                "f": {"name": "polynomial", "coeffs": [-2.0, -6.0]}},
    "grid": {"h": 0.0125},
    "decomposition": {"mode": "overlap", "delta": 0.05, "overlap": [0.4, 0.6]},
    "method": {"name": "obm"},
    "kernel": {"family": "constant", "model": "diffusion"},
    "solver": {"r1": 5.0, "r2": 5.0, "tol": 1e-12, "max_iter": 400},
    "diagnostics": {"task": "compare", "compare_to": {"method": {"name": "partitioned"}}}
  })";
  const RunConfig cfg = RunConfig::from_json_text(cfg_text);
  const auto art = run_config(cfg, "compare", "", ReportFormat::Json);
  CHECK(art.report_json.at("method_b").get<std::string>() == "partitioned");
  CHECK(art.report_json.at("sup_diff_outside_overlap").get<double>() <= 1e-6);
}
