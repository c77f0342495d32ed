// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#include "ltn/ltn.h"

#include <new>
#include <string>
#include <vector>

#include "ltn/driver.hpp"
#include "ltn/version.hpp"

struct ltn_run {
  ltn::RunConfig config;
  bool config_ok = false;
  std::string message;
  std::string report;
  std::vector<double> xs, us;
};

namespace {

int status_of(const ltn::LtnError& e) {
  using ltn::ErrorCode;
  switch (e.code()) {
    case ErrorCode::SingularSystem:
    case ErrorCode::RankDeficientCoupling:
    case ErrorCode::ReducedSystemSingular:
    case ErrorCode::NotConverged:
      return LTN_ERR_SOLVER;
    case ErrorCode::IoFailure:
      return LTN_ERR_IO;
    case ErrorCode::Internal:
      return LTN_ERR_INTERNAL;
    default:
      return LTN_ERR_CONFIG;
  }
}

}  // namespace

extern "C" {

const char* ltn_version(void) { return ltn::kVersion; }

int ltn_run_create(const char* config_json, ltn_run** out) {
  if (!out) return LTN_ERR_INTERNAL;
  *out = nullptr;
  auto* run = new (std::nothrow) ltn_run();
  if (!run) return LTN_ERR_INTERNAL;
  *out = run;
  if (!config_json) {
    run->message = "ConfigInvalid: null configuration";
    return LTN_ERR_CONFIG;
  }
  try {
    run->config = ltn::RunConfig::from_json_text(config_json);
    run->config_ok = true;
    return LTN_OK;
  } catch (const ltn::LtnError& e) {
    run->message = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    run->message = std::string("Internal: ") + e.what();
    return LTN_ERR_INTERNAL;
  }
}

int ltn_run_execute(ltn_run* run, const char* command, const char* out_dir, const char* format) {
  if (!run) return LTN_ERR_INTERNAL;
  if (!run->config_ok) {
    run->message = "ConfigInvalid: handle holds no valid configuration";
    return LTN_ERR_CONFIG;
  }
  try {
    const ltn::ReportFormat fmt = (format && std::string(format) == "csv")
                                      ? ltn::ReportFormat::Csv
                                      : ltn::ReportFormat::Json;
    const ltn::RunArtifacts art = ltn::run_config(run->config, command ? command : "run",
                                                  out_dir ? out_dir : "", fmt);
    run->report = art.report_text;
    run->xs = art.solution_x;
    run->us = art.solution_u;
    run->message.clear();
    return LTN_OK;
  } catch (const ltn::LtnError& e) {
    run->message = e.what();
    return status_of(e);
  } catch (const std::exception& e) {
    run->message = std::string("Internal: ") + e.what();
    return LTN_ERR_INTERNAL;
  }
}

const char* ltn_run_report(const ltn_run* run) { return run ? run->report.c_str() : ""; }

int ltn_run_solution(const ltn_run* run, const double** xs, const double** us, int* n_nodes) {
  if (!run || run->xs.empty()) return 0;
  if (xs) *xs = run->xs.data();
  if (us) *us = run->us.data();
  if (n_nodes) *n_nodes = static_cast<int>(run->xs.size());
  return 1;
}

const char* ltn_run_message(const ltn_run* run) { return run ? run->message.c_str() : ""; }

void ltn_run_destroy(ltn_run* run) { delete run; }

}  // extern "C"
