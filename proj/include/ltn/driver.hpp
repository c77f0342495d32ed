// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0

#ifndef LTN_DRIVER_HPP
#define LTN_DRIVER_HPP

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "ltn/config.hpp"
#include "ltn/diagnostics.hpp"

namespace ltn {

/// Canonical serialization: keys sorted, floats rendered with %.17g, so that
/// identical reports are byte-identical on disk.
std::string dump_canonical(const nlohmann::json& j);

/// Fixed 17-significant-digit rendering used everywhere a float reaches a file.
std::string format_double(double v);

std::uint64_t fnv1a64(const std::string& s);

enum class ReportFormat { Json, Csv };

struct RunArtifacts {
  std::string report_text;    // rendered report (json or csv)
  std::string report_path;    // empty when not written
  std::string solution_csv;   // x,u,region rows (solve-style tasks)
  std::string solution_path;
  std::string manifest_text;
  std::string manifest_path;
  nlohmann::json report_json; // structured report
  std::vector<double> solution_x, solution_u;  // nodal field when produced
};

/// Executes the pipeline selected by `command` ("run" uses the config's
/// diagnostics.task). Writes report/solution/manifest under out_dir when it is
/// non-empty. Report and solution bytes are deterministic for a fixed config;
/// the manifest carries wall time and is not.
RunArtifacts run_config(const RunConfig& cfg, const std::string& command,
                        const std::string& out_dir, ReportFormat format);

/// Renders a structured report to CSV (schema per report type).
std::string report_to_csv(const nlohmann::json& report);

void emit_report(const nlohmann::json& report, ReportFormat format, const std::string& path);

std::string trace_to_csv(const IterationTrace& trace);

}  // namespace ltn

#endif
