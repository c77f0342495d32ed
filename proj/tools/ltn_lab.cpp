// Copyright (c) 2026 ltn-lab developers
// SPDX-License-Identifier: Apache-2.0
//
// ltn-lab: config-driven front end over the C API. Each subcommand wraps one
// library pipeline; all logic lives behind ltn_run_execute.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ltn/ltn.h"

namespace {

int run_subcommand(const std::string& command, const std::string& config_path,
                   const std::string& out_dir, const std::string& format, bool seed_set,
                   std::uint64_t seed) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "ltn-lab: cannot read config file: " << config_path << "\n";
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();
  if (seed_set) {
    try {
      nlohmann::json j = nlohmann::json::parse(text);
      j["seed"] = seed;
      text = j.dump();
    } catch (const std::exception& e) {
      std::cerr << "ltn-lab: config is not valid JSON: " << e.what() << "\n";
      return 2;
    }
  }
  ltn_run* run = nullptr;
  int status = ltn_run_create(text.c_str(), &run);
  if (status != LTN_OK) {
    std::cerr << "ltn-lab: " << (run ? ltn_run_message(run) : "allocation failure") << "\n";
    ltn_run_destroy(run);
    return status;
  }
  status = ltn_run_execute(run, command.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(),
                           format.c_str());
  if (status != LTN_OK) {
    std::cerr << "ltn-lab: " << ltn_run_message(run) << "\n";
  } else {
    std::cout << ltn_run_report(run);
  }
  ltn_run_destroy(run);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local-to-nonlocal coupling laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir, format = "json";
  std::uint64_t seed = 0;
  bool seed_set = false;

  const char* names[] = {"run",         "patch-test", "ghost-force",
                         "converge",    "sweep-robin", "compare"};
  const char* descs[] = {
      "execute the pipeline selected by the config's diagnostics.task",
      "polynomial patch test (degree from the config)",
      "interior residual field under linear displacement",
      "delta-refinement convergence study",
      "iteration counts over a grid of Robin coefficients",
      "solve two configs on one grid and report their difference"};
  for (int i = 0; i < 6; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "path to the JSON run configuration")->required();
    sub->add_option("--out", out_dir, "directory for report/solution/manifest files");
    sub->add_option("--format", format, "report format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--seed", seed, "override the config's RNG seed")
        ->each([&seed_set](const std::string&) { seed_set = true; });
  }

  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();
  return run_subcommand(command, config_path, out_dir, format, seed_set, seed);
}
