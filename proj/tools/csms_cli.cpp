// Copyright 2026 The csms Authors
// SPDX-License-Identifier: Apache-2.0

// csms: batch front-end.  Reads a JSON payload, runs one command through
// the C API, writes the JSON report to stdout (or --out) and a one-line
// summary with wall time to stderr.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "csms/csms.h"

namespace {

std::string slurp(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified computations on coded complete separable metric spaces"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(csms_version()));

  std::map<std::string, std::string> flags;
  const std::pair<const char*, const char*> flag_help[] = {
      {"eps", "tolerance or epsilon, as p/q"},
      {"q", "Lebesgue number candidate, as p/q"},
      {"level", "maximum net level, or pair count M"},
      {"depth", "search depth, scheme depth or escape budget"},
      {"budget", "code points scanned"},
      {"horizon", "covering members consulted"},
      {"seed", "mt19937_64 seed for samples (default 0)"},
      {"samples", "number of seeded samples"},
      {"precision", "bits for distance brackets"},
  };
  for (const auto& [name, help] : flag_help)
    app.add_option(std::string("--") + name, flags[name], help);
  std::string out_path;
  app.add_option("--out", out_path, "write the report here instead of stdout");

  const char* commands[][2] = {
      {"lebesgue", "certified Lebesgue number bracket of a finite ball covering"},
      {"verify", "check a Lebesgue number on samples"},
      {"subcover", "finite subcover size from a Lebesgue number"},
      {"witness", "strong epsilon-witness search"},
      {"pairs", "witness pairs, thinning and a non-uniformly continuous function"},
      {"modulus", "modulus of uniform continuity"},
      {"embed", "ball scheme of the Cantor space embedding"},
      {"treecover", "finite subcover for a tree covering"},
      {"mincompact", "minimum of a function on a compact space"},
      {"distlower", "lower bound of the distance to the complement of an open set"},
      {"distupper", "upper bound of the distance to a separably closed set"},
      {"check", "replay the certificates of a report"},
  };
  std::string input;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c[0], c[1]);
    sub->add_option("input", input, "payload JSON file, or - for stdin")->required();
  }

  CLI11_PARSE(app, argc, argv);
  std::string command = app.get_subcommands().front()->get_name();

  auto start = std::chrono::steady_clock::now();
  std::string payload;
  try {
    payload = slurp(input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  nlohmann::json flag_json = nlohmann::json::object();
  for (const auto& [name, value] : flags)
    if (!value.empty()) flag_json[name] = value;

  csms_report* report = nullptr;
  csms_status st = csms_job_run(command.c_str(), payload.c_str(), flag_json.dump().c_str(), &report);
  if (st != CSMS_OK) {
    std::cerr << "error: " << csms_last_error() << "\n";
    return 1;
  }
  int code = csms_report_exit_code(report);
  if (out_path.empty()) {
    std::cout << csms_report_json(report);
  } else {
    std::ofstream out(out_path);
    out << csms_report_json(report);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      csms_report_free(report);
      return 1;
    }
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::cerr << command << ": " << csms_report_summary(report) << " [" << secs << " s]\n";
  csms_report_free(report);
  return code;
}
