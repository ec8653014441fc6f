// Copyright 2026 The layerstream Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "layerstream/runner.hpp"
#include "layerstream/scenario.hpp"

namespace {

std::pair<std::string, std::string> split_kv(const std::string& text,
                                             const std::string& what) {
  const std::size_t eq = text.find('=');
  if (eq == std::string::npos) {
    throw std::runtime_error(what + " expects key=value, got `" + text + "`");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layered mesh-pull streaming simulator"};
  app.require_subcommand(1);

  // run
  std::string scenario_path;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  std::uint64_t seed_override = 0;
  bool seed_set = false;
  int workers = 0;
  CLI::App* run = app.add_subcommand("run", "Run a scenario grid");
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--set", overrides, "Override `key=value` (repeatable)");
  run->add_option("--seed", seed_override, "Replace the seed list")
      ->each([&](const std::string&) { seed_set = true; });
  run->add_option("--workers", workers, "Parallel cells (default: cores)");

  // compare
  std::string csv_a;
  std::string csv_b;
  std::string metric;
  std::string relation;
  std::vector<std::string> where_a;
  std::vector<std::string> where_b;
  CLI::App* compare =
      app.add_subcommand("compare", "Check a metric relation between tables");
  compare->add_option("a", csv_a, "Left CSV")->required();
  compare->add_option("b", csv_b, "Right CSV")->required();
  compare->add_option("--metric", metric, "Metric column")->required();
  compare->add_option("--relation", relation, "lt | le | ge | gt")->required();
  compare->add_option("--where-a", where_a, "Filter left rows, col=value");
  compare->add_option("--where-b", where_b, "Filter right rows, col=value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      layerstream::Scenario scenario =
          layerstream::load_scenario(scenario_path);
      for (const std::string& item : overrides) {
        const auto [key, value] = split_kv(item, "--set");
        layerstream::apply_override(scenario, key, value);
      }
      if (seed_set) scenario.seeds = {seed_override};
      scenario.validate();
      const layerstream::ScenarioResult result =
          layerstream::run_scenario(scenario, out_dir, workers);
      std::printf("%s: %zu cells -> %s\n", scenario.name.c_str(),
                  result.cells.size(), out_dir.c_str());
      return 0;
    }

    const layerstream::CsvTable table_a = layerstream::CsvTable::load(csv_a);
    const layerstream::CsvTable table_b = layerstream::CsvTable::load(csv_b);
    std::vector<std::pair<std::string, std::string>> wa;
    std::vector<std::pair<std::string, std::string>> wb;
    for (const std::string& item : where_a) {
      wa.push_back(split_kv(item, "--where-a"));
    }
    for (const std::string& item : where_b) {
      wb.push_back(split_kv(item, "--where-b"));
    }
    const std::vector<std::string> violations =
        layerstream::compare_tables(table_a, table_b, metric, relation, wa, wb);
    if (violations.empty()) {
      std::printf("PASS %s %s %s\n", csv_a.c_str(), relation.c_str(),
                  csv_b.c_str());
      return 0;
    }
    std::printf("FAIL %s %s %s\n", csv_a.c_str(), relation.c_str(),
                csv_b.c_str());
    for (const std::string& line : violations) {
      std::printf("  %s\n", line.c_str());
    }
    return 1;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
}
