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

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "layerstream/csv.hpp"
#include "layerstream/scenario.hpp"

namespace layerstream {

// One run of the grid: a (sweep value, strategy/scheduler label, seed)
// coordinate. The layerp2p scheduler always pairs with the raw smoother
// and is labelled plain "layerp2p"; everything else is "<smoother>+<kind>".
struct RunCell {
  std::string label;
  SmoothingStrategy strategy = SmoothingStrategy::Raw;
  SchedulerKind scheduler = SchedulerKind::Gap;
  std::uint64_t seed = 0;
  std::string grid_key;    // "" when the scenario has no sweep
  double grid_value = 0.0;
};

struct CellResult {
  RunCell cell;
  RunMetrics metrics;
  std::vector<PeerMetrics> peers;
  std::optional<std::string> events_csv;
  // Per-slot (target, viewer) levels of the first receiver, for the
  // quality-timeline outputs of trace-driven runs.
  std::optional<CsvTable> timeline;
};

struct ScenarioResult {
  std::vector<CellResult> cells;
  CsvTable summary;                        // one row per cell
  std::map<std::string, CsvTable> tables;  // aggregate file name -> table
};

// Builds the SimSetup for one cell (shared with tests).
SimSetup cell_setup(const Scenario& scenario, const RunCell& cell);

// Expands the scenario's grid into cells, deterministic order.
std::vector<RunCell> expand_cells(const Scenario& scenario);

// Runs every cell (in parallel when workers > 1), assembles the summary
// and per-family aggregate tables, and, when out_dir is non-empty, writes
// summary.csv, aggregate_*.csv, per-cell metrics_*.csv, and optional
// events_*.csv / timeline_*.csv files there.
ScenarioResult run_scenario(const Scenario& scenario,
                            const std::string& out_dir, int workers = 0);

// Relation check between two tables used by the acceptance workflow:
// rows are compared pairwise after optional column=value filters; returns
// the failing row descriptions (empty means the relation holds).
std::vector<std::string> compare_tables(
    const CsvTable& a, const CsvTable& b, const std::string& metric,
    const std::string& relation,
    const std::vector<std::pair<std::string, std::string>>& where_a = {},
    const std::vector<std::pair<std::string, std::string>>& where_b = {});

}  // namespace layerstream
