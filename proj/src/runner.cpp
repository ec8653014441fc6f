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

#include "layerstream/runner.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace layerstream {

namespace {

std::string grid_value_text(const RunCell& cell) {
  if (cell.grid_key.empty()) return "";
  return format_double(cell.grid_value);
}

std::string cell_stem(const RunCell& cell) {
  std::ostringstream out;
  out << cell.label;
  if (!cell.grid_key.empty()) {
    out << '_' << cell.grid_key << format_double(cell.grid_value);
  }
  out << "_seed" << cell.seed;
  return out.str();
}

CsvTable timeline_table(const SimEventLog& log, PeerId receiver,
                        Slot duration) {
  std::vector<int> target(static_cast<std::size_t>(duration), 0);
  std::vector<int> viewer(static_cast<std::size_t>(duration), -1);
  int current = 0;
  std::size_t at = 0;
  // Events are slot-ordered; walk once.
  std::vector<const SimEvent*> selects;
  for (const SimEvent& e : log.events) {
    if (e.peer != receiver) continue;
    if (e.kind == EventKind::Select) selects.push_back(&e);
    if (e.kind == EventKind::Play && e.slot < duration) {
      viewer[static_cast<std::size_t>(e.slot)] = e.layer;
    }
  }
  for (Slot t = 0; t < duration; ++t) {
    while (at < selects.size() && selects[at]->slot <= t) {
      current = static_cast<int>(selects[at]->value);
      ++at;
    }
    target[static_cast<std::size_t>(t)] = current;
  }

  CsvTable table;
  table.header = {"slot", "target_level", "viewer_level"};
  for (Slot t = 0; t < duration; ++t) {
    table.rows.push_back({std::to_string(t),
                          std::to_string(target[static_cast<std::size_t>(t)]),
                          std::to_string(viewer[static_cast<std::size_t>(t)])});
  }
  return table;
}

CsvTable peer_metrics_table(const CellResult& result, int layer_count) {
  CsvTable table;
  table.header = {"peer",
                  "played_slots",
                  "startup_delay",
                  "layer_changes",
                  "stall_events",
                  "stall_duration_mean",
                  "stall_duration_max",
                  "delivered_kbit",
                  "capacity_kbit",
                  "bandwidth_utilization",
                  "useless_chunk_ratio",
                  "late_arrival_ratio",
                  "relative_received_layer_ratio"};
  for (int l = 0; l < layer_count; ++l) {
    table.header.push_back("delivery_ratio_l" + std::to_string(l));
  }

  for (const PeerMetrics& m : result.peers) {
    double stall_sum = 0.0;
    double stall_max = 0.0;
    for (std::int64_t d : m.stall_durations) {
      stall_sum += static_cast<double>(d);
      stall_max = std::max(stall_max, static_cast<double>(d));
    }
    const double stall_mean =
        m.stall_durations.empty()
            ? 0.0
            : stall_sum / static_cast<double>(m.stall_durations.size());
    std::vector<std::string> row = {
        std::to_string(m.peer),
        std::to_string(m.played_slots),
        std::to_string(m.startup_delay),
        std::to_string(m.layer_changes),
        std::to_string(m.stall_events),
        format_double(stall_mean),
        format_double(stall_max),
        format_double(m.delivered_kbit),
        format_double(m.capacity_kbit),
        format_double(bandwidth_utilization(m.delivered_kbit, m.capacity_kbit)),
        format_double(m.useless_ratio()),
        format_double(m.late_ratio()),
        format_double(m.relative_received_layer_ratio())};
    for (int l = 0; l < layer_count; ++l) {
      const std::int64_t demanded =
          m.demanded_per_layer[static_cast<std::size_t>(l)];
      const double ratio =
          demanded == 0
              ? 1.0
              : static_cast<double>(
                    m.delivered_ok_per_layer[static_cast<std::size_t>(l)]) /
                    static_cast<double>(demanded);
      row.push_back(format_double(ratio));
    }
    table.rows.push_back(std::move(row));
  }

  const RunMetrics& run = result.metrics;
  std::vector<std::string> all = {"ALL",
                                  "",
                                  "",
                                  format_double(run.layer_changes_mean),
                                  format_double(run.stall_events_mean),
                                  format_double(run.stall_duration_mean),
                                  format_double(run.stall_duration_max),
                                  "",
                                  "",
                                  format_double(run.bandwidth_utilization),
                                  format_double(run.useless_chunk_ratio),
                                  format_double(run.late_arrival_ratio),
                                  format_double(run.relative_received_layer_ratio)};
  for (int l = 0; l < layer_count; ++l) {
    all.push_back(
        format_double(run.delivery_ratio_per_layer[static_cast<std::size_t>(l)]));
  }
  table.rows.push_back(std::move(all));
  return table;
}

struct GroupKey {
  double grid = 0.0;
  std::string label;

  bool operator<(const GroupKey& other) const {
    if (grid != other.grid) return grid < other.grid;
    return label < other.label;
  }
};

}  // namespace

std::vector<RunCell> expand_cells(const Scenario& scenario) {
  const std::string family = scenario.family();
  std::vector<double> grid_values;
  if (family == "interval") {
    for (Slot v : scenario.grid_change_intervals) {
      grid_values.push_back(static_cast<double>(v));
    }
  } else if (family == "degree") {
    for (int v : scenario.grid_degrees) {
      grid_values.push_back(static_cast<double>(v));
    }
  } else if (family == "rate") {
    grid_values = scenario.grid_layer_rates;
  } else if (family == "layers") {
    for (int v : scenario.grid_layer_counts) {
      grid_values.push_back(static_cast<double>(v));
    }
  } else {
    grid_values.push_back(0.0);
  }

  std::vector<RunCell> cells;
  for (double grid_value : grid_values) {
    for (SchedulerKind scheduler : scenario.schedulers) {
      std::vector<SmoothingStrategy> strategies;
      if (scheduler == SchedulerKind::LayerP2P ||
          (scenario.baselines_use_raw && scheduler != SchedulerKind::Gap)) {
        strategies = {SmoothingStrategy::Raw};
      } else {
        strategies = scenario.strategies;
      }
      for (SmoothingStrategy strategy : strategies) {
        for (std::uint64_t seed : scenario.seeds) {
          RunCell cell;
          cell.strategy = strategy;
          cell.scheduler = scheduler;
          cell.seed = seed;
          cell.grid_key = family;
          cell.grid_value = grid_value;
          if (scheduler == SchedulerKind::LayerP2P) {
            cell.label = "layerp2p";
          } else {
            cell.label = std::string(smoothing_strategy_name(strategy)) + "+" +
                         scheduler_kind_name(scheduler);
          }
          cells.push_back(std::move(cell));
        }
      }
    }
  }
  return cells;
}

SimSetup cell_setup(const Scenario& scenario, const RunCell& cell) {
  SimSetup setup;

  int layers = scenario.layers;
  if (cell.grid_key == "layers") layers = static_cast<int>(cell.grid_value);
  double rate = scenario.layer_rate_kbps;
  if (cell.grid_key == "rate") rate = cell.grid_value;

  if (!scenario.layer_rates_kbps.empty() && cell.grid_key != "rate" &&
      cell.grid_key != "layers") {
    setup.profile.layer_count =
        static_cast<int>(scenario.layer_rates_kbps.size());
    setup.profile.layer_rates_kbps = scenario.layer_rates_kbps;
    setup.profile.chunk_duration_s = scenario.chunk_duration_s;
    setup.profile.total_slots = scenario.total_slots;
    setup.profile.validate();
  } else {
    setup.profile = VideoProfile::uniform(layers, rate,
                                          scenario.chunk_duration_s,
                                          scenario.total_slots);
  }

  setup.overlay = scenario.overlay;
  if (cell.grid_key == "degree") {
    setup.overlay.degree = static_cast<int>(cell.grid_value);
  }
  if (cell.grid_key == "interval") {
    setup.overlay.change.interval_slots = static_cast<Slot>(cell.grid_value);
  }

  const int sw = scenario.sw_slots();
  setup.smoother.strategy = cell.strategy;
  setup.smoother.sw_slots = sw;
  setup.smoother.ewma_factor = scenario.ewma_factor;

  setup.window.playing_len = scenario.playing_slots;
  setup.window.urgent_len = sw;
  setup.window.prefetch_len =
      scenario.prefetch_slots < 0 ? 2 * sw : scenario.prefetch_slots;
  setup.window.resume_threshold = scenario.resume_threshold;

  const int L = setup.profile.layer_count;
  if (scenario.priority_preset == "layer_major") {
    setup.priority = PriorityParams::layer_major(L);
  } else if (scenario.priority_preset == "time_major") {
    setup.priority = PriorityParams::time_major(
        L, static_cast<int>(setup.window.playing_len + 3 * sw));
  } else {
    setup.priority = PriorityParams::conservative(L);
  }

  setup.scheduler = cell.scheduler;
  setup.duration = scenario.duration;
  setup.trace = scenario.trace;
  return setup;
}

namespace {

CellResult run_cell(const Scenario& scenario, const RunCell& cell) {
  const SimSetup setup = cell_setup(scenario, cell);
  RunResult run = run_simulation(setup, cell.seed);

  CellResult result;
  result.cell = cell;
  result.metrics = run.metrics;
  result.peers = run.peer_metrics;
  if (scenario.trace.kind != TraceSpec::Kind::None && !run.receivers.empty()) {
    result.timeline =
        timeline_table(run.log, run.receivers.front(), setup.duration);
  }
  if (scenario.write_events) {
    result.events_csv = event_csv(run.log);
  }
  return result;
}

}  // namespace

ScenarioResult run_scenario(const Scenario& scenario,
                            const std::string& out_dir, int workers) {
  scenario.validate();
  const std::vector<RunCell> cells = expand_cells(scenario);
  if (workers <= 0) {
    workers = static_cast<int>(
        std::max(1u, std::thread::hardware_concurrency()));
  }

  ScenarioResult result;
  result.cells.resize(cells.size());
  for (std::size_t begin = 0; begin < cells.size();
       begin += static_cast<std::size_t>(workers)) {
    const std::size_t end =
        std::min(cells.size(), begin + static_cast<std::size_t>(workers));
    std::vector<std::future<CellResult>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, run_cell,
                                 std::cref(scenario), std::cref(cells[i])));
    }
    for (std::size_t i = begin; i < end; ++i) {
      result.cells[i] = batch[i - begin].get();
    }
  }

  // Summary: one row per cell.
  result.summary.header = {"scenario",
                           "family",
                           "grid",
                           "label",
                           "seed",
                           "layer_changes_mean",
                           "layer_changes_max",
                           "stall_events_mean",
                           "stall_duration_mean",
                           "stall_duration_max",
                           "bandwidth_utilization",
                           "useless_chunk_ratio",
                           "late_arrival_ratio",
                           "relative_received_layer_ratio"};
  for (const CellResult& cell : result.cells) {
    const RunMetrics& m = cell.metrics;
    result.summary.rows.push_back(
        {scenario.name, scenario.family(), grid_value_text(cell.cell),
         cell.cell.label, std::to_string(cell.cell.seed),
         format_double(m.layer_changes_mean), format_double(m.layer_changes_max),
         format_double(m.stall_events_mean),
         format_double(m.stall_duration_mean),
         format_double(m.stall_duration_max),
         format_double(m.bandwidth_utilization),
         format_double(m.useless_chunk_ratio),
         format_double(m.late_arrival_ratio),
         format_double(m.relative_received_layer_ratio)});
  }

  // Per-(grid, label) means over seeds.
  const std::string family = scenario.family();
  std::map<GroupKey, std::vector<const CellResult*>> groups;
  for (const CellResult& cell : result.cells) {
    groups[{cell.cell.grid_value, cell.cell.label}].push_back(&cell);
  }

  auto mean_of = [](const std::vector<const CellResult*>& group,
                    auto field) {
    double sum = 0.0;
    for (const CellResult* cell : group) sum += field(cell->metrics);
    return sum / static_cast<double>(group.size());
  };

  CsvTable aggregate;
  if (family.empty()) {
    aggregate.header = {"label",
                        "layer_changes_mean",
                        "layer_changes_max",
                        "stall_events_mean",
                        "stall_duration_mean",
                        "bandwidth_utilization",
                        "useless_chunk_ratio",
                        "late_arrival_ratio"};
    for (const auto& [key, group] : groups) {
      aggregate.rows.push_back(
          {key.label,
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.layer_changes_mean;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.layer_changes_max;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.stall_events_mean;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.stall_duration_mean;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.bandwidth_utilization;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.useless_chunk_ratio;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.late_arrival_ratio;
           }))});
    }
    result.tables["aggregate_summary.csv"] = aggregate;
  } else if (family == "layers") {
    aggregate.header = {"layers", "label", "layer", "delivery_ratio"};
    for (const auto& [key, group] : groups) {
      const int layer_count = static_cast<int>(key.grid);
      for (int l = 0; l < layer_count; ++l) {
        double sum = 0.0;
        for (const CellResult* cell : group) {
          sum += cell->metrics
                     .delivery_ratio_per_layer[static_cast<std::size_t>(l)];
        }
        aggregate.rows.push_back(
            {format_double(key.grid), key.label, std::to_string(l),
             format_double(sum / static_cast<double>(group.size()))});
      }
    }
    result.tables["aggregate_layers.csv"] = aggregate;
  } else {
    aggregate.header = {family,
                        "label",
                        "layer_changes_mean",
                        "stall_events_mean",
                        "stall_duration_mean",
                        "bandwidth_utilization",
                        "useless_chunk_ratio",
                        "late_arrival_ratio"};
    for (const auto& [key, group] : groups) {
      aggregate.rows.push_back(
          {format_double(key.grid), key.label,
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.layer_changes_mean;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.stall_events_mean;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.stall_duration_mean;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.bandwidth_utilization;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.useless_chunk_ratio;
           })),
           format_double(mean_of(group, [](const RunMetrics& m) {
             return m.late_arrival_ratio;
           }))});
    }
    result.tables["aggregate_" + family + ".csv"] = aggregate;
  }

  if (!out_dir.empty()) {
    std::filesystem::create_directories(out_dir);
    const std::filesystem::path dir(out_dir);
    result.summary.save((dir / "summary.csv").string());
    for (const auto& [name, table] : result.tables) {
      table.save((dir / name).string());
    }
    for (const CellResult& cell : result.cells) {
      const SimSetup setup = cell_setup(scenario, cell.cell);
      const std::string stem = cell_stem(cell.cell);
      peer_metrics_table(cell, setup.profile.layer_count)
          .save((dir / ("metrics_" + stem + ".csv")).string());
      if (cell.events_csv) {
        std::ofstream out(dir / ("events_" + stem + ".csv"),
                          std::ios::binary);
        out << *cell.events_csv;
      }
      if (cell.timeline) {
        cell.timeline->save((dir / ("timeline_" + stem + ".csv")).string());
      }
    }
  }
  return result;
}

std::vector<std::string> compare_tables(
    const CsvTable& a, const CsvTable& b, const std::string& metric,
    const std::string& relation,
    const std::vector<std::pair<std::string, std::string>>& where_a,
    const std::vector<std::pair<std::string, std::string>>& where_b) {
  auto filtered = [](const CsvTable& table,
                     const std::vector<std::pair<std::string, std::string>>&
                         where) {
    std::vector<const std::vector<std::string>*> rows;
    std::vector<std::pair<int, std::string>> filters;
    for (const auto& [col, value] : where) {
      const int index = table.column(col);
      if (index < 0) {
        throw std::runtime_error("compare: no column `" + col + "`");
      }
      filters.emplace_back(index, value);
    }
    for (const auto& row : table.rows) {
      bool keep = true;
      for (const auto& [index, value] : filters) {
        if (row[static_cast<std::size_t>(index)] != value) {
          keep = false;
          break;
        }
      }
      if (keep) rows.push_back(&row);
    }
    return rows;
  };

  const int col_a = a.column(metric);
  const int col_b = b.column(metric);
  if (col_a < 0 || col_b < 0) {
    throw std::runtime_error("compare: metric column `" + metric +
                             "` missing");
  }
  const auto rows_a = filtered(a, where_a);
  const auto rows_b = filtered(b, where_b);
  if (rows_a.size() != rows_b.size() || rows_a.empty()) {
    throw std::runtime_error("compare: row sets do not align");
  }

  std::vector<std::string> violations;
  for (std::size_t i = 0; i < rows_a.size(); ++i) {
    const double va = std::stod((*rows_a[i])[static_cast<std::size_t>(col_a)]);
    const double vb = std::stod((*rows_b[i])[static_cast<std::size_t>(col_b)]);
    bool ok;
    if (relation == "lt") {
      ok = va < vb;
    } else if (relation == "le") {
      ok = va <= vb;
    } else if (relation == "ge") {
      ok = va >= vb;
    } else if (relation == "gt") {
      ok = va > vb;
    } else {
      throw std::runtime_error("compare: unknown relation `" + relation + "`");
    }
    if (!ok) {
      std::ostringstream out;
      out << "row " << i << ": " << metric << " " << format_double(va) << " !"
          << relation << " " << format_double(vb);
      violations.push_back(out.str());
    }
  }
  return violations;
}

}  // namespace layerstream
