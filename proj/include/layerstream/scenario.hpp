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

#include <cstdint>
#include <string>
#include <vector>

#include "layerstream/simnet.hpp"

namespace layerstream {

// Experiment description: one video profile and overlay, a set of
// smoother strategies and scheduler kinds to cross, seeds, and at most one
// sweep axis (degrees, per-layer rates, bandwidth-change intervals, or
// layer counts). Loaded from a plain `key = value` file with dotted keys;
// see the README for the schema.
struct Scenario {
  std::string name;

  int layers = 1;
  double layer_rate_kbps = 0.0;           // uniform rate, or
  std::vector<double> layer_rates_kbps;   // explicit per-layer list
  double chunk_duration_s = 1.0;
  Slot total_slots = 0;

  double smoothing_window_s = 1.0;
  double ewma_factor = 0.25;
  std::vector<SmoothingStrategy> strategies{SmoothingStrategy::Raw};
  std::vector<SchedulerKind> schedulers{SchedulerKind::Gap};
  std::string priority_preset = "conservative";
  // Pair the reference schedulers (rnd/lrf/rr) with the raw smoother only,
  // the way they are defined; the strategy list then applies to gap runs.
  bool baselines_use_raw = false;

  Slot playing_slots = 0;
  Slot prefetch_slots = -1;  // -1 -> twice the smoothing window
  int resume_threshold = 1;

  OverlayConfig overlay;
  TraceSpec trace;
  Slot duration = 0;
  std::vector<std::uint64_t> seeds{1};
  bool write_events = true;

  std::vector<int> grid_degrees;
  std::vector<double> grid_layer_rates;
  std::vector<Slot> grid_change_intervals;
  std::vector<int> grid_layer_counts;

  int sw_slots() const;
  // "interval", "degree", "rate", "layers", or "" when no sweep is set.
  std::string family() const;
  void validate() const;
};

Scenario parse_scenario(const std::string& text, const std::string& name);
Scenario load_scenario(const std::string& path);

// `key=value` override, same keys as the file. Throws on unknown keys.
void apply_override(Scenario& scenario, const std::string& key,
                    const std::string& value);

}  // namespace layerstream
