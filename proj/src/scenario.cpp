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

#include "layerstream/scenario.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace layerstream {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t at = 0;
  while (true) {
    const std::size_t p = s.find(sep, at);
    if (p == std::string::npos) {
      parts.push_back(trim(s.substr(at)));
      break;
    }
    parts.push_back(trim(s.substr(at, p - at)));
    at = p + 1;
  }
  return parts;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw std::runtime_error("scenario: bad value for `" + key + "`: `" + value +
                           "`");
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value);
  }
}

std::int64_t to_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const std::int64_t v = std::stoll(value, &used);
    if (used != value.size()) bad_value(key, value);
    return v;
  } catch (const std::runtime_error&) {
    throw;
  } catch (const std::exception&) {
    bad_value(key, value);
  }
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  bad_value(key, value);
}

SmoothingStrategy strategy_from(const std::string& key,
                                const std::string& value) {
  if (value == "raw") return SmoothingStrategy::Raw;
  if (value == "amplitude") return SmoothingStrategy::Amplitude;
  if (value == "frequency") return SmoothingStrategy::Frequency;
  if (value == "hybrid") return SmoothingStrategy::Hybrid;
  bad_value(key, value);
}

SchedulerKind scheduler_from(const std::string& key, const std::string& value) {
  if (value == "gap") return SchedulerKind::Gap;
  if (value == "rnd" || value == "random") return SchedulerKind::Random;
  if (value == "lrf") return SchedulerKind::Lrf;
  if (value == "rr") return SchedulerKind::RoundRobin;
  if (value == "layerp2p") return SchedulerKind::LayerP2P;
  bad_value(key, value);
}

}  // namespace

int Scenario::sw_slots() const {
  const double slots = smoothing_window_s / chunk_duration_s;
  const double rounded = std::round(slots);
  if (std::abs(slots - rounded) > 1e-9 || rounded < 1.0) {
    throw std::invalid_argument(
        "scenario: smoothing window must be a whole number of slots");
  }
  return static_cast<int>(rounded);
}

std::string Scenario::family() const {
  int grids = 0;
  std::string family;
  if (!grid_change_intervals.empty()) {
    ++grids;
    family = "interval";
  }
  if (!grid_degrees.empty()) {
    ++grids;
    family = "degree";
  }
  if (!grid_layer_rates.empty()) {
    ++grids;
    family = "rate";
  }
  if (!grid_layer_counts.empty()) {
    ++grids;
    family = "layers";
  }
  if (grids > 1) {
    throw std::invalid_argument("scenario: at most one grid.* sweep allowed");
  }
  return family;
}

void Scenario::validate() const {
  if (name.empty()) throw std::invalid_argument("scenario: missing name");
  if (layers < 1) throw std::invalid_argument("scenario: layers must be >= 1");
  if (layer_rates_kbps.empty() && layer_rate_kbps <= 0.0) {
    throw std::invalid_argument("scenario: no layer rate configured");
  }
  if (total_slots < 1) {
    throw std::invalid_argument("scenario: total_slots must be >= 1");
  }
  if (duration < 1 || duration > total_slots) {
    throw std::invalid_argument(
        "scenario: duration must be in [1, total_slots]");
  }
  if (seeds.empty()) throw std::invalid_argument("scenario: no seeds");
  if (strategies.empty() || schedulers.empty()) {
    throw std::invalid_argument("scenario: empty strategy or scheduler list");
  }
  if (priority_preset != "conservative" && priority_preset != "layer_major" &&
      priority_preset != "time_major") {
    throw std::invalid_argument("scenario: unknown priority preset `" +
                                priority_preset + "`");
  }
  (void)sw_slots();
  (void)family();
}

void apply_override(Scenario& s, const std::string& key,
                    const std::string& value) {
  if (key == "name") {
    s.name = value;
  } else if (key == "video.layers") {
    s.layers = static_cast<int>(to_int(key, value));
  } else if (key == "video.layer_rate_kbps") {
    s.layer_rate_kbps = to_double(key, value);
  } else if (key == "video.layer_rates_kbps") {
    s.layer_rates_kbps.clear();
    for (const std::string& part : split(value, ',')) {
      s.layer_rates_kbps.push_back(to_double(key, part));
    }
  } else if (key == "video.chunk_duration_s") {
    s.chunk_duration_s = to_double(key, value);
  } else if (key == "video.total_slots") {
    s.total_slots = to_int(key, value);
  } else if (key == "smoothing.window_s") {
    s.smoothing_window_s = to_double(key, value);
  } else if (key == "smoothing.ewma_factor") {
    s.ewma_factor = to_double(key, value);
  } else if (key == "smoothing.strategies") {
    s.strategies.clear();
    for (const std::string& part : split(value, ',')) {
      s.strategies.push_back(strategy_from(key, part));
    }
  } else if (key == "scheduler.kinds") {
    s.schedulers.clear();
    for (const std::string& part : split(value, ',')) {
      s.schedulers.push_back(scheduler_from(key, part));
    }
  } else if (key == "scheduler.preset") {
    s.priority_preset = value;
  } else if (key == "window.playing_slots") {
    s.playing_slots = to_int(key, value);
  } else if (key == "window.prefetch_slots") {
    s.prefetch_slots = to_int(key, value);
  } else if (key == "window.resume_threshold") {
    s.resume_threshold = static_cast<int>(to_int(key, value));
  } else if (key == "overlay.receivers") {
    s.overlay.receiver_count = static_cast<int>(to_int(key, value));
  } else if (key == "overlay.degree") {
    s.overlay.degree = static_cast<int>(to_int(key, value));
  } else if (key == "overlay.max_degree") {
    s.overlay.max_degree = static_cast<int>(to_int(key, value));
  } else if (key == "overlay.classes") {
    s.overlay.classes.clear();
    for (const std::string& part : split(value, ',')) {
      const auto colon = part.find(':');
      if (colon == std::string::npos) bad_value(key, value);
      BandwidthClass c;
      c.fraction = to_double(key, trim(part.substr(0, colon)));
      c.down_kbps = to_double(key, trim(part.substr(colon + 1)));
      s.overlay.classes.push_back(c);
    }
  } else if (key == "overlay.uniform_kbps") {
    const auto colon = value.find(':');
    if (colon == std::string::npos) bad_value(key, value);
    s.overlay.uniform_min_kbps = to_double(key, trim(value.substr(0, colon)));
    s.overlay.uniform_max_kbps = to_double(key, trim(value.substr(colon + 1)));
  } else if (key == "overlay.upload_ratio") {
    s.overlay.upload_ratio = to_double(key, value);
  } else if (key == "overlay.source_upload_kbps") {
    s.overlay.source_upload_kbps = to_double(key, value);
  } else if (key == "overlay.gossip_period_slots") {
    s.overlay.gossip_period = to_int(key, value);
  } else if (key == "overlay.scheduling_period_slots") {
    s.overlay.scheduling_period = to_int(key, value);
  } else if (key == "overlay.latency_slots") {
    s.overlay.latency_slots = to_int(key, value);
  } else if (key == "overlay.retention_slots") {
    s.overlay.retention_slots = to_int(key, value);
  } else if (key == "overlay.join_window_slots") {
    s.overlay.join_window_slots = to_int(key, value);
  } else if (key == "scheduler.baselines_use_raw") {
    s.baselines_use_raw = to_bool(key, value);
  } else if (key == "change.interval_slots") {
    s.overlay.change.interval_slots = to_int(key, value);
  } else if (key == "change.factors") {
    s.overlay.change.factors.clear();
    for (const std::string& part : split(value, ',')) {
      s.overlay.change.factors.push_back(to_double(key, part));
    }
  } else if (key == "change.min_scale") {
    s.overlay.change.min_scale = to_double(key, value);
  } else if (key == "change.max_scale") {
    s.overlay.change.max_scale = to_double(key, value);
  } else if (key == "trace.kind") {
    if (value == "none") {
      s.trace.kind = TraceSpec::Kind::None;
    } else if (value == "file") {
      s.trace.kind = TraceSpec::Kind::File;
    } else if (value == "walk") {
      s.trace.kind = TraceSpec::Kind::Walk;
    } else {
      bad_value(key, value);
    }
  } else if (key == "trace.file") {
    s.trace.file = value;
  } else if (key == "trace.walk_min_kbps") {
    s.trace.walk_min_kbps = to_double(key, value);
  } else if (key == "trace.walk_max_kbps") {
    s.trace.walk_max_kbps = to_double(key, value);
  } else if (key == "trace.walk_step_kbps") {
    s.trace.walk_step_kbps = to_double(key, value);
  } else if (key == "trace.walk_interval_slots") {
    s.trace.walk_interval_slots = to_int(key, value);
  } else if (key == "trace.walk_start_kbps") {
    s.trace.walk_start_kbps = to_double(key, value);
  } else if (key == "run.duration_slots") {
    s.duration = to_int(key, value);
  } else if (key == "run.seeds") {
    s.seeds.clear();
    for (const std::string& part : split(value, ',')) {
      s.seeds.push_back(static_cast<std::uint64_t>(to_int(key, part)));
    }
  } else if (key == "output.events") {
    s.write_events = to_bool(key, value);
  } else if (key == "grid.degrees") {
    s.grid_degrees.clear();
    for (const std::string& part : split(value, ',')) {
      s.grid_degrees.push_back(static_cast<int>(to_int(key, part)));
    }
  } else if (key == "grid.layer_rates_kbps") {
    s.grid_layer_rates.clear();
    for (const std::string& part : split(value, ',')) {
      s.grid_layer_rates.push_back(to_double(key, part));
    }
  } else if (key == "grid.change_intervals") {
    s.grid_change_intervals.clear();
    for (const std::string& part : split(value, ',')) {
      s.grid_change_intervals.push_back(to_int(key, part));
    }
  } else if (key == "grid.layer_counts") {
    s.grid_layer_counts.clear();
    for (const std::string& part : split(value, ',')) {
      s.grid_layer_counts.push_back(static_cast<int>(to_int(key, part)));
    }
  } else {
    throw std::runtime_error("scenario: unknown key `" + key + "`");
  }
}

Scenario parse_scenario(const std::string& text, const std::string& name) {
  Scenario scenario;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const std::size_t eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": expected `key = value`");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    try {
      apply_override(scenario, key, value);
    } catch (const std::exception& err) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " +
                               err.what());
    }
  }
  scenario.validate();
  return scenario;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario: " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str(), path);
}

}  // namespace layerstream
