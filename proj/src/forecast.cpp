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

#include "layerstream/forecast.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace layerstream {

void BandwidthTrace::append(Slot slot, double kbps) {
  if (!samples.empty() && slot <= samples.back().slot) {
    throw std::invalid_argument("bandwidth trace: slots must be increasing");
  }
  if (kbps < 0.0) {
    throw std::invalid_argument("bandwidth trace: negative bandwidth");
  }
  samples.push_back({slot, kbps});
}

double BandwidthTrace::last_before(Slot now) const {
  const BandwidthSample* found = nullptr;
  for (const auto& s : samples) {
    if (s.slot >= now) break;
    found = &s;
  }
  if (found == nullptr) {
    throw std::runtime_error("cold start");
  }
  return found->kbps;
}

void ForecastConfig::validate() const {
  if (ewma_factor <= 0.0 || ewma_factor > 1.0) {
    throw std::invalid_argument("forecast: ewma factor must be in (0,1]");
  }
  if (window < 1) {
    throw std::invalid_argument("forecast: window must be >= 1");
  }
}

double estimate_next(const BandwidthTrace& trace, const ForecastConfig& config,
                     Slot now) {
  config.validate();
  // Last up-to-`window` samples strictly before `now`.
  auto end = std::lower_bound(
      trace.samples.begin(), trace.samples.end(), now,
      [](const BandwidthSample& s, Slot v) { return s.slot < v; });
  if (end == trace.samples.begin()) {
    throw std::runtime_error("cold start");
  }
  auto begin = end - std::min<std::ptrdiff_t>(end - trace.samples.begin(),
                                              config.window);
  if (config.estimator == ForecastConfig::Estimator::WindowMean) {
    double sum = 0.0;
    for (auto it = begin; it != end; ++it) sum += it->kbps;
    return sum / static_cast<double>(end - begin);
  }
  double estimate = begin->kbps;
  for (auto it = begin + 1; it != end; ++it) {
    estimate = config.ewma_factor * it->kbps +
               (1.0 - config.ewma_factor) * estimate;
  }
  return estimate;
}

namespace {

bool blank_or_comment(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

}  // namespace

BandwidthTrace parse_trace(const std::string& text, const std::string& name) {
  BandwidthTrace trace;
  trace.source = BandwidthTrace::Source::File;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (blank_or_comment(line)) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": expected `slot,kbps`");
    }
    const std::string slot_text = line.substr(0, comma);
    const std::string kbps_text = line.substr(comma + 1);
    Slot slot = 0;
    auto [p1, e1] = std::from_chars(slot_text.data(),
                                    slot_text.data() + slot_text.size(), slot);
    if (e1 != std::errc{} || p1 != slot_text.data() + slot_text.size()) {
      if (line_no == 1) continue;  // optional header row
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": bad slot value `" + slot_text + "`");
    }
    double kbps = 0.0;
    try {
      std::size_t used = 0;
      kbps = std::stod(kbps_text, &used);
      while (used < kbps_text.size() &&
             std::isspace(static_cast<unsigned char>(kbps_text[used]))) {
        ++used;
      }
      if (used != kbps_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) +
                               ": bad kbps value `" + kbps_text + "`");
    }
    try {
      trace.append(slot, kbps);
    } catch (const std::invalid_argument& err) {
      throw std::runtime_error(name + ":" + std::to_string(line_no) + ": " +
                               err.what());
    }
  }
  return trace;
}

BandwidthTrace load_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open trace file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_trace(buffer.str(), path);
}

}  // namespace layerstream
