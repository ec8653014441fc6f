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

#include <string>
#include <vector>

#include "layerstream/chunk.hpp"

namespace layerstream {

struct BandwidthSample {
  Slot slot = 0;
  double kbps = 0.0;
};

// Download-bandwidth samples measured at a receiver, one per slot at most,
// slots strictly increasing.
struct BandwidthTrace {
  enum class Source { Measured, File };

  std::vector<BandwidthSample> samples;
  Source source = Source::Measured;

  // Throws std::invalid_argument on non-monotone slots or negative values.
  void append(Slot slot, double kbps);

  bool has_sample_before(Slot now) const {
    return !samples.empty() && samples.front().slot < now;
  }
  // Value of the most recent sample with slot < now. Requires one to exist.
  double last_before(Slot now) const;
};

struct ForecastConfig {
  enum class Estimator { WindowMean, Ewma };

  Estimator estimator = Estimator::WindowMean;
  double ewma_factor = 0.25;  // weight of the newest sample
  int window = 1;             // smoothing window size in slots

  void validate() const;
};

// Forecast for the bandwidth at `now` from the last up-to-`window` samples
// with slot < now:
//   WindowMean — arithmetic mean of those samples.
//   Ewma       — lambda*sample + (1-lambda)*previous, oldest to newest,
//                seeded with the first sample of the span.
// Throws std::runtime_error("cold start") when no earlier sample exists.
double estimate_next(const BandwidthTrace& trace, const ForecastConfig& config,
                     Slot now);

// Parses a `slot,kbps` CSV (header line optional). Errors name the line.
BandwidthTrace load_trace(const std::string& path);
BandwidthTrace parse_trace(const std::string& text, const std::string& name);

}  // namespace layerstream
