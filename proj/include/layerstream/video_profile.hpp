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

#include <vector>

#include "layerstream/chunk.hpp"

namespace layerstream {

// Static description of a layered stream: per-layer rates (base first),
// the duration of one timestamp slot, and the stream length in slots.
// A chunk of layer l carries layer_rates_kbps[l] * chunk_duration_s kbit.
struct VideoProfile {
  int layer_count = 0;
  std::vector<double> layer_rates_kbps;  // one per layer, base first
  double chunk_duration_s = 1.0;
  Slot total_slots = 0;

  // Sum of rates for layers 0..q. q == -1 yields 0 (nothing consumed).
  double cumulative_rate(int q) const;

  // Size of one chunk of `layer`, in kbit.
  double chunk_kbit(int layer) const {
    return layer_rates_kbps[static_cast<std::size_t>(layer)] * chunk_duration_s;
  }

  // Throws std::invalid_argument when invariants do not hold:
  // layer_count >= 1, one positive rate per layer, positive duration.
  void validate() const;

  static VideoProfile uniform(int layers, double rate_kbps, double duration_s,
                              Slot slots);
};

// Largest quality level q with cumulative_rate(q) <= bandwidth_kbps,
// or -1 when even the base layer does not fit.
int max_sustainable_quality(double bandwidth_kbps, const VideoProfile& profile);

}  // namespace layerstream
