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

#include "layerstream/video_profile.hpp"

#include <stdexcept>

namespace layerstream {

double VideoProfile::cumulative_rate(int q) const {
  double sum = 0.0;
  for (int l = 0; l <= q && l < layer_count; ++l) {
    sum += layer_rates_kbps[static_cast<std::size_t>(l)];
  }
  return sum;
}

void VideoProfile::validate() const {
  if (layer_count < 1) {
    throw std::invalid_argument("video profile: layer_count must be >= 1");
  }
  if (layer_rates_kbps.size() != static_cast<std::size_t>(layer_count)) {
    throw std::invalid_argument("video profile: one rate per layer required");
  }
  for (double r : layer_rates_kbps) {
    if (r <= 0.0) {
      throw std::invalid_argument("video profile: every layer rate must be > 0");
    }
  }
  if (chunk_duration_s <= 0.0) {
    throw std::invalid_argument("video profile: chunk duration must be > 0");
  }
  if (total_slots < 0) {
    throw std::invalid_argument("video profile: total_slots must be >= 0");
  }
}

VideoProfile VideoProfile::uniform(int layers, double rate_kbps,
                                   double duration_s, Slot slots) {
  VideoProfile p;
  p.layer_count = layers;
  p.layer_rates_kbps.assign(static_cast<std::size_t>(layers), rate_kbps);
  p.chunk_duration_s = duration_s;
  p.total_slots = slots;
  p.validate();
  return p;
}

int max_sustainable_quality(double bandwidth_kbps, const VideoProfile& profile) {
  int q = -1;
  double sum = 0.0;
  for (int l = 0; l < profile.layer_count; ++l) {
    sum += profile.layer_rates_kbps[static_cast<std::size_t>(l)];
    if (sum <= bandwidth_kbps) {
      q = l;
    } else {
      break;
    }
  }
  return q;
}

}  // namespace layerstream
