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

#include <span>
#include <vector>

#include "layerstream/forecast.hpp"
#include "layerstream/rational.hpp"
#include "layerstream/sliding_window.hpp"
#include "layerstream/video_profile.hpp"

namespace layerstream {

enum class SmoothingStrategy { Raw, Amplitude, Frequency, Hybrid };

// Mean of the achieved quality levels (the last smoothing window's worth).
// Exact rational, since the downstream floor is sensitive to rounding.
// Throws std::invalid_argument on empty history.
Rational mean_quality(std::span<const int> history);

// |prev_level - mean|.
Rational mean_deviation(int prev_level, const Rational& mean);

// One per-slot amplitude-reduction decision:
//   forecast not below the last measurement -> min(l_hat, floor(prev + alpha))
//   forecast drop                           -> min(l_hat + l_r, prev)
// where l_hat is the sustainable level for the forecast and l_r the level
// already covered by held chunks. Result clamped to [-1, layer_count-1].
int amplitude_step(int prev_level, const Rational& alpha, double b_hat,
                   double b_prev, int l_hat, int l_r, int layer_count);

// Level for smoothing window `window_index`, holding quality constant
// within each window. Window 0 always starts at level 0. Later windows
// pick the largest level, bounded by one step above the current level or
// by the highest (even partially) prefetched layer, whose still-missing
// chunks over `view` fit in b_hat_ewma * window_length * chunk_duration —
// and never above the level b_hat_ewma itself can sustain.
int frequency_step(int window_index, const PrefetchView& view,
                   double b_hat_ewma, int current_level,
                   const VideoProfile& profile, int sw_slots);

// Frequency selection with the window-to-window jump clamped to
// max(|level_k - level_k_prev|, 1). Decides window k+1; requires k >= 1
// (the first two windows come from frequency_step).
int hybrid_step(int k, const PrefetchView& view, double b_hat_ewma,
                int level_k, int level_k_prev, const VideoProfile& profile,
                int sw_slots);

struct SmootherState {
  std::vector<int> history;  // selected levels, most recent last (<= S_W kept)
  int window_index = 0;
  int window_quality = 0;
  int prev_window_quality = 0;
  SmoothingStrategy strategy = SmoothingStrategy::Raw;
};

struct SmootherConfig {
  SmoothingStrategy strategy = SmoothingStrategy::Raw;
  int sw_slots = 1;
  double ewma_factor = 0.25;

  void validate() const;
};

// One record per select() call, enough to audit every branch taken.
struct SmootherDecision {
  Slot slot = 0;
  int level = 0;
  int prev_level = 0;
  double b_hat = 0.0;
  double b_prev = 0.0;
  int window_index = 0;
  bool window_boundary = false;
};

// Per-peer driver: applies the configured strategy once per slot and keeps
// the level history / window bookkeeping. Raw and amplitude re-decide every
// slot; frequency and hybrid only at window boundaries.
class Smoother {
 public:
  Smoother(SmootherConfig config, VideoProfile profile);

  int select(Slot now, const SlidingWindow& window,
             const BandwidthTrace& trace);

  int current_level() const;
  const SmootherState& state() const { return state_; }
  const std::vector<SmootherDecision>& decisions() const { return log_; }
  const SmootherConfig& config() const { return config_; }

 private:
  std::vector<int> achieved_history(const SlidingWindow& window) const;

  SmootherConfig config_;
  VideoProfile profile_;
  SmootherState state_;
  std::vector<SmootherDecision> log_;
  int last_level_ = 0;
  bool selected_once_ = false;
};

}  // namespace layerstream
