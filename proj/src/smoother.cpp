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

#include "layerstream/smoother.hpp"

#include <algorithm>
#include <stdexcept>

namespace layerstream {

namespace {

int clamp_level(int level, int layer_count) {
  return std::clamp(level, -1, layer_count - 1);
}

// kbit still needed to hold layers 0..q over the view's span, ignoring
// slots beyond the stream end and chunks already prefetched.
double missing_kbit(int q, const PrefetchView& view,
                    const VideoProfile& profile) {
  double total = 0.0;
  for (Slot s = view.start; s < view.start + view.length; ++s) {
    if (s < 0 || s >= profile.total_slots) continue;
    for (int l = 0; l <= q; ++l) {
      if (!view.has(s, l)) total += profile.chunk_kbit(l);
    }
  }
  return total;
}

}  // namespace

Rational mean_quality(std::span<const int> history) {
  if (history.empty()) {
    throw std::invalid_argument("mean quality: empty history");
  }
  std::int64_t sum = 0;
  for (int level : history) sum += level;
  return Rational(sum, static_cast<std::int64_t>(history.size()));
}

Rational mean_deviation(int prev_level, const Rational& mean) {
  return (Rational(prev_level) - mean).abs();
}

int amplitude_step(int prev_level, const Rational& alpha, double b_hat,
                   double b_prev, int l_hat, int l_r, int layer_count) {
  int level;
  if (b_hat >= b_prev) {
    const std::int64_t stepped = (Rational(prev_level) + alpha).floor();
    level = static_cast<int>(
        std::min<std::int64_t>(static_cast<std::int64_t>(l_hat), stepped));
  } else {
    level = std::min(l_hat + l_r, prev_level);
  }
  return clamp_level(level, layer_count);
}

int frequency_step(int window_index, const PrefetchView& view,
                   double b_hat_ewma, int current_level,
                   const VideoProfile& profile, int sw_slots) {
  if (window_index <= 0) return 0;
  const int q_pre = view.top_prefetched_layer();
  const int l_hat = max_sustainable_quality(b_hat_ewma, profile);
  int ceiling = std::max(q_pre, current_level + 1);
  ceiling = std::min({ceiling, l_hat, profile.layer_count - 1});
  const double budget =
      b_hat_ewma * static_cast<double>(sw_slots) * profile.chunk_duration_s;
  for (int q = ceiling; q >= 0; --q) {
    if (missing_kbit(q, view, profile) <= budget + 1e-9) return q;
  }
  return -1;
}

int hybrid_step(int k, const PrefetchView& view, double b_hat_ewma,
                int level_k, int level_k_prev, const VideoProfile& profile,
                int sw_slots) {
  if (k < 1) {
    throw std::invalid_argument("hybrid step: requires window index >= 1");
  }
  const int candidate =
      frequency_step(k + 1, view, b_hat_ewma, level_k, profile, sw_slots);
  const int bound = std::max(std::abs(level_k - level_k_prev), 1);
  int level = candidate;
  if (candidate > level_k) {
    level = std::min(candidate, level_k + bound);
  } else if (candidate < level_k) {
    level = std::max(candidate, level_k - bound);
  }
  return clamp_level(level, profile.layer_count);
}

void SmootherConfig::validate() const {
  if (sw_slots < 1) {
    throw std::invalid_argument("smoother: window must be >= 1 slot");
  }
  if (ewma_factor <= 0.0 || ewma_factor > 1.0) {
    throw std::invalid_argument("smoother: ewma factor must be in (0,1]");
  }
}

Smoother::Smoother(SmootherConfig config, VideoProfile profile)
    : config_(config), profile_(std::move(profile)) {
  config_.validate();
  profile_.validate();
  state_.strategy = config_.strategy;
}

int Smoother::current_level() const { return last_level_; }

// Achieved levels of the most recently consumed slots, oldest first.
std::vector<int> Smoother::achieved_history(const SlidingWindow& window) const {
  std::vector<int> history;
  const Slot end = window.playhead();
  const Slot begin = std::max<Slot>(0, end - config_.sw_slots);
  for (Slot s = begin; s < end; ++s) {
    const int q = window.consumed_quality(s);
    if (q >= -1) history.push_back(q);
  }
  return history;
}

int Smoother::select(Slot now, const SlidingWindow& window,
                     const BandwidthTrace& trace) {
  SmootherDecision decision;
  decision.slot = now;
  decision.prev_level = last_level_;
  decision.window_index = static_cast<int>(now / config_.sw_slots);

  const bool have_sample = trace.has_sample_before(now);
  int level = 0;
  switch (config_.strategy) {
    case SmoothingStrategy::Raw: {
      if (have_sample) {
        decision.b_prev = trace.last_before(now);
        decision.b_hat = decision.b_prev;
        level = max_sustainable_quality(decision.b_prev, profile_);
      }
      break;
    }
    case SmoothingStrategy::Amplitude: {
      const std::vector<int> history = achieved_history(window);
      if (!have_sample || history.empty() || !selected_once_) {
        level = 0;
        break;
      }
      ForecastConfig fc;
      fc.estimator = ForecastConfig::Estimator::WindowMean;
      fc.window = config_.sw_slots;
      decision.b_hat = estimate_next(trace, fc, now);
      decision.b_prev = trace.last_before(now);
      const int l_hat = max_sustainable_quality(decision.b_hat, profile_);
      const Rational alpha = mean_deviation(last_level_, mean_quality(history));
      const int l_r = window.held_quality(window.playhead());
      level = amplitude_step(last_level_, alpha, decision.b_hat,
                             decision.b_prev, l_hat, l_r,
                             profile_.layer_count);
      break;
    }
    case SmoothingStrategy::Frequency:
    case SmoothingStrategy::Hybrid: {
      if (now % config_.sw_slots == 0) {
        decision.window_boundary = true;
        const int widx = static_cast<int>(now / config_.sw_slots);
        int next = 0;
        if (widx > 0 && have_sample) {
          ForecastConfig fc;
          fc.estimator = ForecastConfig::Estimator::Ewma;
          fc.ewma_factor = config_.ewma_factor;
          fc.window = config_.sw_slots;
          decision.b_hat = estimate_next(trace, fc, now);
          decision.b_prev = trace.last_before(now);
          const PrefetchView view =
              window.prefetch_view(window.urgent_begin(), config_.sw_slots);
          if (config_.strategy == SmoothingStrategy::Frequency || widx < 2) {
            next = frequency_step(widx, view, decision.b_hat,
                                  state_.window_quality, profile_,
                                  config_.sw_slots);
          } else {
            next = hybrid_step(widx - 1, view, decision.b_hat,
                               state_.window_quality,
                               state_.prev_window_quality, profile_,
                               config_.sw_slots);
          }
        }
        state_.prev_window_quality = state_.window_quality;
        state_.window_quality = next;
        state_.window_index = widx;
      }
      level = state_.window_quality;
      break;
    }
  }

  state_.history.push_back(level);
  if (state_.history.size() > static_cast<std::size_t>(config_.sw_slots)) {
    state_.history.erase(state_.history.begin());
  }
  last_level_ = level;
  selected_once_ = true;
  decision.level = level;
  log_.push_back(decision);
  return level;
}

}  // namespace layerstream
