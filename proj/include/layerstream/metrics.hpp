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
#include <span>
#include <utility>
#include <vector>

#include "layerstream/event_log.hpp"
#include "layerstream/video_profile.hpp"

namespace layerstream {

// Count of positions t > 0 with timeline[t] != timeline[t-1].
int layer_changes(std::span<const int> quality_timeline);

// Run-length grouping of stalled time steps (given as sim-slot numbers,
// ascending): number of maximal pauses and their lengths in slots.
std::pair<int, std::vector<std::int64_t>> stall_stats(
    std::span<const Slot> stalled_slots);

// Delivered over available, both in kbit; 0 when nothing was available.
double bandwidth_utilization(double delivered_kbit, double capacity_kbit);

struct PeerMetrics {
  PeerId peer = 0;
  std::int64_t played_slots = 0;
  Slot startup_delay = 0;  // sim slots before the first played slot
  int layer_changes = 0;
  int stall_events = 0;
  std::vector<std::int64_t> stall_durations;
  double delivered_kbit = 0.0;
  double capacity_kbit = 0.0;
  std::int64_t late_chunks = 0;
  std::int64_t useless_chunks = 0;  // late + on-time but never decoded
  std::int64_t total_encoded_chunks = 0;
  std::vector<std::int64_t> demanded_per_layer;
  std::vector<std::int64_t> delivered_ok_per_layer;
  int requested_layers = 0;
  int fully_delivered_layers = 0;

  double useless_ratio() const;
  double late_ratio() const;
  double relative_received_layer_ratio() const;
};

struct RunMetrics {
  double layer_changes_mean = 0.0;
  double layer_changes_max = 0.0;
  double stall_events_mean = 0.0;
  double stall_duration_mean = 0.0;
  double stall_duration_max = 0.0;
  double bandwidth_utilization = 0.0;
  double useless_chunk_ratio = 0.0;   // mean over receivers
  double late_arrival_ratio = 0.0;    // mean over receivers
  double relative_received_layer_ratio = 0.0;
  // Mean over receivers that ever demanded the layer; 1.0 when none did.
  std::vector<double> delivery_ratio_per_layer;
};

// Builds per-peer metrics from the event stream, either fed live during a
// run or replayed from a parsed log; both paths must agree exactly.
class MetricsAccumulator {
 public:
  MetricsAccumulator(VideoProfile profile, std::vector<PeerId> receivers,
                     Slot duration);

  void on_event(const SimEvent& event);

  // Closes open accounting (capacity integration, stall runs). Call once.
  void finish();

  const std::vector<PeerMetrics>& peers() const { return peers_; }
  RunMetrics run_metrics() const;

 private:
  struct PeerTrack {
    PeerMetrics metrics;
    std::vector<std::pair<Slot, double>> capacity_points;
    std::vector<Slot> stall_slots;
    std::vector<int> viewer_timeline;
    std::vector<std::uint32_t> on_time;  // delivered-on-time mask per slot
    bool played_any = false;
  };

  int index_of(PeerId peer) const;

  VideoProfile profile_;
  Slot duration_;
  std::vector<PeerId> receivers_;
  std::vector<PeerTrack> tracks_;
  std::vector<PeerMetrics> peers_;
  bool finished_ = false;
};

// Replays a log through a fresh accumulator.
std::pair<RunMetrics, std::vector<PeerMetrics>> compute_metrics(
    const SimEventLog& log, const VideoProfile& profile,
    const std::vector<PeerId>& receivers, Slot duration);

}  // namespace layerstream
