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

#include "layerstream/metrics.hpp"

#include <algorithm>
#include <stdexcept>

namespace layerstream {

int layer_changes(std::span<const int> quality_timeline) {
  int changes = 0;
  for (std::size_t t = 1; t < quality_timeline.size(); ++t) {
    if (quality_timeline[t] != quality_timeline[t - 1]) ++changes;
  }
  return changes;
}

std::pair<int, std::vector<std::int64_t>> stall_stats(
    std::span<const Slot> stalled_slots) {
  std::vector<std::int64_t> durations;
  for (std::size_t i = 0; i < stalled_slots.size(); ++i) {
    if (i == 0 || stalled_slots[i] != stalled_slots[i - 1] + 1) {
      durations.push_back(1);
    } else {
      ++durations.back();
    }
  }
  return {static_cast<int>(durations.size()), durations};
}

double bandwidth_utilization(double delivered_kbit, double capacity_kbit) {
  if (capacity_kbit <= 0.0) return 0.0;
  return delivered_kbit / capacity_kbit;
}

double PeerMetrics::useless_ratio() const {
  if (total_encoded_chunks == 0) return 0.0;
  return static_cast<double>(useless_chunks) /
         static_cast<double>(total_encoded_chunks);
}

double PeerMetrics::late_ratio() const {
  if (total_encoded_chunks == 0) return 0.0;
  return static_cast<double>(late_chunks) /
         static_cast<double>(total_encoded_chunks);
}

double PeerMetrics::relative_received_layer_ratio() const {
  if (requested_layers == 0) return 1.0;
  return static_cast<double>(fully_delivered_layers) /
         static_cast<double>(requested_layers);
}

MetricsAccumulator::MetricsAccumulator(VideoProfile profile,
                                       std::vector<PeerId> receivers,
                                       Slot duration)
    : profile_(std::move(profile)),
      duration_(duration),
      receivers_(std::move(receivers)) {
  tracks_.resize(receivers_.size());
  for (std::size_t i = 0; i < receivers_.size(); ++i) {
    PeerTrack& track = tracks_[i];
    track.metrics.peer = receivers_[i];
    track.metrics.total_encoded_chunks =
        static_cast<std::int64_t>(profile_.layer_count) *
        std::min(duration_, profile_.total_slots);
    track.metrics.demanded_per_layer.assign(
        static_cast<std::size_t>(profile_.layer_count), 0);
    track.metrics.delivered_ok_per_layer.assign(
        static_cast<std::size_t>(profile_.layer_count), 0);
    track.on_time.assign(static_cast<std::size_t>(profile_.total_slots), 0);
  }
}

int MetricsAccumulator::index_of(PeerId peer) const {
  for (std::size_t i = 0; i < receivers_.size(); ++i) {
    if (receivers_[i] == peer) return static_cast<int>(i);
  }
  return -1;
}

void MetricsAccumulator::on_event(const SimEvent& event) {
  const int index = index_of(event.peer);
  if (index < 0) return;  // source or unknown peer
  PeerTrack& track = tracks_[static_cast<std::size_t>(index)];
  PeerMetrics& m = track.metrics;

  switch (event.kind) {
    case EventKind::Capacity:
      track.capacity_points.emplace_back(event.slot, event.value);
      break;
    case EventKind::Select:
      break;  // selection is audited via the smoother decision log
    case EventKind::Request:
      break;
    case EventKind::Deliver: {
      m.delivered_kbit += profile_.chunk_kbit(event.layer);
      if (event.chunk_slot >= 0 && event.chunk_slot < profile_.total_slots) {
        track.on_time[static_cast<std::size_t>(event.chunk_slot)] |=
            1u << event.layer;
      }
      break;
    }
    case EventKind::Late: {
      m.delivered_kbit += profile_.chunk_kbit(event.layer);
      ++m.late_chunks;
      ++m.useless_chunks;
      break;
    }
    case EventKind::Play: {
      const int viewer = event.layer;
      const int target = static_cast<int>(event.value);
      if (!track.played_any) {
        track.played_any = true;
        m.startup_delay = event.slot;
      }
      ++m.played_slots;
      track.viewer_timeline.push_back(viewer);
      for (int l = 0; l <= target && l < profile_.layer_count; ++l) {
        ++m.demanded_per_layer[static_cast<std::size_t>(l)];
        if (l <= viewer) {
          ++m.delivered_ok_per_layer[static_cast<std::size_t>(l)];
        }
      }
      if (event.chunk_slot >= 0 && event.chunk_slot < profile_.total_slots) {
        const std::uint32_t mask =
            track.on_time[static_cast<std::size_t>(event.chunk_slot)];
        for (int l = viewer + 1; l < profile_.layer_count; ++l) {
          if ((mask >> l) & 1u) ++m.useless_chunks;
        }
      }
      break;
    }
    case EventKind::Stall:
      track.stall_slots.push_back(event.slot);
      break;
  }
}

void MetricsAccumulator::finish() {
  if (finished_) throw std::logic_error("metrics: finish() called twice");
  finished_ = true;
  peers_.clear();
  for (PeerTrack& track : tracks_) {
    PeerMetrics& m = track.metrics;

    // Step-function integration of download capacity over the run.
    for (std::size_t i = 0; i < track.capacity_points.size(); ++i) {
      const Slot from = track.capacity_points[i].first;
      const Slot to = (i + 1 < track.capacity_points.size())
                          ? track.capacity_points[i + 1].first
                          : duration_;
      m.capacity_kbit += track.capacity_points[i].second *
                         profile_.chunk_duration_s *
                         static_cast<double>(to - from);
    }

    auto [events, durations] = stall_stats(track.stall_slots);
    m.stall_events = events;
    m.stall_durations = std::move(durations);
    m.layer_changes = layer_changes(track.viewer_timeline);
    if (!track.played_any) m.startup_delay = duration_;

    m.requested_layers = 0;
    m.fully_delivered_layers = 0;
    for (int l = 0; l < profile_.layer_count; ++l) {
      const std::int64_t demanded =
          m.demanded_per_layer[static_cast<std::size_t>(l)];
      if (demanded == 0) continue;
      ++m.requested_layers;
      if (m.delivered_ok_per_layer[static_cast<std::size_t>(l)] == demanded) {
        ++m.fully_delivered_layers;
      }
    }
    peers_.push_back(m);
  }
}

RunMetrics MetricsAccumulator::run_metrics() const {
  if (!finished_) throw std::logic_error("metrics: run_metrics before finish");
  RunMetrics run;
  if (peers_.empty()) return run;

  double delivered = 0.0;
  double capacity = 0.0;
  double stall_duration_sum = 0.0;
  std::int64_t stall_count = 0;
  for (const PeerMetrics& m : peers_) {
    run.layer_changes_mean += m.layer_changes;
    run.layer_changes_max =
        std::max(run.layer_changes_max, static_cast<double>(m.layer_changes));
    run.stall_events_mean += m.stall_events;
    for (std::int64_t d : m.stall_durations) {
      stall_duration_sum += static_cast<double>(d);
      run.stall_duration_max =
          std::max(run.stall_duration_max, static_cast<double>(d));
      ++stall_count;
    }
    delivered += m.delivered_kbit;
    capacity += m.capacity_kbit;
    run.useless_chunk_ratio += m.useless_ratio();
    run.late_arrival_ratio += m.late_ratio();
    run.relative_received_layer_ratio += m.relative_received_layer_ratio();
  }
  const double n = static_cast<double>(peers_.size());
  run.layer_changes_mean /= n;
  run.stall_events_mean /= n;
  run.stall_duration_mean =
      stall_count == 0 ? 0.0 : stall_duration_sum / static_cast<double>(stall_count);
  run.bandwidth_utilization = bandwidth_utilization(delivered, capacity);
  run.useless_chunk_ratio /= n;
  run.late_arrival_ratio /= n;
  run.relative_received_layer_ratio /= n;

  run.delivery_ratio_per_layer.assign(
      static_cast<std::size_t>(profile_.layer_count), 1.0);
  for (int l = 0; l < profile_.layer_count; ++l) {
    double sum = 0.0;
    int eligible = 0;
    for (const PeerMetrics& m : peers_) {
      const std::int64_t demanded =
          m.demanded_per_layer[static_cast<std::size_t>(l)];
      if (demanded == 0) continue;
      sum += static_cast<double>(
                 m.delivered_ok_per_layer[static_cast<std::size_t>(l)]) /
             static_cast<double>(demanded);
      ++eligible;
    }
    if (eligible > 0) {
      run.delivery_ratio_per_layer[static_cast<std::size_t>(l)] =
          sum / static_cast<double>(eligible);
    }
  }
  return run;
}

std::pair<RunMetrics, std::vector<PeerMetrics>> compute_metrics(
    const SimEventLog& log, const VideoProfile& profile,
    const std::vector<PeerId>& receivers, Slot duration) {
  MetricsAccumulator acc(profile, receivers, duration);
  for (const SimEvent& e : log.events) acc.on_event(e);
  acc.finish();
  return {acc.run_metrics(), acc.peers()};
}

}  // namespace layerstream
