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
#include <map>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "layerstream/event_log.hpp"
#include "layerstream/forecast.hpp"
#include "layerstream/metrics.hpp"
#include "layerstream/scheduler.hpp"
#include "layerstream/sliding_window.hpp"
#include "layerstream/smoother.hpp"
#include "layerstream/video_profile.hpp"

namespace layerstream {

struct BandwidthClass {
  double fraction = 0.0;
  double down_kbps = 0.0;
};

// Multiplicative capacity scaling applied to every receiver each
// interval_slots, factor drawn per peer per event; the cumulative scale is
// clamped to [min_scale, max_scale] of the peer's base capacity.
struct BandwidthChangeSpec {
  Slot interval_slots = 0;  // 0 disables
  std::vector<double> factors;
  double min_scale = 0.25;
  double max_scale = 4.0;
};

struct OverlayConfig {
  int receiver_count = 1;  // peer 0 is the source, receivers are 1..N
  int degree = 1;          // links each joining receiver opens
  int max_degree = 30;
  std::vector<BandwidthClass> classes;  // exact largest-remainder split
  double uniform_min_kbps = 0.0;        // used when classes is empty
  double uniform_max_kbps = 0.0;
  double upload_ratio = 0.5;     // upload = ratio * download
  double source_upload_kbps = 0.0;  // 0 -> twice the full stream rate
  Slot gossip_period = 1;
  Slot scheduling_period = 1;
  Slot latency_slots = 0;
  // Consumed slots a peer keeps advertising so lagging neighbors can still
  // fetch them; -1 keeps the whole history (fine at desk scale).
  Slot retention_slots = -1;
  // Receivers tune in at seeded slots within [0, join_window_slots); 0
  // starts everyone together. The overlay itself stays static.
  Slot join_window_slots = 0;
  BandwidthChangeSpec change;

  void validate() const;
};

// Receiver download capacity driven by an external profile instead of the
// class mix: a trace file or a seeded random walk.
struct TraceSpec {
  enum class Kind { None, File, Walk };
  Kind kind = Kind::None;
  std::string file;
  double walk_min_kbps = 100.0;
  double walk_max_kbps = 900.0;
  double walk_step_kbps = 200.0;  // max +- change per event
  Slot walk_interval_slots = 10;
  double walk_start_kbps = 500.0;
};

enum class SchedulerKind { Gap, Random, Lrf, RoundRobin, LayerP2P };

const char* scheduler_kind_name(SchedulerKind kind);
const char* smoothing_strategy_name(SmoothingStrategy strategy);

struct PeerSpec {
  PeerId id = 0;
  bool source = false;
  double down_kbps = 0.0;
  double up_kbps = 0.0;
  std::vector<PeerId> neighbors;
};

struct OverlayState {
  std::vector<PeerSpec> peers;  // index == id; 0 is the source

  // Edge list `a b` per line, for inspection.
  std::string edge_list() const;
};

// Deterministic for a given (config, seed); guarantees every peer at least
// one neighbor and a path to the source. Throws on impossible degree
// constraints.
OverlayState build_overlay(const OverlayConfig& config,
                           const VideoProfile& profile, std::uint64_t seed);

struct SimSetup {
  VideoProfile profile;
  OverlayConfig overlay;
  SmootherConfig smoother;
  SchedulerKind scheduler = SchedulerKind::Gap;
  PriorityParams priority;
  WindowConfig window;
  Slot duration = 0;
  TraceSpec trace;
  // Scale the per-neighbor capacity estimate by observed reliability (the
  // assignment mechanism's "remaining upload" estimate).
  bool load_aware_capacity = true;

  void validate() const;
};

struct RunResult {
  SimEventLog log;
  RunMetrics metrics;
  std::vector<PeerMetrics> peer_metrics;
  std::vector<PeerId> receivers;
};

// Discrete-time mesh-pull simulator. One step() is one slot: bandwidth
// events, buffer-map gossip, smoothing, scheduling, FCFS delivery under
// upload/download budgets, then playback.
class Simulation {
 public:
  Simulation(SimSetup setup, std::uint64_t seed);

  // Advances one slot and returns the events it recorded.
  std::vector<SimEvent> step();

  RunResult finish();

  Slot now() const { return slot_; }
  const OverlayState& overlay() const { return overlay_; }
  const SimEventLog& log() const { return log_; }
  const Smoother& smoother_of(PeerId peer) const;
  const SlidingWindow& window_of(PeerId peer) const;

 private:
  struct Receiver {
    PeerId id = 0;
    std::unique_ptr<SlidingWindow> window;
    std::unique_ptr<Smoother> smoother;
    BandwidthTrace measured;
    std::map<PeerId, BufferMap> neighbor_maps;
    std::map<PeerId, ReliabilityTracker> reliability;
    std::map<PeerId, std::pair<int, int>> period_counts;  // issued, fulfilled
    Slot join_slot = 0;
    int target = 0;
    int rr_rotation = 0;
    int last_logged_target = -1000;
    double down_kbps = 0.0;
    double base_down_kbps = 0.0;
    double scale = 1.0;
    double slot_down_budget_kbit = 0.0;

    bool active(Slot t) const { return t >= join_slot; }
  };

  struct Pending {
    Slot enqueued = 0;
    PeerId receiver = 0;
    ChunkId chunk;
    int seq = 0;
    double priority = 0.0;
  };

  struct Sender {
    std::vector<Pending> queue;
  };

  struct InFlight {
    Slot arrives = 0;
    PeerId receiver = 0;
    PeerId sender = 0;
    ChunkId chunk;
  };

  void emit(SimEvent event);
  void apply_bandwidth(Slot t);
  void gossip(Slot t);
  void smooth(Slot t);
  void schedule(Slot t);
  void deliver(Slot t);
  void arrive(Slot t, PeerId receiver, PeerId sender, ChunkId chunk);
  void playback(Slot t);
  double upload_kbps(PeerId peer) const;

  Receiver* receiver_by_id(PeerId peer);

  SimSetup setup_;
  OverlayState overlay_;
  std::vector<Receiver> receivers_;
  std::vector<int> receiver_index_;  // peer id -> index into receivers_, -1
  std::vector<Sender> senders_;  // indexed by peer id
  std::vector<InFlight> in_flight_;
  std::vector<double> trace_values_;  // per-slot receiver capacity (traces)
  SimEventLog log_;
  MetricsAccumulator accumulator_;
  std::mt19937_64 rng_sched_;
  std::mt19937_64 rng_change_;
  Slot slot_ = 0;
  bool finished_ = false;
};

// Builds, steps `setup.duration` slots, and computes metrics.
RunResult run_simulation(const SimSetup& setup, std::uint64_t seed);

}  // namespace layerstream
