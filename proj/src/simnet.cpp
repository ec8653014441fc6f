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

#include "layerstream/simnet.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace layerstream {

namespace {

constexpr std::uint64_t kOverlaySeedSalt = 0x7f4a7c15ull;
constexpr std::uint64_t kSchedSeedSalt = 0x1b873593ull;
constexpr std::uint64_t kChangeSeedSalt = 0xcc9e2d51ull;
constexpr std::uint64_t kWalkSeedSalt = 0x85ebca6bull;
constexpr std::uint64_t kJoinSeedSalt = 0xc2b2ae35ull;

}  // namespace

const char* scheduler_kind_name(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::Gap: return "gap";
    case SchedulerKind::Random: return "rnd";
    case SchedulerKind::Lrf: return "lrf";
    case SchedulerKind::RoundRobin: return "rr";
    case SchedulerKind::LayerP2P: return "layerp2p";
  }
  return "?";
}

const char* smoothing_strategy_name(SmoothingStrategy strategy) {
  switch (strategy) {
    case SmoothingStrategy::Raw: return "raw";
    case SmoothingStrategy::Amplitude: return "amplitude";
    case SmoothingStrategy::Frequency: return "frequency";
    case SmoothingStrategy::Hybrid: return "hybrid";
  }
  return "?";
}

void OverlayConfig::validate() const {
  if (receiver_count < 1) {
    throw std::invalid_argument("overlay: need at least one receiver");
  }
  if (degree < 1) throw std::invalid_argument("overlay: degree must be >= 1");
  if (max_degree < degree) {
    throw std::invalid_argument("overlay: max_degree below degree");
  }
  if (!classes.empty()) {
    double sum = 0.0;
    for (const auto& c : classes) {
      if (c.fraction < 0.0 || c.down_kbps <= 0.0) {
        throw std::invalid_argument("overlay: bad bandwidth class");
      }
      sum += c.fraction;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      throw std::invalid_argument("overlay: class fractions must sum to 1");
    }
  } else if (uniform_min_kbps > 0.0 || uniform_max_kbps > 0.0) {
    if (uniform_min_kbps <= 0.0 || uniform_max_kbps < uniform_min_kbps) {
      throw std::invalid_argument("overlay: bad uniform bandwidth range");
    }
  }
  if (upload_ratio <= 0.0) {
    throw std::invalid_argument("overlay: upload ratio must be > 0");
  }
  if (gossip_period < 1 || scheduling_period < 1) {
    throw std::invalid_argument("overlay: periods must be >= 1 slot");
  }
  if (latency_slots < 0) {
    throw std::invalid_argument("overlay: latency must be >= 0");
  }
  if (join_window_slots < 0) {
    throw std::invalid_argument("overlay: join window must be >= 0");
  }
}

std::string OverlayState::edge_list() const {
  std::ostringstream out;
  for (const PeerSpec& p : peers) {
    for (PeerId n : p.neighbors) {
      if (p.id < n) out << p.id << ' ' << n << '\n';
    }
  }
  return out.str();
}

OverlayState build_overlay(const OverlayConfig& config,
                           const VideoProfile& profile, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed ^ kOverlaySeedSalt);

  const int receivers = config.receiver_count;
  OverlayState overlay;
  overlay.peers.resize(static_cast<std::size_t>(receivers) + 1);

  // Download capacities: exact largest-remainder class counts, assigned to
  // receiver ids in a shuffled order, or per-receiver uniform draws.
  std::vector<double> down(static_cast<std::size_t>(receivers), 0.0);
  if (!config.classes.empty()) {
    std::vector<int> counts(config.classes.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    int assigned = 0;
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
      const double exact = config.classes[c].fraction * receivers;
      counts[c] = static_cast<int>(exact);
      assigned += counts[c];
      remainders.push_back({exact - counts[c], c});
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first > b.first;
                return a.second < b.second;
              });
    for (int i = 0; i < receivers - assigned; ++i) {
      ++counts[remainders[static_cast<std::size_t>(i) % remainders.size()]
                   .second];
    }
    std::vector<int> order(static_cast<std::size_t>(receivers));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    int at = 0;
    for (std::size_t c = 0; c < config.classes.size(); ++c) {
      for (int k = 0; k < counts[c]; ++k) {
        down[static_cast<std::size_t>(order[static_cast<std::size_t>(at++)])] =
            config.classes[c].down_kbps;
      }
    }
  } else if (config.uniform_min_kbps > 0.0) {
    std::uniform_real_distribution<double> dist(config.uniform_min_kbps,
                                                config.uniform_max_kbps);
    for (double& d : down) d = dist(rng);
  } else {
    throw std::invalid_argument("overlay: no bandwidth model configured");
  }

  const double stream_rate = profile.cumulative_rate(profile.layer_count - 1);
  PeerSpec& source = overlay.peers[0];
  source.id = 0;
  source.source = true;
  source.down_kbps = 0.0;
  source.up_kbps = config.source_upload_kbps > 0.0 ? config.source_upload_kbps
                                                   : 2.0 * stream_rate;

  for (int i = 1; i <= receivers; ++i) {
    PeerSpec& p = overlay.peers[static_cast<std::size_t>(i)];
    p.id = static_cast<PeerId>(i);
    p.source = false;
    p.down_kbps = down[static_cast<std::size_t>(i - 1)];
    p.up_kbps = p.down_kbps * config.upload_ratio;
  }

  // Each receiver, in id order, opens up to `degree` links to earlier
  // peers that still have room; attaching to an earlier peer keeps the
  // graph connected to the source.
  std::vector<int> deg(overlay.peers.size(), 0);
  for (int i = 1; i <= receivers; ++i) {
    std::vector<PeerId> candidates;
    for (int j = 0; j < i; ++j) {
      if (deg[static_cast<std::size_t>(j)] < config.max_degree) {
        candidates.push_back(static_cast<PeerId>(j));
      }
    }
    if (candidates.empty()) {
      throw std::invalid_argument("overlay: impossible degree constraints");
    }
    std::shuffle(candidates.begin(), candidates.end(), rng);
    const int links =
        std::min<int>(config.degree, static_cast<int>(candidates.size()));
    for (int k = 0; k < links; ++k) {
      const PeerId other = candidates[static_cast<std::size_t>(k)];
      overlay.peers[static_cast<std::size_t>(i)].neighbors.push_back(other);
      overlay.peers[static_cast<std::size_t>(other)].neighbors.push_back(
          static_cast<PeerId>(i));
      ++deg[static_cast<std::size_t>(i)];
      ++deg[static_cast<std::size_t>(other)];
    }
  }
  for (PeerSpec& p : overlay.peers) {
    std::sort(p.neighbors.begin(), p.neighbors.end());
  }
  return overlay;
}

void SimSetup::validate() const {
  profile.validate();
  overlay.validate();
  smoother.validate();
  priority.validate();
  if (duration < 1) throw std::invalid_argument("sim: duration must be >= 1");
  if (duration > profile.total_slots) {
    throw std::invalid_argument("sim: duration exceeds the stream length");
  }
}

Simulation::Simulation(SimSetup setup, std::uint64_t seed)
    : setup_(std::move(setup)),
      overlay_(build_overlay(setup_.overlay, setup_.profile, seed)),
      accumulator_(setup_.profile, {}, 0),
      rng_sched_(seed ^ kSchedSeedSalt),
      rng_change_(seed ^ kChangeSeedSalt) {
  setup_.validate();

  std::vector<PeerId> receiver_ids;
  for (const PeerSpec& p : overlay_.peers) {
    if (!p.source) receiver_ids.push_back(p.id);
  }
  accumulator_ =
      MetricsAccumulator(setup_.profile, receiver_ids, setup_.duration);

  senders_.resize(overlay_.peers.size());
  receivers_.resize(receiver_ids.size());
  receiver_index_.assign(overlay_.peers.size(), -1);
  std::mt19937_64 join_rng(seed ^ kJoinSeedSalt);
  for (std::size_t i = 0; i < receiver_ids.size(); ++i) {
    Receiver& r = receivers_[i];
    r.id = receiver_ids[i];
    r.window = std::make_unique<SlidingWindow>(setup_.profile, setup_.window);
    r.smoother = std::make_unique<Smoother>(setup_.smoother, setup_.profile);
    r.base_down_kbps = overlay_.peers[static_cast<std::size_t>(r.id)].down_kbps;
    r.down_kbps = r.base_down_kbps;
    if (setup_.overlay.join_window_slots > 0) {
      std::uniform_int_distribution<Slot> dist(
          0, setup_.overlay.join_window_slots - 1);
      r.join_slot = dist(join_rng);
    }
    receiver_index_[static_cast<std::size_t>(r.id)] = static_cast<int>(i);
  }

  // Per-slot capacity values for trace-driven runs.
  if (setup_.trace.kind == TraceSpec::Kind::File) {
    const BandwidthTrace trace = load_trace(setup_.trace.file);
    if (trace.samples.empty()) {
      throw std::runtime_error("sim: empty bandwidth trace");
    }
    trace_values_.resize(static_cast<std::size_t>(setup_.duration));
    std::size_t at = 0;
    double value = trace.samples.front().kbps;
    for (Slot t = 0; t < setup_.duration; ++t) {
      while (at < trace.samples.size() && trace.samples[at].slot <= t) {
        value = trace.samples[at].kbps;
        ++at;
      }
      trace_values_[static_cast<std::size_t>(t)] = value;
    }
  } else if (setup_.trace.kind == TraceSpec::Kind::Walk) {
    std::mt19937_64 walk_rng(seed ^ kWalkSeedSalt);
    std::uniform_real_distribution<double> delta(-setup_.trace.walk_step_kbps,
                                                 setup_.trace.walk_step_kbps);
    trace_values_.resize(static_cast<std::size_t>(setup_.duration));
    double value = setup_.trace.walk_start_kbps;
    for (Slot t = 0; t < setup_.duration; ++t) {
      if (t > 0 && setup_.trace.walk_interval_slots > 0 &&
          t % setup_.trace.walk_interval_slots == 0) {
        value = std::clamp(value + delta(walk_rng), setup_.trace.walk_min_kbps,
                           setup_.trace.walk_max_kbps);
      }
      trace_values_[static_cast<std::size_t>(t)] = value;
    }
  }
}

const Smoother& Simulation::smoother_of(PeerId peer) const {
  for (const Receiver& r : receivers_) {
    if (r.id == peer) return *r.smoother;
  }
  throw std::invalid_argument("sim: unknown receiver");
}

const SlidingWindow& Simulation::window_of(PeerId peer) const {
  for (const Receiver& r : receivers_) {
    if (r.id == peer) return *r.window;
  }
  throw std::invalid_argument("sim: unknown receiver");
}

void Simulation::emit(SimEvent event) {
  log_.append(event);
  accumulator_.on_event(event);
}

double Simulation::upload_kbps(PeerId peer) const {
  return overlay_.peers[static_cast<std::size_t>(peer)].up_kbps;
}

void Simulation::apply_bandwidth(Slot t) {
  if (!trace_values_.empty()) {
    const double value = trace_values_[static_cast<std::size_t>(t)];
    for (Receiver& r : receivers_) {
      const bool changed = r.down_kbps != value;
      r.down_kbps = value;
      overlay_.peers[static_cast<std::size_t>(r.id)].up_kbps =
          value * setup_.overlay.upload_ratio;
      if (r.active(t) && (t == r.join_slot || changed)) {
        emit({t, r.id, EventKind::Capacity, -1, -1, 0, false, value});
      }
    }
    return;
  }

  const BandwidthChangeSpec& change = setup_.overlay.change;
  const bool event_due = change.interval_slots > 0 && t > 0 &&
                         t % change.interval_slots == 0 &&
                         !change.factors.empty();
  for (Receiver& r : receivers_) {
    if (event_due) {
      std::uniform_int_distribution<std::size_t> pick(
          0, change.factors.size() - 1);
      const double factor = change.factors[pick(rng_change_)];
      r.scale = std::clamp(r.scale * factor, change.min_scale,
                           change.max_scale);
    }
    r.down_kbps = r.base_down_kbps * r.scale;
    overlay_.peers[static_cast<std::size_t>(r.id)].up_kbps =
        r.down_kbps * setup_.overlay.upload_ratio;
    if (r.active(t) && (t == r.join_slot || event_due)) {
      emit({t, r.id, EventKind::Capacity, -1, -1, 0, false, r.down_kbps});
    }
  }
}

void Simulation::gossip(Slot t) {
  if (t % setup_.overlay.gossip_period != 0) return;

  // One snapshot per peer, shared by every neighbor that sees it. Peers
  // advertise their forward window plus the retained history behind the
  // playhead, so neighbors that fell behind still see usable suppliers.
  std::vector<BufferMap> snapshots(overlay_.peers.size());
  BufferMap source_map(0, 0, setup_.profile.layer_count,
                       static_cast<int>(setup_.profile.total_slots));
  std::fill(source_map.payload.begin(), source_map.payload.end(), 0xff);
  snapshots[0] = std::move(source_map);
  const Slot retention = setup_.overlay.retention_slots;
  for (const Receiver& r : receivers_) {
    const Slot playhead = r.window->playhead();
    const Slot start =
        retention < 0 ? 0 : std::max<Slot>(0, playhead - retention);
    const Slot width = std::min<Slot>(playhead - start +
                                          r.window->window_width(),
                                      setup_.profile.total_slots - start);
    snapshots[static_cast<std::size_t>(r.id)] =
        r.window->buffer_map_range(r.id, start, std::max<Slot>(width, 0));
  }

  for (Receiver& r : receivers_) {
    for (PeerId n :
         overlay_.peers[static_cast<std::size_t>(r.id)].neighbors) {
      r.neighbor_maps[n] = snapshots[static_cast<std::size_t>(n)];
    }
  }
}

void Simulation::smooth(Slot t) {
  for (Receiver& r : receivers_) {
    if (!r.active(t)) continue;
    r.target = r.smoother->select(t, *r.window, r.measured);
    if (r.target != r.last_logged_target) {
      emit({t, r.id, EventKind::Select, -1, -1, 0, false,
            static_cast<double>(r.target)});
      r.last_logged_target = r.target;
    }
  }
}

void Simulation::schedule(Slot t) {
  if (t % setup_.overlay.scheduling_period != 0) return;
  const double period_s = setup_.profile.chunk_duration_s *
                          static_cast<double>(setup_.overlay.scheduling_period);
  const double base_chunk_kbit = setup_.profile.chunk_kbit(0);

  for (Receiver& r : receivers_) {
    if (!r.active(t)) continue;
    // Close the previous period's reliability window.
    for (auto& [neighbor, counts] : r.period_counts) {
      r.reliability[neighbor].record_period(counts.first, counts.second);
    }
    r.period_counts.clear();

    // Requests not delivered last period re-enter the missing set; drop
    // their stale queue entries so no chunk has two pending suppliers.
    for (Sender& sender : senders_) {
      std::erase_if(sender.queue,
                    [&](const Pending& p) { return p.receiver == r.id; });
    }

    if (r.window->finished()) continue;

    std::vector<ChunkRequest> requests;
    const Slot playhead = r.window->playhead();
    for (ChunkId chunk : r.window->missing_chunks(r.target)) {
      ChunkRequest req;
      req.chunk = chunk;
      req.deadline = t + (chunk.slot - playhead);
      req.priority = priority(chunk, req.deadline, t, setup_.priority);
      requests.push_back(req);
    }

    // Surplus forecast bandwidth prefetches next-window chunks, lowest
    // layer first, earliest slot first.
    if (setup_.smoother.strategy != SmoothingStrategy::Raw &&
        setup_.scheduler != SchedulerKind::LayerP2P &&
        !r.smoother->decisions().empty()) {
      const double b_hat = r.smoother->decisions().back().b_hat;
      double surplus =
          std::max(0.0, b_hat - setup_.profile.cumulative_rate(r.target)) *
          period_s;
      const int layer_cap = setup_.profile.layer_count - 1;
      const Slot begin = r.window->prefetch_begin();
      const Slot end =
          std::min<Slot>(r.window->prefetch_end(), setup_.profile.total_slots);
      for (int l = 0; l <= layer_cap && surplus > 0.0; ++l) {
        const double kbit = setup_.profile.chunk_kbit(l);
        for (Slot s = begin; s < end && surplus >= kbit; ++s) {
          if (r.window->held(ChunkId{s, l})) continue;
          ChunkRequest req;
          req.chunk = ChunkId{s, l};
          req.deadline = t + (s - playhead);
          req.priority = priority(req.chunk, req.deadline, t, setup_.priority);
          requests.push_back(req);
          surplus -= kbit;
        }
      }
    }
    if (requests.empty()) continue;

    std::vector<NeighborView> views;
    for (PeerId n :
         overlay_.peers[static_cast<std::size_t>(r.id)].neighbors) {
      auto map = r.neighbor_maps.find(n);
      if (map == r.neighbor_maps.end()) continue;
      NeighborView view;
      view.id = n;
      view.map = map->second;
      auto tracker = r.reliability.find(n);
      view.reliability =
          tracker == r.reliability.end() ? 1.0 : tracker->second.value();
      // The neighbor's remaining upload is not observable directly. The
      // assignment mechanism estimates it from its fulfilled-over-issued
      // history; the reference schedulers have no such estimator and use
      // the nominal link.
      double remaining_upload = upload_kbps(n);
      if (setup_.load_aware_capacity &&
          setup_.scheduler == SchedulerKind::Gap) {
        remaining_upload *= std::max(view.reliability, 0.1);
      }
      view.capacity = static_cast<std::int64_t>(
          std::min(r.down_kbps, remaining_upload) * period_s /
              base_chunk_kbit +
          1e-9);
      views.push_back(std::move(view));
    }
    if (views.empty()) continue;

    const AssignmentMatrix matrix = build_matrix(std::move(requests), views);
    Schedule schedule;
    switch (setup_.scheduler) {
      case SchedulerKind::Gap:
        schedule = gap_schedule(matrix);
        break;
      case SchedulerKind::Random:
        schedule = baseline_schedule(BaselineKind::Random, matrix, rng_sched_);
        break;
      case SchedulerKind::Lrf:
        schedule = baseline_schedule(BaselineKind::Lrf, matrix, rng_sched_);
        break;
      case SchedulerKind::RoundRobin:
        schedule = baseline_schedule(BaselineKind::RoundRobin, matrix,
                                     rng_sched_, 0, r.rr_rotation++);
        break;
      case SchedulerKind::LayerP2P:
        schedule = baseline_schedule(BaselineKind::LayerP2P, matrix,
                                     rng_sched_, r.target - 1);
        break;
    }

    std::vector<Schedule::Assignment> ordered = schedule.assignments;
    std::sort(ordered.begin(), ordered.end(),
              [](const Schedule::Assignment& a, const Schedule::Assignment& b) {
                if (a.priority != b.priority) return a.priority > b.priority;
                if (a.chunk.layer != b.chunk.layer) {
                  return a.chunk.layer < b.chunk.layer;
                }
                return a.chunk.slot < b.chunk.slot;
              });
    int seq = 0;
    for (const Schedule::Assignment& a : ordered) {
      senders_[static_cast<std::size_t>(a.neighbor)].queue.push_back(
          {t, r.id, a.chunk, seq++, a.priority});
      ++r.period_counts[a.neighbor].first;
      emit({t, r.id, EventKind::Request, a.chunk.slot, a.chunk.layer,
            a.neighbor, true, a.priority});
    }
  }
}

Simulation::Receiver* Simulation::receiver_by_id(PeerId peer) {
  if (peer >= receiver_index_.size()) return nullptr;
  const int index = receiver_index_[static_cast<std::size_t>(peer)];
  return index < 0 ? nullptr : &receivers_[static_cast<std::size_t>(index)];
}

void Simulation::arrive(Slot t, PeerId receiver, PeerId sender, ChunkId chunk) {
  Receiver* r = receiver_by_id(receiver);
  if (r == nullptr) return;
  switch (r->window->insert(chunk, t)) {
    case SlidingWindow::Insert::OnTime:
      emit({t, receiver, EventKind::Deliver, chunk.slot, chunk.layer, sender,
            true, 0.0});
      break;
    case SlidingWindow::Insert::Late:
      emit({t, receiver, EventKind::Late, chunk.slot, chunk.layer, sender,
            true, 0.0});
      break;
    case SlidingWindow::Insert::Duplicate:
      break;  // possible only with link latency; bandwidth already spent
  }
}

void Simulation::deliver(Slot t) {
  // Arrivals from earlier slots (non-zero link latency).
  if (!in_flight_.empty()) {
    std::vector<InFlight> still;
    for (const InFlight& f : in_flight_) {
      if (f.arrives <= t) {
        arrive(t, f.receiver, f.sender, f.chunk);
      } else {
        still.push_back(f);
      }
    }
    in_flight_ = std::move(still);
  }

  for (Receiver& r : receivers_) {
    r.slot_down_budget_kbit = r.down_kbps * setup_.profile.chunk_duration_s;
  }

  for (PeerId sender_id = 0;
       sender_id < static_cast<PeerId>(senders_.size()); ++sender_id) {
    Sender& sender = senders_[static_cast<std::size_t>(sender_id)];
    if (sender.queue.empty()) continue;
    double budget =
        upload_kbps(sender_id) * setup_.profile.chunk_duration_s;

    // Requests of one scheduling period arrive together; serve them most
    // urgent first, with the enqueue order as the deterministic tie-break.
    std::vector<int> order(sender.queue.size());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) {
      order[static_cast<std::size_t>(i)] = i;
    }
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      const Pending& pa = sender.queue[static_cast<std::size_t>(a)];
      const Pending& pb = sender.queue[static_cast<std::size_t>(b)];
      if (pa.enqueued != pb.enqueued) return pa.enqueued < pb.enqueued;
      if (pa.priority != pb.priority) return pa.priority > pb.priority;
      if (pa.receiver != pb.receiver) return pa.receiver < pb.receiver;
      return pa.seq < pb.seq;
    });

    std::vector<char> served(sender.queue.size(), 0);
    for (int index : order) {
      const Pending& p = sender.queue[static_cast<std::size_t>(index)];
      const double kbit = setup_.profile.chunk_kbit(p.chunk.layer);
      Receiver* receiver = receiver_by_id(p.receiver);
      if (receiver == nullptr || budget + 1e-9 < kbit ||
          receiver->slot_down_budget_kbit + 1e-9 < kbit) {
        continue;
      }
      served[static_cast<std::size_t>(index)] = 1;
      budget -= kbit;
      receiver->slot_down_budget_kbit -= kbit;
      ++receiver->period_counts[sender_id].second;
      if (setup_.overlay.latency_slots == 0) {
        arrive(t, p.receiver, sender_id, p.chunk);
      } else {
        in_flight_.push_back(
            {t + setup_.overlay.latency_slots, p.receiver, sender_id, p.chunk});
      }
    }
    std::vector<Pending> remaining;
    remaining.reserve(sender.queue.size());
    for (std::size_t i = 0; i < sender.queue.size(); ++i) {
      if (!served[i]) remaining.push_back(sender.queue[i]);
    }
    sender.queue = std::move(remaining);
  }
}

void Simulation::playback(Slot t) {
  for (Receiver& r : receivers_) {
    if (!r.active(t)) continue;
    const PlaybackReport report = r.window->advance(1);
    for (const PlaybackReport::Entry& entry : report.entries) {
      if (entry.kind == PlaybackReport::Kind::Played) {
        const int viewer = std::max(0, std::min(r.target, entry.quality));
        emit({t, r.id, EventKind::Play, entry.stream_slot, viewer, 0, false,
              static_cast<double>(r.target)});
      } else if (entry.kind == PlaybackReport::Kind::Stalled) {
        emit({t, r.id, EventKind::Stall, entry.stream_slot, -1, 0, false,
              0.0});
      }
    }
  }
}

std::vector<SimEvent> Simulation::step() {
  if (finished_) throw std::logic_error("sim: stepping a finished run");
  const Slot t = slot_;
  const std::size_t before = log_.events.size();

  apply_bandwidth(t);
  gossip(t);
  smooth(t);
  schedule(t);
  deliver(t);
  playback(t);
  for (Receiver& r : receivers_) {
    if (r.active(t)) r.measured.append(t, r.down_kbps);
  }

  ++slot_;
  return {log_.events.begin() + static_cast<std::ptrdiff_t>(before),
          log_.events.end()};
}

RunResult Simulation::finish() {
  if (finished_) throw std::logic_error("sim: finish() called twice");
  finished_ = true;
  accumulator_.finish();
  RunResult result;
  result.metrics = accumulator_.run_metrics();
  result.peer_metrics = accumulator_.peers();
  for (const PeerSpec& p : overlay_.peers) {
    if (!p.source) result.receivers.push_back(p.id);
  }
  result.log = std::move(log_);
  return result;
}

RunResult run_simulation(const SimSetup& setup, std::uint64_t seed) {
  Simulation sim(setup, seed);
  for (Slot t = 0; t < setup.duration; ++t) sim.step();
  return sim.finish();
}

}  // namespace layerstream
