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

#include <doctest.h>

#include <vector>

#include "layerstream/metrics.hpp"

using namespace layerstream;

namespace {

SimEvent capacity(Slot slot, PeerId peer, double kbps) {
  return {slot, peer, EventKind::Capacity, -1, -1, 0, false, kbps};
}

SimEvent deliver(Slot slot, PeerId peer, Slot chunk_slot, int layer) {
  return {slot, peer, EventKind::Deliver, chunk_slot, layer, 0, true, 0.0};
}

SimEvent late(Slot slot, PeerId peer, Slot chunk_slot, int layer) {
  return {slot, peer, EventKind::Late, chunk_slot, layer, 0, true, 0.0};
}

SimEvent play(Slot slot, PeerId peer, Slot chunk_slot, int viewer,
              int target) {
  return {slot, peer, EventKind::Play, chunk_slot, viewer, 0, false,
          static_cast<double>(target)};
}

}  // namespace

TEST_CASE("layer changes counts timeline transitions") {
  CHECK(layer_changes(std::vector<int>{2, 2, 2, 2}) == 0);
  CHECK(layer_changes(std::vector<int>{3, 1, 1, 1, 2, 2}) == 2);
  CHECK(layer_changes(std::vector<int>{}) == 0);
  CHECK(layer_changes(std::vector<int>{1}) == 0);
}

TEST_CASE("stall stats groups maximal runs") {
  {
    const auto [count, durations] = stall_stats(std::vector<Slot>{});
    CHECK(count == 0);
    CHECK(durations.empty());
  }
  {
    const auto [count, durations] =
        stall_stats(std::vector<Slot>{5, 6, 7, 20});
    CHECK(count == 2);
    REQUIRE(durations.size() == 2);
    CHECK(durations[0] == 3);
    CHECK(durations[1] == 1);
  }
  {
    // one starvation run spanning the whole playback
    std::vector<Slot> slots;
    for (Slot t = 3; t < 50; ++t) slots.push_back(t);
    const auto [count, durations] = stall_stats(slots);
    CHECK(count == 1);
    CHECK(durations[0] == 47);
  }
}

TEST_CASE("bandwidth utilization ratios") {
  CHECK(bandwidth_utilization(0.0, 1000.0) == doctest::Approx(0.0));
  CHECK(bandwidth_utilization(1000.0, 1000.0) == doctest::Approx(1.0));
  CHECK(bandwidth_utilization(100.0, 200.0) == doctest::Approx(0.5));
  CHECK(bandwidth_utilization(5.0, 0.0) == doctest::Approx(0.0));
}

TEST_CASE("accumulator: clean run has perfect ratios") {
  const VideoProfile profile = VideoProfile::uniform(2, 100.0, 1.0, 3);
  MetricsAccumulator acc(profile, {1}, 3);
  acc.on_event(capacity(0, 1, 500.0));
  for (Slot s = 0; s < 3; ++s) {
    acc.on_event(deliver(s, 1, s, 0));
    acc.on_event(deliver(s, 1, s, 1));
    acc.on_event(play(s, 1, s, 1, 1));
  }
  acc.finish();
  REQUIRE(acc.peers().size() == 1);
  const PeerMetrics& m = acc.peers()[0];
  CHECK(m.late_chunks == 0);
  CHECK(m.useless_chunks == 0);
  CHECK(m.layer_changes == 0);
  CHECK(m.stall_events == 0);
  CHECK(m.relative_received_layer_ratio() == doctest::Approx(1.0));

  const RunMetrics run = acc.run_metrics();
  CHECK(run.useless_chunk_ratio == doctest::Approx(0.0));
  CHECK(run.late_arrival_ratio == doctest::Approx(0.0));
  REQUIRE(run.delivery_ratio_per_layer.size() == 2);
  CHECK(run.delivery_ratio_per_layer[0] == doctest::Approx(1.0));
  CHECK(run.delivery_ratio_per_layer[1] == doctest::Approx(1.0));
  // 6 chunks of 100 kbit against 3 slots of 500 kbit
  CHECK(run.bandwidth_utilization == doctest::Approx(600.0 / 1500.0));
}

TEST_CASE("accumulator: on-time chunk above the consumed level is useless, "
          "not late") {
  const VideoProfile profile = VideoProfile::uniform(3, 100.0, 1.0, 2);
  MetricsAccumulator acc(profile, {1}, 2);
  acc.on_event(capacity(0, 1, 300.0));
  // slot 0: base and layer 2 arrive on time, layer 1 never does
  acc.on_event(deliver(0, 1, 0, 0));
  acc.on_event(deliver(0, 1, 0, 2));
  acc.on_event(play(0, 1, 0, 0, 2));
  acc.finish();
  const PeerMetrics& m = acc.peers()[0];
  CHECK(m.late_chunks == 0);
  CHECK(m.useless_chunks == 1);
  CHECK(m.useless_ratio() >= m.late_ratio());
}

TEST_CASE("accumulator: every chunk late gives late ratio one") {
  const VideoProfile profile = VideoProfile::uniform(2, 100.0, 1.0, 2);
  MetricsAccumulator acc(profile, {1}, 2);
  acc.on_event(capacity(0, 1, 200.0));
  for (Slot s = 0; s < 2; ++s) {
    for (int l = 0; l < 2; ++l) acc.on_event(late(s, 1, s, l));
  }
  acc.finish();
  CHECK(acc.peers()[0].late_ratio() == doctest::Approx(1.0));
  CHECK(acc.peers()[0].useless_ratio() == doctest::Approx(1.0));
}

TEST_CASE("accumulator: stall slots and startup delay") {
  const VideoProfile profile = VideoProfile::uniform(1, 100.0, 1.0, 10);
  MetricsAccumulator acc(profile, {1}, 10);
  acc.on_event(capacity(0, 1, 100.0));
  acc.on_event(play(2, 1, 0, 0, 0));     // started at slot 2
  acc.on_event({3, 1, EventKind::Stall, 1, -1, 0, false, 0.0});
  acc.on_event({4, 1, EventKind::Stall, 1, -1, 0, false, 0.0});
  acc.on_event(play(5, 1, 1, 0, 0));
  acc.finish();
  const PeerMetrics& m = acc.peers()[0];
  CHECK(m.startup_delay == 2);
  CHECK(m.stall_events == 1);
  REQUIRE(m.stall_durations.size() == 1);
  CHECK(m.stall_durations[0] == 2);
  CHECK(m.played_slots == 2);
}

TEST_CASE("accumulator: capacity integration uses the step function") {
  const VideoProfile profile = VideoProfile::uniform(1, 100.0, 1.0, 10);
  MetricsAccumulator acc(profile, {1}, 10);
  acc.on_event(capacity(0, 1, 100.0));
  acc.on_event(capacity(4, 1, 300.0));  // 4 slots at 100, 6 at 300
  acc.finish();
  CHECK(acc.peers()[0].capacity_kbit == doctest::Approx(4 * 100 + 6 * 300));
}

TEST_CASE("delivery ratios average only over eligible peers") {
  const VideoProfile profile = VideoProfile::uniform(2, 100.0, 1.0, 4);
  MetricsAccumulator acc(profile, {1, 2}, 4);
  acc.on_event(capacity(0, 1, 200.0));
  acc.on_event(capacity(0, 2, 200.0));
  // peer 1 demands both layers and gets them; peer 2 only ever plays base
  acc.on_event(deliver(0, 1, 0, 0));
  acc.on_event(deliver(0, 1, 0, 1));
  acc.on_event(play(0, 1, 0, 1, 1));
  acc.on_event(deliver(0, 2, 0, 0));
  acc.on_event(play(0, 2, 0, 0, 0));
  acc.finish();
  const RunMetrics run = acc.run_metrics();
  CHECK(run.delivery_ratio_per_layer[1] == doctest::Approx(1.0));
}
