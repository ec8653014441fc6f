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

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "layerstream/buffer_map.hpp"
#include "layerstream/sliding_window.hpp"
#include "layerstream/video_profile.hpp"

using namespace layerstream;

namespace {

VideoProfile profile8() { return VideoProfile::uniform(8, 100.0, 1.0, 400); }

WindowConfig window_cfg(Slot urgent, Slot playing = 0, Slot prefetch = 0) {
  WindowConfig cfg;
  cfg.playing_len = playing;
  cfg.urgent_len = urgent;
  cfg.prefetch_len = prefetch;
  return cfg;
}

// Reference enumeration of the urgent interval, independent of
// SlidingWindow's internals: walk every (slot, layer) cell and apply the
// filter rules directly.
std::vector<ChunkId> missing_by_enumeration(const SlidingWindow& window,
                                            int target,
                                            const std::set<ChunkId>& held) {
  std::vector<ChunkId> out;
  for (Slot s = window.urgent_begin(); s < window.urgent_end(); ++s) {
    if (s >= window.profile().total_slots) continue;
    for (int l = 0; l < window.profile().layer_count; ++l) {
      if (l > target) continue;
      if (held.count(ChunkId{s, l})) continue;
      if (s < window.playhead()) continue;  // deadline passed
      out.push_back(ChunkId{s, l});
    }
  }
  return out;
}

}  // namespace

TEST_CASE("max sustainable quality on uniform rates") {
  const VideoProfile p = profile8();
  CHECK(max_sustainable_quality(450.0, p) == 3);
  CHECK(max_sustainable_quality(0.0, p) == -1);
  CHECK(max_sustainable_quality(800.0, p) == 7);   // exact fit
  CHECK(max_sustainable_quality(799.9, p) == 6);
  CHECK(max_sustainable_quality(99.9, p) == -1);
}

TEST_CASE("max sustainable quality is monotone and tight") {
  const VideoProfile p = profile8();
  int prev = -1;
  for (double b = 0.0; b <= 1000.0; b += 7.0) {
    const int q = max_sustainable_quality(b, p);
    CHECK(q >= prev);
    prev = q;
    if (q >= 0) CHECK(p.cumulative_rate(q) <= b);
    if (q < p.layer_count - 1) CHECK(p.cumulative_rate(q + 1) > b);
  }
}

TEST_CASE("cumulative rate strictly increasing") {
  const VideoProfile p = VideoProfile::uniform(4, 250.0, 1.0, 100);
  for (int q = 0; q < p.layer_count - 1; ++q) {
    CHECK(p.cumulative_rate(q) < p.cumulative_rate(q + 1));
  }
  CHECK(p.cumulative_rate(-1) == 0.0);
}

TEST_CASE("profile validation rejects bad inputs") {
  VideoProfile p;
  p.layer_count = 0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = VideoProfile::uniform(2, 100.0, 1.0, 10);
  p.layer_rates_kbps[1] = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("missing chunks: empty holdings, full holdings, single gap") {
  const VideoProfile p = profile8();

  SUBCASE("nothing held, q=1, S_W=2") {
    SlidingWindow w(p, window_cfg(2));
    const auto missing = w.missing_chunks(1);
    const std::vector<ChunkId> expected = {
        {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    CHECK(missing == expected);
  }

  SUBCASE("full holdings yields nothing") {
    SlidingWindow w(p, window_cfg(3));
    for (Slot s = 0; s < 3; ++s) {
      for (int l = 0; l < p.layer_count; ++l) {
        w.insert(ChunkId{s, l}, 0);
      }
    }
    CHECK(w.missing_chunks(p.layer_count - 1).empty());
  }

  SUBCASE("q=-1 yields nothing") {
    SlidingWindow w(p, window_cfg(4));
    CHECK(w.missing_chunks(-1).empty());
  }

  SUBCASE("single gap matches reference enumeration") {
    SlidingWindow w(p, window_cfg(2));
    std::set<ChunkId> held;
    for (Slot s = 0; s < 2; ++s) {
      for (int l = 0; l <= 2; ++l) {
        if (s == 0 && l == 1) continue;  // the gap
        w.insert(ChunkId{s, l}, 0);
        held.insert(ChunkId{s, l});
      }
    }
    const auto missing = w.missing_chunks(2);
    CHECK(missing == missing_by_enumeration(w, 2, held));
    CHECK(std::find(missing.begin(), missing.end(), ChunkId{0, 1}) !=
          missing.end());
  }
}

TEST_CASE("missing chunks: property over random holdings") {
  const VideoProfile p = VideoProfile::uniform(4, 100.0, 1.0, 64);
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    SlidingWindow w(p, window_cfg(5, 0, 3));
    std::set<ChunkId> held;
    std::uniform_int_distribution<Slot> slot_dist(0, 20);
    std::uniform_int_distribution<int> layer_dist(0, 3);
    for (int k = 0; k < 30; ++k) {
      const ChunkId c{slot_dist(rng), layer_dist(rng)};
      if (w.insert(c, 0) == SlidingWindow::Insert::OnTime) held.insert(c);
    }
    const int target = layer_dist(rng) - 1;  // -1..3
    const auto missing = w.missing_chunks(target);
    CHECK(missing == missing_by_enumeration(w, target, held));
    for (const ChunkId& c : missing) {
      CHECK(c.layer <= target);
      CHECK(c.slot >= w.urgent_begin());
      CHECK(c.slot < w.urgent_end());
      CHECK(c.slot >= w.playhead());
    }
  }
}

TEST_CASE("decodability follows the layer dependency rule") {
  const VideoProfile p = profile8();
  SlidingWindow w(p, window_cfg(4));

  w.insert(ChunkId{0, 0}, 0);
  CHECK(w.decodable(ChunkId{0, 0}));

  // layer 2 held but layer 0 missing at slot 1
  w.insert(ChunkId{1, 2}, 0);
  CHECK_FALSE(w.decodable(ChunkId{1, 2}));

  // monotone: decodable at l implies decodable at every lower layer
  w.insert(ChunkId{2, 0}, 0);
  w.insert(ChunkId{2, 1}, 0);
  w.insert(ChunkId{2, 2}, 0);
  for (int l = 2; l >= 0; --l) CHECK(w.decodable(ChunkId{2, l}));
}

TEST_CASE("late chunks go to the ledger, not holdings") {
  const VideoProfile p = profile8();
  SlidingWindow w(p, window_cfg(4));
  w.insert(ChunkId{0, 0}, 0);
  w.advance(1);  // consumes slot 0
  CHECK(w.playhead() == 1);

  // a layer-1 chunk for the consumed slot arrives one step later
  CHECK(w.insert(ChunkId{0, 1}, 1) == SlidingWindow::Insert::Late);
  CHECK_FALSE(w.decodable(ChunkId{0, 1}));
  REQUIRE(w.late_ledger().size() == 1);
  CHECK(w.late_ledger()[0].first == ChunkId{0, 1});
}

TEST_CASE("advance: full quality, stall, and mixed-layer consumption") {
  const VideoProfile p = VideoProfile::uniform(3, 100.0, 1.0, 8);

  SUBCASE("all layers held plays at top level") {
    SlidingWindow w(p, window_cfg(4));
    for (Slot s = 0; s < 4; ++s) {
      for (int l = 0; l < 3; ++l) w.insert(ChunkId{s, l}, 0);
    }
    const auto report = w.advance(4);
    REQUIRE(report.entries.size() == 4);
    for (const auto& e : report.entries) {
      CHECK(e.kind == PlaybackReport::Kind::Played);
      CHECK(e.quality == 2);
    }
  }

  SUBCASE("missing base stalls after start") {
    SlidingWindow w(p, window_cfg(4));
    w.insert(ChunkId{0, 0}, 0);  // slot 1 base missing
    auto report = w.advance(2);
    CHECK(report.entries[0].kind == PlaybackReport::Kind::Played);
    CHECK(report.entries[1].kind == PlaybackReport::Kind::Stalled);
    CHECK(report.entries[1].stream_slot == 1);
    CHECK(w.stalled());

    w.insert(ChunkId{1, 0}, 2);
    report = w.advance(1);
    CHECK(report.entries[0].kind == PlaybackReport::Kind::Played);
    CHECK_FALSE(w.stalled());
  }

  SUBCASE("withheld lower layer caps consumed quality") {
    // slot 0: layers {0,1}; slot 1: layers {0,2} (1 missing)
    SlidingWindow w(p, window_cfg(4));
    w.insert(ChunkId{0, 0}, 0);
    w.insert(ChunkId{0, 1}, 0);
    w.insert(ChunkId{1, 0}, 0);
    w.insert(ChunkId{1, 2}, 0);
    const auto report = w.advance(2);
    // reference scan: highest q with all layers <= q held
    CHECK(report.entries[0].quality == 1);
    CHECK(report.entries[1].quality == 0);
  }

  SUBCASE("waiting before start is not a stall") {
    SlidingWindow w(p, window_cfg(4));
    const auto report = w.advance(3);
    for (const auto& e : report.entries) {
      CHECK(e.kind == PlaybackReport::Kind::Waiting);
    }
    CHECK_FALSE(w.stalled());
    CHECK(w.playhead() == 0);
  }

  SUBCASE("resume threshold demands a run of base chunks") {
    WindowConfig cfg = window_cfg(4);
    cfg.resume_threshold = 2;
    SlidingWindow w(p, cfg);
    w.insert(ChunkId{0, 0}, 0);
    auto report = w.advance(1);  // needs bases at slots 0 and 1
    CHECK(report.entries[0].kind == PlaybackReport::Kind::Waiting);
    w.insert(ChunkId{1, 0}, 1);
    report = w.advance(1);
    CHECK(report.entries[0].kind == PlaybackReport::Kind::Played);
  }
}

TEST_CASE("buffer map bits follow the row-major MSB-first layout") {
  // 3 layers x 5 slots; holdings laid out like the availability figure:
  // base layer missing at the last slot, upper layers sparse.
  const VideoProfile p = VideoProfile::uniform(3, 100.0, 1.0, 16);
  SlidingWindow w(p, window_cfg(5));
  const std::vector<ChunkId> held = {
      {0, 0}, {1, 0}, {2, 0}, {3, 0},          // base, slots 0-3
      {0, 1}, {1, 1}, {4, 1},                  // layer 1
      {2, 2}};                                 // layer 2
  for (ChunkId c : held) w.insert(c, 0);

  const BufferMap map = w.buffer_map(9);
  CHECK(map.owner == 9);
  CHECK(map.window_start == 0);
  CHECK(map.layer_count == 3);
  CHECK(map.width == 5);
  CHECK(map.payload.size() == 2);  // ceil(15/8)

  // Independent bit-index check: bit(l, w) = l*W + w, MSB-first per byte.
  auto expect_bit = [&](int l, int off) {
    return std::find(held.begin(), held.end(), ChunkId{off, l}) != held.end();
  };
  for (int l = 0; l < 3; ++l) {
    for (int off = 0; off < 5; ++off) {
      const int k = l * 5 + off;
      const bool bit =
          (map.payload[static_cast<std::size_t>(k / 8)] >> (7 - k % 8)) & 1;
      CHECK(bit == expect_bit(l, off));
    }
  }
}

TEST_CASE("buffer map wire format round trip and header layout") {
  BufferMap map(0x01020304u, 7, 3, 5);
  map.set_bit(0, 0, true);
  map.set_bit(2, 4, true);

  const auto bytes = encode_buffer_map(map);
  REQUIRE(bytes.size() == 11 + 2);
  // little-endian owner and window_start, u8 L, u16 W
  CHECK(bytes[0] == 0x04);
  CHECK(bytes[1] == 0x03);
  CHECK(bytes[2] == 0x02);
  CHECK(bytes[3] == 0x01);
  CHECK(bytes[4] == 7);
  CHECK(bytes[8] == 3);
  CHECK(bytes[9] == 5);
  CHECK(bytes[10] == 0);

  const BufferMap back = decode_buffer_map(bytes);
  CHECK(back == map);
  CHECK(encode_buffer_map(back) == bytes);
}

TEST_CASE("buffer map round trip is identity on random maps") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    std::uniform_int_distribution<int> layers_dist(1, 16);
    std::uniform_int_distribution<int> width_dist(1, 64);
    const int layers = layers_dist(rng);
    const int width = width_dist(rng);
    BufferMap map(static_cast<PeerId>(rng()), static_cast<Slot>(rng() % 1000),
                  layers, width);
    std::uniform_int_distribution<int> coin(0, 1);
    for (int l = 0; l < layers; ++l) {
      for (int o = 0; o < width; ++o) {
        if (coin(rng)) map.set_bit(l, o, true);
      }
    }
    const auto bytes = encode_buffer_map(map);
    const BufferMap back = decode_buffer_map(bytes);
    CHECK(back == map);
    CHECK(encode_buffer_map(back) == bytes);
  }
}

TEST_CASE("buffer map decode rejects malformed payloads") {
  BufferMap map(1, 0, 2, 3);
  auto bytes = encode_buffer_map(map);
  bytes.push_back(0);  // payload longer than header claims
  CHECK_THROWS_AS(decode_buffer_map(bytes), std::runtime_error);

  auto truncated = encode_buffer_map(map);
  truncated.pop_back();
  CHECK_THROWS_AS(decode_buffer_map(truncated), std::runtime_error);

  std::vector<std::uint8_t> short_header(5, 0);
  CHECK_THROWS_AS(decode_buffer_map(short_header), std::runtime_error);
}

TEST_CASE("empty window encodes to an all-zero payload") {
  const VideoProfile p = VideoProfile::uniform(4, 100.0, 1.0, 32);
  SlidingWindow w(p, window_cfg(6, 0, 2));
  const BufferMap map = w.buffer_map(1);
  for (std::uint8_t byte : map.payload) CHECK(byte == 0);
}

TEST_CASE("prefetch view reflects holdings and reports the top layer") {
  const VideoProfile p = VideoProfile::uniform(4, 100.0, 1.0, 32);
  SlidingWindow w(p, window_cfg(4, 0, 8));
  w.insert(ChunkId{6, 0}, 0);
  w.insert(ChunkId{7, 2}, 0);

  const PrefetchView view = w.prefetch_view(4, 8);
  CHECK(view.has(6, 0));
  CHECK(view.has(7, 2));
  CHECK_FALSE(view.has(6, 1));
  CHECK_FALSE(view.has(3, 0));   // outside the view
  CHECK(view.top_prefetched_layer() == 2);

  const PrefetchView empty = w.prefetch_view(20, 4);
  CHECK(empty.top_prefetched_layer() == -1);
}
