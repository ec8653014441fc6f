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
#include <utility>
#include <vector>

#include "layerstream/buffer_map.hpp"
#include "layerstream/chunk.hpp"
#include "layerstream/video_profile.hpp"

namespace layerstream {

// Shape of the receiver-side window. The three intervals are contiguous:
//   playing  = [playhead, playhead + playing_len)
//   urgent   = [playhead + playing_len, playhead + playing_len + urgent_len)
//   prefetch = the next prefetch_len slots after the urgent interval.
// Only the urgent interval is requested; the prefetch interval is filled
// opportunistically with surplus bandwidth.
struct WindowConfig {
  Slot playing_len = 0;
  Slot urgent_len = 0;
  Slot prefetch_len = 0;
  // Consecutive base chunks required at the playhead before a paused
  // playback resumes (and before it starts the first time).
  int resume_threshold = 1;
};

// Per-slot, per-layer availability over a slot range, snapshotted from a
// window's holdings. Used by the smoothing strategies to credit chunks
// that are already prefetched for an upcoming smoothing window.
struct PrefetchView {
  Slot start = 0;
  Slot length = 0;
  int layer_count = 0;
  std::vector<std::uint32_t> masks;  // one layer bitmask per slot

  bool has(Slot slot, int layer) const;
  // Highest layer index present anywhere in the view, -1 when empty.
  int top_prefetched_layer() const;
};

// Outcome of driving playback over a number of time steps.
struct PlaybackReport {
  enum class Kind {
    Played,   // slot consumed; quality = highest fully decodable level
    Stalled,  // playback paused on a missing base chunk
    Waiting,  // before first start: initial buffering, not a stall
    Finished  // stream fully consumed
  };
  struct Entry {
    Kind kind;
    Slot stream_slot;  // the slot played or waited on
    int quality;       // consumed level for Played entries, else -1
  };
  std::vector<Entry> entries;
};

// Receiver-side store for one peer: which chunks are held, where the
// playhead is, and the playing/urgent/prefetch interval bookkeeping.
// A chunk arriving after its slot was consumed is recorded in the late
// ledger and never enters holdings.
class SlidingWindow {
 public:
  SlidingWindow(VideoProfile profile, WindowConfig config);

  enum class Insert { OnTime, Late, Duplicate };

  // Receive one chunk at time `now`. Late means the chunk's slot has
  // already been consumed (the playhead moved past it).
  Insert insert(ChunkId chunk, Slot now);

  bool held(ChunkId chunk) const;

  // True iff the chunk and every lower layer of the same slot were
  // received on time.
  bool decodable(ChunkId chunk) const;

  // Highest q such that layers 0..q are all held at `slot`; -1 if the
  // base is missing.
  int held_quality(Slot slot) const;

  // Chunks of layer <= target_quality missing from the urgent interval,
  // slot-major (slot ascending, layer ascending). target_quality == -1
  // yields nothing. Slots past the stream end are skipped.
  std::vector<ChunkId> missing_chunks(int target_quality) const;

  // Availability advertisement over the whole window span.
  BufferMap buffer_map(PeerId owner) const;

  // Advertisement over an arbitrary slot range (e.g. including retained
  // history so lagging neighbors can still fetch consumed slots).
  BufferMap buffer_map_range(PeerId owner, Slot start, Slot width) const;

  PrefetchView prefetch_view(Slot start, Slot length) const;

  // Drive playback for `steps` time steps. Playback starts (and, after a
  // pause, resumes) once resume_threshold consecutive base chunks are
  // present at the playhead; a paused step after start is a stall.
  PlaybackReport advance(int steps);

  Slot playhead() const { return playhead_; }
  Slot urgent_begin() const { return playhead_ + config_.playing_len; }
  Slot urgent_end() const { return urgent_begin() + config_.urgent_len; }
  Slot prefetch_begin() const { return urgent_end(); }
  Slot prefetch_end() const { return urgent_end() + config_.prefetch_len; }
  Slot window_width() const {
    return config_.playing_len + config_.urgent_len + config_.prefetch_len;
  }

  bool started() const { return started_; }
  bool stalled() const { return stalled_; }
  bool finished() const { return playhead_ >= profile_.total_slots; }

  // Consumed level for a played slot; -2 when the slot was not played yet.
  int consumed_quality(Slot slot) const;

  const std::vector<std::pair<ChunkId, Slot>>& late_ledger() const {
    return late_ledger_;
  }
  const VideoProfile& profile() const { return profile_; }
  const WindowConfig& config() const { return config_; }

 private:
  bool base_run_present(Slot from, int count) const;

  VideoProfile profile_;
  WindowConfig config_;
  Slot playhead_ = 0;
  bool started_ = false;
  bool stalled_ = false;
  std::vector<std::uint32_t> held_;        // layer bitmask per stream slot
  std::vector<std::int8_t> consumed_;      // consumed level per slot, -2 unset
  std::vector<std::pair<ChunkId, Slot>> late_ledger_;
};

}  // namespace layerstream
