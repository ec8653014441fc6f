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

#include "layerstream/sliding_window.hpp"

#include <algorithm>
#include <stdexcept>

namespace layerstream {

bool PrefetchView::has(Slot slot, int layer) const {
  const Slot offset = slot - start;
  if (offset < 0 || offset >= length) return false;
  if (layer < 0 || layer >= layer_count) return false;
  return (masks[static_cast<std::size_t>(offset)] >> layer) & 1u;
}

int PrefetchView::top_prefetched_layer() const {
  std::uint32_t any = 0;
  for (std::uint32_t m : masks) any |= m;
  int top = -1;
  while (any != 0) {
    ++top;
    any >>= 1;
  }
  return top;
}

SlidingWindow::SlidingWindow(VideoProfile profile, WindowConfig config)
    : profile_(std::move(profile)), config_(config) {
  profile_.validate();
  if (config_.playing_len < 0 || config_.urgent_len < 0 ||
      config_.prefetch_len < 0) {
    throw std::invalid_argument("sliding window: interval lengths must be >= 0");
  }
  if (config_.resume_threshold < 1) {
    throw std::invalid_argument("sliding window: resume threshold must be >= 1");
  }
  if (profile_.layer_count > 31) {
    throw std::invalid_argument("sliding window: at most 31 layers supported");
  }
  held_.assign(static_cast<std::size_t>(profile_.total_slots), 0);
  consumed_.assign(static_cast<std::size_t>(profile_.total_slots), -2);
}

SlidingWindow::Insert SlidingWindow::insert(ChunkId chunk, Slot now) {
  if (chunk.slot < 0 || chunk.slot >= profile_.total_slots ||
      chunk.layer < 0 || chunk.layer >= profile_.layer_count) {
    throw std::invalid_argument("sliding window: chunk id out of range");
  }
  if (chunk.slot < playhead_) {
    late_ledger_.emplace_back(chunk, now);
    return Insert::Late;
  }
  std::uint32_t& mask = held_[static_cast<std::size_t>(chunk.slot)];
  const std::uint32_t bit = 1u << chunk.layer;
  if (mask & bit) return Insert::Duplicate;
  mask |= bit;
  return Insert::OnTime;
}

bool SlidingWindow::held(ChunkId chunk) const {
  if (chunk.slot < 0 || chunk.slot >= profile_.total_slots) return false;
  if (chunk.layer < 0 || chunk.layer >= profile_.layer_count) return false;
  return (held_[static_cast<std::size_t>(chunk.slot)] >> chunk.layer) & 1u;
}

bool SlidingWindow::decodable(ChunkId chunk) const {
  if (chunk.slot < 0 || chunk.slot >= profile_.total_slots) return false;
  if (chunk.layer < 0 || chunk.layer >= profile_.layer_count) return false;
  const std::uint32_t mask = held_[static_cast<std::size_t>(chunk.slot)];
  const std::uint32_t need = (1u << (chunk.layer + 1)) - 1u;
  return (mask & need) == need;
}

int SlidingWindow::held_quality(Slot slot) const {
  if (slot < 0 || slot >= profile_.total_slots) return -1;
  const std::uint32_t mask = held_[static_cast<std::size_t>(slot)];
  int q = -1;
  while (q + 1 < profile_.layer_count && ((mask >> (q + 1)) & 1u)) ++q;
  return q;
}

std::vector<ChunkId> SlidingWindow::missing_chunks(int target_quality) const {
  std::vector<ChunkId> out;
  if (target_quality < 0) return out;
  const Slot begin = std::max<Slot>(urgent_begin(), 0);
  const Slot end = std::min<Slot>(urgent_end(), profile_.total_slots);
  const int top = std::min(target_quality, profile_.layer_count - 1);
  for (Slot s = begin; s < end; ++s) {
    const std::uint32_t mask = held_[static_cast<std::size_t>(s)];
    for (int l = 0; l <= top; ++l) {
      if (!((mask >> l) & 1u)) out.push_back(ChunkId{s, l});
    }
  }
  return out;
}

BufferMap SlidingWindow::buffer_map(PeerId owner) const {
  return buffer_map_range(owner, playhead_, window_width());
}

BufferMap SlidingWindow::buffer_map_range(PeerId owner, Slot start,
                                          Slot width) const {
  BufferMap map(owner, start, profile_.layer_count, static_cast<int>(width));
  for (Slot w = 0; w < width; ++w) {
    const Slot s = start + w;
    if (s < 0 || s >= profile_.total_slots) continue;
    const std::uint32_t mask = held_[static_cast<std::size_t>(s)];
    for (int l = 0; l < profile_.layer_count; ++l) {
      if ((mask >> l) & 1u) map.set_bit(l, static_cast<int>(w), true);
    }
  }
  return map;
}

PrefetchView SlidingWindow::prefetch_view(Slot start, Slot length) const {
  PrefetchView view;
  view.start = start;
  view.length = length;
  view.layer_count = profile_.layer_count;
  view.masks.assign(static_cast<std::size_t>(length), 0);
  for (Slot s = start; s < start + length; ++s) {
    if (s < 0 || s >= profile_.total_slots) continue;
    view.masks[static_cast<std::size_t>(s - start)] =
        held_[static_cast<std::size_t>(s)];
  }
  return view;
}

bool SlidingWindow::base_run_present(Slot from, int count) const {
  for (Slot s = from; s < from + count; ++s) {
    if (s >= profile_.total_slots) break;  // stream end counts as present
    if (!((held_[static_cast<std::size_t>(s)] >> 0) & 1u)) return false;
  }
  return true;
}

PlaybackReport SlidingWindow::advance(int steps) {
  PlaybackReport report;
  for (int i = 0; i < steps; ++i) {
    if (finished()) {
      report.entries.push_back({PlaybackReport::Kind::Finished, playhead_, -1});
      continue;
    }
    const bool base_here =
        (held_[static_cast<std::size_t>(playhead_)] & 1u) != 0;
    bool can_play = base_here;
    if (!started_ || stalled_) {
      can_play = base_run_present(playhead_, config_.resume_threshold);
    }
    if (can_play) {
      const int q = held_quality(playhead_);
      consumed_[static_cast<std::size_t>(playhead_)] =
          static_cast<std::int8_t>(q);
      report.entries.push_back({PlaybackReport::Kind::Played, playhead_, q});
      started_ = true;
      stalled_ = false;
      ++playhead_;
    } else if (started_) {
      stalled_ = true;
      report.entries.push_back({PlaybackReport::Kind::Stalled, playhead_, -1});
    } else {
      report.entries.push_back({PlaybackReport::Kind::Waiting, playhead_, -1});
    }
  }
  return report;
}

int SlidingWindow::consumed_quality(Slot slot) const {
  if (slot < 0 || slot >= profile_.total_slots) return -2;
  return consumed_[static_cast<std::size_t>(slot)];
}

}  // namespace layerstream
