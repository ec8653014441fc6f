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
#include <vector>

#include "layerstream/chunk.hpp"

namespace layerstream {

// Per-peer advertisement of chunk availability: an L x W bit matrix
// (row = layer, column = slot offset from window_start), row-major.
//
// Wire layout (little-endian multi-byte fields):
//   owner        u32
//   window_start u32
//   layer_count  u8
//   width        u16
//   payload      ceil(L*W/8) bytes; bit k = (layer k/W, offset k%W),
//                most-significant bit first within each byte.
struct BufferMap {
  PeerId owner = 0;
  Slot window_start = 0;
  int layer_count = 0;
  int width = 0;
  std::vector<std::uint8_t> payload;

  BufferMap() = default;
  BufferMap(PeerId owner_id, Slot start, int layers, int w);

  bool bit(int layer, int offset) const;
  void set_bit(int layer, int offset, bool value);

  // Availability of an absolute chunk id; false outside the window.
  bool available(ChunkId chunk) const;

  std::size_t payload_bytes() const {
    return (static_cast<std::size_t>(layer_count) * width + 7) / 8;
  }

  friend bool operator==(const BufferMap&, const BufferMap&) = default;
};

std::vector<std::uint8_t> encode_buffer_map(const BufferMap& map);

// Throws std::runtime_error when the buffer is shorter than the header or
// the payload length does not match the header-declared L*W bit matrix.
BufferMap decode_buffer_map(std::span<const std::uint8_t> bytes);

}  // namespace layerstream
