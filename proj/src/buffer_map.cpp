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

#include "layerstream/buffer_map.hpp"

#include <stdexcept>

namespace layerstream {

namespace {

constexpr std::size_t kHeaderBytes = 4 + 4 + 1 + 2;

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 8) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 16) & 0xff));
  out.push_back(static_cast<std::uint8_t>((v >> 24) & 0xff));
}

std::uint32_t get_u32_le(std::span<const std::uint8_t> in, std::size_t at) {
  return static_cast<std::uint32_t>(in[at]) |
         (static_cast<std::uint32_t>(in[at + 1]) << 8) |
         (static_cast<std::uint32_t>(in[at + 2]) << 16) |
         (static_cast<std::uint32_t>(in[at + 3]) << 24);
}

}  // namespace

BufferMap::BufferMap(PeerId owner_id, Slot start, int layers, int w)
    : owner(owner_id), window_start(start), layer_count(layers), width(w) {
  payload.assign(payload_bytes(), 0);
}

bool BufferMap::bit(int layer, int offset) const {
  const std::size_t k =
      static_cast<std::size_t>(layer) * width + static_cast<std::size_t>(offset);
  return (payload[k / 8] >> (7 - (k % 8))) & 1u;
}

void BufferMap::set_bit(int layer, int offset, bool value) {
  const std::size_t k =
      static_cast<std::size_t>(layer) * width + static_cast<std::size_t>(offset);
  const std::uint8_t mask = static_cast<std::uint8_t>(1u << (7 - (k % 8)));
  if (value) {
    payload[k / 8] |= mask;
  } else {
    payload[k / 8] &= static_cast<std::uint8_t>(~mask);
  }
}

bool BufferMap::available(ChunkId chunk) const {
  if (chunk.layer < 0 || chunk.layer >= layer_count) return false;
  const Slot offset = chunk.slot - window_start;
  if (offset < 0 || offset >= width) return false;
  return bit(chunk.layer, static_cast<int>(offset));
}

std::vector<std::uint8_t> encode_buffer_map(const BufferMap& map) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + map.payload.size());
  put_u32_le(out, map.owner);
  put_u32_le(out, static_cast<std::uint32_t>(map.window_start));
  out.push_back(static_cast<std::uint8_t>(map.layer_count));
  out.push_back(static_cast<std::uint8_t>(map.width & 0xff));
  out.push_back(static_cast<std::uint8_t>((map.width >> 8) & 0xff));
  out.insert(out.end(), map.payload.begin(), map.payload.end());
  return out;
}

BufferMap decode_buffer_map(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderBytes) {
    throw std::runtime_error("buffer map: truncated header");
  }
  BufferMap map;
  map.owner = get_u32_le(bytes, 0);
  map.window_start = static_cast<Slot>(get_u32_le(bytes, 4));
  map.layer_count = bytes[8];
  map.width = static_cast<int>(bytes[9]) | (static_cast<int>(bytes[10]) << 8);
  const std::size_t expected = map.payload_bytes();
  if (bytes.size() - kHeaderBytes != expected) {
    throw std::runtime_error("buffer map: payload length mismatch");
  }
  map.payload.assign(bytes.begin() + kHeaderBytes, bytes.end());
  return map;
}

}  // namespace layerstream
