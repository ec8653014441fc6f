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

#include <compare>
#include <cstdint>

namespace layerstream {

using Slot = std::int64_t;
using PeerId = std::uint32_t;

// One unit of exchange: the cell of the stream at (timestamp slot, layer).
// Layer 0 is the base layer; layer l is decodable only when all layers
// below l are present for the same slot.
struct ChunkId {
  Slot slot = 0;
  int layer = 0;

  friend auto operator<=>(const ChunkId&, const ChunkId&) = default;
};

}  // namespace layerstream
