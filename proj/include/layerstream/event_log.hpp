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

#include <iosfwd>
#include <string>
#include <vector>

#include "layerstream/chunk.hpp"

namespace layerstream {

enum class EventKind {
  Capacity,  // receiver download capacity (kbps in value)
  Select,    // smoother picked a target level (value)
  Request,   // chunk requested from neighbor (priority in value)
  Deliver,   // chunk arrived on time (from neighbor)
  Late,      // chunk arrived after its slot was consumed
  Play,      // slot consumed; layer = viewer level, value = target level
  Stall      // playback paused waiting on chunk_slot's base chunk
};

const char* event_kind_name(EventKind kind);

struct SimEvent {
  Slot slot = 0;
  PeerId peer = 0;
  EventKind kind = EventKind::Capacity;
  Slot chunk_slot = -1;
  int layer = -1;
  PeerId neighbor = 0;
  bool has_neighbor = false;
  double value = 0.0;
};

// Ordered, replayable record of one run. Slots are non-decreasing and the
// within-slot order follows the simulation phases.
struct SimEventLog {
  std::vector<SimEvent> events;

  void append(SimEvent event);
};

// CSV with header `slot,peer,event,chunk_slot,layer,neighbor,detail`.
// Empty fields for the unused columns of an event kind.
void write_event_csv(const SimEventLog& log, std::ostream& out);
std::string event_csv(const SimEventLog& log);

// Inverse of write_event_csv; throws std::runtime_error naming the line on
// malformed input.
SimEventLog parse_event_csv(const std::string& text);

}  // namespace layerstream
