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

#include "layerstream/event_log.hpp"

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace layerstream {

const char* event_kind_name(EventKind kind) {
  switch (kind) {
    case EventKind::Capacity: return "capacity";
    case EventKind::Select: return "select";
    case EventKind::Request: return "request";
    case EventKind::Deliver: return "deliver";
    case EventKind::Late: return "late";
    case EventKind::Play: return "play";
    case EventKind::Stall: return "stall";
  }
  return "?";
}

namespace {

EventKind event_kind_from(const std::string& name) {
  if (name == "capacity") return EventKind::Capacity;
  if (name == "select") return EventKind::Select;
  if (name == "request") return EventKind::Request;
  if (name == "deliver") return EventKind::Deliver;
  if (name == "late") return EventKind::Late;
  if (name == "play") return EventKind::Play;
  if (name == "stall") return EventKind::Stall;
  throw std::runtime_error("event log: unknown event kind `" + name + "`");
}

// Shortest representation that parses back to the same double, so the
// written log replays bit-exactly.
std::string format_value(double v) {
  char buf[40];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

}  // namespace

void SimEventLog::append(SimEvent event) {
  events.push_back(event);
}

void write_event_csv(const SimEventLog& log, std::ostream& out) {
  out << "slot,peer,event,chunk_slot,layer,neighbor,detail\n";
  for (const SimEvent& e : log.events) {
    out << e.slot << ',' << e.peer << ',' << event_kind_name(e.kind) << ',';
    if (e.chunk_slot >= 0) out << e.chunk_slot;
    out << ',';
    if (e.layer >= -1 && (e.kind == EventKind::Request ||
                          e.kind == EventKind::Deliver ||
                          e.kind == EventKind::Late ||
                          e.kind == EventKind::Play)) {
      out << e.layer;
    }
    out << ',';
    if (e.has_neighbor) out << e.neighbor;
    out << ',' << format_value(e.value) << '\n';
  }
}

std::string event_csv(const SimEventLog& log) {
  std::ostringstream out;
  write_event_csv(log, out);
  return out.str();
}

SimEventLog parse_event_csv(const std::string& text) {
  SimEventLog log;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) continue;  // header
    std::vector<std::string> fields;
    std::size_t at = 0;
    while (true) {
      const std::size_t comma = line.find(',', at);
      if (comma == std::string::npos) {
        fields.push_back(line.substr(at));
        break;
      }
      fields.push_back(line.substr(at, comma - at));
      at = comma + 1;
    }
    if (fields.size() != 7) {
      throw std::runtime_error("event log: line " + std::to_string(line_no) +
                               ": expected 7 fields");
    }
    try {
      SimEvent e;
      e.slot = std::stoll(fields[0]);
      e.peer = static_cast<PeerId>(std::stoul(fields[1]));
      e.kind = event_kind_from(fields[2]);
      e.chunk_slot = fields[3].empty() ? -1 : std::stoll(fields[3]);
      e.layer = fields[4].empty() ? -1 : std::stoi(fields[4]);
      e.has_neighbor = !fields[5].empty();
      e.neighbor =
          e.has_neighbor ? static_cast<PeerId>(std::stoul(fields[5])) : 0;
      e.value = std::stod(fields[6]);
      log.append(e);
    } catch (const std::runtime_error&) {
      throw;
    } catch (const std::exception&) {
      throw std::runtime_error("event log: line " + std::to_string(line_no) +
                               ": malformed field");
    }
  }
  return log;
}

}  // namespace layerstream
