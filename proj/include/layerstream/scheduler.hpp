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
#include <deque>
#include <random>
#include <vector>

#include "layerstream/buffer_map.hpp"
#include "layerstream/chunk.hpp"
#include "layerstream/knapsack.hpp"

namespace layerstream {

// Chunk priority P = emergency_base^(now - deadline)
//                  + theta * layer_base^(layer_count - (layer + 1)).
// The emergency term grows as the deadline approaches; the layer term
// shrinks with the layer index (the base layer matters most). theta trades
// the two off.
struct PriorityParams {
  double theta = 1.0;
  double emergency_base = 10.0;
  double layer_base = 10.0;
  int layer_count = 1;

  // theta = 10^-L: both terms stay below 1 and deadlines dominate between
  // equal layers while lower layers win between equal deadlines.
  static PriorityParams conservative(int layer_count);
  // theta large enough that any lower-layer chunk outranks every
  // higher-layer chunk regardless of deadline.
  static PriorityParams layer_major(int layer_count);
  // theta small enough that deadline order is never overturned by the
  // layer term, for deadlines up to `horizon` slots out.
  static PriorityParams time_major(int layer_count, int horizon);

  void validate() const;
};

double priority(ChunkId chunk, Slot deadline, Slot now,
                const PriorityParams& params);

// One chunk wanted from the overlay, with its deadline and score.
struct ChunkRequest {
  ChunkId chunk;
  Slot deadline = 0;
  double priority = 0.0;
  std::int64_t weight = 1;
};

// What the receiver knows about one neighbor at scheduling time.
struct NeighborView {
  PeerId id = 0;
  BufferMap map;
  std::int64_t capacity = 0;  // chunks per scheduling period
  double reliability = 1.0;
};

// Rows = neighbors in reliability-descending order (ties: larger capacity,
// then lower id); columns = the missing chunks in request order. An entry
// is present iff the neighbor's buffer map advertises the chunk.
struct AssignmentMatrix {
  struct Row {
    PeerId neighbor = 0;
    std::int64_t capacity = 0;
    double reliability = 1.0;
    std::vector<char> has;  // one flag per column
  };

  std::vector<ChunkRequest> chunks;
  std::vector<Row> rows;
};

AssignmentMatrix build_matrix(std::vector<ChunkRequest> missing,
                              const std::vector<NeighborView>& neighbors);

struct Schedule {
  struct Assignment {
    ChunkId chunk;
    PeerId neighbor = 0;
    double priority = 0.0;
  };
  std::vector<Assignment> assignments;
  std::vector<ChunkId> unassigned;
};

// Sum of assigned priorities (the schedule's figure of merit).
double aggregate_priority(const Schedule& schedule);

// Row-processing heuristic: walk rows in reliability order, solve one
// knapsack per row over the still-unassigned chunks it advertises, and
// remove what it takes. Each row's candidates are ordered by priority
// descending (ties: lower layer, earlier slot), so with unit weights a row
// takes exactly its capacity's worth of highest-priority chunks.
// `solver` defaults to the exact DP.
Schedule gap_schedule(const AssignmentMatrix& matrix,
                      const RowSolver* solver = nullptr);

// Exact maximizer of the aggregate priority under the capacity and
// single-supplier constraints, for test-scale instances only (at most 12
// chunks and 5 neighbors; throws otherwise). Deterministic tie-break:
// the lexicographically smallest row choice per column among optima.
Schedule oracle_schedule(const AssignmentMatrix& matrix);

enum class BaselineKind { Random, Lrf, RoundRobin, LayerP2P };

// Reference schedulers. Random assigns each chunk to a uniformly random
// capable neighbor with residual capacity; LRF serves rarest chunks first
// (random tie-breaks) from the neighbor with the most residual capacity;
// RoundRobin cycles neighbors in ascending-id order, each taking the next
// still-missing chunk it advertises — `rr_rotation` is where the rotation
// resumes, so successive periods continue the round robin; LayerP2P
// assigns layers up to `layerp2p_threshold` by the random rule and probes
// higher layers layer-by-layer in ascending order.
Schedule baseline_schedule(BaselineKind kind, const AssignmentMatrix& matrix,
                           std::mt19937_64& rng, int layerp2p_threshold = 0,
                           int rr_rotation = 0);

// Constraint check shared by tests and the simulator: per-neighbor load
// within capacity, each chunk assigned at most once and only where
// advertised, and unassigned/assigned partition the columns.
bool schedule_satisfies_constraints(const Schedule& schedule,
                                    const AssignmentMatrix& matrix);

// Delivered-over-issued request ratio over a sliding window of scheduling
// periods; new neighbors start at 1.0.
class ReliabilityTracker {
 public:
  explicit ReliabilityTracker(int window_periods = 10)
      : window_(window_periods) {}

  void record_period(int issued, int fulfilled);
  double value() const;

 private:
  int window_;
  std::deque<std::pair<int, int>> periods_;
};

}  // namespace layerstream
