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

#include "layerstream/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace layerstream {

PriorityParams PriorityParams::conservative(int layer_count) {
  PriorityParams p;
  p.layer_count = layer_count;
  p.theta = std::pow(10.0, -layer_count);
  return p;
}

PriorityParams PriorityParams::layer_major(int layer_count) {
  PriorityParams p;
  p.layer_count = layer_count;
  // Adjacent layers differ by at least 9*theta in the layer term; theta = 1
  // keeps that gap above the emergency term's entire (0, 1] range.
  p.theta = 1.0;
  return p;
}

PriorityParams PriorityParams::time_major(int layer_count, int horizon) {
  PriorityParams p;
  p.layer_count = layer_count;
  // Smallest emergency gap over the horizon is 9*10^-(horizon+1); keep the
  // largest possible layer term safely below it.
  p.theta = std::pow(10.0, -(layer_count + horizon + 2));
  return p;
}

void PriorityParams::validate() const {
  if (theta <= 0.0) throw std::invalid_argument("priority: theta must be > 0");
  if (emergency_base <= 1.0 || layer_base <= 1.0) {
    throw std::invalid_argument("priority: bases must be > 1");
  }
  if (layer_count < 1) {
    throw std::invalid_argument("priority: layer_count must be >= 1");
  }
}

double priority(ChunkId chunk, Slot deadline, Slot now,
                const PriorityParams& params) {
  const double emergency =
      std::pow(params.emergency_base, static_cast<double>(now - deadline));
  // The layer term takes the 1-indexed layer: base layer -> L-1 exponent.
  const double layer = std::pow(
      params.layer_base, static_cast<double>(params.layer_count - (chunk.layer + 1)));
  return emergency + params.theta * layer;
}

AssignmentMatrix build_matrix(std::vector<ChunkRequest> missing,
                              const std::vector<NeighborView>& neighbors) {
  AssignmentMatrix matrix;
  matrix.chunks = std::move(missing);

  std::vector<const NeighborView*> order;
  order.reserve(neighbors.size());
  for (const auto& n : neighbors) order.push_back(&n);
  std::sort(order.begin(), order.end(),
            [](const NeighborView* a, const NeighborView* b) {
              if (a->reliability != b->reliability) {
                return a->reliability > b->reliability;
              }
              if (a->capacity != b->capacity) return a->capacity > b->capacity;
              return a->id < b->id;
            });

  for (const NeighborView* n : order) {
    AssignmentMatrix::Row row;
    row.neighbor = n->id;
    row.capacity = n->capacity;
    row.reliability = n->reliability;
    row.has.resize(matrix.chunks.size(), 0);
    for (std::size_t j = 0; j < matrix.chunks.size(); ++j) {
      row.has[j] = n->map.available(matrix.chunks[j].chunk) ? 1 : 0;
    }
    matrix.rows.push_back(std::move(row));
  }
  return matrix;
}

double aggregate_priority(const Schedule& schedule) {
  double sum = 0.0;
  for (const auto& a : schedule.assignments) sum += a.priority;
  return sum;
}

namespace {

// Candidate column order within a row: priority first, then the
// deterministic chunk tie-break (lower layer, earlier slot).
std::vector<int> row_candidates(const AssignmentMatrix& matrix,
                                const AssignmentMatrix::Row& row,
                                const std::vector<char>& assigned) {
  std::vector<int> cols;
  for (int j = 0; j < static_cast<int>(matrix.chunks.size()); ++j) {
    if (!assigned[static_cast<std::size_t>(j)] &&
        row.has[static_cast<std::size_t>(j)]) {
      cols.push_back(j);
    }
  }
  std::sort(cols.begin(), cols.end(), [&](int a, int b) {
    const ChunkRequest& ca = matrix.chunks[static_cast<std::size_t>(a)];
    const ChunkRequest& cb = matrix.chunks[static_cast<std::size_t>(b)];
    if (ca.priority != cb.priority) return ca.priority > cb.priority;
    if (ca.chunk.layer != cb.chunk.layer) return ca.chunk.layer < cb.chunk.layer;
    return ca.chunk.slot < cb.chunk.slot;
  });
  return cols;
}

void finish_unassigned(const AssignmentMatrix& matrix,
                       const std::vector<char>& assigned, Schedule& schedule) {
  for (std::size_t j = 0; j < matrix.chunks.size(); ++j) {
    if (!assigned[j]) schedule.unassigned.push_back(matrix.chunks[j].chunk);
  }
}

}  // namespace

Schedule gap_schedule(const AssignmentMatrix& matrix, const RowSolver* solver) {
  const DpRowSolver default_solver;
  if (solver == nullptr) solver = &default_solver;

  for (const auto& row : matrix.rows) {
    if (row.capacity < 0) {
      throw std::invalid_argument("gap schedule: negative capacity");
    }
  }

  Schedule schedule;
  std::vector<char> assigned(matrix.chunks.size(), 0);
  for (const auto& row : matrix.rows) {
    if (row.capacity == 0) continue;
    const std::vector<int> cols = row_candidates(matrix, row, assigned);
    if (cols.empty()) continue;
    std::vector<KnapsackItem> items;
    items.reserve(cols.size());
    for (int j : cols) {
      const ChunkRequest& c = matrix.chunks[static_cast<std::size_t>(j)];
      items.push_back({c.priority, c.weight});
    }
    for (int pick : solver->solve(items, row.capacity)) {
      const int j = cols[static_cast<std::size_t>(pick)];
      const ChunkRequest& c = matrix.chunks[static_cast<std::size_t>(j)];
      schedule.assignments.push_back({c.chunk, row.neighbor, c.priority});
      assigned[static_cast<std::size_t>(j)] = 1;
    }
  }
  finish_unassigned(matrix, assigned, schedule);
  return schedule;
}

Schedule oracle_schedule(const AssignmentMatrix& matrix) {
  const int m = static_cast<int>(matrix.chunks.size());
  const int r = static_cast<int>(matrix.rows.size());
  if (m > 12 || r > 5) {
    throw std::invalid_argument("oracle schedule: instance too large");
  }

  std::int64_t weight_sum = 0;
  for (const auto& c : matrix.chunks) weight_sum += c.weight;

  // Mixed-radix capacity state; dimension i spans 0..caps[i].
  std::vector<std::int64_t> caps(static_cast<std::size_t>(r));
  std::vector<std::int64_t> radix(static_cast<std::size_t>(r), 1);
  std::int64_t states = 1;
  for (int i = 0; i < r; ++i) {
    caps[static_cast<std::size_t>(i)] =
        std::min<std::int64_t>(matrix.rows[static_cast<std::size_t>(i)].capacity,
                               weight_sum);
    radix[static_cast<std::size_t>(i)] = states;
    states *= caps[static_cast<std::size_t>(i)] + 1;
    if (states > 6'000'000) {
      throw std::invalid_argument("oracle schedule: instance too large");
    }
  }

  // best[j * states + s] = max aggregate priority for columns j.. with
  // remaining capacities encoded by s.
  std::vector<double> best(static_cast<std::size_t>(m + 1) * states, 0.0);
  for (int j = m - 1; j >= 0; --j) {
    const ChunkRequest& chunk = matrix.chunks[static_cast<std::size_t>(j)];
    double* row = best.data() + static_cast<std::size_t>(j) * states;
    const double* next = row + states;
    for (std::int64_t s = 0; s < states; ++s) {
      double v = next[s];  // leave unassigned
      for (int i = 0; i < r; ++i) {
        if (!matrix.rows[static_cast<std::size_t>(i)]
                 .has[static_cast<std::size_t>(j)]) {
          continue;
        }
        const std::int64_t rem =
            (s / radix[static_cast<std::size_t>(i)]) %
            (caps[static_cast<std::size_t>(i)] + 1);
        if (rem < chunk.weight) continue;
        const double take =
            chunk.priority +
            next[s - chunk.weight * radix[static_cast<std::size_t>(i)]];
        v = std::max(v, take);
      }
      row[s] = v;
    }
  }

  Schedule schedule;
  std::vector<char> assigned(static_cast<std::size_t>(m), 0);
  std::int64_t s = states - 1;  // full capacities
  for (int j = 0; j < m; ++j) {
    const ChunkRequest& chunk = matrix.chunks[static_cast<std::size_t>(j)];
    const double* row = best.data() + static_cast<std::size_t>(j) * states;
    const double* next = row + states;
    bool placed = false;
    for (int i = 0; i < r && !placed; ++i) {
      if (!matrix.rows[static_cast<std::size_t>(i)]
               .has[static_cast<std::size_t>(j)]) {
        continue;
      }
      const std::int64_t rem = (s / radix[static_cast<std::size_t>(i)]) %
                               (caps[static_cast<std::size_t>(i)] + 1);
      if (rem < chunk.weight) continue;
      const std::int64_t s2 =
          s - chunk.weight * radix[static_cast<std::size_t>(i)];
      if (chunk.priority + next[s2] == row[s]) {
        schedule.assignments.push_back(
            {chunk.chunk, matrix.rows[static_cast<std::size_t>(i)].neighbor,
             chunk.priority});
        assigned[static_cast<std::size_t>(j)] = 1;
        s = s2;
        placed = true;
      }
    }
  }
  finish_unassigned(matrix, assigned, schedule);
  return schedule;
}

namespace {

struct BaselineState {
  std::vector<char> assigned;
  std::vector<std::int64_t> residual;
};

bool try_assign(const AssignmentMatrix& matrix, BaselineState& state,
                int column, int row_index, Schedule& schedule) {
  const ChunkRequest& c = matrix.chunks[static_cast<std::size_t>(column)];
  auto& residual = state.residual[static_cast<std::size_t>(row_index)];
  if (residual < c.weight) return false;
  residual -= c.weight;
  state.assigned[static_cast<std::size_t>(column)] = 1;
  schedule.assignments.push_back(
      {c.chunk, matrix.rows[static_cast<std::size_t>(row_index)].neighbor,
       c.priority});
  return true;
}

// Rows advertising the column with room for it, in row order.
std::vector<int> capable_rows(const AssignmentMatrix& matrix,
                              const BaselineState& state, int column) {
  std::vector<int> rows;
  const std::int64_t w = matrix.chunks[static_cast<std::size_t>(column)].weight;
  for (int i = 0; i < static_cast<int>(matrix.rows.size()); ++i) {
    if (matrix.rows[static_cast<std::size_t>(i)]
            .has[static_cast<std::size_t>(column)] &&
        state.residual[static_cast<std::size_t>(i)] >= w) {
      rows.push_back(i);
    }
  }
  return rows;
}

// The pure random rule: chunks in random order, each to a uniformly
// random capable neighbor with room left.
void assign_random(const AssignmentMatrix& matrix, BaselineState& state,
                   std::vector<int> columns, std::mt19937_64& rng,
                   Schedule& schedule) {
  std::shuffle(columns.begin(), columns.end(), rng);
  for (int j : columns) {
    const std::vector<int> rows = capable_rows(matrix, state, j);
    if (rows.empty()) continue;
    std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
    try_assign(matrix, state, j, rows[pick(rng)], schedule);
  }
}

}  // namespace

Schedule baseline_schedule(BaselineKind kind, const AssignmentMatrix& matrix,
                           std::mt19937_64& rng, int layerp2p_threshold,
                           int rr_rotation) {
  for (const auto& row : matrix.rows) {
    if (row.capacity < 0) {
      throw std::invalid_argument("baseline schedule: negative capacity");
    }
  }

  Schedule schedule;
  BaselineState state;
  state.assigned.assign(matrix.chunks.size(), 0);
  state.residual.resize(matrix.rows.size());
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    state.residual[i] = matrix.rows[i].capacity;
  }

  const int m = static_cast<int>(matrix.chunks.size());
  std::vector<int> all_columns(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) all_columns[static_cast<std::size_t>(j)] = j;

  switch (kind) {
    case BaselineKind::Random: {
      assign_random(matrix, state, all_columns, rng, schedule);
      break;
    }
    case BaselineKind::Lrf: {
      struct Key {
        int replicas;
        std::uint64_t tiebreak;
        int column;
      };
      std::vector<Key> keys;
      keys.reserve(static_cast<std::size_t>(m));
      for (int j = 0; j < m; ++j) {
        int replicas = 0;
        for (const auto& row : matrix.rows) {
          if (row.has[static_cast<std::size_t>(j)]) ++replicas;
        }
        keys.push_back({replicas, rng(), j});
      }
      std::sort(keys.begin(), keys.end(), [](const Key& a, const Key& b) {
        if (a.replicas != b.replicas) return a.replicas < b.replicas;
        if (a.tiebreak != b.tiebreak) return a.tiebreak < b.tiebreak;
        return a.column < b.column;
      });
      for (const Key& key : keys) {
        const std::vector<int> rows = capable_rows(matrix, state, key.column);
        if (rows.empty()) continue;
        std::int64_t most = -1;
        for (int i : rows) {
          most = std::max(most, state.residual[static_cast<std::size_t>(i)]);
        }
        std::vector<int> ties;
        for (int i : rows) {
          if (state.residual[static_cast<std::size_t>(i)] == most) {
            ties.push_back(i);
          }
        }
        std::uniform_int_distribution<std::size_t> pick(0, ties.size() - 1);
        try_assign(matrix, state, key.column, ties[pick(rng)], schedule);
      }
      break;
    }
    case BaselineKind::RoundRobin: {
      std::vector<int> order(matrix.rows.size());
      for (int i = 0; i < static_cast<int>(order.size()); ++i) {
        order[static_cast<std::size_t>(i)] = i;
      }
      std::sort(order.begin(), order.end(), [&](int a, int b) {
        return matrix.rows[static_cast<std::size_t>(a)].neighbor <
               matrix.rows[static_cast<std::size_t>(b)].neighbor;
      });
      if (!order.empty() && rr_rotation > 0) {
        std::rotate(order.begin(),
                    order.begin() + (rr_rotation % static_cast<int>(order.size())),
                    order.end());
      }
      bool progress = true;
      while (progress) {
        progress = false;
        for (int i : order) {
          for (int j = 0; j < m; ++j) {
            if (state.assigned[static_cast<std::size_t>(j)]) continue;
            if (!matrix.rows[static_cast<std::size_t>(i)]
                     .has[static_cast<std::size_t>(j)]) {
              continue;
            }
            if (try_assign(matrix, state, j, i, schedule)) {
              progress = true;
              break;
            }
          }
        }
      }
      break;
    }
    case BaselineKind::LayerP2P: {
      std::vector<int> regular;
      std::vector<int> probing;
      for (int j = 0; j < m; ++j) {
        if (matrix.chunks[static_cast<std::size_t>(j)].chunk.layer <=
            layerp2p_threshold) {
          regular.push_back(j);
        } else {
          probing.push_back(j);
        }
      }
      std::sort(probing.begin(), probing.end(), [&](int a, int b) {
        const ChunkId& ca = matrix.chunks[static_cast<std::size_t>(a)].chunk;
        const ChunkId& cb = matrix.chunks[static_cast<std::size_t>(b)].chunk;
        if (ca.layer != cb.layer) return ca.layer < cb.layer;
        return ca.slot < cb.slot;
      });
      assign_random(matrix, state, regular, rng, schedule);
      // probing keeps its layer-ascending order, random supplier per chunk
      for (int j : probing) {
        const std::vector<int> rows = capable_rows(matrix, state, j);
        if (rows.empty()) continue;
        std::uniform_int_distribution<std::size_t> pick(0, rows.size() - 1);
        try_assign(matrix, state, j, rows[pick(rng)], schedule);
      }
      break;
    }
    default:
      throw std::invalid_argument("baseline schedule: unknown kind");
  }

  finish_unassigned(matrix, state.assigned, schedule);
  return schedule;
}

bool schedule_satisfies_constraints(const Schedule& schedule,
                                    const AssignmentMatrix& matrix) {
  std::map<ChunkId, int> column_of;
  for (int j = 0; j < static_cast<int>(matrix.chunks.size()); ++j) {
    column_of[matrix.chunks[static_cast<std::size_t>(j)].chunk] = j;
  }
  std::map<PeerId, int> row_of;
  for (int i = 0; i < static_cast<int>(matrix.rows.size()); ++i) {
    row_of[matrix.rows[static_cast<std::size_t>(i)].neighbor] = i;
  }

  std::vector<char> seen(matrix.chunks.size(), 0);
  std::vector<std::int64_t> load(matrix.rows.size(), 0);
  for (const auto& a : schedule.assignments) {
    auto col = column_of.find(a.chunk);
    auto row = row_of.find(a.neighbor);
    if (col == column_of.end() || row == row_of.end()) return false;
    if (seen[static_cast<std::size_t>(col->second)]) return false;  // (8)
    seen[static_cast<std::size_t>(col->second)] = 1;
    if (!matrix.rows[static_cast<std::size_t>(row->second)]
             .has[static_cast<std::size_t>(col->second)]) {
      return false;  // availability
    }
    load[static_cast<std::size_t>(row->second)] +=
        matrix.chunks[static_cast<std::size_t>(col->second)].weight;
  }
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    if (load[i] > matrix.rows[i].capacity) return false;  // (7)
  }
  for (const ChunkId& chunk : schedule.unassigned) {
    auto col = column_of.find(chunk);
    if (col == column_of.end()) return false;
    if (seen[static_cast<std::size_t>(col->second)]) return false;
    seen[static_cast<std::size_t>(col->second)] = 1;
  }
  for (char s : seen) {
    if (!s) return false;  // every column accounted for
  }
  return true;
}

void ReliabilityTracker::record_period(int issued, int fulfilled) {
  periods_.emplace_back(issued, fulfilled);
  while (static_cast<int>(periods_.size()) > window_) periods_.pop_front();
}

double ReliabilityTracker::value() const {
  std::int64_t issued = 0;
  std::int64_t fulfilled = 0;
  for (const auto& [i, f] : periods_) {
    issued += i;
    fulfilled += f;
  }
  if (issued == 0) return 1.0;
  return static_cast<double>(fulfilled) / static_cast<double>(issued);
}

}  // namespace layerstream
