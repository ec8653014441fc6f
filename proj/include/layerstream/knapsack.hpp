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
#include <random>
#include <span>
#include <vector>

namespace layerstream {

struct KnapsackItem {
  double value = 0.0;
  std::int64_t weight = 1;
};

// One row of the assignment matrix is a small 0/1 knapsack: pick chunks
// (items) for one neighbor under its per-period capacity. Callers pass
// items best-first; solvers return indices into that span.
class RowSolver {
 public:
  virtual ~RowSolver() = default;
  virtual std::vector<int> solve(std::span<const KnapsackItem> items,
                                 std::int64_t capacity) const = 0;
};

// Exact dynamic program. When every weight is 1 the reconstruction takes
// the first fitting items in input order, i.e. exactly the greedy top-C
// pick over the caller's priority order.
class DpRowSolver : public RowSolver {
 public:
  std::vector<int> solve(std::span<const KnapsackItem> items,
                         std::int64_t capacity) const override;
};

// Takes items in input order while they fit. Optimal for unit weights;
// a plain density-free greedy otherwise. Kept as the independent path for
// the unit-weight cross-check against the DP.
class GreedyRowSolver : public RowSolver {
 public:
  std::vector<int> solve(std::span<const KnapsackItem> items,
                         std::int64_t capacity) const override;
};

struct HarmonyParams {
  int memory_size = 8;
  int iterations = 200;
  double memory_rate = 0.9;   // probability of drawing a bit from memory
  double adjust_rate = 0.25;  // probability of flipping a drawn bit
  std::uint64_t seed = 1;
};

// Harmony-search metaheuristic over inclusion vectors, with a drop-repair
// for capacity. Approximate; deterministic for a fixed seed. Provided as
// the pluggable alternative backend, not used by default.
class HarmonyRowSolver : public RowSolver {
 public:
  using Params = HarmonyParams;

  explicit HarmonyRowSolver(HarmonyParams params = HarmonyParams())
      : params_(params) {}

  std::vector<int> solve(std::span<const KnapsackItem> items,
                         std::int64_t capacity) const override;

 private:
  HarmonyParams params_;
};

}  // namespace layerstream
