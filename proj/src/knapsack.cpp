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

#include "layerstream/knapsack.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace layerstream {

std::vector<int> DpRowSolver::solve(std::span<const KnapsackItem> items,
                                    std::int64_t capacity) const {
  if (capacity < 0) {
    throw std::invalid_argument("knapsack: negative capacity");
  }
  const int n = static_cast<int>(items.size());
  std::int64_t weight_sum = 0;
  for (const auto& item : items) {
    if (item.weight < 1) {
      throw std::invalid_argument("knapsack: weights must be >= 1");
    }
    weight_sum += item.weight;
  }
  const std::int64_t cap = std::min(capacity, weight_sum);
  if (n == 0 || cap == 0) return {};

  // best[i][c] = optimal value using items i..n-1 with capacity c.
  const std::size_t stride = static_cast<std::size_t>(cap) + 1;
  std::vector<double> best((static_cast<std::size_t>(n) + 1) * stride, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    const double v = items[static_cast<std::size_t>(i)].value;
    const std::int64_t w = items[static_cast<std::size_t>(i)].weight;
    double* row = best.data() + static_cast<std::size_t>(i) * stride;
    const double* next = row + stride;
    for (std::int64_t c = 0; c <= cap; ++c) {
      double take = -1.0;
      if (w <= c) take = v + next[c - w];
      row[c] = std::max(next[c], take);
    }
  }

  // Walk forward, preferring to take: with equal-value alternatives the
  // earlier (higher-priority) item wins, which reproduces the greedy
  // selection whenever weights are all 1.
  std::vector<int> chosen;
  std::int64_t c = cap;
  for (int i = 0; i < n && c > 0; ++i) {
    const double v = items[static_cast<std::size_t>(i)].value;
    const std::int64_t w = items[static_cast<std::size_t>(i)].weight;
    const double* next = best.data() + (static_cast<std::size_t>(i) + 1) * stride;
    if (w <= c && v + next[c - w] >= next[c]) {
      chosen.push_back(i);
      c -= w;
    }
  }
  return chosen;
}

std::vector<int> GreedyRowSolver::solve(std::span<const KnapsackItem> items,
                                        std::int64_t capacity) const {
  if (capacity < 0) {
    throw std::invalid_argument("knapsack: negative capacity");
  }
  std::vector<int> chosen;
  std::int64_t used = 0;
  for (int i = 0; i < static_cast<int>(items.size()); ++i) {
    const std::int64_t w = items[static_cast<std::size_t>(i)].weight;
    if (w < 1) {
      throw std::invalid_argument("knapsack: weights must be >= 1");
    }
    if (used + w <= capacity) {
      chosen.push_back(i);
      used += w;
    }
  }
  return chosen;
}

namespace {

double solution_value(const std::vector<char>& take,
                      std::span<const KnapsackItem> items) {
  double v = 0.0;
  for (std::size_t i = 0; i < take.size(); ++i) {
    if (take[i]) v += items[i].value;
  }
  return v;
}

std::int64_t solution_weight(const std::vector<char>& take,
                             std::span<const KnapsackItem> items) {
  std::int64_t w = 0;
  for (std::size_t i = 0; i < take.size(); ++i) {
    if (take[i]) w += items[i].weight;
  }
  return w;
}

// Drop the worst value-per-weight items until the capacity holds, then
// fill remaining room greedily in input order.
void repair(std::vector<char>& take, std::span<const KnapsackItem> items,
            std::int64_t capacity) {
  std::int64_t weight = solution_weight(take, items);
  while (weight > capacity) {
    int worst = -1;
    double worst_density = 0.0;
    for (std::size_t i = 0; i < take.size(); ++i) {
      if (!take[i]) continue;
      const double density =
          items[i].value / static_cast<double>(items[i].weight);
      if (worst < 0 || density < worst_density) {
        worst = static_cast<int>(i);
        worst_density = density;
      }
    }
    take[static_cast<std::size_t>(worst)] = 0;
    weight -= items[static_cast<std::size_t>(worst)].weight;
  }
  for (std::size_t i = 0; i < take.size(); ++i) {
    if (!take[i] && weight + items[i].weight <= capacity) {
      take[i] = 1;
      weight += items[i].weight;
    }
  }
}

}  // namespace

std::vector<int> HarmonyRowSolver::solve(std::span<const KnapsackItem> items,
                                         std::int64_t capacity) const {
  if (capacity < 0) {
    throw std::invalid_argument("knapsack: negative capacity");
  }
  const std::size_t n = items.size();
  if (n == 0 || capacity == 0) return {};
  for (const auto& item : items) {
    if (item.weight < 1) {
      throw std::invalid_argument("knapsack: weights must be >= 1");
    }
  }

  std::mt19937_64 rng(params_.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  std::uniform_int_distribution<int> pick_row(0, params_.memory_size - 1);

  std::vector<std::vector<char>> memory;
  std::vector<double> values;
  memory.reserve(static_cast<std::size_t>(params_.memory_size));
  for (int m = 0; m < params_.memory_size; ++m) {
    std::vector<char> take(n, 0);
    for (std::size_t i = 0; i < n; ++i) take[i] = coin(rng) < 0.5 ? 1 : 0;
    repair(take, items, capacity);
    values.push_back(solution_value(take, items));
    memory.push_back(std::move(take));
  }

  for (int it = 0; it < params_.iterations; ++it) {
    std::vector<char> candidate(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      char bit;
      if (coin(rng) < params_.memory_rate) {
        bit = memory[static_cast<std::size_t>(pick_row(rng))][i];
        if (coin(rng) < params_.adjust_rate) bit = bit ? 0 : 1;
      } else {
        bit = coin(rng) < 0.5 ? 1 : 0;
      }
      candidate[i] = bit;
    }
    repair(candidate, items, capacity);
    const double value = solution_value(candidate, items);
    auto worst = std::min_element(values.begin(), values.end());
    if (value > *worst) {
      const std::size_t at =
          static_cast<std::size_t>(worst - values.begin());
      memory[at] = std::move(candidate);
      values[at] = value;
    }
  }

  const std::size_t best =
      static_cast<std::size_t>(std::max_element(values.begin(), values.end()) -
                               values.begin());
  std::vector<int> chosen;
  for (std::size_t i = 0; i < n; ++i) {
    if (memory[best][i]) chosen.push_back(static_cast<int>(i));
  }
  return chosen;
}

}  // namespace layerstream
