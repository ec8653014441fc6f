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

#include <doctest.h>

#include <string>

#include "layerstream/runner.hpp"
#include "layerstream/scenario.hpp"

using namespace layerstream;

namespace {

const char* kMicroScenario = R"(
# toy single-receiver setup
name = micro
video.layers = 4
video.layer_rate_kbps = 100
video.chunk_duration_s = 1
video.total_slots = 60
smoothing.window_s = 5
smoothing.strategies = raw, hybrid
scheduler.kinds = gap
overlay.receivers = 1
overlay.degree = 1
overlay.classes = 1.0:800
overlay.source_upload_kbps = 2000
trace.kind = walk
trace.walk_min_kbps = 100
trace.walk_max_kbps = 400
run.duration_slots = 60
run.seeds = 1, 2
output.events = true
)";

}  // namespace

TEST_CASE("scenario parsing: values, lists, comments") {
  const Scenario s = parse_scenario(kMicroScenario, "micro.cfg");
  CHECK(s.name == "micro");
  CHECK(s.layers == 4);
  CHECK(s.layer_rate_kbps == doctest::Approx(100.0));
  CHECK(s.total_slots == 60);
  CHECK(s.sw_slots() == 5);
  REQUIRE(s.strategies.size() == 2);
  CHECK(s.strategies[0] == SmoothingStrategy::Raw);
  CHECK(s.strategies[1] == SmoothingStrategy::Hybrid);
  CHECK(s.overlay.receiver_count == 1);
  CHECK(s.overlay.classes.size() == 1);
  CHECK(s.trace.kind == TraceSpec::Kind::Walk);
  CHECK(s.seeds == std::vector<std::uint64_t>{1, 2});
  CHECK(s.family().empty());
}

TEST_CASE("scenario parsing: errors name the line and key") {
  CHECK_THROWS_WITH_AS(parse_scenario("name = x\nbogus line\n", "f.cfg"),
                       "f.cfg:2: expected `key = value`", std::runtime_error);
  try {
    parse_scenario("name = x\nvideo.layers = many\n", "f.cfg");
    FAIL("expected throw");
  } catch (const std::runtime_error& err) {
    CHECK(std::string(err.what()).find("f.cfg:2") == 0);
    CHECK(std::string(err.what()).find("video.layers") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_scenario("name = x\nunknown.key = 1\n", "f.cfg"),
                  std::runtime_error);
}

TEST_CASE("scenario validation rejects inconsistent setups") {
  Scenario s = parse_scenario(kMicroScenario, "micro.cfg");
  s.smoothing_window_s = 2.5;  // not a whole number of slots
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  s = parse_scenario(kMicroScenario, "micro.cfg");
  s.grid_degrees = {4, 8};
  s.grid_layer_rates = {50.0};  // two sweeps at once
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  s = parse_scenario(kMicroScenario, "micro.cfg");
  s.duration = 1000;  // beyond the stream
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
}

TEST_CASE("overrides reuse the file keys") {
  Scenario s = parse_scenario(kMicroScenario, "micro.cfg");
  apply_override(s, "run.duration_slots", "30");
  CHECK(s.duration == 30);
  CHECK_THROWS_AS(apply_override(s, "no.such.key", "1"), std::runtime_error);
}

TEST_CASE("cell expansion crosses strategies, schedulers, seeds") {
  Scenario s = parse_scenario(kMicroScenario, "micro.cfg");
  const auto cells = expand_cells(s);
  CHECK(cells.size() == 2 * 2);  // 2 strategies x 1 scheduler x 2 seeds
  CHECK(cells[0].label == "raw+gap");
  CHECK(cells[2].label == "hybrid+gap");

  s.schedulers = {SchedulerKind::Gap, SchedulerKind::LayerP2P};
  const auto with_lp = expand_cells(s);
  // layerp2p contributes one strategy (raw) regardless of the list
  CHECK(with_lp.size() == (2 + 1) * 2);
  CHECK(with_lp.back().label == "layerp2p");
  CHECK(with_lp.back().strategy == SmoothingStrategy::Raw);
}

TEST_CASE("run_scenario produces summary rows and deterministic output") {
  Scenario s = parse_scenario(kMicroScenario, "micro.cfg");
  s.seeds = {1};
  const ScenarioResult a = run_scenario(s, "", 1);
  CHECK(a.cells.size() == 2);
  CHECK(a.summary.rows.size() == 2);
  CHECK(a.tables.count("aggregate_summary.csv") == 1);
  REQUIRE(a.cells[0].events_csv.has_value());
  REQUIRE(a.cells[0].timeline.has_value());
  CHECK(a.cells[0].timeline->rows.size() == 60);

  const ScenarioResult b = run_scenario(s, "", 2);  // different worker count
  CHECK(a.summary.to_string() == b.summary.to_string());
  CHECK(*a.cells[0].events_csv == *b.cells[0].events_csv);
}

TEST_CASE("compare_tables checks relations with filters") {
  CsvTable t;
  t.header = {"label", "metric"};
  t.rows = {{"a", "1.0"}, {"a", "2.0"}, {"b", "3.0"}, {"b", "4.0"}};

  CHECK(compare_tables(t, t, "metric", "le").empty());
  CHECK(compare_tables(t, t, "metric", "lt").size() == 4);

  // filtered: a-rows (1,2) vs b-rows (3,4), strict less-than holds
  CHECK(compare_tables(t, t, "metric", "lt", {{"label", "a"}},
                       {{"label", "b"}})
            .empty());
  CHECK(compare_tables(t, t, "metric", "ge", {{"label", "b"}},
                       {{"label", "a"}})
            .empty());

  CsvTable other;
  other.header = {"label", "other_metric"};
  other.rows = t.rows;
  CHECK_THROWS_AS(compare_tables(t, other, "metric", "le"),
                  std::runtime_error);
  CHECK_THROWS_AS(compare_tables(t, t, "metric", "weird"),
                  std::runtime_error);
}

TEST_CASE("csv parse/save round trip") {
  const std::string text = "a,b\n1,x\n2,y\n";
  const CsvTable table = CsvTable::parse(text, "t");
  CHECK(table.header.size() == 2);
  CHECK(table.rows.size() == 2);
  CHECK(table.to_string() == text);
  CHECK(table.column("b") == 1);
  CHECK(table.column("zz") == -1);
  CHECK_THROWS_AS(CsvTable::parse("a,b\n1\n", "t"), std::runtime_error);
}
