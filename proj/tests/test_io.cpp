// Copyright 2026 The criticality-toolkit Authors
//
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

#include "criticality/io/pipeline.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace criticality;
using namespace criticality::io;

namespace
{

const char * kHeader =
  "recording_id,t_s,actor_id,x_m,y_m,vx_mps,vy_mps,ax_mps2,ay_mps2,heading_rad,"
  "width_m,length_m,class,mass_kg";

std::string linear_ttc_csv()
{
  // ttc(t) = 10 - t: a at 2 m/s behind b at 1 m/s, gap 10 - t.
  std::ostringstream out;
  out << kHeader << "\n";
  for (int k = 0; k <= 100; ++k) {
    const double t = 0.1 * k;
    out << "rec1," << t << ",a," << 2.0 * t << ",0,2,0,0,0,0,2,5,human_vehicle,\n";
    out << "rec1," << t << ",b," << 10.0 + t << ",0,1,0,0,0,0,2,5,human_vehicle,\n";
  }
  return out.str();
}

RunConfig ttc_filter_config()
{
  return parse_run_config(R"({
    "model": {"kind": "constant_velocity", "horizon": 20.0, "step": 0.05},
    "distance_mode": "center",
    "metrics": [{"id": "ttc"}],
    "filter": {"targets": [{"metric": "ttc", "target": 3.0, "critical": "below"}]}
  })");
}

}  // namespace

TEST_CASE("trajectory parsing")
{
  SUBCASE("two actors over three samples build one scenario")
  {
    std::istringstream in(std::string(kHeader) +
                          "\n"
                          "r,0.0,a,0,0,1,0,0,0,0,2,5,human_vehicle,1500\n"
                          "r,0.0,b,10,0,1,0,0,0,0,2,5,pedestrian,\n"
                          "r,0.1,a,0.1,0,1,0,0,0,0,2,5,human_vehicle,1500\n"
                          "r,0.1,b,10.1,0,1,0,0,0,0,2,5,pedestrian,\n"
                          "r,0.2,a,0.2,0,1,0,0,0,0,2,5,human_vehicle,1500\n"
                          "r,0.2,b,10.2,0,1,0,0,0,0,2,5,pedestrian,\n");
    const auto recordings = parse_trajectories_stream(in, "test");
    REQUIRE(recordings.size() == 1);
    CHECK(recordings[0].id == "r");
    CHECK(recordings[0].scenario.scenes.size() == 3);
    CHECK(recordings[0].scenario.scenes[0].actors.size() == 2);
    CHECK(recordings[0].scenario.scenes[0].actor("a").mass == doctest::Approx(1500.0));
    CHECK(!recordings[0].scenario.scenes[0].actor("b").mass.has_value());
    CHECK(recordings[0].scenario.scenes[0].actor("b").actor_class == ActorClass::kPedestrian);
  }
  SUBCASE("empty data section yields an empty list")
  {
    std::istringstream in(std::string(kHeader) + "\n");
    CHECK(parse_trajectories_stream(in, "test").empty());
  }
  SUBCASE("shuffled rows parse to the same scenario")
  {
    std::vector<std::string> rows;
    for (int k = 0; k <= 20; ++k) {
      const double t = 0.1 * k;
      rows.push_back("r," + std::to_string(t) + ",a," + std::to_string(2.0 * t) +
                     ",0,2,0,0,0,0,2,5,human_vehicle,");
      rows.push_back("r," + std::to_string(t) + ",b," + std::to_string(10.0 + t) +
                     ",0,1,0,0,0,0,2,5,human_vehicle,");
    }
    std::string sorted_text = std::string(kHeader) + "\n";
    for (const auto & row : rows) sorted_text += row + "\n";
    std::mt19937 rng(5);
    std::shuffle(rows.begin(), rows.end(), rng);
    std::string shuffled_text = std::string(kHeader) + "\n";
    for (const auto & row : rows) shuffled_text += row + "\n";

    std::istringstream in1(sorted_text), in2(shuffled_text);
    const auto a = parse_trajectories_stream(in1, "sorted");
    const auto b = parse_trajectories_stream(in2, "shuffled");
    REQUIRE(a.size() == b.size());
    REQUIRE(a[0].scenario.scenes.size() == b[0].scenario.scenes.size());
    for (std::size_t k = 0; k < a[0].scenario.scenes.size(); ++k) {
      const auto & sa = a[0].scenario.scenes[k];
      const auto & sb = b[0].scenario.scenes[k];
      CHECK(sa.t == sb.t);
      REQUIRE(sa.actors.size() == sb.actors.size());
      for (std::size_t i = 0; i < sa.actors.size(); ++i) {
        CHECK(sa.actors[i].id == sb.actors[i].id);
        CHECK(sa.actors[i].position == sb.actors[i].position);
      }
    }
  }
  SUBCASE("missing mandatory column")
  {
    std::istringstream in("recording_id,t_s,actor_id,x_m,y_m\nr,0,a,0,0\n");
    CHECK_THROWS_WITH_AS(parse_trajectories_stream(in, "test"),
                         doctest::Contains("missing mandatory column"), std::runtime_error);
  }
  SUBCASE("non-finite numerics are rejected with the line number")
  {
    std::istringstream in(std::string(kHeader) +
                          "\nr,0.0,a,nan,0,1,0,0,0,0,2,5,human_vehicle,\n");
    CHECK_THROWS_WITH_AS(parse_trajectories_stream(in, "test"), doctest::Contains("line 2"),
                         std::runtime_error);
  }
  SUBCASE("duplicate actor sample at one timestamp")
  {
    std::istringstream in(std::string(kHeader) +
                          "\n"
                          "r,0.0,a,0,0,1,0,0,0,0,2,5,human_vehicle,\n"
                          "r,0.0,a,1,0,1,0,0,0,0,2,5,human_vehicle,\n");
    CHECK_THROWS_WITH_AS(parse_trajectories_stream(in, "test"),
                         doctest::Contains("non-monotone"), std::runtime_error);
  }
  SUBCASE("presence gaps are allowed")
  {
    std::istringstream in(std::string(kHeader) +
                          "\n"
                          "r,0.0,a,0,0,1,0,0,0,0,2,5,human_vehicle,\n"
                          "r,0.1,b,5,0,1,0,0,0,0,2,5,human_vehicle,\n"
                          "r,0.2,a,0.2,0,1,0,0,0,0,2,5,human_vehicle,\n");
    const auto recordings = parse_trajectories_stream(in, "test");
    CHECK(recordings[0].scenario.scenes.size() == 3);
  }
}

TEST_CASE("jerk derivation")
{
  std::ostringstream out;
  out << kHeader << "\n";
  for (int k = 0; k <= 10; ++k) {
    const double t = 0.1 * k;
    // Linearly growing acceleration: jerk = 3 m/s^3 longitudinally.
    out << "r," << t << ",a,0,0,10,0," << 3.0 * t << ",0,0,2,5,human_vehicle,\n";
  }
  std::istringstream in(out.str());
  auto recordings = parse_trajectories_stream(in, "test");
  derive_jerk(recordings[0].scenario, 1);
  for (const auto & scene : recordings[0].scenario.scenes) {
    REQUIRE(scene.actors[0].jerk.has_value());
    CHECK(scene.actors[0].jerk->x() == doctest::Approx(3.0).epsilon(1e-9));
  }
}

TEST_CASE("compute")
{
  SUBCASE("car-following values match the metric modules at every sample")
  {
    std::istringstream in(linear_ttc_csv());
    const auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = parse_run_config(R"({
      "model": {"kind": "constant_velocity", "horizon": 20.0, "step": 0.05},
      "metrics": [{"id": "ttc"}, {"id": "thw"}],
      "subject": "a"
    })");
    const std::string csv = compute_csv(cfg, recordings);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "recording,t,metric,subjects,value,unit,flag");
    int checked = 0;
    while (std::getline(lines, line)) {
      std::istringstream fields(line);
      std::string rec, t_str, metric, subjects, value, unit, flag;
      std::getline(fields, rec, ',');
      std::getline(fields, t_str, ',');
      std::getline(fields, metric, ',');
      std::getline(fields, subjects, ',');
      std::getline(fields, value, ',');
      std::getline(fields, unit, ',');
      std::getline(fields, flag, ',');
      const double t = parse_value(t_str);
      if (metric == "ttc" && subjects == "a|b") {
        const double expected = std::min(10.0 - t, 20.0);  // horizon-capped
        if (10.0 - t <= 20.0) {
          CHECK(parse_value(value) == doctest::Approx(expected).epsilon(1e-6));
          ++checked;
        }
      }
      if (metric == "thw" && subjects == "a|b") {
        CHECK(parse_value(value) == doctest::Approx((10.0 - t) / 2.0).epsilon(1e-6));
        ++checked;
      }
    }
    CHECK(checked >= 150);
  }
  SUBCASE("empty scenario list gives an empty table")
  {
    const RunConfig cfg = ttc_filter_config();
    CHECK(compute_csv(cfg, {}) == "recording,t,metric,subjects,value,unit,flag\n");
  }
  SUBCASE("a metric erroring on one pair leaves other rows intact")
  {
    std::istringstream in(std::string(kHeader) +
                          "\n"
                          "r,0.0,a,0,0,20,0,0,0,0,2,5,human_vehicle,\n"
                          "r,0.0,b,50,0,10,0,0,0,0,2,5,human_vehicle,\n"
                          "r,0.1,a,2,0,20,0,0,0,0,2,5,human_vehicle,\n"
                          "r,0.1,b,51,0,10,0,0,0,0,2,5,human_vehicle,\n");
    const auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = parse_run_config(R"({
      "model": {"kind": "constant_velocity", "horizon": 10.0, "step": 0.05},
      "metrics": [{"id": "pttc"}]
    })");
    const std::string csv = compute_csv(cfg, recordings);
    // b -> a is not car-following, so those rows carry errors; a -> b works.
    CHECK(csv.find("error") != std::string::npos);
    CHECK(csv.find("car-following") != std::string::npos);
    CHECK(csv.find("pttc,a|b,5") != std::string::npos);
  }
  SUBCASE("unknown metric ids are rejected by validation")
  {
    CHECK_THROWS(parse_run_config(R"({"metrics": [{"id": "bogus"}]})"));
  }
}

TEST_CASE("filter")
{
  SUBCASE("linear ttc fixture recovers the final interval")
  {
    std::istringstream in(linear_ttc_csv());
    const auto recordings = parse_trajectories_stream(in, "test");
    const auto intervals = filter_intervals(ttc_filter_config(), recordings);
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].recording == "rec1");
    CHECK(intervals[0].start == doctest::Approx(7.0).epsilon(0.05));
    CHECK(intervals[0].end == doctest::Approx(10.0));
  }
  SUBCASE("never-critical recording yields nothing")
  {
    std::istringstream in(linear_ttc_csv());
    auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = ttc_filter_config();
    cfg.targets[0].target = 1e-4;
    cfg.targets[0].critical_below = true;
    // Truncate to the early, uncritical part.
    recordings[0].scenario.scenes.resize(30);
    CHECK(filter_intervals(cfg, recordings).empty());
  }
  SUBCASE("overlapping intervals from two targets merge")
  {
    std::istringstream in(linear_ttc_csv());
    const auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = parse_run_config(R"({
      "model": {"kind": "constant_velocity", "horizon": 20.0, "step": 0.05},
      "filter": {"targets": [
        {"metric": "ttc", "target": 3.0, "critical": "below"},
        {"metric": "hw", "target": 5.0, "critical": "below"}
      ]}
    })");
    // hw = 10 - t <= 5 from t = 5; union is [5, 10].
    const auto intervals = filter_intervals(cfg, recordings);
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].start == doctest::Approx(5.0).epsilon(0.05));
    CHECK(intervals[0].end == doctest::Approx(10.0));
  }
  SUBCASE("margins extend and clamp to the recording span")
  {
    std::istringstream in(linear_ttc_csv());
    const auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = ttc_filter_config();
    cfg.margin_pre = 2.0;
    cfg.margin_post = 5.0;
    const auto intervals = filter_intervals(cfg, recordings);
    REQUIRE(intervals.size() == 1);
    CHECK(intervals[0].start == doctest::Approx(5.0).epsilon(0.05));
    CHECK(intervals[0].end == doctest::Approx(10.0));  // clamped at t_e
  }
  SUBCASE("disjoint critical episodes stay sorted and within the span")
  {
    // hw dips below 3 m twice: b jumps away between the episodes.
    std::ostringstream out;
    out << kHeader << "\n";
    for (int k = 0; k <= 100; ++k) {
      const double t = 0.1 * k;
      const double bx = (t < 3.0) ? 2.0 : (t < 6.0 ? 50.0 : 2.5);
      out << "r," << t << ",a,0,0,0,0,0,0,0,2,5,human_vehicle,\n";
      out << "r," << t << ",b," << bx << ",0,0,0,0,0,0,2,5,human_vehicle,\n";
    }
    std::istringstream in(out.str());
    const auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = parse_run_config(R"({
      "model": {"kind": "constant_velocity", "horizon": 5.0, "step": 0.1},
      "filter": {"targets": [{"metric": "hw", "target": 3.0, "critical": "below"}]}
    })");
    const auto intervals = filter_intervals(cfg, recordings);
    REQUIRE(intervals.size() == 2);
    for (const auto & iv : intervals) {
      CHECK(iv.start <= iv.end);
      CHECK(iv.start >= 0.0);
      CHECK(iv.end <= 10.0);
    }
    CHECK(intervals[0].end < intervals[1].start);
  }
}

TEST_CASE("determinism and round trips")
{
  SUBCASE("compute output is byte-identical across runs and job counts")
  {
    std::istringstream in(linear_ttc_csv());
    const auto recordings = parse_trajectories_stream(in, "test");
    RunConfig cfg = parse_run_config(R"({
      "model": {"kind": "constant_velocity", "horizon": 5.0, "step": 0.1},
      "metrics": [{"id": "ttc"}, {"id": "dce"}]
    })");
    cfg.jobs = 1;
    const std::string once = compute_csv(cfg, recordings);
    const std::string twice = compute_csv(cfg, recordings);
    cfg.jobs = 8;
    const std::string parallel = compute_csv(cfg, recordings);
    CHECK(once == twice);
    CHECK(once == parallel);
  }
  SUBCASE("simulate then parse reproduces the simulation")
  {
    const SimConfig sim = parse_sim_config(R"({
      "recording_id": "sim",
      "model": {"kind": "constant_acceleration", "horizon": 4.0, "step": 0.1},
      "actors": [
        {"id": "a", "x": 0.0, "y": 0.0, "vx": 13.377, "vy": 0.001, "ax": -0.37, "ay": 0.0},
        {"id": "b", "x": 51.3, "y": 3.7, "vx": 9.0, "vy": 0.0}
      ]
    })");
    const std::string csv = simulate_csv(sim);
    std::istringstream in(csv);
    const auto recordings = parse_trajectories_stream(in, "roundtrip");
    REQUIRE(recordings.size() == 1);
    const auto & sc = recordings[0].scenario;
    REQUIRE(sc.scenes.size() == 41);

    const auto model = models::make_model("constant_acceleration", 4.0, 0.1);
    const auto expected_a = model->predict(sim.actors[0]);
    for (std::size_t k = 0; k < sc.scenes.size(); ++k) {
      const auto & got = sc.scenes[k].actor("a");
      const auto & want = expected_a.states[k];
      CHECK(std::abs(got.position.x() - want.position.x()) <= 1e-9);
      CHECK(std::abs(got.position.y() - want.position.y()) <= 1e-9);
      CHECK(std::abs(got.velocity.x() - want.velocity.x()) <= 1e-9);
      CHECK(std::abs(got.t - want.t) <= 1e-9);
    }
  }
}

TEST_CASE("cli")
{
  const std::string cli = CRIT_CLI_PATH;
  const auto run = [&](const std::string & args) {
    const std::string cmd = cli + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
  };
  SUBCASE("no arguments is a usage error") { CHECK(run("") == 1); }
  SUBCASE("unknown subcommand is a usage error") { CHECK(run("frobnicate") == 1); }
  SUBCASE("missing file is a data error")
  {
    CHECK(run("suitability /nonexistent.txt /nonexistent.txt") == 2);
  }
  SUBCASE("suitability run against the shipped data succeeds")
  {
    const std::string kb = std::string(CRIT_DATA_DIR) + "/metric_knowledge_base.txt";
    const std::string reqs = std::string(CRIT_DATA_DIR) + "/requirements_left_turn.txt";
    CHECK(run("suitability " + kb + " " + reqs) == 0);
  }
  SUBCASE("malformed csv is a data error naming the offending line")
  {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "crit_cli_test";
    fs::create_directories(dir);
    const fs::path data = dir / "broken.csv";
    const fs::path config = dir / "config.json";
    std::ofstream(data) << kHeader << "\n"
                        << "r,0.0,a,0,0,1,0,0,0,0,2,5,human_vehicle,\n"
                        << "r,0.1,a,oops,0,1,0,0,0,0,2,5,human_vehicle,\n";
    std::ofstream(config) << R"({"metrics": [{"id": "hw"}]})";
    const fs::path err = dir / "stderr.txt";
    const std::string cmd = cli + " compute " + config.string() + " " + data.string() +
                            " -o /dev/null 2>" + err.string();
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 2);
    std::ifstream captured(err);
    const std::string text((std::istreambuf_iterator<char>(captured)),
                           std::istreambuf_iterator<char>());
    CHECK(text.find("line 3") != std::string::npos);
  }
}
