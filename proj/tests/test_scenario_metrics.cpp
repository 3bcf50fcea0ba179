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

#include "criticality/metrics/scenario.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace criticality;
using namespace criticality::metrics;
using fixtures::actor;

namespace
{

const EvalConfig kCenter{};

// Scenario sampled at `dt` where every actor moves with constant velocity
// from its initial state.
Scenario constant_velocity_scenario(
  const std::vector<ActorState> & initial, double duration, double dt)
{
  Scenario sc;
  const int n = static_cast<int>(std::round(duration / dt));
  for (int k = 0; k <= n; ++k) {
    Scene s;
    s.t = k * dt;
    for (const auto & a0 : initial) {
      ActorState a = a0;
      a.t = s.t;
      a.position = a0.position + a0.velocity * s.t;
      s.actors.push_back(std::move(a));
    }
    sc.scenes.push_back(std::move(s));
  }
  return sc;
}

// ttc(t) = 10 - t under a constant-velocity model: unit closing speed on a
// shrinking 10 m gap.
Scenario linear_ttc_scenario(double dt = 0.1)
{
  return constant_velocity_scenario(
    {actor("a", {0, 0}, {2, 0}), actor("b", {10, 0}, {1, 0})}, 10.0, dt);
}

}  // namespace

TEST_CASE("time aggregation")
{
  SUBCASE("constant series maps to itself under every order aggregate")
  {
    TimeSeries series;
    for (int k = 0; k <= 10; ++k) series.samples.emplace_back(0.5 * k, 3.25);
    for (const auto kind :
         {AggregateKind::kMin, AggregateKind::kMax, AggregateKind::kMean, AggregateKind::kMedian}) {
      CHECK(aggregate_time(series, {kind, 0.5}) == doctest::Approx(3.25));
    }
    CHECK(aggregate_time(series, {AggregateKind::kQuantile, 0.25}) == doctest::Approx(3.25));
    CHECK(aggregate_time(series, {AggregateKind::kIntegral, 0.0}) == doctest::Approx(3.25 * 5.0));
  }
  SUBCASE("trapezoidal mean")
  {
    TimeSeries series;
    series.samples = {{0.0, 1.0}, {1.0, 3.0}};
    CHECK(aggregate_time(series, {AggregateKind::kMean, 0.0}) == doctest::Approx(2.0));
  }
  SUBCASE("minimum ignores infinities")
  {
    TimeSeries series;
    series.samples = {{0.0, 5.0}, {1.0, 2.0}, {2.0, kInf}};
    CHECK(aggregate_time(series, {AggregateKind::kMin, 0.0}) == doctest::Approx(2.0));
  }
  SUBCASE("empty series is an error")
  {
    TimeSeries series;
    CHECK_THROWS(aggregate_time(series, {AggregateKind::kMin, 0.0}));
  }
}

TEST_CASE("actor aggregation")
{
  const PairMetricFn gap = [](const Scene & s, const std::string & a, const std::string & b) {
    return (s.actor(a).position - s.actor(b).position).norm();
  };
  Scene s = fixtures::scene(
    {actor("a", {0, 0}, {0, 0}), actor("b", {3, 4}, {0, 0}), actor("c", {6, 8}, {0, 0})});
  SUBCASE("designated max")
  {
    CHECK(aggregate_actors(s, gap, ActorAggregateMode::kDesignatedMax, "a") ==
          doctest::Approx(10.0));
  }
  SUBCASE("impartial mean over ordered pairs")
  {
    CHECK(aggregate_actors(s, gap, ActorAggregateMode::kImpartialMean) ==
          doctest::Approx((5.0 + 10.0 + 5.0 + 5.0 + 10.0 + 5.0) / 6.0));
  }
  SUBCASE("single other actor collapses both modes")
  {
    Scene two = fixtures::scene({actor("a", {0, 0}, {0, 0}), actor("b", {3, 4}, {0, 0})});
    CHECK(aggregate_actors(two, gap, ActorAggregateMode::kDesignatedMax, "a") ==
          doctest::Approx(5.0));
    CHECK(aggregate_actors(two, gap, ActorAggregateMode::kImpartialMean) == doctest::Approx(5.0));
  }
  SUBCASE("fewer than two actors is an error")
  {
    Scene one = fixtures::scene({actor("a", {0, 0}, {0, 0})});
    CHECK_THROWS(aggregate_actors(one, gap, ActorAggregateMode::kImpartialMean));
  }
  SUBCASE("scenario-level aggregation over the actor union")
  {
    const auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {1, 0}), actor("b", {0, 5}, {1, 0}), actor("c", {0, 10}, {1, 0})},
      2.0, 0.5);
    const ScenarioPairMetricFn initial_gap =
      [](const Scenario & scenario, const std::string & x, const std::string & y) {
        const auto & first = scenario.scenes.front();
        return (first.actor(x).position - first.actor(y).position).norm();
      };
    CHECK(aggregate_actors(sc, initial_gap, ActorAggregateMode::kDesignatedMax, "a") ==
          doctest::Approx(10.0));
    CHECK(aggregate_actors(sc, initial_gap, ActorAggregateMode::kImpartialMean) ==
          doctest::Approx((5.0 + 10.0 + 5.0) * 2.0 / 6.0));
  }
  SUBCASE("constant scene metric aggregates to the per-scene value over time")
  {
    const auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {1, 0}), actor("b", {0, 5}, {1, 0})}, 2.0, 0.5);
    const auto series = metric_series(sc, [&](const Scene & scene) {
      return aggregate_actors(scene, gap, ActorAggregateMode::kImpartialMean);
    });
    for (const auto kind :
         {AggregateKind::kMin, AggregateKind::kMax, AggregateKind::kMean, AggregateKind::kMedian}) {
      CHECK(aggregate_time(series, {kind, 0.5}) == doctest::Approx(5.0));
    }
  }
}

TEST_CASE("tet and tit")
{
  const models::SinglePointKinematicsModel cv(1, 30.0, 0.01);
  SUBCASE("linear ttc fixture")
  {
    const auto sc = linear_ttc_scenario();
    CHECK(tet(sc, "a", "b", 3.0, cv, kCenter) == doctest::Approx(3.0).epsilon(1e-4));
    CHECK(tit(sc, "a", "b", 3.0, cv, kCenter) == doctest::Approx(4.5).epsilon(1e-4));
    // Fine-grid trapezoid oracle on the analytic series.
    TimeSeries analytic;
    for (int k = 0; k <= 10000; ++k) analytic.samples.emplace_back(k * 1e-3, 10.0 - k * 1e-3);
    CHECK(tet_from_series(analytic, 3.0) == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(tit_from_series(analytic, 3.0) == doctest::Approx(4.5).epsilon(1e-9));
  }
  SUBCASE("never below the target")
  {
    const auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {1, 0}), actor("b", {10, 0}, {2, 0})}, 5.0, 0.5);
    CHECK(tet(sc, "a", "b", 3.0, cv, kCenter) == 0.0);
    CHECK(tit(sc, "a", "b", 3.0, cv, kCenter) == 0.0);
  }
  SUBCASE("constant ttc at half the target")
  {
    TimeSeries series;
    for (int k = 0; k <= 8; ++k) series.samples.emplace_back(0.5 * k, 1.5);
    CHECK(tet_from_series(series, 3.0) == doctest::Approx(4.0));
    CHECK(tit_from_series(series, 3.0) == doctest::Approx(1.5 * 4.0));
  }
  SUBCASE("bounds")
  {
    const auto sc = linear_ttc_scenario();
    const double duration = sc.te() - sc.t0();
    const double exposed = tet(sc, "a", "b", 3.0, cv, kCenter);
    CHECK(exposed >= 0.0);
    CHECK(exposed <= duration);
    CHECK(tit(sc, "a", "b", 3.0, cv, kCenter) <= 3.0 * exposed + 1e-9);
  }
}

TEST_CASE("evasive detection and tta")
{
  const models::SinglePointKinematicsModel cv(1, 30.0, 0.01);
  SUBCASE("detector fires at the first hard-braking sample")
  {
    Scenario sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {20, 0}), actor("b", {100, 0}, {10, 0})}, 4.0, 0.5);
    // Hard braking from t = 2 on.
    for (auto & scene : sc.scenes) {
      if (scene.t >= 2.0) scene.actors[0].acceleration = {-5.0, 0.0};
    }
    const auto detector = default_evasive_detector();
    const auto t = detector(sc, "a");
    REQUIRE(t.has_value());
    CHECK(*t == doctest::Approx(2.0));
    // ttc at the evasive time: gap 80 m, closing 10 m/s.
    CHECK(tta(sc, "a", "b", detector, cv, kCenter) == doctest::Approx(8.0).epsilon(1e-3));
  }
  SUBCASE("no evasive maneuver is an error")
  {
    const auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {20, 0}), actor("b", {100, 0}, {10, 0})}, 4.0, 0.5);
    CHECK_THROWS_WITH_AS(tta(sc, "a", "b", default_evasive_detector(), cv, kCenter),
                         doctest::Contains("no evasive event"), std::runtime_error);
  }
}

TEST_CASE("encroachment times")
{
  const ConflictArea ca{"ca", {{20, -2}, {24, -2}, {24, 2}, {20, 2}}};
  SUBCASE("analytic crossing against the interpolated events")
  {
    // 4 m long actor at 2 m/s: front reaches x=20 at t = (20-2)/2 = 9,
    // rear leaves x=24 at t = (24+2)/2 = 13.
    ActorState a = actor("a", {0, 0}, {2, 0});
    a.length = 4.0;
    const auto sc = constant_velocity_scenario({a}, 20.0, 0.25);
    const auto interval = encroachment_interval(sc, "a", ca);
    REQUIRE(interval.has_value());
    CHECK(interval->entry == doctest::Approx(9.0).epsilon(1e-4));
    CHECK(interval->exit == doctest::Approx(13.0).epsilon(1e-4));
    CHECK(et(sc, "a", ca) == doctest::Approx(4.0).epsilon(1e-3));
  }
  SUBCASE("pet from staggered crossings")
  {
    ActorState a = actor("a", {0, 0}, {2, 0});
    a.length = 4.0;
    ActorState b = actor("b", {22, -40 + 2.0 * 0.0}, {0, 2}, {0, 0}, M_PI / 2.0);
    b.length = 4.0;
    b.position = {22, -40};
    const auto sc = constant_velocity_scenario({a, b}, 25.0, 0.25);
    // b's front reaches y=-2 at t = (38-2)/2 = 18 > a's exit at 13.
    const auto value = pet(sc, "a", "b", ca);
    CHECK(value.flag.empty());
    CHECK(value.value == doctest::Approx(5.0).epsilon(1e-3));
  }
  SUBCASE("overlapping occupancy yields zero with a flag")
  {
    ActorState a = actor("a", {0, 0}, {2, 0});
    ActorState b = actor("b", {-2, 0}, {2, 0});
    const auto sc = constant_velocity_scenario({a, b}, 20.0, 0.25);
    const auto value = pet(sc, "a", "b", ca);
    CHECK(value.value == 0.0);
    CHECK(value.flag == "overlap");
  }
  SUBCASE("no encroachment is an error")
  {
    const auto sc =
      constant_velocity_scenario({actor("a", {0, 10}, {2, 0})}, 5.0, 0.25);
    CHECK_THROWS_WITH_AS(et(sc, "a", ca), doctest::Contains("no encroachment"),
                         std::runtime_error);
  }
}

TEST_CASE("soi")
{
  SUBCASE("single neighbor inside the personal space in exactly five samples")
  {
    // b sits 3 m to the side for five samples, then departs laterally fast.
    Scenario sc;
    for (int k = 0; k < 10; ++k) {
      Scene s;
      s.t = k * 1.0;
      ActorState a = actor("a", {0, 0}, {0, 0});
      ActorState b = actor("b", {0, k < 5 ? 2.4 : 100.0}, {0, 0});
      a.t = b.t = s.t;
      s.actors = {a, b};
      sc.scenes.push_back(s);
    }
    const auto space = default_personal_space(0.5, 1.0);
    CHECK(soi(sc, "a", space) == 5);
  }
  SUBCASE("no overlap counts zero")
  {
    const auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {1, 0}), actor("b", {0, 50}, {1, 0})}, 5.0, 1.0);
    CHECK(soi(sc, "a", default_personal_space()) == 0);
  }
  SUBCASE("two simultaneous violators count per pair")
  {
    Scenario sc;
    for (int k = 0; k < 3; ++k) {
      Scene s;
      s.t = k;
      ActorState a = actor("a", {0, 0}, {0, 0});
      ActorState b = actor("b", {0, 2.4}, {0, 0});
      ActorState c = actor("c", {0, -2.4}, {0, 0});
      a.t = b.t = c.t = s.t;
      s.actors = {a, b, c};
      sc.scenes.push_back(s);
    }
    CHECK(soi(sc, "a", default_personal_space(0.5, 1.0)) == 6);
  }
}

TEST_CASE("pri")
{
  const models::SinglePointKinematicsModel cv(1, 60.0, 0.01);
  const ConflictArea ca{"zebra", {{40, -3}, {44, -3}, {44, 3}, {40, 3}}};
  SUBCASE("no conflict period")
  {
    // Pedestrian far from the crossing, vehicle slow and distant.
    ActorState veh = actor("a", {0, 0}, {5, 0});
    veh.reaction_time = 0.5;
    ActorState ped = actor("p", {42, 200}, {0, 0.1}, {0, 0}, -M_PI / 2.0);
    ped.actor_class = ActorClass::kPedestrian;
    const auto sc = constant_velocity_scenario({veh, ped}, 2.0, 0.25);
    const auto v = pri(sc, "a", ca, "p", cv, kCenter);
    CHECK(v.value == 0.0);
    CHECK(!v.flag.empty());
  }
  SUBCASE("approach fixture against a fine-grid oracle")
  {
    // Pedestrian 2 m short of the crossing reaches it well before the
    // vehicle, whose stopping time exceeds its arrival time.
    ActorState veh = actor("a", {0, 0}, {18, 0});
    veh.reaction_time = 0.8;
    veh.capabilities.a_long_min = -6.0;
    ActorState ped = actor("p", {42, -5}, {0, 1.4}, {0, 0}, M_PI / 2.0);
    ped.actor_class = ActorClass::kPedestrian;

    const auto coarse = constant_velocity_scenario({veh, ped}, 2.0, 0.05);
    const auto fine = constant_velocity_scenario({veh, ped}, 2.0, 0.001);
    const auto v_coarse = pri(coarse, "a", ca, "p", cv, kCenter);
    const auto v_fine = pri(fine, "a", ca, "p", cv, kCenter);
    REQUIRE(v_coarse.flag.empty());
    REQUIRE(v_fine.flag.empty());
    CHECK(v_coarse.value > 0.0);
    CHECK(std::abs(v_coarse.value - v_fine.value) <= 0.001 * std::abs(v_fine.value) + 1e-9);
  }
}

TEST_CASE("cpi")
{
  const models::SinglePointKinematicsModel cv(1, 120.0, 0.01);
  SUBCASE("constant requirement of -10 against N(-8, 1)")
  {
    // Scenes re-stating the same closing geometry: v1=20, v2=10, gap 5.
    Scenario sc;
    for (int k = 0; k <= 4; ++k) {
      Scene s = fixtures::scene(
        {actor("a", {0, 0}, {20, 0}), actor("b", {5, 0}, {10, 0})}, 0.5 * k);
      sc.scenes.push_back(s);
    }
    const double value = cpi(sc, "a", "b", -8.0, 1.0, cv, kCenter);
    CHECK(value == doctest::Approx(gaussian_cdf(2.0)).epsilon(1e-4));
  }
  SUBCASE("no requirement gives a vanishing probability")
  {
    Scenario sc;
    for (int k = 0; k <= 4; ++k) {
      sc.scenes.push_back(fixtures::scene(
        {actor("a", {0, 0}, {10, 0}), actor("b", {50, 0}, {15, 0})}, 0.5 * k));
    }
    CHECK(cpi(sc, "a", "b", -8.0, 1.0, cv, kCenter) <= 1e-14);
  }
  SUBCASE("monotone in the capability mean")
  {
    Scenario sc;
    for (int k = 0; k <= 4; ++k) {
      sc.scenes.push_back(fixtures::scene(
        {actor("a", {0, 0}, {20, 0}), actor("b", {20, 0}, {10, 0})}, 0.5 * k));
    }
    double previous = kInf;
    for (double mu : {-4.0, -6.0, -8.0, -10.0}) {
      const double value = cpi(sc, "a", "b", mu, 1.0, cv, kCenter);
      CHECK(value <= previous + 1e-12);
      previous = value;
    }
  }
  SUBCASE("zero-length scenario is an error")
  {
    Scenario sc;
    sc.scenes.push_back(fixtures::scene({actor("a", {0, 0}, {20, 0})}, 0.0));
    CHECK_THROWS(cpi(sc, "a", "a", -8.0, 1.0, cv, kCenter));
  }
}

TEST_CASE("conflict index")
{
  SUBCASE("component arithmetic")
  {
    CHECK(ci_from_components(2.0, 1.0e5, 0.5, 1.0) ==
          doctest::Approx(0.5 * 1.0e5 / std::exp(2.0)));
    CHECK(ci_from_components(2.0, 1.0e5, 0.0, 1.0) == 0.0);
  }
  SUBCASE("monotone decay in beta")
  {
    double previous = kInf;
    for (double beta : {1.0, 2.0, 4.0}) {
      const double v = ci_from_components(2.0, 1.0e5, 0.5, beta);
      CHECK(v < previous);
      previous = v;
    }
  }
  SUBCASE("full evaluation requires masses")
  {
    const ConflictArea ca{"ca", {{20, -2}, {24, -2}, {24, 2}, {20, 2}}};
    ActorState a = actor("a", {0, 0}, {2, 0});
    a.length = 4.0;
    ActorState b = actor("b", {22, -40}, {0, 2}, {0, 0}, M_PI / 2.0);
    b.length = 4.0;
    auto sc = constant_velocity_scenario({a, b}, 25.0, 0.25);
    CHECK_THROWS(ci(sc, "a", "b", ca, 0.5, 1.0));
    for (auto & scene : sc.scenes) {
      scene.actors[0].mass = 1000.0;
      scene.actors[1].mass = 2000.0;
    }
    const double v = ci(sc, "a", "b", ca, 0.5, 1.0);
    CHECK(v > 0.0);
    // Hypothetical inelastic collision of 2 m/s vs 2 m/s at right angles.
    const Vec2 v1{2, 0}, v2{0, 2};
    const Vec2 va = (1000.0 * v1 + 2000.0 * v2) / 3000.0;
    const double dke =
      0.5 * 1000.0 * v1.squaredNorm() + 0.5 * 2000.0 * v2.squaredNorm() -
      0.5 * 3000.0 * va.squaredNorm();
    CHECK(v == doctest::Approx(0.5 * dke / std::exp(1.0 * 5.0)).epsilon(1e-2));
  }
}

TEST_CASE("accident metric")
{
  SUBCASE("recorded event")
  {
    auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {1, 0}), actor("b", {50, 0}, {1, 0})}, 2.0, 0.5);
    CHECK(am(sc) == 0);
    sc.accident_events.push_back({1.0, "a", "b", 10, 2, 0, 5, 1000.0, 2000.0});
    CHECK(am(sc) == 1);
  }
  SUBCASE("overlap in a single scene sample")
  {
    auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {10, 0}), actor("b", {21, 0}, {0, 0})}, 4.0, 0.5);
    CHECK(am(sc) == 1);
  }
  SUBCASE("a recorded overlap pins the over-approximating collision time to zero")
  {
    const auto sc = constant_velocity_scenario(
      {actor("a", {0, 0}, {10, 0}), actor("b", {21, 0}, {0, 0})}, 4.0, 0.5);
    REQUIRE(am(sc) == 1);
    const double horizon = 10.0, step = 0.05;
    auto cv = std::make_shared<models::SinglePointKinematicsModel>(1, horizon, step);
    const models::TraceSetModel set({cv}, {}, horizon, step);
    EvalConfig fp;
    fp.mode = geom::DistanceMode::kFootprint;
    double min_wttc = kInf;
    for (const auto & scene : sc.scenes) {
      min_wttc = std::min(min_wttc, wttc(scene, "a", "b", set, fp));
    }
    CHECK(min_wttc == 0.0);
  }
}

TEST_CASE("delta-v and the fatality model")
{
  SUBCASE("mass-weighted two-actor form")
  {
    ActorState a = actor("a", {0, 0}, {20, 0});
    a.mass = 1000.0;
    ActorState b = actor("b", {10, 0}, {10, 0});
    b.mass = 2000.0;
    const Scene s = fixtures::scene({a, b});
    CHECK(delta_v(s, "a", "b") == doctest::Approx(-20.0 / 3.0));
  }
  SUBCASE("equal speeds")
  {
    ActorState a = actor("a", {0, 0}, {20, 0});
    a.mass = 1000.0;
    ActorState b = actor("b", {10, 0}, {0, 20});
    b.mass = 2000.0;
    const Scene s = fixtures::scene({a, b});
    CHECK(delta_v(s, "a", "b") == 0.0);
  }
  SUBCASE("event form")
  {
    const AccidentEvent ev{1.0, "a", "b", 20.0, 12.0, 10.0, 14.0, 1000.0, 2000.0};
    CHECK(delta_v_event(ev, "a") == doctest::Approx(-8.0));
    CHECK(delta_v_event(ev, "b") == doctest::Approx(4.0));
    CHECK_THROWS(delta_v_event(ev, "zzz"));
  }
  SUBCASE("joksch quartic")
  {
    CHECK(joksch_fatality(31.74) == 1.0);
    CHECK(joksch_fatality(15.87) == 0.0625);
    CHECK(joksch_fatality(0.0) == 0.0);
    CHECK(joksch_fatality(100.0) == 1.0);  // clamped
    double previous = 0.0;
    for (double dv = 0.0; dv <= 40.0; dv += 2.0) {
      const double p = joksch_fatality(dv);
      CHECK(p >= previous);
      previous = p;
    }
  }
}

TEST_CASE("conflict severity")
{
  const models::SinglePointKinematicsModel cv(1, 60.0, 0.01);
  // Braking begins at t = 2; masses 1000/2000, speeds 20 and 10.
  const auto make = [](double a1_mag) {
    Scenario sc;
    for (int k = 0; k <= 8; ++k) {
      const double t = 0.5 * k;
      Scene s;
      s.t = t;
      ActorState a = actor("a", {20.0 * t, 0}, {20, 0});
      a.mass = 1000.0;
      if (t >= 2.0) a.acceleration = {-a1_mag, 0.0};
      ActorState b = actor("b", {100 + 10.0 * t, 0}, {10, 0});
      b.mass = 2000.0;
      a.t = b.t = t;
      s.actors = {a, b};
      sc.scenes.push_back(s);
    }
    return sc;
  };
  SUBCASE("composition of delta-v, tta, and the braking magnitude")
  {
    const auto sc = make(5.0);
    // At t=2: gap 80, closing 10 -> TTA = 8; dv = 2/3 * (10-20) = -20/3.
    const double expected = -20.0 / 3.0 - 8.0 * 5.0 * (2.0 / 3.0);
    CHECK(cs(sc, "a", "b", default_evasive_detector(), cv, kCenter) ==
          doctest::Approx(expected).epsilon(1e-3));
  }
  SUBCASE("zero braking magnitude reduces to delta-v")
  {
    // Detector keyed on lateral jerk: inject a lateral jerk spike instead.
    auto sc = make(0.0);
    for (auto & scene : sc.scenes) {
      if (scene.t >= 2.0) scene.actors[0].jerk = Vec2{0.0, 6.0};
    }
    CHECK(cs(sc, "a", "b", default_evasive_detector(), cv, kCenter) ==
          doctest::Approx(-20.0 / 3.0).epsilon(1e-6));
  }
}
