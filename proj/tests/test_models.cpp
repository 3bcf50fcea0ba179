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

#include "criticality/models/models.hpp"

#include "fixtures.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace criticality;
using namespace criticality::models;

TEST_CASE("taylor prediction")
{
  ActorState s = fixtures::actor("a", {0, 0}, {10, 0});
  SUBCASE("constant velocity")
  {
    const auto out = taylor_predict(s, 1, 2.0);
    CHECK(out.position.x() == doctest::Approx(20.0));
    CHECK(out.position.y() == doctest::Approx(0.0));
  }
  SUBCASE("constant acceleration")
  {
    s.acceleration = {2, 0};
    const auto out = taylor_predict(s, 2, 2.0);
    CHECK(out.position.x() == doctest::Approx(24.0));
    CHECK(out.velocity.x() == doctest::Approx(14.0));
  }
  SUBCASE("zero time is identity")
  {
    s.acceleration = {2, 0};
    const auto out = taylor_predict(s, 2, 0.0);
    CHECK(out.position == s.position);
    CHECK(out.velocity == s.velocity);
  }
  SUBCASE("missing jerk")
  {
    CHECK_THROWS_WITH_AS(taylor_predict(s, 3, 1.0), doctest::Contains("insufficient derivatives"),
                         std::invalid_argument);
    CHECK_NOTHROW(taylor_predict(s, 3, 1.0, true));  // zero-fill allowed
    s.jerk = Vec2{1, 0};
    const auto out = taylor_predict(s, 3, 2.0);
    CHECK(out.position.x() == doctest::Approx(20.0 + 8.0 / 6.0));
  }
}

TEST_CASE("simple car")
{
  ActorState s = fixtures::actor("a", {0, 0}, {10, 0});
  SUBCASE("zero steering reduces to straight motion")
  {
    const auto traj = simple_car_integrate(
      s, [](double) { return 10.0; }, [](double) { return 0.0; }, 3.0, 2.5, 0.01);
    CHECK(traj.states.back().position.x() == doctest::Approx(30.0));
    CHECK(traj.states.back().position.y() == doctest::Approx(0.0));
  }
  SUBCASE("constant steering draws a circle of radius L/tan(phi)")
  {
    const double L = 2.5, phi = 0.3, v = 10.0;
    const double R = L / std::tan(phi);
    const auto traj = simple_car_integrate(
      s, [v](double) { return v; }, [phi](double) { return phi; }, 2.0, L, 0.01);
    const Vec2 center{0.0, R};
    for (const auto & st : traj.states) {
      CHECK((st.position - center).norm() == doctest::Approx(R).epsilon(1e-6));
    }
    // Endpoint against the closed-form arc.
    const double omega = v / L * std::tan(phi);
    const double theta = omega * 2.0;
    CHECK(traj.states.back().position.x() == doctest::Approx(R * std::sin(theta)).epsilon(1e-7));
    CHECK(
      traj.states.back().position.y() ==
      doctest::Approx(R * (1.0 - std::cos(theta))).epsilon(1e-7));
  }
  SUBCASE("zero duration yields no motion")
  {
    const auto traj = simple_car_integrate(
      s, [](double) { return 10.0; }, [](double) { return 0.0; }, 0.0, 2.5, 0.01);
    CHECK(traj.states.empty());
  }
  SUBCASE("non-finite input is rejected")
  {
    CHECK_THROWS(simple_car_integrate(
      s, [](double) { return std::nan(""); }, [](double) { return 0.0; }, 1.0, 2.5, 0.01));
  }
  SUBCASE("RK4 convergence order on the circle fixture")
  {
    const double L = 2.5, phi = 0.3, v = 10.0;
    const double R = L / std::tan(phi);
    const double omega = v / L * std::tan(phi);
    const Vec2 exact{R * std::sin(omega * 2.0), R * (1.0 - std::cos(omega * 2.0))};
    const auto endpoint = [&](double h) {
      return simple_car_integrate(
               s, [v](double) { return v; }, [phi](double) { return phi; }, 2.0, L, h)
        .states.back()
        .position;
    };
    const double e1 = (endpoint(0.04) - exact).norm();
    const double e2 = (endpoint(0.02) - exact).norm();
    const double order = std::log2(e1 / e2);
    CHECK(order >= 3.5);
  }
}

TEST_CASE("continuous steering car")
{
  ActorState s = fixtures::actor("a", {0, 0}, {10, 0});
  const double L = 2.5;
  SUBCASE("zero steering rate reduces to the fixed-angle car")
  {
    s.steering_angle = 0.2;
    const auto a = continuous_steering_integrate(
      s, [](double) { return 8.0; }, [](double) { return 0.0; }, 2.0, L, 0.01);
    const auto b = simple_car_integrate(
      s, [](double) { return 8.0; }, [](double) { return 0.2; }, 2.0, L, 0.01);
    CHECK((a.states.back().position - b.states.back().position).norm() <= 1e-9);
  }
  SUBCASE("constant steering rate against a fine-step oracle")
  {
    s.steering_angle = 0.0;
    const auto coarse = continuous_steering_integrate(
      s, [](double) { return 8.0; }, [](double) { return 0.1; }, 2.0, L, 0.01);
    const auto fine = continuous_steering_integrate(
      s, [](double) { return 8.0; }, [](double) { return 0.1; }, 2.0, L, 0.0001);
    CHECK((coarse.states.back().position - fine.states.back().position).norm() <= 1e-6);
    CHECK(*coarse.states.back().steering_angle == doctest::Approx(0.2).epsilon(1e-9));
  }
  SUBCASE("zero speed keeps the position constant")
  {
    const auto traj = continuous_steering_integrate(
      s, [](double) { return 0.0; }, [](double) { return 0.5; }, 2.0, L, 0.01);
    CHECK((traj.states.back().position - s.position).norm() <= 1e-12);
  }
}

TEST_CASE("coordinated turn step")
{
  SUBCASE("straight-line limit below omega_eps")
  {
    const auto out = coordinated_turn_step({0, 0}, {10, 0}, 1e-9, 1.0);
    CHECK(out.position.x() == doctest::Approx(10.0));
    CHECK(out.velocity.x() == doctest::Approx(10.0));
  }
  SUBCASE("quarter turn clockwise")
  {
    const double w = M_PI / 2.0;
    const auto out = coordinated_turn_step({0, 0}, {10, 0}, w, 1.0);
    CHECK(out.position.x() == doctest::Approx(10.0 / w));
    CHECK(out.position.y() == doctest::Approx(-10.0 / w));
    CHECK(out.velocity.x() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.velocity.y() == doctest::Approx(-10.0));
  }
  SUBCASE("zero duration is the identity")
  {
    const auto out = coordinated_turn_step({1, 2}, {3, 4}, 0.5, 0.0);
    CHECK(out.position.x() == doctest::Approx(1.0));
    CHECK(out.velocity.y() == doctest::Approx(4.0));
  }
  SUBCASE("speed is preserved along the arc")
  {
    const auto out = coordinated_turn_step({0, 0}, {3, 4}, 0.7, 1.3);
    CHECK(out.velocity.norm() == doctest::Approx(5.0));
  }
}

TEST_CASE("augmented polar turn step")
{
  SUBCASE("straight advance in the omega -> 0 limit")
  {
    const auto out = augmented_ct_polar_step({0, 0}, 10.0, M_PI / 6.0, 0.0, 2.0);
    CHECK(out.position.x() == doctest::Approx(20.0 * std::cos(M_PI / 6.0)));
    CHECK(out.position.y() == doctest::Approx(20.0 * std::sin(M_PI / 6.0)));
  }
  SUBCASE("chord of the turning circle")
  {
    const auto out = augmented_ct_polar_step({0, 0}, 10.0, 0.0, 0.5, 2.0);
    const double chord = 2.0 * (10.0 / 0.5) * std::sin(0.5);
    CHECK(out.position.x() == doctest::Approx(chord * std::cos(0.5)));
    CHECK(out.position.y() == doctest::Approx(chord * std::sin(0.5)));
    CHECK(out.heading == doctest::Approx(1.0));
    CHECK(out.v_long == doctest::Approx(10.0));
  }
  SUBCASE("zero duration is the identity")
  {
    const auto out = augmented_ct_polar_step({1, 1}, 10.0, 0.3, 0.5, 0.0);
    CHECK(out.position.x() == doctest::Approx(1.0));
    CHECK(out.heading == doctest::Approx(0.3));
  }
  SUBCASE("matches the Cartesian coordinated turn on matched inputs")
  {
    // The polar form turns counterclockwise for positive omega, the
    // Cartesian transition clockwise; matched inputs flip the sign.
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int i = 0; i < 100; ++i) {
      const double v = 5.0 + 10.0 * u(rng);
      const double heading = u(rng);
      const double omega = u(rng);
      const double T = u(rng);
      const auto polar = augmented_ct_polar_step({0, 0}, v, heading, omega, T);
      const auto cart = coordinated_turn_step(
        {0, 0}, v * Vec2{std::cos(heading), std::sin(heading)}, -omega, T);
      CHECK((polar.position - cart.position).norm() <= 1e-9);
    }
  }
}

TEST_CASE("one-track model")
{
  const OneTrackParams params{80000.0, 80000.0, 1.2, 1.3, 1500.0, 2500.0};
  SUBCASE("equilibrium at zero state and zero steering")
  {
    const auto out = one_track_step({0.0, 0.0}, 20.0, params, 0.0, 0.05);
    CHECK(out.sideslip == doctest::Approx(0.0));
    CHECK(out.yaw_rate == doctest::Approx(0.0));
  }
  SUBCASE("steering sign symmetry")
  {
    const auto pos = one_track_step({0.0, 0.0}, 20.0, params, 0.05, 0.05);
    const auto neg = one_track_step({0.0, 0.0}, 20.0, params, -0.05, 0.05);
    CHECK(pos.sideslip == doctest::Approx(-neg.sideslip));
    CHECK(pos.yaw_rate == doctest::Approx(-neg.yaw_rate));
  }
  SUBCASE("standstill is rejected")
  {
    CHECK_THROWS_WITH_AS(one_track_step({0.0, 0.0}, 0.0, params, 0.1, 0.05),
                         doctest::Contains("standstill"), std::invalid_argument);
  }
  SUBCASE("step-halving convergence order")
  {
    const auto integrate = [&](double h, double total) {
      OneTrackState s{0.01, 0.02};
      const int n = static_cast<int>(std::round(total / h));
      for (int i = 0; i < n; ++i) s = one_track_step(s, 20.0, params, 0.05, h);
      return s;
    };
    const auto ref = integrate(0.0005, 0.2);
    const auto e_of = [&](double h) {
      const auto s = integrate(h, 0.2);
      return std::hypot(s.sideslip - ref.sideslip, s.yaw_rate - ref.yaw_rate);
    };
    const double order = std::log2(e_of(0.02) / e_of(0.01));
    CHECK(order >= 3.5);
  }
}

TEST_CASE("potential descent")
{
  SUBCASE("quadratic bowl converges to the center")
  {
    const Vec2 c{2.0, -1.0};
    const ScalarField bowl = [c](const Vec2 & p) { return (p - c).squaredNorm(); };
    const auto path = potential_descent({0, 0}, {bowl}, 0.2, 200);
    CHECK((path.back() - c).norm() <= 1e-3);
  }
  SUBCASE("symmetric bowls keep the path on the axis")
  {
    const ScalarField left = [](const Vec2 & p) { return (p - Vec2{-1, 2}).squaredNorm(); };
    const ScalarField right = [](const Vec2 & p) { return (p - Vec2{1, 2}).squaredNorm(); };
    const auto path = potential_descent({0, 0}, {left, right}, 0.1, 100);
    for (const auto & p : path) CHECK(std::abs(p.x()) <= 1e-9);
  }
  SUBCASE("linear ramp descends along the fixed gradient direction")
  {
    const Vec2 g{3.0, 4.0};
    const ScalarField ramp = [g](const Vec2 & p) { return g.dot(p); };
    const auto path = potential_descent({0, 0}, {ramp}, 0.1, 20);
    REQUIRE(path.size() > 2);
    for (std::size_t i = 1; i < path.size(); ++i) {
      const Vec2 step = path[i] - path[i - 1];
      const double cross = step.x() * g.y() - step.y() * g.x();
      CHECK(std::abs(cross) <= 1e-6 * step.norm() * g.norm());
      CHECK(step.dot(g) < 0.0);
    }
  }
  SUBCASE("combined potential is non-increasing along the path")
  {
    const ScalarField wavy = [](const Vec2 & p) {
      return p.squaredNorm() + std::sin(3.0 * p.x());
    };
    const auto path = potential_descent({2, 2}, {wavy}, 0.3, 60);
    for (std::size_t i = 1; i < path.size(); ++i) {
      CHECK(wavy(path[i]) <= wavy(path[i - 1]) + 1e-12);
    }
  }
}

TEST_CASE("prediction models return the input state at zero offset")
{
  ActorState s = fixtures::actor("a", {3, 4}, {5, 1}, {0.5, 0.0});
  s.yaw_rate = 0.2;
  const SinglePointKinematicsModel cv(1, 5.0, 0.1);
  const SinglePointKinematicsModel ca(2, 5.0, 0.1);
  const CoordinatedTurnModel ct(5.0, 0.1);
  const AugmentedPolarTurnModel polar(5.0, 0.1);
  for (const PredictionModel * m :
       {static_cast<const PredictionModel *>(&cv), static_cast<const PredictionModel *>(&ca),
        static_cast<const PredictionModel *>(&ct), static_cast<const PredictionModel *>(&polar)}) {
    const auto traj = m->predict(s);
    CHECK((traj.states.front().position - s.position).norm() <= 1e-12);
    CHECK(traj.states.front().t == s.t);
  }
}

TEST_CASE("braking single-point prediction stops instead of reversing")
{
  ActorState s = fixtures::actor("a", {0, 0}, {10, 0}, {-5, 0});
  const SinglePointKinematicsModel model(2, 5.0, 0.01);
  const auto traj = model.predict(s);
  const auto & last = traj.states.back();
  CHECK(last.velocity.norm() <= 1e-12);
  CHECK(last.position.x() == doctest::Approx(10.0));  // v^2 / (2a)
  for (const auto & st : traj.states) CHECK(st.velocity.x() >= -1e-12);
}

TEST_CASE("trace-set model carries weights and members")
{
  ActorState s = fixtures::actor("a", {0, 0}, {10, 0});
  auto cv = std::make_shared<SinglePointKinematicsModel>(1, 5.0, 0.1);
  auto ct = std::make_shared<CoordinatedTurnModel>(5.0, 0.1);
  const TraceSetModel set({cv, ct}, {0.6, 0.4}, 5.0, 0.1);
  const auto traces = set.predict_set(s);
  CHECK(traces.trajectories.size() == 2);
  CHECK(*traces.trajectories[0].weight == doctest::Approx(0.6));
  CHECK_THROWS(TraceSetModel({}, {}, 5.0, 0.1));
  const TraceSetModel bad({cv, ct}, {0.6, 0.6}, 5.0, 0.1);
  CHECK_THROWS(bad.predict_set(s));
}
