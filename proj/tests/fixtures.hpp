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

// Shared fixtures and brute-force oracles for the test suites. Oracles stay
// independent of the library's evaluation path: plain time stepping on the
// closed-form kinematics.

#ifndef TESTS_FIXTURES_HPP_
#define TESTS_FIXTURES_HPP_

#include "criticality/core/types.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace fixtures
{

using criticality::ActorState;
using criticality::Scene;
using criticality::Scenario;
using criticality::Vec2;

inline ActorState actor(
  const std::string & id, Vec2 p, Vec2 v, Vec2 a = Vec2::Zero(), double yaw = 0.0)
{
  ActorState s;
  s.id = id;
  s.position = p;
  s.velocity = v;
  s.acceleration = a;
  s.yaw = yaw;
  return s;
}

inline Scene scene(std::vector<ActorState> actors, double t = 0.0)
{
  Scene s;
  s.t = t;
  for (auto & a : actors) a.t = t;
  s.actors = std::move(actors);
  return s;
}

// Position under constant acceleration collinear with the velocity, frozen at
// standstill when decelerating (matches the prediction-model convention).
inline Vec2 clamped_position(const ActorState & s, double t)
{
  const double v = s.velocity.norm();
  const double a_along = v > 1e-12 ? s.acceleration.dot(s.velocity / v) : 0.0;
  if (a_along < -1e-12 && v > 1e-12) {
    const double t_stop = v / (-a_along);
    if (t >= t_stop) {
      return s.position + s.velocity * t_stop + 0.5 * s.acceleration * t_stop * t_stop;
    }
  }
  return s.position + s.velocity * t + 0.5 * s.acceleration * t * t;
}

// 1 ms brute-force first time the point distance drops to ~0.
inline std::optional<double> stepping_ttc(
  const ActorState & a, const ActorState & b, double horizon, double dt = 1e-3,
  double eps = 1e-6)
{
  double prev_gap = (clamped_position(a, 0.0) - clamped_position(b, 0.0)).norm();
  if (prev_gap <= eps) return 0.0;
  for (double t = dt; t <= horizon + 1e-12; t += dt) {
    const double gap = (clamped_position(a, t) - clamped_position(b, t)).norm();
    if (gap <= eps) return t;
    // Bracket a zero crossing the sampling stepped over.
    if (gap + prev_gap > 0 && prev_gap > eps && gap > eps) {
      const Vec2 r0 = clamped_position(a, t - dt) - clamped_position(b, t - dt);
      const Vec2 r1 = clamped_position(a, t) - clamped_position(b, t);
      const Vec2 dr = r1 - r0;
      const double denom = dr.squaredNorm();
      if (denom > 1e-30) {
        const double s = -r0.dot(dr) / denom;
        if (s >= 0.0 && s <= 1.0 && (r0 + s * dr).norm() <= eps) return t - dt + s * dt;
      }
    }
    prev_gap = gap;
  }
  return std::nullopt;
}

struct SteppedEncounter
{
  double distance;
  double time;
};

// 1 ms brute-force minimum point distance and earliest argmin.
inline SteppedEncounter stepping_dce(
  const ActorState & a, const ActorState & b, double horizon, double dt = 1e-3)
{
  SteppedEncounter best{(a.position - b.position).norm(), 0.0};
  for (double t = dt; t <= horizon + 1e-12; t += dt) {
    const double gap = (clamped_position(a, t) - clamped_position(b, t)).norm();
    if (gap < best.distance - 1e-15) best = {gap, t};
  }
  return best;
}

// 1 ms brute-force first time the follower reaches the lead's frozen position.
inline std::optional<double> stepping_thw(
  const ActorState & follower, const ActorState & lead, double horizon, double dt = 1e-3,
  double eps = 1e-6)
{
  for (double t = 0.0; t <= horizon + 1e-12; t += dt) {
    const Vec2 r0 = clamped_position(follower, t) - lead.position;
    const Vec2 r1 = clamped_position(follower, t + dt) - lead.position;
    if (r0.norm() <= eps) return t;
    const Vec2 dr = r1 - r0;
    const double denom = dr.squaredNorm();
    if (denom > 1e-30) {
      const double s = -r0.dot(dr) / denom;
      if (s >= 0.0 && s <= 1.0 && (r0 + s * dr).norm() <= eps) return t + s * dt;
    }
  }
  return std::nullopt;
}

// Closed-form crossing of two constant-velocity rays; the independent route
// for pret on crossing fixtures.
inline std::optional<std::pair<double, double>> ray_crossing_times(
  const ActorState & a, const ActorState & b)
{
  const double denom = a.velocity.x() * b.velocity.y() - a.velocity.y() * b.velocity.x();
  if (std::abs(denom) < 1e-12) return std::nullopt;
  const Vec2 d = b.position - a.position;
  const double ta = (d.x() * b.velocity.y() - d.y() * b.velocity.x()) / denom;
  const double tb = (d.x() * a.velocity.y() - d.y() * a.velocity.x()) / denom;
  if (ta < 0.0 || tb < 0.0) return std::nullopt;
  return std::make_pair(ta, tb);
}

}  // namespace fixtures

#endif  // TESTS_FIXTURES_HPP_
