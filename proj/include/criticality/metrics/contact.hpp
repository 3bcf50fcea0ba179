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

#ifndef CRITICALITY__METRICS__CONTACT_HPP_
#define CRITICALITY__METRICS__CONTACT_HPP_

#include "criticality/core/geometry.hpp"
#include "criticality/core/types.hpp"
#include "criticality/models/models.hpp"

#include <optional>

namespace criticality::metrics
{

// Shared evaluation knobs for the metric catalog.
struct EvalConfig
{
  geom::DistanceMode mode{geom::DistanceMode::kCenter};
  double contact_eps{1e-9};     // center-mode contact distance
  double bisection_tol{1e-3};   // resolution of latest/least-such-that searches
  double accel_floor{-20.0};    // a_long_req search floor, m/s^2
  double accel_ceiling{20.0};   // a_lat_req search ceiling, m/s^2
};

// Contact semantics: in center mode two actors are in contact when their
// point distance drops to contact_eps; in footprint mode when the rectangle
// interiors overlap (boundary grazing is not contact).
bool in_contact(const ActorState & a, const ActorState & b, const EvalConfig & cfg);

// Earliest absolute time in the common span of both trajectories at which the
// actors are in contact, refined below sample resolution. `from` restricts the
// search to times >= from.
std::optional<double> first_contact_time(
  const models::Trajectory & a, const models::Trajectory & b, const EvalConfig & cfg,
  double from = -kInf);

// Earliest time the moving actor reaches a static polygon.
std::optional<double> first_reach_time(
  const models::Trajectory & a, const Polygon & target, const EvalConfig & cfg);

// Earliest time the moving actor reaches the (frozen) state of another actor.
std::optional<double> first_reach_time(
  const models::Trajectory & a, const ActorState & frozen, const EvalConfig & cfg);

struct ClosestEncounter
{
  double distance{kInf};
  double time{0.0};  // absolute; earliest time attaining the minimum
};

// Minimum predicted distance over the common span and its (earliest) argmin.
// Contact yields distance 0 at exactly the first contact time.
ClosestEncounter closest_encounter(
  const models::Trajectory & a, const models::Trajectory & b, const EvalConfig & cfg);

// Crossing point of the two center paths: pair of relative times at which
// each actor passes a common path point.
struct PathCrossing
{
  double time_a{0.0};
  double time_b{0.0};
};

// All center-path coincidences p_a(t_a) = p_b(t_b) between the sampled paths,
// including collinear car-following overlap.
std::vector<PathCrossing> path_crossings(
  const models::Trajectory & a, const models::Trajectory & b);

}  // namespace criticality::metrics

#endif  // CRITICALITY__METRICS__CONTACT_HPP_
