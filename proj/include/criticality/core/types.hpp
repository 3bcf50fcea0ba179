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

#ifndef CRITICALITY__CORE__TYPES_HPP_
#define CRITICALITY__CORE__TYPES_HPP_

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace criticality
{

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class ActorClass { kHumanVehicle, kAutomatedVehicle, kPedestrian, kBicycle, kOther };

ActorClass actor_class_from_string(const std::string & s);
std::string to_string(ActorClass c);

// Acceleration/speed limits of one actor. a_long_min is the strongest
// available braking and must be negative.
struct CapabilityEnvelope
{
  double a_long_min{-8.0};  // m/s^2, < 0
  double a_long_max{3.0};   // m/s^2, >= 0
  double a_lat_max{5.0};    // m/s^2, > 0
  double v_max{70.0};       // m/s, > 0
  double mu_max{0.8};       // friction coefficient, > 0

  void validate() const;
};

// Kinematic snapshot of one traffic participant at one instant.
struct ActorState
{
  std::string id;
  double t{0.0};
  Vec2 position{0.0, 0.0};
  Vec2 velocity{0.0, 0.0};
  Vec2 acceleration{0.0, 0.0};
  std::optional<Vec2> jerk;
  double yaw{0.0};       // rad
  double yaw_rate{0.0};  // rad/s
  std::optional<double> steering_angle;  // rad
  std::optional<double> sideslip;        // rad
  double width{2.0};   // m
  double length{5.0};  // m
  std::optional<double> mass;           // kg
  CapabilityEnvelope capabilities{};
  std::optional<double> reaction_time;  // s
  ActorClass actor_class{ActorClass::kHumanVehicle};

  double speed() const { return velocity.norm(); }
  void validate() const;
};

// Longitudinal/lateral components of a vector in an actor's yaw frame.
struct FrameComponents
{
  double longitudinal{0.0};
  double lateral{0.0};
};

FrameComponents decompose(const Vec2 & v, double yaw);
Vec2 compose(const FrameComponents & c, double yaw);

struct ConflictArea
{
  std::string id;
  Polygon polygon;  // simple, non-self-intersecting, area > 0

  void validate() const;
};

// Binary drivable/non-drivable rasterization of the road geometry.
struct OccupancyGrid
{
  Vec2 origin{0.0, 0.0};  // lower-left corner of cell (0, 0)
  double cell_size{1.0};
  int nx{0};
  int ny{0};
  std::vector<std::uint8_t> drivable;  // row-major, ny rows of nx cells

  bool in_bounds(const Vec2 & p) const;
  // False outside the grid or on a non-drivable cell.
  bool is_drivable(const Vec2 & p) const;
};

struct Scene
{
  double t{0.0};
  std::vector<ActorState> actors;
  std::vector<ConflictArea> conflict_areas;
  std::vector<Polygon> static_objects;
  std::optional<OccupancyGrid> drivable_area;

  const ActorState * find(const std::string & actor_id) const;
  const ActorState & actor(const std::string & actor_id) const;
  const ConflictArea & conflict_area(const std::string & ca_id) const;
  void validate() const;
};

// Recorded collision between two actors, with speeds around the impact.
struct AccidentEvent
{
  double t{0.0};
  std::string actor1;
  std::string actor2;
  double speed_before1{0.0};
  double speed_after1{0.0};
  double speed_before2{0.0};
  double speed_after2{0.0};
  std::optional<double> mass1;
  std::optional<double> mass2;
};

struct Scenario
{
  std::vector<Scene> scenes;
  std::vector<AccidentEvent> accident_events;

  double t0() const;
  double te() const;
  void validate() const;
};

enum class Scale { kNominal, kOrdinal, kInterval, kRatio };

enum class Unit {
  kTimeS,
  kTimeSquaredS2,
  kDistanceM,
  kSpeedMps,
  kAccelMps2,
  kJerkMps3,
  kEnergyJ,
  kProbability,
  kCount,
  kSquareMetersPerSecond,
  kDimensionless
};

std::string to_string(Scale s);
std::string to_string(Unit u);
Scale scale_from_string(const std::string & s);
Unit unit_from_string(const std::string & s);

// Extended-real values serialize as "inf"/"-inf"; nominal labels pass through.
std::string format_value(double v);
double parse_value(const std::string & s);

// A metric outcome: an extended real (or a nominal label) on a declared scale.
struct MetricResult
{
  std::string metric_id;
  std::variant<double, std::string> value{0.0};
  Scale scale{Scale::kRatio};
  Unit unit{Unit::kDimensionless};
  std::vector<std::string> subjects;
  std::string flag;  // empty unless the value carries a qualifier

  bool is_numeric() const { return std::holds_alternative<double>(value); }
  double number() const { return std::get<double>(value); }
  std::string value_string() const;
  void validate() const;
};

// Value plus an optional qualifier flag, for operations whose result needs
// one (e.g. "unavoidable", "no predicted collision").
struct FlaggedValue
{
  double value{0.0};
  std::string flag;
};

}  // namespace criticality

#endif  // CRITICALITY__CORE__TYPES_HPP_
