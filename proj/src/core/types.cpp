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

#include "criticality/core/types.hpp"

#include "criticality/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <stdexcept>

namespace criticality
{

ActorClass actor_class_from_string(const std::string & s)
{
  if (s == "human_vehicle" || s == "car" || s == "truck" || s == "vehicle") {
    return ActorClass::kHumanVehicle;
  }
  if (s == "automated_vehicle" || s == "av") return ActorClass::kAutomatedVehicle;
  if (s == "pedestrian") return ActorClass::kPedestrian;
  if (s == "bicycle") return ActorClass::kBicycle;
  if (s == "other") return ActorClass::kOther;
  throw std::invalid_argument("unknown actor class: " + s);
}

std::string to_string(ActorClass c)
{
  switch (c) {
    case ActorClass::kHumanVehicle: return "human_vehicle";
    case ActorClass::kAutomatedVehicle: return "automated_vehicle";
    case ActorClass::kPedestrian: return "pedestrian";
    case ActorClass::kBicycle: return "bicycle";
    case ActorClass::kOther: return "other";
  }
  return "other";
}

void CapabilityEnvelope::validate() const
{
  if (!(a_long_min < 0.0) || !(a_long_max >= 0.0)) {
    throw std::invalid_argument("invalid capability envelope: need a_long_min < 0 <= a_long_max");
  }
  if (!(a_lat_max > 0.0)) {
    throw std::invalid_argument("invalid capability envelope: a_lat_max must be > 0");
  }
  if (!(v_max > 0.0) || !(mu_max > 0.0)) {
    throw std::invalid_argument("invalid capability envelope: v_max and mu_max must be > 0");
  }
}

void ActorState::validate() const
{
  if (!(width > 0.0) || !(length > 0.0)) {
    throw std::invalid_argument("actor " + id + ": width and length must be > 0");
  }
  if (mass && !(*mass > 0.0)) {
    throw std::invalid_argument("actor " + id + ": mass must be > 0");
  }
  if (reaction_time && !(*reaction_time >= 0.0)) {
    throw std::invalid_argument("actor " + id + ": reaction_time must be >= 0");
  }
  capabilities.validate();
}

FrameComponents decompose(const Vec2 & v, double yaw)
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * v.x() + s * v.y(), -s * v.x() + c * v.y()};
}

Vec2 compose(const FrameComponents & comp, double yaw)
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  return {c * comp.longitudinal - s * comp.lateral, s * comp.longitudinal + c * comp.lateral};
}

void ConflictArea::validate() const
{
  if (polygon.size() < 3 || std::abs(geom::polygon_area(polygon)) <= 0.0) {
    throw std::invalid_argument("conflict area " + id + ": polygon area must be > 0");
  }
}

bool OccupancyGrid::in_bounds(const Vec2 & p) const
{
  const double dx = (p.x() - origin.x()) / cell_size;
  const double dy = (p.y() - origin.y()) / cell_size;
  return dx >= 0.0 && dy >= 0.0 && dx < nx && dy < ny;
}

bool OccupancyGrid::is_drivable(const Vec2 & p) const
{
  if (!in_bounds(p)) return false;
  const int ix = static_cast<int>((p.x() - origin.x()) / cell_size);
  const int iy = static_cast<int>((p.y() - origin.y()) / cell_size);
  return drivable[static_cast<std::size_t>(iy) * nx + ix] != 0;
}

const ActorState * Scene::find(const std::string & actor_id) const
{
  for (const auto & a : actors) {
    if (a.id == actor_id) return &a;
  }
  return nullptr;
}

const ActorState & Scene::actor(const std::string & actor_id) const
{
  const ActorState * a = find(actor_id);
  if (!a) throw std::invalid_argument("actor not in scene: " + actor_id);
  return *a;
}

const ConflictArea & Scene::conflict_area(const std::string & ca_id) const
{
  for (const auto & ca : conflict_areas) {
    if (ca.id == ca_id) return ca;
  }
  throw std::invalid_argument("conflict area not in scene: " + ca_id);
}

void Scene::validate() const
{
  std::set<std::string> ids;
  for (const auto & a : actors) {
    a.validate();
    if (!ids.insert(a.id).second) {
      throw std::invalid_argument("duplicate actor id in scene: " + a.id);
    }
    if (a.t != t) {
      throw std::invalid_argument("actor " + a.id + " timestamp differs from scene timestamp");
    }
  }
  for (const auto & ca : conflict_areas) ca.validate();
}

double Scenario::t0() const
{
  if (scenes.empty()) throw std::invalid_argument("empty scenario");
  return scenes.front().t;
}

double Scenario::te() const
{
  if (scenes.empty()) throw std::invalid_argument("empty scenario");
  return scenes.back().t;
}

void Scenario::validate() const
{
  if (scenes.empty()) throw std::invalid_argument("empty scenario");
  for (std::size_t i = 0; i + 1 < scenes.size(); ++i) {
    if (!(scenes[i].t < scenes[i + 1].t)) {
      throw std::invalid_argument("scenario timestamps must strictly increase");
    }
  }
  if (scenes.size() > 1 && !(te() > t0())) {
    throw std::invalid_argument("scenario must span a positive duration");
  }
  for (const auto & s : scenes) s.validate();
}

std::string to_string(Scale s)
{
  switch (s) {
    case Scale::kNominal: return "nominal";
    case Scale::kOrdinal: return "ordinal";
    case Scale::kInterval: return "interval";
    case Scale::kRatio: return "ratio";
  }
  return "ratio";
}

Scale scale_from_string(const std::string & s)
{
  if (s == "nominal") return Scale::kNominal;
  if (s == "ordinal") return Scale::kOrdinal;
  if (s == "interval") return Scale::kInterval;
  if (s == "ratio") return Scale::kRatio;
  throw std::invalid_argument("unknown scale: " + s);
}

std::string to_string(Unit u)
{
  switch (u) {
    case Unit::kTimeS: return "time_s";
    case Unit::kTimeSquaredS2: return "time2_s2";
    case Unit::kDistanceM: return "distance_m";
    case Unit::kSpeedMps: return "speed_mps";
    case Unit::kAccelMps2: return "accel_mps2";
    case Unit::kJerkMps3: return "jerk_mps3";
    case Unit::kEnergyJ: return "energy_J";
    case Unit::kProbability: return "probability";
    case Unit::kCount: return "count";
    case Unit::kSquareMetersPerSecond: return "m2_per_s";
    case Unit::kDimensionless: return "dimensionless";
  }
  return "dimensionless";
}

Unit unit_from_string(const std::string & s)
{
  if (s == "time_s") return Unit::kTimeS;
  if (s == "time2_s2") return Unit::kTimeSquaredS2;
  if (s == "distance_m") return Unit::kDistanceM;
  if (s == "speed_mps") return Unit::kSpeedMps;
  if (s == "accel_mps2") return Unit::kAccelMps2;
  if (s == "jerk_mps3") return Unit::kJerkMps3;
  if (s == "energy_J") return Unit::kEnergyJ;
  if (s == "probability") return Unit::kProbability;
  if (s == "count") return Unit::kCount;
  if (s == "m2_per_s") return Unit::kSquareMetersPerSecond;
  if (s == "dimensionless") return Unit::kDimensionless;
  throw std::invalid_argument("unknown unit: " + s);
}

std::string format_value(double v)
{
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

double parse_value(const std::string & s)
{
  if (s == "inf") return kInf;
  if (s == "-inf") return -kInf;
  std::size_t pos = 0;
  const double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("malformed numeric value: " + s);
  return v;
}

std::string MetricResult::value_string() const
{
  if (is_numeric()) return format_value(number());
  return std::get<std::string>(value);
}

void MetricResult::validate() const
{
  if (unit == Unit::kProbability && is_numeric()) {
    const double p = number();
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("probability value outside [0, 1] for " + metric_id);
    }
  }
  if (scale == Scale::kNominal && is_numeric()) {
    throw std::invalid_argument("nominal-scale result must carry a label for " + metric_id);
  }
}

}  // namespace criticality
