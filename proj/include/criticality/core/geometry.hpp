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

#ifndef CRITICALITY__CORE__GEOMETRY_HPP_
#define CRITICALITY__CORE__GEOMETRY_HPP_

#include "criticality/core/types.hpp"

namespace criticality::geom
{

// Signed area (positive for counterclockwise winding).
double polygon_area(const Polygon & poly);

// Boundary points count as inside.
bool point_in_polygon(const Vec2 & p, const Polygon & poly);

double segment_distance(const Vec2 & a0, const Vec2 & a1, const Vec2 & b0, const Vec2 & b1);

double point_segment_distance(const Vec2 & p, const Vec2 & a, const Vec2 & b);

// True iff the interiors intersect; polygons that merely touch along their
// boundaries do not overlap.
bool polygons_overlap(const Polygon & a, const Polygon & b);

// Minimal boundary-to-boundary distance, 0 when the polygons overlap or touch.
double polygon_distance(const Polygon & a, const Polygon & b);

// 0 when the point lies inside.
double point_polygon_distance(const Vec2 & p, const Polygon & poly);

// Oriented rectangle footprint of an actor (length along yaw, width across).
Polygon footprint(const ActorState & state);

Polygon oriented_rectangle(const Vec2 & center, double yaw, double length, double width);

enum class DistanceMode { kCenter, kFootprint };

DistanceMode distance_mode_from_string(const std::string & s);

// Distance between two point positions, optionally replaced by the minimal
// footprint-to-footprint distance when shapes are supplied.
double distance(const Vec2 & p1, const Vec2 & p2);
double distance(const ActorState & a, const ActorState & b, DistanceMode mode);
double distance_to_polygon(const ActorState & a, const Polygon & target, DistanceMode mode);

}  // namespace criticality::geom

#endif  // CRITICALITY__CORE__GEOMETRY_HPP_
