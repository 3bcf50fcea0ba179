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

#include "criticality/core/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace criticality::geom
{
namespace
{

constexpr double kEps = 1e-12;

double cross2(const Vec2 & a, const Vec2 & b) { return a.x() * b.y() - a.y() * b.x(); }

// Proper crossing: the open interiors of the segments intersect.
bool segments_properly_intersect(const Vec2 & a0, const Vec2 & a1, const Vec2 & b0, const Vec2 & b1)
{
  const double d1 = cross2(a1 - a0, b0 - a0);
  const double d2 = cross2(a1 - a0, b1 - a0);
  const double d3 = cross2(b1 - b0, a0 - b0);
  const double d4 = cross2(b1 - b0, a1 - b0);
  return ((d1 > kEps && d2 < -kEps) || (d1 < -kEps && d2 > kEps)) &&
         ((d3 > kEps && d4 < -kEps) || (d3 < -kEps && d4 > kEps));
}

bool point_strictly_in_polygon(const Vec2 & p, const Polygon & poly)
{
  // Crossing-number test; points within kEps of an edge are not "strictly" inside.
  bool inside = false;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (point_segment_distance(p, poly[j], poly[i]) <= 1e-9) return false;
    const bool intersect = ((poly[i].y() > p.y()) != (poly[j].y() > p.y())) &&
                           (p.x() < (poly[j].x() - poly[i].x()) * (p.y() - poly[i].y()) /
                                        (poly[j].y() - poly[i].y()) +
                                      poly[i].x());
    if (intersect) inside = !inside;
  }
  return inside;
}

}  // namespace

double polygon_area(const Polygon & poly)
{
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    acc += cross2(poly[j], poly[i]);
  }
  return 0.5 * acc;
}

bool point_in_polygon(const Vec2 & p, const Polygon & poly)
{
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    if (point_segment_distance(p, poly[j], poly[i]) <= 1e-9) return true;
  }
  return point_strictly_in_polygon(p, poly);
}

double point_segment_distance(const Vec2 & p, const Vec2 & a, const Vec2 & b)
{
  const Vec2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= kEps) return (p - a).norm();
  const double s = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + s * ab)).norm();
}

double segment_distance(const Vec2 & a0, const Vec2 & a1, const Vec2 & b0, const Vec2 & b1)
{
  if (segments_properly_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min(
    std::min(point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1)),
    std::min(point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)));
}

namespace
{

bool is_convex(const Polygon & poly)
{
  const std::size_t n = poly.size();
  int sign = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2 e1 = poly[(i + 1) % n] - poly[i];
    const Vec2 e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
    const double c = cross2(e1, e2);
    if (std::abs(c) <= kEps) continue;
    const int s = c > 0.0 ? 1 : -1;
    if (sign == 0) {
      sign = s;
    } else if (s != sign) {
      return false;
    }
  }
  return true;
}

// Separating-axis test; interiors intersect iff every axis shows a positive
// projection overlap. Boundary touching is not an intersection.
bool convex_overlap(const Polygon & a, const Polygon & b)
{
  const auto axes_separate = [&](const Polygon & poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
      const Vec2 edge = poly[i] - poly[j];
      const Vec2 axis{-edge.y(), edge.x()};
      const double len = axis.norm();
      if (len <= kEps) continue;
      double a_min = kInf, a_max = -kInf, b_min = kInf, b_max = -kInf;
      for (const auto & p : a) {
        const double v = axis.dot(p) / len;
        a_min = std::min(a_min, v);
        a_max = std::max(a_max, v);
      }
      for (const auto & p : b) {
        const double v = axis.dot(p) / len;
        b_min = std::min(b_min, v);
        b_max = std::max(b_max, v);
      }
      if (std::min(a_max, b_max) - std::max(a_min, b_min) <= 1e-9) return true;
    }
    return false;
  };
  return !axes_separate(a) && !axes_separate(b);
}

}  // namespace

bool polygons_overlap(const Polygon & a, const Polygon & b)
{
  if (a.size() < 3 || b.size() < 3) return false;
  if (is_convex(a) && is_convex(b)) return convex_overlap(a, b);
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  for (std::size_t i = 0, j = na - 1; i < na; j = i++) {
    for (std::size_t k = 0, l = nb - 1; k < nb; l = k++) {
      if (segments_properly_intersect(a[j], a[i], b[l], b[k])) return true;
    }
  }
  for (const auto & p : a) {
    if (point_strictly_in_polygon(p, b)) return true;
  }
  for (const auto & p : b) {
    if (point_strictly_in_polygon(p, a)) return true;
  }
  // Edge midpoints catch partial overlaps whose boundaries run along shared
  // lines; centroids catch full containment without vertex hits.
  for (std::size_t i = 0, j = na - 1; i < na; j = i++) {
    if (point_strictly_in_polygon(0.5 * (a[j] + a[i]), b)) return true;
  }
  for (std::size_t k = 0, l = nb - 1; k < nb; l = k++) {
    if (point_strictly_in_polygon(0.5 * (b[l] + b[k]), a)) return true;
  }
  Vec2 centroid_a = Vec2::Zero();
  for (const auto & p : a) centroid_a += p;
  centroid_a /= static_cast<double>(na);
  if (point_strictly_in_polygon(centroid_a, b)) return true;
  Vec2 centroid_b = Vec2::Zero();
  for (const auto & p : b) centroid_b += p;
  centroid_b /= static_cast<double>(nb);
  return point_strictly_in_polygon(centroid_b, a);
}

double polygon_distance(const Polygon & a, const Polygon & b)
{
  if (polygons_overlap(a, b)) return 0.0;
  double best = kInf;
  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  for (std::size_t i = 0, j = na - 1; i < na; j = i++) {
    for (std::size_t k = 0, l = nb - 1; k < nb; l = k++) {
      best = std::min(best, segment_distance(a[j], a[i], b[l], b[k]));
    }
  }
  return best;
}

double point_polygon_distance(const Vec2 & p, const Polygon & poly)
{
  if (point_in_polygon(p, poly)) return 0.0;
  double best = kInf;
  const std::size_t n = poly.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    best = std::min(best, point_segment_distance(p, poly[j], poly[i]));
  }
  return best;
}

Polygon oriented_rectangle(const Vec2 & center, double yaw, double length, double width)
{
  const Vec2 fwd{std::cos(yaw), std::sin(yaw)};
  const Vec2 left{-std::sin(yaw), std::cos(yaw)};
  const Vec2 dl = 0.5 * length * fwd;
  const Vec2 dw = 0.5 * width * left;
  return {center + dl + dw, center - dl + dw, center - dl - dw, center + dl - dw};
}

Polygon footprint(const ActorState & state)
{
  return oriented_rectangle(state.position, state.yaw, state.length, state.width);
}

DistanceMode distance_mode_from_string(const std::string & s)
{
  if (s == "center") return DistanceMode::kCenter;
  if (s == "footprint") return DistanceMode::kFootprint;
  throw std::invalid_argument("unknown distance mode: " + s);
}

double distance(const Vec2 & p1, const Vec2 & p2) { return (p1 - p2).norm(); }

double distance(const ActorState & a, const ActorState & b, DistanceMode mode)
{
  if (mode == DistanceMode::kCenter) return distance(a.position, b.position);
  return polygon_distance(footprint(a), footprint(b));
}

double distance_to_polygon(const ActorState & a, const Polygon & target, DistanceMode mode)
{
  if (mode == DistanceMode::kCenter) return point_polygon_distance(a.position, target);
  return polygon_distance(footprint(a), target);
}

}  // namespace criticality::geom
