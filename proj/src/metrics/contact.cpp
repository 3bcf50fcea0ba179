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

#include "criticality/metrics/contact.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>
#include <stdexcept>

namespace criticality::metrics
{
namespace
{

using models::Trajectory;

constexpr double kTimeRefine = 1e-7;  // bisection width for footprint events

// Merged, strictly increasing sample-time grid over the common span.
std::vector<double> common_grid(const Trajectory & a, const Trajectory & b, double from)
{
  const double lo = std::max({a.start_time(), b.start_time(), from});
  const double hi = std::min(a.end_time(), b.end_time());
  std::vector<double> grid;
  if (hi < lo) return grid;
  auto add = [&](const Trajectory & tr) {
    for (const auto & s : tr.states) {
      if (s.t >= lo - 1e-15 && s.t <= hi + 1e-15) grid.push_back(std::clamp(s.t, lo, hi));
    }
  };
  add(a);
  add(b);
  grid.push_back(lo);
  grid.push_back(hi);
  std::sort(grid.begin(), grid.end());
  grid.erase(
    std::unique(grid.begin(), grid.end(), [](double x, double y) { return y - x < 1e-12; }),
    grid.end());
  return grid;
}

// Earliest s in [0, 1] with |r0 + s dr| <= eps, for linear relative motion.
// Evaluated via the closest point of approach, which stays stable when the
// paths pass exactly through each other.
std::optional<double> earliest_point_contact(const Vec2 & r0, const Vec2 & r1, double eps)
{
  if (r0.norm() <= eps) return 0.0;
  const Vec2 dr = r1 - r0;
  const double a = dr.squaredNorm();
  if (a < 1e-30) return std::nullopt;
  const double s_star = std::clamp(-r0.dot(dr) / a, 0.0, 1.0);
  const double d_min2 = (r0 + s_star * dr).squaredNorm();
  if (d_min2 > eps * eps) return std::nullopt;
  // |r(s)|^2 = a (s - s_star)^2 + d_min^2; walk back to the entry radius.
  const double back = std::sqrt(std::max(0.0, eps * eps - d_min2) / a);
  return std::max(0.0, s_star - back);
}

// Convex hull (monotone chain) of a small point set, counterclockwise.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts)
{
  std::sort(pts.begin(), pts.end(), [](const Vec2 & p, const Vec2 & q) {
    return p.x() < q.x() || (p.x() == q.x() && p.y() < q.y());
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Vec2 & p, const Vec2 & q) { return (p - q).norm() < 1e-12; }),
            pts.end());
  if (pts.size() < 3) return pts;
  const auto cross = [](const Vec2 & o, const Vec2 & p, const Vec2 & q) {
    return (p.x() - o.x()) * (q.y() - o.y()) - (p.y() - o.y()) * (q.x() - o.x());
  };
  std::vector<Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto & p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
    hull[k++] = p;
  }
  const std::size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], *it) <= 0) --k;
    hull[k++] = *it;
  }
  hull.resize(k - 1);
  return hull;
}

// Earliest s in [0, 1] where the segment d0 + s (d1 - d0) penetrates the hull
// interior beyond the grazing tolerance. Exact: no sampling, no tunneling.
std::optional<double> segment_hull_entry(
  const std::vector<Vec2> & hull, const Vec2 & d0, const Vec2 & d1)
{
  if (hull.size() < 3) return std::nullopt;
  constexpr double tol = 1e-9;
  const Vec2 dd = d1 - d0;
  double lo = 0.0;
  double hi = 1.0;
  const std::size_t n = hull.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2 edge = hull[i] - hull[j];
    const Vec2 normal{edge.y(), -edge.x()};  // outward for a CCW hull
    const double len = normal.norm();
    if (len <= 1e-15) continue;
    // Interior requirement: normal . x <= normal . p - tol * |normal|.
    const double bound = normal.dot(hull[j]) - tol * len;
    const double f0 = normal.dot(d0) - bound;
    const double slope = normal.dot(dd);
    if (std::abs(slope) < 1e-15) {
      if (f0 > 0.0) return std::nullopt;
      continue;
    }
    const double s = -f0 / slope;
    if (slope > 0.0) {
      hi = std::min(hi, s);
    } else {
      lo = std::max(lo, s);
    }
    if (lo > hi) return std::nullopt;
  }
  return lo;
}

// Vertex offsets of the footprint around the actor center.
std::array<Vec2, 4> footprint_offsets(const ActorState & s)
{
  const Vec2 fwd{std::cos(s.yaw), std::sin(s.yaw)};
  const Vec2 left{-std::sin(s.yaw), std::cos(s.yaw)};
  const Vec2 dl = 0.5 * s.length * fwd;
  const Vec2 dw = 0.5 * s.width * left;
  return {Vec2(dl + dw), Vec2(-dl + dw), Vec2(-dl - dw), Vec2(dl - dw)};
}

ActorState lerp_state(const Trajectory & tr, double t) { return tr.state_at(t); }

bool footprints_overlap(const ActorState & a, const ActorState & b)
{
  return geom::polygons_overlap(geom::footprint(a), geom::footprint(b));
}

}  // namespace

bool in_contact(const ActorState & a, const ActorState & b, const EvalConfig & cfg)
{
  if (cfg.mode == geom::DistanceMode::kCenter) {
    return (a.position - b.position).norm() <= cfg.contact_eps;
  }
  return footprints_overlap(a, b);
}

std::optional<double> first_contact_time(
  const Trajectory & a, const Trajectory & b, const EvalConfig & cfg, double from)
{
  if (a.empty() || b.empty()) return std::nullopt;
  const auto grid = common_grid(a, b, from);
  if (grid.empty()) return std::nullopt;

  if (cfg.mode == geom::DistanceMode::kCenter) {
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const Vec2 r0 = lerp_state(a, grid[k]).position - lerp_state(b, grid[k]).position;
      const Vec2 r1 = lerp_state(a, grid[k + 1]).position - lerp_state(b, grid[k + 1]).position;
      if (const auto s = earliest_point_contact(r0, r1, cfg.contact_eps)) {
        return grid[k] + *s * (grid[k + 1] - grid[k]);
      }
    }
    // Closed interval: the final grid point can carry the only contact.
    const Vec2 r_end =
      lerp_state(a, grid.back()).position - lerp_state(b, grid.back()).position;
    if (r_end.norm() <= cfg.contact_eps) return grid.back();
    return std::nullopt;
  }

  if (footprints_overlap(lerp_state(a, grid.front()), lerp_state(b, grid.front()))) {
    return grid.front();
  }
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const ActorState a0 = lerp_state(a, grid[k]);
    const ActorState a1 = lerp_state(a, grid[k + 1]);
    const ActorState b0 = lerp_state(b, grid[k]);
    const ActorState b1 = lerp_state(b, grid[k + 1]);

    // Quick reject on circumradii.
    const double reach = 0.5 * std::hypot(a0.length, a0.width) +
                         0.5 * std::hypot(b0.length, b0.width);
    const Vec2 d0 = b0.position - a0.position;
    const Vec2 d1 = b1.position - a1.position;
    {
      const Vec2 dd = d1 - d0;
      const double denom = dd.squaredNorm();
      const double s =
        denom > 1e-30 ? std::clamp(-d0.dot(dd) / denom, 0.0, 1.0) : 0.0;
      if ((d0 + s * dd).norm() > reach + 1e-9) continue;
    }

    const bool fixed_yaw = std::abs(a1.yaw - a0.yaw) < 1e-12 && std::abs(b1.yaw - b0.yaw) < 1e-12;
    if (fixed_yaw) {
      // Exact entry of the relative motion into the Minkowski difference.
      const auto oa = footprint_offsets(a0);
      const auto ob = footprint_offsets(b0);
      std::vector<Vec2> diffs;
      diffs.reserve(16);
      for (const auto & pa : oa) {
        for (const auto & pb : ob) diffs.push_back(pb - pa);
      }
      if (const auto s = segment_hull_entry(convex_hull(std::move(diffs)), d0, d1)) {
        return grid[k] + *s * (grid[k + 1] - grid[k]);
      }
      continue;
    }

    if (!footprints_overlap(a1, b1)) continue;
    double lo = grid[k];
    double hi = grid[k + 1];
    while (hi - lo > kTimeRefine) {
      const double mid = 0.5 * (lo + hi);
      if (footprints_overlap(lerp_state(a, mid), lerp_state(b, mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
  return std::nullopt;
}

std::optional<double> first_reach_time(
  const Trajectory & a, const Polygon & target, const EvalConfig & cfg)
{
  if (a.empty() || target.size() < 3) return std::nullopt;
  const auto reached = [&](const ActorState & s) {
    if (cfg.mode == geom::DistanceMode::kCenter) {
      return geom::point_polygon_distance(s.position, target) <= cfg.contact_eps;
    }
    return geom::polygon_distance(geom::footprint(s), target) <= cfg.contact_eps;
  };
  if (reached(a.states.front())) return a.start_time();
  for (std::size_t k = 0; k + 1 < a.states.size(); ++k) {
    if (!reached(a.states[k + 1])) continue;
    double lo = a.states[k].t;
    double hi = a.states[k + 1].t;
    while (hi - lo > kTimeRefine) {
      const double mid = 0.5 * (lo + hi);
      if (reached(a.state_at(mid))) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return hi;
  }
  return std::nullopt;
}

std::optional<double> first_reach_time(
  const Trajectory & a, const ActorState & frozen, const EvalConfig & cfg)
{
  if (a.empty()) return std::nullopt;
  Trajectory still;
  ActorState s0 = frozen;
  s0.t = a.start_time();
  ActorState s1 = frozen;
  s1.t = a.end_time();
  still.states = {s0, s1};
  return first_contact_time(a, still, cfg);
}

ClosestEncounter closest_encounter(
  const Trajectory & a, const Trajectory & b, const EvalConfig & cfg)
{
  if (const auto hit = first_contact_time(a, b, cfg)) {
    return {0.0, *hit};
  }
  const auto grid = common_grid(a, b, -kInf);
  if (grid.empty()) throw std::invalid_argument("trajectories do not overlap in time");

  ClosestEncounter best;
  if (cfg.mode == geom::DistanceMode::kCenter) {
    for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
      const Vec2 r0 = lerp_state(a, grid[k]).position - lerp_state(b, grid[k]).position;
      const Vec2 r1 = lerp_state(a, grid[k + 1]).position - lerp_state(b, grid[k + 1]).position;
      const Vec2 dr = r1 - r0;
      double s_star = 0.0;
      const double a2 = dr.squaredNorm();
      if (a2 > 1e-30) s_star = std::clamp(-r0.dot(dr) / a2, 0.0, 1.0);
      for (double s : {0.0, s_star, 1.0}) {
        const double d = (r0 + s * dr).norm();
        const double t = grid[k] + s * (grid[k + 1] - grid[k]);
        if (d < best.distance - 1e-15 || (std::abs(d - best.distance) <= 1e-15 && t < best.time)) {
          best = {d, t};
        }
      }
    }
    return best;
  }

  const auto dist_at = [&](double t) {
    return geom::polygon_distance(
      geom::footprint(lerp_state(a, t)), geom::footprint(lerp_state(b, t)));
  };
  std::size_t best_k = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = dist_at(grid[k]);
    if (d < best.distance) {
      best = {d, grid[k]};
      best_k = k;
    }
  }
  // Golden-section refinement around the discrete minimum.
  const double lo = grid[best_k > 0 ? best_k - 1 : 0];
  const double hi = grid[std::min(best_k + 1, grid.size() - 1)];
  double x0 = lo, x3 = hi;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = x3 - phi * (x3 - x0);
  double x2 = x0 + phi * (x3 - x0);
  double f1 = dist_at(x1);
  double f2 = dist_at(x2);
  for (int it = 0; it < 60 && x3 - x0 > kTimeRefine; ++it) {
    if (f1 <= f2) {
      x3 = x2;
      x2 = x1;
      f2 = f1;
      x1 = x3 - phi * (x3 - x0);
      f1 = dist_at(x1);
    } else {
      x0 = x1;
      x1 = x2;
      f1 = f2;
      x2 = x0 + phi * (x3 - x0);
      f2 = dist_at(x2);
    }
  }
  const double xm = 0.5 * (x0 + x3);
  const double fm = dist_at(xm);
  if (fm < best.distance) best = {fm, xm};
  return best;
}

std::vector<PathCrossing> path_crossings(const Trajectory & a, const Trajectory & b)
{
  std::vector<PathCrossing> out;
  if (a.states.size() < 2 || b.states.size() < 2) return out;

  constexpr double kOnPathTol = 1e-7;
  const double t0a = a.start_time();
  const double t0b = b.start_time();

  // Block bounding boxes cut the segment-pair search down for disjoint paths.
  constexpr std::size_t kBlock = 64;
  struct Box
  {
    double xlo, xhi, ylo, yhi;
  };
  const auto boxes = [&](const Trajectory & tr) {
    std::vector<Box> bs;
    for (std::size_t i = 0; i + 1 < tr.states.size(); i += kBlock) {
      Box box{kInf, -kInf, kInf, -kInf};
      const std::size_t end = std::min(i + kBlock + 1, tr.states.size());
      for (std::size_t k = i; k < end; ++k) {
        box.xlo = std::min(box.xlo, tr.states[k].position.x());
        box.xhi = std::max(box.xhi, tr.states[k].position.x());
        box.ylo = std::min(box.ylo, tr.states[k].position.y());
        box.yhi = std::max(box.yhi, tr.states[k].position.y());
      }
      bs.push_back(box);
    }
    return bs;
  };
  const auto ba = boxes(a);
  const auto bb = boxes(b);
  const auto boxes_apart = [&](const Box & p, const Box & q) {
    return p.xhi + kOnPathTol < q.xlo || q.xhi + kOnPathTol < p.xlo ||
           p.yhi + kOnPathTol < q.ylo || q.yhi + kOnPathTol < p.ylo;
  };

  for (std::size_t bi = 0; bi < ba.size(); ++bi) {
    for (std::size_t bj = 0; bj < bb.size(); ++bj) {
      if (boxes_apart(ba[bi], bb[bj])) continue;
      const std::size_t ia_end = std::min(bi * kBlock + kBlock, a.states.size() - 1);
      const std::size_t ib_end = std::min(bj * kBlock + kBlock, b.states.size() - 1);
      for (std::size_t i = bi * kBlock; i < ia_end; ++i) {
        const Vec2 & a0 = a.states[i].position;
        const Vec2 & a1 = a.states[i + 1].position;
        for (std::size_t j = bj * kBlock; j < ib_end; ++j) {
          const Vec2 & b0 = b.states[j].position;
          const Vec2 & b1 = b.states[j + 1].position;
          const Vec2 da = a1 - a0;
          const Vec2 db = b1 - b0;
          const double denom = da.x() * db.y() - da.y() * db.x();
          if (std::abs(denom) > 1e-15) {
            const Vec2 d0 = b0 - a0;
            const double sa = (d0.x() * db.y() - d0.y() * db.x()) / denom;
            const double sb = (d0.x() * da.y() - d0.y() * da.x()) / denom;
            if (sa >= -1e-12 && sa <= 1.0 + 1e-12 && sb >= -1e-12 && sb <= 1.0 + 1e-12) {
              const double ta = a.states[i].t + sa * (a.states[i + 1].t - a.states[i].t);
              const double tb = b.states[j].t + sb * (b.states[j + 1].t - b.states[j].t);
              out.push_back({ta - t0a, tb - t0b});
            }
            continue;
          }
          // Near-parallel segments: sample-on-segment coincidences cover the
          // collinear car-following overlap.
          const double d_start = geom::point_segment_distance(a0, b0, b1);
          if (d_start <= kOnPathTol) {
            const double seg_len2 = db.squaredNorm();
            const double sb =
              seg_len2 > 1e-30 ? std::clamp((a0 - b0).dot(db) / seg_len2, 0.0, 1.0) : 0.0;
            const double tb = b.states[j].t + sb * (b.states[j + 1].t - b.states[j].t);
            out.push_back({a.states[i].t - t0a, tb - t0b});
          }
        }
      }
    }
  }
  return out;
}

}  // namespace criticality::metrics
