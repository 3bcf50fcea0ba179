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

#include "criticality/metrics/scene.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace criticality::metrics
{
namespace
{

using models::PredictionModel;
using models::Trajectory;

Vec2 heading_dir(const ActorState & s) { return {std::cos(s.yaw), std::sin(s.yaw)}; }
Vec2 left_dir(const ActorState & s) { return {-std::sin(s.yaw), std::cos(s.yaw)}; }

// Nominal prefix up to start_offset followed by the tail trajectory.
Trajectory splice(
  const PredictionModel & nominal, const ActorState & state, double start_offset,
  const std::function<Trajectory(const ActorState &, double tail_horizon)> & tail)
{
  const Trajectory base = nominal.predict(state);
  Trajectory out;
  for (const auto & s : base.states) {
    if (s.t < state.t + start_offset - 1e-12) out.states.push_back(s);
  }
  const ActorState at_start = base.state_at(state.t + start_offset);
  const double tail_horizon = std::max(nominal.horizon() - start_offset, nominal.step());
  Trajectory rest = tail(at_start, tail_horizon);
  out.states.insert(out.states.end(), rest.states.begin(), rest.states.end());
  return out;
}

// Sampled straight-line motion with constant velocity plus a fixed lateral
// acceleration; yaw is held so the footprint translates.
Trajectory lateral_accel_trajectory(
  const ActorState & state, double a_lat_signed, double horizon, double step)
{
  Trajectory traj;
  const Vec2 lat = left_dir(state);
  const int n = static_cast<int>(std::round(horizon / step));
  traj.states.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double dt = k * step;
    ActorState s = state;
    s.t = state.t + dt;
    s.position = state.position + state.velocity * dt + 0.5 * a_lat_signed * dt * dt * lat;
    s.velocity = state.velocity + a_lat_signed * dt * lat;
    s.acceleration = a_lat_signed * lat;
    traj.states.push_back(s);
  }
  return traj;
}

Trajectory kickdown_trajectory(const ActorState & state, double horizon, double step)
{
  const double a = state.capabilities.a_long_max;
  const double v_max = state.capabilities.v_max;
  const Vec2 dir = heading_dir(state);
  const double v0 = decompose(state.velocity, state.yaw).longitudinal;
  const double t_cap = a > 1e-12 ? std::max(0.0, (v_max - v0) / a) : kInf;

  Trajectory traj;
  const int n = static_cast<int>(std::round(horizon / step));
  traj.states.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    const double dt = k * step;
    ActorState s = state;
    s.t = state.t + dt;
    if (dt <= t_cap) {
      s.position = state.position + state.velocity * dt + 0.5 * a * dt * dt * dir;
      s.velocity = state.velocity + a * dt * dir;
    } else {
      const Vec2 p_cap = state.position + state.velocity * t_cap + 0.5 * a * t_cap * t_cap * dir;
      const Vec2 v_cap = state.velocity + a * t_cap * dir;
      s.position = p_cap + v_cap * (dt - t_cap);
      s.velocity = v_cap;
    }
    traj.states.push_back(s);
  }
  return traj;
}

struct ActorPair
{
  const ActorState & first;
  const ActorState & second;
};

ActorPair actors(const Scene & scene, const std::string & a1, const std::string & a2)
{
  return {scene.actor(a1), scene.actor(a2)};
}

double relative_time(double absolute, const Scene & scene) { return absolute - scene.t; }

}  // namespace

ManeuverModel brake_maneuver(const PredictionModel & nominal)
{
  const PredictionModel * model = &nominal;
  return {
    "brake", [model](const ActorState & state, double start_offset) {
      return splice(*model, state, start_offset, [model](const ActorState & s, double h) {
        return models::constant_accel_trajectory(
          s, s.capabilities.a_long_min * heading_dir(s), h, model->step(), true);
      });
    }};
}

ManeuverModel steer_maneuver(const PredictionModel & nominal, bool left)
{
  const PredictionModel * model = &nominal;
  return {
    left ? "steer_left" : "steer_right",
    [model, left](const ActorState & state, double start_offset) {
      return splice(*model, state, start_offset, [model, left](const ActorState & s, double h) {
        const double a = (left ? 1.0 : -1.0) * s.capabilities.a_lat_max;
        return lateral_accel_trajectory(s, a, h, model->step());
      });
    }};
}

ManeuverModel kickdown_maneuver(const PredictionModel & nominal)
{
  const PredictionModel * model = &nominal;
  return {
    "kickdown", [model](const ActorState & state, double start_offset) {
      return splice(*model, state, start_offset, [model](const ActorState & s, double h) {
        return kickdown_trajectory(s, h, model->step());
      });
    }};
}

double ttc(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto hit = first_contact_time(dmm.predict(s1), dmm.predict(s2), cfg);
  return hit ? relative_time(*hit, scene) : kInf;
}

double pttc(
  const Scene & scene, const std::string & follower, const std::string & lead,
  const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, follower, lead);
  const double d = geom::distance(s1, s2, cfg.mode);
  if (d <= cfg.contact_eps) return 0.0;
  if (decompose(s2.position - s1.position, s1.yaw).longitudinal <= 0.0) {
    throw std::invalid_argument("pttc requires a car-following configuration (lead ahead)");
  }
  const double v1 = decompose(s1.velocity, s1.yaw).longitudinal;
  const double v2 = decompose(s2.velocity, s1.yaw).longitudinal;
  const double a2l = decompose(s2.acceleration, s1.yaw).longitudinal;
  const double d_dot = v2 - v1;  // negative when closing

  if (std::abs(a2l) < 1e-12) {
    return d_dot < 0.0 ? -d / d_dot : kInf;
  }
  // Roots of the gap polynomial d + d_dot t + a2l/2 t^2 = 0.
  const double disc = d_dot * d_dot - 2.0 * a2l * d;
  if (disc < 0.0) return kInf;
  const double sq = std::sqrt(disc);
  double best = kInf;
  for (const double root : {(-d_dot - sq) / a2l, (-d_dot + sq) / a2l}) {
    if (root >= 0.0) best = std::min(best, root);
  }
  return best;
}

double tto(
  const Scene & scene, const std::string & a1, const Polygon & target,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const ActorState & s1 = scene.actor(a1);
  const auto hit = first_reach_time(dmm.predict(s1), target, cfg);
  return hit ? relative_time(*hit, scene) : kInf;
}

double tto(
  const Scene & scene, const std::string & a1, const std::string & target_actor,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  return ttc(scene, a1, target_actor, dmm, cfg);
}

DceTtce dce_ttce(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto enc = closest_encounter(dmm.predict(s1), dmm.predict(s2), cfg);
  return {enc.distance, relative_time(enc.time, scene)};
}

double wttc(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto set1 = dmm.predict_set(s1);
  const auto set2 = dmm.predict_set(s2);
  if (set1.trajectories.empty() || set2.trajectories.empty()) {
    throw std::invalid_argument("wttc requires non-empty trajectory sets");
  }
  double best = kInf;
  for (const auto & t1 : set1.trajectories) {
    for (const auto & t2 : set2.trajectories) {
      if (const auto hit = first_contact_time(t1, t2, cfg)) {
        best = std::min(best, relative_time(*hit, scene));
      }
    }
  }
  return best;
}

FlaggedValue ttm(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const ManeuverModel & maneuver, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const double ttc_value = ttc(scene, a1, a2, dmm, cfg);
  if (std::isinf(ttc_value)) return {kInf, "no predicted collision"};

  const Trajectory traj2 = dmm.predict(s2);
  const auto safe = [&](double start_offset) {
    const Trajectory traj1 = maneuver.generator(s1, start_offset);
    return !first_contact_time(traj1, traj2, cfg, scene.t + start_offset).has_value();
  };

  if (!safe(0.0)) return {-kInf, ""};
  if (safe(ttc_value)) return {ttc_value, ""};
  double lo = 0.0;
  double hi = ttc_value;
  while (hi - lo > cfg.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (safe(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, ""};
}

FlaggedValue ttr(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const std::vector<ManeuverModel> & maneuvers,
  const EvalConfig & cfg)
{
  if (maneuvers.empty()) throw std::invalid_argument("ttr requires a non-empty maneuver set");
  FlaggedValue best{-kInf, ""};
  bool first = true;
  for (const auto & m : maneuvers) {
    const FlaggedValue v = ttm(scene, a1, a2, dmm, m, cfg);
    if (!v.flag.empty()) return v;  // no predicted collision
    if (first || v.value > best.value) {
      best = v;
      first = false;
    }
  }
  return best;
}

double thw(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto hit = first_reach_time(dmm.predict(s1), s2, cfg);
  return hit ? relative_time(*hit, scene) : kInf;
}

double hw(
  const Scene & scene, const std::string & a1, const std::string & a2, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  return geom::distance(s1, s2, cfg.mode);
}

double pret(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  (void)cfg;
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto crossings = path_crossings(dmm.predict(s1), dmm.predict(s2));
  double best = kInf;
  for (const auto & c : crossings) best = std::min(best, std::abs(c.time_a - c.time_b));
  return best;
}

double spret(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  (void)cfg;
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto crossings = path_crossings(dmm.predict(s1), dmm.predict(s2));
  double best = kInf;
  for (const auto & c : crossings) {
    best = std::min(best, std::abs(c.time_a * c.time_a - c.time_b * c.time_b));
  }
  return best;
}

double ta(
  const Scene & scene, const std::string & a1, const std::string & a2, double horizon,
  double step, const EvalConfig & cfg)
{
  const models::SinglePointKinematicsModel cv(1, horizon, step);
  return pret(scene, a1, a2, cv, cfg);
}

double msd(const Scene & scene, const std::string & a1)
{
  const ActorState & s1 = scene.actor(a1);
  const double v_long = decompose(s1.velocity, s1.yaw).longitudinal;
  return v_long * v_long / (2.0 * std::abs(s1.capabilities.a_long_min));
}

double psd(
  const Scene & scene, const std::string & a1, const ConflictArea & ca, const EvalConfig & cfg)
{
  const double stopping = msd(scene, a1);
  if (stopping <= 0.0) return kInf;  // a stationary actor can always stop
  return geom::distance_to_polygon(scene.actor(a1), ca.polygon, cfg.mode) / stopping;
}

double ags(
  const Scene & scene, const std::string & a1, const GapAcceptanceModel & action, double s_max,
  const EvalConfig & cfg)
{
  const ActorState & s1 = scene.actor(a1);
  const auto accept = [&](double s) { return action(s1, scene.t, s); };

  constexpr int kProbes = 33;
  bool previous = accept(0.0);
  for (int i = 1; i < kProbes; ++i) {
    const bool current = accept(s_max * i / (kProbes - 1));
    if (previous && !current) {
      throw std::invalid_argument("invalid gap-acceptance model: acceptance is not monotone");
    }
    previous = current;
  }

  if (accept(0.0)) return 0.0;
  if (!accept(s_max)) return kInf;
  double lo = 0.0;   // rejected
  double hi = s_max;  // accepted
  while (hi - lo > cfg.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (accept(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

FlaggedValue a_long_req(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const Trajectory traj2 = dmm.predict(s2);
  const Vec2 dir = heading_dir(s1);
  const auto avoids = [&](double a) {
    const Trajectory traj1 =
      models::constant_accel_trajectory(s1, a * dir, dmm.horizon(), dmm.step(), true);
    return !first_contact_time(traj1, traj2, cfg).has_value();
  };

  if (avoids(0.0)) return {0.0, ""};
  if (!avoids(cfg.accel_floor)) return {cfg.accel_floor, "unavoidable"};
  double lo = cfg.accel_floor;  // avoiding
  double hi = 0.0;              // colliding
  const double tol = 0.2 * cfg.bisection_tol;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (avoids(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, ""};
}

FlaggedValue a_lat_req(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  if (std::isinf(ttc(scene, a1, a2, dmm, cfg))) return {0.0, ""};

  // Widths are integral to the evasion geometry, so contact is always
  // evaluated on footprints here.
  EvalConfig contact_cfg = cfg;
  contact_cfg.mode = geom::DistanceMode::kFootprint;

  const Trajectory traj2 = dmm.predict(s2);
  const auto avoids = [&](double a_signed) {
    const Trajectory traj1 =
      lateral_accel_trajectory(s1, a_signed, dmm.horizon(), dmm.step());
    return !first_contact_time(traj1, traj2, contact_cfg).has_value();
  };

  const double tol = 0.2 * cfg.bisection_tol;
  const auto side_requirement = [&](double sign) -> FlaggedValue {
    if (avoids(0.0)) return {0.0, ""};
    if (!avoids(sign * cfg.accel_ceiling)) return {cfg.accel_ceiling, "unavoidable"};
    double lo = 0.0;                 // colliding
    double hi = cfg.accel_ceiling;   // avoiding
    while (hi - lo > tol) {
      const double mid = 0.5 * (lo + hi);
      if (avoids(sign * mid)) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    return {hi, ""};
  };

  const FlaggedValue left = side_requirement(1.0);
  const FlaggedValue right = side_requirement(-1.0);
  const FlaggedValue & smaller = left.value <= right.value ? left : right;
  if (!left.flag.empty() && !right.flag.empty()) return {cfg.accel_ceiling, "unavoidable"};
  if (!smaller.flag.empty()) return left.flag.empty() ? left : right;
  return smaller;
}

double a_lat_req_closed_form(
  const Scene & scene, const std::string & a1, const std::string & a2, double ttc_value)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  if (!(ttc_value > 0.0) || std::isinf(ttc_value)) {
    throw std::invalid_argument("a_lat_req closed form requires a finite positive ttc");
  }
  const double v1_lat = decompose(s1.velocity, s1.yaw).lateral;
  const double v2_lat = decompose(s2.velocity, s1.yaw).lateral;
  const double a2_lat = decompose(s2.acceleration, s1.yaw).lateral;
  const double p_lat_diff = decompose(s2.position - s1.position, s1.yaw).lateral;
  const double half_widths = 0.5 * (s1.width + s2.width);

  double best = kInf;
  for (const double side : {1.0, -1.0}) {
    const double a = a2_lat + 2.0 * (v2_lat - v1_lat) / ttc_value +
                     2.0 / (ttc_value * ttc_value) * (side * half_widths + p_lat_diff);
    best = std::min(best, std::abs(a));
  }
  return best;
}

FlaggedValue a_req(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const FlaggedValue along = a_long_req(scene, a1, a2, dmm, cfg);
  const FlaggedValue alat = a_lat_req(scene, a1, a2, dmm, cfg);
  FlaggedValue out{std::hypot(along.value, alat.value), ""};
  if (!along.flag.empty() || !alat.flag.empty()) out.flag = "unavoidable";
  return out;
}

FlaggedValue a_req_cond(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const double s = spret(scene, a1, a2, dmm, cfg);
  if (s < kSpretConditionThreshold) return a_req(scene, a1, a2, dmm, cfg);
  return {0.0, ""};
}

FlaggedValue dst(
  const Scene & scene, const std::string & a1, const std::string & a2, double t_s,
  const EvalConfig & cfg)
{
  if (t_s < 0.0) throw std::invalid_argument("dst requires t_s >= 0");
  const auto [s1, s2] = actors(scene, a1, a2);
  const double v1 = decompose(s1.velocity, s1.yaw).longitudinal;
  const double v2 = decompose(s2.velocity, s1.yaw).longitudinal;
  if (v1 <= v2) return {0.0, ""};  // no closing speed, no deceleration required
  const double d = geom::distance(s1, s2, cfg.mode);
  const double denom = 2.0 * (d - v2 * t_s);
  if (denom <= 0.0) return {kInf, "safety distance already violated"};
  return {(v1 - v2) * (v1 - v2) / denom, ""};
}

double btn(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const ActorState & s1 = scene.actor(a1);
  if (!(s1.capabilities.a_long_min < 0.0)) {
    throw std::invalid_argument("invalid capability envelope: a_long_min must be < 0");
  }
  return a_long_req(scene, a1, a2, dmm, cfg).value / s1.capabilities.a_long_min;
}

double stn(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const EvalConfig & cfg)
{
  const ActorState & s1 = scene.actor(a1);
  if (!(s1.capabilities.a_lat_max > 0.0)) {
    throw std::invalid_argument("invalid capability envelope: a_lat_max must be > 0");
  }
  return a_lat_req(scene, a1, a2, dmm, cfg).value / s1.capabilities.a_lat_max;
}

FrameComponents jerk(const Scene & scene, const std::string & a1)
{
  const ActorState & s1 = scene.actor(a1);
  if (!s1.jerk) {
    throw std::invalid_argument("jerk unavailable for actor " + a1);
  }
  return decompose(*s1.jerk, s1.yaw);
}

double sp_from_times(double t_stop1, double t_stop2, double t_int, double k)
{
  if (!(k >= 1.0)) throw std::invalid_argument("sp requires a norm order k >= 1");
  if (std::isinf(t_int)) return 0.0;
  const double e1 = std::max(0.0, t_stop1 - t_int);
  const double e2 = std::max(0.0, t_stop2 - t_int);
  if (std::isinf(k)) return std::max(e1, e2);
  return std::pow(std::pow(e1, k) + std::pow(e2, k), 1.0 / k);
}

double sp(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const PredictionModel & dmm, const ManeuverModel & safety1, const ManeuverModel & safety2,
  double k, const EvalConfig & cfg)
{
  const auto [s1, s2] = actors(scene, a1, a2);
  const auto stop_time = [&](const ActorState & s, const ManeuverModel & m) {
    const Trajectory traj = m.generator(s, 0.0);
    for (const auto & st : traj.states) {
      if (st.velocity.norm() <= 1e-9) return st.t - scene.t;
    }
    throw std::invalid_argument("non-stopping safety procedure: " + m.maneuver_id);
  };
  const double t_int = ttc(scene, a1, a2, dmm, cfg);
  if (std::isinf(t_int)) return 0.0;
  return sp_from_times(stop_time(s1, safety1), stop_time(s2, safety2), t_int, k);
}

int rss_ds(
  const Scene & scene, const std::string & a1, const SafeDistanceFn & d_min_long,
  const SafeDistanceFn & d_min_lat, const EvalConfig & cfg)
{
  const ActorState & ego = scene.actor(a1);
  for (const auto & other : scene.actors) {
    if (other.id == ego.id) continue;
    const FrameComponents sep = decompose(other.position - ego.position, ego.yaw);
    double d_long = std::abs(sep.longitudinal);
    double d_lat = std::abs(sep.lateral);
    if (cfg.mode == geom::DistanceMode::kFootprint) {
      d_long = std::max(0.0, d_long - 0.5 * (ego.length + other.length));
      d_lat = std::max(0.0, d_lat - 0.5 * (ego.width + other.width));
    }
    if (d_lat < d_min_lat(ego, other) && d_long < d_min_long(ego, other)) return 1;
  }
  return 0;
}

SafeDistanceFn default_rss_longitudinal(const RssParams & params)
{
  return [params](const ActorState & ego, const ActorState & other) {
    const double v_r = std::max(0.0, decompose(ego.velocity, ego.yaw).longitudinal);
    const double v_f = std::max(0.0, decompose(other.velocity, ego.yaw).longitudinal);
    const double rho = params.response_time;
    const double v_after = v_r + rho * params.a_max_accel;
    const double d = v_r * rho + 0.5 * params.a_max_accel * rho * rho +
                     v_after * v_after / (2.0 * params.a_min_brake) -
                     v_f * v_f / (2.0 * params.a_max_brake);
    return std::max(0.0, d);
  };
}

SafeDistanceFn default_rss_lateral(const RssParams & params)
{
  return [params](const ActorState & ego, const ActorState & other) {
    const double v1 = std::abs(decompose(ego.velocity, ego.yaw).lateral);
    const double v2 = std::abs(decompose(other.velocity, ego.yaw).lateral);
    const double rho = params.response_time;
    return params.lateral_margin + v1 * rho + v1 * v1 / (2.0 * params.a_lat_brake) + v2 * rho +
           v2 * v2 / (2.0 * params.a_lat_brake);
  };
}

double pf_eval(const ActorState & a1, const std::vector<models::ScalarField> & potentials)
{
  double sum = 0.0;
  for (const auto & field : potentials) sum += field(a1.position);
  return sum;
}

// ---------------------------------------------------------------------------
// TCI
// ---------------------------------------------------------------------------

namespace
{

struct TciContext
{
  const ActorState * ego;
  Vec2 fwd;
  Vec2 left;
  double v_long0;
  double v_lat0;
  std::vector<const ActorState *> obstacles;
  const OccupancyGrid * grid;
  double d_long_norm;
  double d_lat_norm;
};

// Free lateral interval [y_lo, y_hi] (ego-frame offsets) at longitudinal
// offset x, walked over grid rows and reported at cell edges.
std::pair<double, double> lateral_corridor(
  const OccupancyGrid & grid, const ActorState & ego, const Vec2 & left, double x,
  const Vec2 & fwd)
{
  const Vec2 base = ego.position + x * fwd;
  const double cell = grid.cell_size;
  double lo = 0.0;
  double hi = 0.0;
  const auto drivable_at = [&](double y) { return grid.is_drivable(base + y * left); };
  if (!drivable_at(0.0)) return {0.0, 0.0};
  // Walk outwards in cell steps from the probe containing the base point,
  // then snap the bounds to the cell edges.
  double y = 0.0;
  while (drivable_at(y - cell)) y -= cell;
  {
    const Vec2 p = base + y * left;
    const double along = left.dot(p - grid.origin);
    const double offset = along - std::floor(along / cell) * cell;
    lo = y - offset;
  }
  y = 0.0;
  while (drivable_at(y + cell)) y += cell;
  {
    const Vec2 p = base + y * left;
    const double along = left.dot(p - grid.origin);
    const double offset = along - std::floor(along / cell) * cell;
    hi = y + (cell - offset);
  }
  return {lo, hi};
}

TciContext make_tci_context(const Scene & scene, const std::string & a1, const TciParams & params,
                            double horizon)
{
  TciContext ctx;
  ctx.ego = &scene.actor(a1);
  ctx.fwd = heading_dir(*ctx.ego);
  ctx.left = left_dir(*ctx.ego);
  const FrameComponents v = decompose(ctx.ego->velocity, ctx.ego->yaw);
  ctx.v_long0 = v.longitudinal;
  ctx.v_lat0 = v.lateral;
  for (const auto & other : scene.actors) {
    if (other.id != ctx.ego->id) ctx.obstacles.push_back(&other);
  }
  ctx.grid = scene.drivable_area ? &*scene.drivable_area : nullptr;
  ctx.d_long_norm = std::max(1.0, params.v_max * horizon);
  ctx.d_lat_norm = 2.0;
  if (ctx.grid) {
    const auto corridor = lateral_corridor(*ctx.grid, *ctx.ego, ctx.left, 0.0, ctx.fwd);
    ctx.d_lat_norm = std::max(0.5, 0.5 * (corridor.second - corridor.first));
  }
  return ctx;
}

// Lateral reference: center of the free corridor, pushed away from obstacles
// near the given longitudinal position.
double lateral_reference(const TciContext & ctx, double x, double t)
{
  double y_lo = -ctx.d_lat_norm;
  double y_hi = ctx.d_lat_norm;
  if (ctx.grid) {
    const auto corridor = lateral_corridor(*ctx.grid, *ctx.ego, ctx.left, x, ctx.fwd);
    y_lo = corridor.first;
    y_hi = corridor.second;
  }
  std::vector<double> obstacle_lats;
  for (const auto * o : ctx.obstacles) {
    const Vec2 pos = o->position + t * o->velocity;
    const FrameComponents rel = decompose(pos - ctx.ego->position, ctx.ego->yaw);
    if (std::abs(rel.longitudinal - x) <= 0.5 * (ctx.ego->length + o->length) + 5.0) {
      obstacle_lats.push_back(rel.lateral);
    }
  }
  if (obstacle_lats.empty()) return 0.5 * (y_lo + y_hi);
  double best_y = 0.5 * (y_lo + y_hi);
  double best_clearance = -kInf;
  const int samples = 41;
  for (int i = 0; i < samples; ++i) {
    const double y = y_lo + (y_hi - y_lo) * i / (samples - 1);
    double clearance = std::min(y - y_lo, y_hi - y);
    for (double ol : obstacle_lats) clearance = std::min(clearance, std::abs(y - ol));
    if (clearance > best_clearance + 1e-12) {
      best_clearance = clearance;
      best_y = y;
    }
  }
  return best_y;
}

}  // namespace

double tci_objective(
  const Scene & scene, const std::string & a1, double horizon, const TciControls & controls,
  const TciWeights & weights, const TciParams & params)
{
  if (controls.empty()) throw std::invalid_argument("tci requires at least one control interval");
  const TciContext ctx = make_tci_context(scene, a1, params, horizon);
  const double limit2 = params.mu_max * params.g * params.mu_max * params.g;
  for (const auto & [ax, ay] : controls) {
    if (ax * ax + ay * ay > limit2 + 1e-9) return kInf;
  }

  const int n = std::max(1, static_cast<int>(std::round(horizon / params.t_s)));
  double x = 0.0;
  double y = 0.0;
  double v_long = ctx.v_long0;
  double v_lat = ctx.v_lat0;
  double objective = 0.0;

  for (int k = 0; k < n; ++k) {
    const auto & [ax, ay] =
      controls[std::min<std::size_t>(controls.size() - 1, k * controls.size() / n)];
    const double v_prev = v_long;
    const double v_next = std::clamp(v_long + ax * params.t_s, 0.0, params.v_max);
    x += 0.5 * (v_long + v_next) * params.t_s;
    v_long = v_next;
    const double vl_next = v_lat + ay * params.t_s;
    y += 0.5 * (v_lat + vl_next) * params.t_s;
    v_lat = vl_next;
    const double t = (k + 1) * params.t_s;

    const Vec2 world = ctx.ego->position + x * ctx.fwd + y * ctx.left;
    if (ctx.grid && !ctx.grid->is_drivable(world)) return kInf;

    double r_long_term = 0.0;
    for (const auto * o : ctx.obstacles) {
      const Vec2 opos = o->position + t * o->velocity;
      const FrameComponents rel = decompose(opos - ctx.ego->position, ctx.ego->yaw);
      const double lat_gap = std::abs(rel.lateral - y) - 0.5 * (ctx.ego->width + o->width);
      const double long_gap = rel.longitudinal - x;
      if (lat_gap < 0.5 && long_gap > 0.0) {
        // In-corridor lead: penalize being past the safe following reference.
        const double r_long = long_gap - 0.5 * (ctx.ego->length + o->length) - 2.0 * v_long;
        r_long_term = std::max(r_long_term, std::max(0.0, -r_long) / ctx.d_long_norm);
      }
      const double long_overlap = std::abs(long_gap) - 0.5 * (ctx.ego->length + o->length);
      if (long_overlap < 0.0 && lat_gap < 0.0) return kInf;  // contact
    }

    const double r_lat = lateral_reference(ctx, x, t);
    const double dy = y - r_lat;
    const double r_lat_term =
      dy * dy * std::max(0.0, v_prev) / (ctx.d_lat_norm * ctx.d_lat_norm * params.v_max);

    objective += weights.w_long * r_long_term + weights.w_y * r_lat_term +
                 (weights.w_ax * ax * ax + weights.w_ay * ay * ay) / limit2;
  }
  return objective;
}

FlaggedValue tci(
  const Scene & scene, const std::string & a1, double horizon, const TciWeights & weights,
  const TciParams & params, const TciOptions & options)
{
  const ActorState & ego = scene.actor(a1);
  if (scene.drivable_area && !scene.drivable_area->is_drivable(ego.position)) {
    return {kInf, "infeasible start"};
  }

  const int k = options.control_intervals;
  const double a_max = params.mu_max * params.g;
  const auto evaluate = [&](const TciControls & c) {
    return tci_objective(scene, a1, horizon, c, weights, params);
  };

  TciControls zero(k, {0.0, 0.0});
  double best = evaluate(zero);
  TciControls best_controls = zero;
  if (best == 0.0) return {0.0, ""};

  std::vector<TciControls> seeds;
  seeds.push_back(zero);
  seeds.push_back(TciControls(k, {-a_max, 0.0}));
  seeds.push_back(TciControls(k, {-0.7 * a_max, 0.7 * a_max}));
  seeds.push_back(TciControls(k, {-0.7 * a_max, -0.7 * a_max}));
  seeds.push_back(TciControls(k, {0.0, a_max}));
  seeds.push_back(TciControls(k, {0.0, -a_max}));
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int r = 0; r < options.restarts; ++r) {
    TciControls c(k);
    for (auto & [ax, ay] : c) {
      double gx = unit(rng) * a_max;
      double gy = unit(rng) * a_max;
      const double norm = std::hypot(gx, gy);
      if (norm > a_max) {
        gx *= a_max / norm;
        gy *= a_max / norm;
      }
      ax = gx;
      ay = gy;
    }
    seeds.push_back(std::move(c));
  }

  const auto project = [&](TciControls & c) {
    for (auto & [ax, ay] : c) {
      const double norm = std::hypot(ax, ay);
      if (norm > a_max) {
        ax *= a_max / norm;
        ay *= a_max / norm;
      }
    }
  };

  for (auto seed : seeds) {
    project(seed);
    double value = evaluate(seed);
    if (std::isinf(value)) continue;
    double step = 0.5 * a_max;
    for (int iter = 0; iter < options.descent_iterations; ++iter) {
      bool improved = false;
      for (int i = 0; i < k; ++i) {
        for (int axis = 0; axis < 2; ++axis) {
          for (double sign : {1.0, -1.0}) {
            TciControls cand = seed;
            (axis == 0 ? cand[i].first : cand[i].second) += sign * step;
            project(cand);
            const double cv = evaluate(cand);
            if (cv < value - 1e-12) {
              seed = cand;
              value = cv;
              improved = true;
            }
          }
        }
      }
      if (!improved) {
        step *= 0.5;
        if (step < 1e-4) break;
      }
    }
    if (value < best) {
      best = value;
      best_controls = seed;
    }
  }

  if (std::isinf(best)) return {kInf, "no feasible control sequence"};
  return {best, ""};
}

}  // namespace criticality::metrics
