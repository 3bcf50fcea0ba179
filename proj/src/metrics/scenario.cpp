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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace criticality::metrics
{
namespace
{

bool occupies(const ActorState & s, const Polygon & area)
{
  return geom::polygons_overlap(geom::footprint(s), area);
}

// Refines the boundary between a non-occupying and an occupying state.
double refine_crossing(
  const models::Trajectory & track, const Polygon & area, double t_out, double t_in)
{
  double lo = t_out;
  double hi = t_in;
  while (std::abs(hi - lo) > 1e-7) {
    const double mid = 0.5 * (lo + hi);
    if (occupies(track.state_at(mid), area)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double trapezoid(double t0, double v0, double t1, double v1)
{
  return 0.5 * (v0 + v1) * (t1 - t0);
}

}  // namespace

void TimeSeries::validate() const
{
  if (samples.empty()) throw std::invalid_argument("empty time series");
  for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
    if (!(samples[i].first < samples[i + 1].first)) {
      throw std::invalid_argument("time series timestamps must strictly increase");
    }
  }
}

double TimeSeries::duration() const
{
  validate();
  return samples.back().first - samples.front().first;
}

double aggregate_time(const TimeSeries & series, const Aggregate & agg)
{
  series.validate();
  std::vector<double> values;
  values.reserve(series.samples.size());
  for (const auto & [t, v] : series.samples) values.push_back(v);

  switch (agg.kind) {
    case AggregateKind::kMin:
      return *std::min_element(values.begin(), values.end());
    case AggregateKind::kMax:
      return *std::max_element(values.begin(), values.end());
    case AggregateKind::kMedian:
    case AggregateKind::kQuantile: {
      const double p = agg.kind == AggregateKind::kMedian ? 0.5 : agg.p;
      if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("quantile order outside [0, 1]");
      std::sort(values.begin(), values.end());
      const double idx = p * (values.size() - 1);
      const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
      const std::size_t hi = std::min(lo + 1, values.size() - 1);
      const double frac = idx - lo;
      return values[lo] + frac * (values[hi] - values[lo]);
    }
    case AggregateKind::kMean:
    case AggregateKind::kIntegral: {
      if (series.samples.size() == 1) {
        return agg.kind == AggregateKind::kMean ? values.front() : 0.0;
      }
      double integral = 0.0;
      double finite_span = 0.0;
      for (std::size_t i = 0; i + 1 < series.samples.size(); ++i) {
        const auto & [t0, v0] = series.samples[i];
        const auto & [t1, v1] = series.samples[i + 1];
        if (std::isfinite(v0) && std::isfinite(v1)) {
          integral += trapezoid(t0, v0, t1, v1);
          finite_span += t1 - t0;
        }
      }
      if (agg.kind == AggregateKind::kIntegral) return integral;
      if (finite_span <= 0.0) throw std::invalid_argument("no finite segments for mean");
      return integral / finite_span;
    }
  }
  throw std::invalid_argument("unknown aggregate");
}

TimeSeries metric_series(const Scenario & scenario, const SceneMetricFn & metric)
{
  scenario.validate();
  TimeSeries series;
  for (const auto & scene : scenario.scenes) {
    series.samples.emplace_back(scene.t, metric(scene));
  }
  return series;
}

double aggregate_actors(
  const Scene & scene, const PairMetricFn & metric, ActorAggregateMode mode,
  const std::optional<std::string> & subject)
{
  if (scene.actors.size() < 2) {
    throw std::invalid_argument("actor aggregation requires at least two actors");
  }
  if (mode == ActorAggregateMode::kDesignatedMax) {
    if (!subject) throw std::invalid_argument("designated aggregation requires a subject");
    double best = -kInf;
    for (const auto & other : scene.actors) {
      if (other.id == *subject) continue;
      best = std::max(best, metric(scene, *subject, other.id));
    }
    return best;
  }
  double sum = 0.0;
  long count = 0;
  for (const auto & a : scene.actors) {
    for (const auto & b : scene.actors) {
      if (a.id == b.id) continue;
      sum += metric(scene, a.id, b.id);
      ++count;
    }
  }
  return sum / count;
}

double aggregate_actors(
  const Scenario & scenario, const ScenarioPairMetricFn & metric, ActorAggregateMode mode,
  const std::optional<std::string> & subject)
{
  std::vector<std::string> ids;
  for (const auto & scene : scenario.scenes) {
    for (const auto & a : scene.actors) {
      if (std::find(ids.begin(), ids.end(), a.id) == ids.end()) ids.push_back(a.id);
    }
  }
  if (ids.size() < 2) {
    throw std::invalid_argument("actor aggregation requires at least two actors");
  }
  std::sort(ids.begin(), ids.end());
  if (mode == ActorAggregateMode::kDesignatedMax) {
    if (!subject) throw std::invalid_argument("designated aggregation requires a subject");
    double best = -kInf;
    for (const auto & other : ids) {
      if (other == *subject) continue;
      best = std::max(best, metric(scenario, *subject, other));
    }
    return best;
  }
  double sum = 0.0;
  long count = 0;
  for (const auto & a : ids) {
    for (const auto & b : ids) {
      if (a == b) continue;
      sum += metric(scenario, a, b);
      ++count;
    }
  }
  return sum / count;
}

models::Trajectory actor_track(const Scenario & scenario, const std::string & actor_id)
{
  models::Trajectory track;
  for (const auto & scene : scenario.scenes) {
    if (const ActorState * s = scene.find(actor_id)) track.states.push_back(*s);
  }
  if (track.states.empty()) {
    throw std::invalid_argument("actor not present in scenario: " + actor_id);
  }
  return track;
}

// ---------------------------------------------------------------------------
// TET / TIT
// ---------------------------------------------------------------------------

double tet_from_series(const TimeSeries & series, double tau)
{
  if (!(tau > 0.0)) throw std::invalid_argument("tet requires tau > 0");
  series.validate();
  double exposed = 0.0;
  for (std::size_t i = 0; i + 1 < series.samples.size(); ++i) {
    const auto & [t0, v0] = series.samples[i];
    const auto & [t1, v1] = series.samples[i + 1];
    const double dt = t1 - t0;
    if (!std::isfinite(v0) || !std::isfinite(v1)) {
      if (v0 <= tau) exposed += dt;  // left-endpoint convention across non-finite samples
      continue;
    }
    const bool below0 = v0 <= tau;
    const bool below1 = v1 <= tau;
    if (below0 && below1) {
      exposed += dt;
    } else if (below0 != below1) {
      const double frac = (tau - v0) / (v1 - v0);
      exposed += below0 ? frac * dt : (1.0 - frac) * dt;
    }
  }
  return exposed;
}

double tit_from_series(const TimeSeries & series, double tau)
{
  if (!(tau > 0.0)) throw std::invalid_argument("tit requires tau > 0");
  series.validate();
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < series.samples.size(); ++i) {
    const auto & [t0, v0] = series.samples[i];
    const auto & [t1, v1] = series.samples[i + 1];
    const double dt = t1 - t0;
    if (!std::isfinite(v0) || !std::isfinite(v1)) {
      if (std::isfinite(v0) && v0 <= tau) integral += (tau - v0) * dt;
      continue;
    }
    const bool below0 = v0 <= tau;
    const bool below1 = v1 <= tau;
    if (below0 && below1) {
      integral += trapezoid(t0, tau - v0, t1, tau - v1);
    } else if (below0 != below1) {
      const double frac = (tau - v0) / (v1 - v0);
      if (below0) {
        integral += 0.5 * (tau - v0) * frac * dt;
      } else {
        integral += 0.5 * (tau - v1) * (1.0 - frac) * dt;
      }
    }
  }
  return integral;
}

double tet(
  const Scenario & scenario, const std::string & a1, const std::string & a2, double tau,
  const models::PredictionModel & dmm, const EvalConfig & cfg)
{
  return tet_from_series(
    metric_series(scenario, [&](const Scene & s) { return ttc(s, a1, a2, dmm, cfg); }), tau);
}

double tit(
  const Scenario & scenario, const std::string & a1, const std::string & a2, double tau,
  const models::PredictionModel & dmm, const EvalConfig & cfg)
{
  return tit_from_series(
    metric_series(scenario, [&](const Scene & s) { return ttc(s, a1, a2, dmm, cfg); }), tau);
}

// ---------------------------------------------------------------------------
// Evasive events
// ---------------------------------------------------------------------------

EvasiveDetector default_evasive_detector(double a_long_threshold, double lat_jerk_threshold)
{
  return [a_long_threshold, lat_jerk_threshold](
           const Scenario & scenario, const std::string & actor_id) -> std::optional<double> {
    const auto track = actor_track(scenario, actor_id);
    for (std::size_t k = 0; k < track.states.size(); ++k) {
      const ActorState & s = track.states[k];
      if (decompose(s.acceleration, s.yaw).longitudinal <= a_long_threshold) return s.t;
      Vec2 j{0.0, 0.0};
      if (s.jerk) {
        j = *s.jerk;
      } else if (k > 0 && k + 1 < track.states.size()) {
        const auto & prev = track.states[k - 1];
        const auto & next = track.states[k + 1];
        j = (next.acceleration - prev.acceleration) / (next.t - prev.t);
      }
      if (std::abs(decompose(j, s.yaw).lateral) >= lat_jerk_threshold) return s.t;
    }
    return std::nullopt;
  };
}

double tta(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const EvasiveDetector & detector, const models::PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto t_evasive = detector(scenario, a1);
  if (!t_evasive) throw std::runtime_error("no evasive event");
  for (const auto & scene : scenario.scenes) {
    if (scene.t >= *t_evasive - 1e-12) {
      return ttc(scene, a1, a2, dmm, cfg);
    }
  }
  throw std::runtime_error("no evasive event");
}

// ---------------------------------------------------------------------------
// Conflict-area events
// ---------------------------------------------------------------------------

std::optional<EncroachmentInterval> encroachment_interval(
  const Scenario & scenario, const std::string & actor_id, const ConflictArea & ca)
{
  const auto track = actor_track(scenario, actor_id);
  std::optional<double> entry;
  for (std::size_t k = 0; k < track.states.size(); ++k) {
    const bool inside = occupies(track.states[k], ca.polygon);
    if (!entry && inside) {
      entry = k == 0 ? track.states[0].t
                     : refine_crossing(track, ca.polygon, track.states[k - 1].t,
                                       track.states[k].t);
    } else if (entry && !inside) {
      const double exit =
        refine_crossing(track, ca.polygon, track.states[k].t, track.states[k - 1].t);
      return EncroachmentInterval{*entry, exit};
    }
  }
  if (entry) return EncroachmentInterval{*entry, track.states.back().t};
  return std::nullopt;
}

double et(const Scenario & scenario, const std::string & a1, const ConflictArea & ca)
{
  const auto interval = encroachment_interval(scenario, a1, ca);
  if (!interval) throw std::runtime_error("no encroachment");
  return interval->exit - interval->entry;
}

FlaggedValue pet(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const ConflictArea & ca)
{
  const auto first = encroachment_interval(scenario, a1, ca);
  const auto second = encroachment_interval(scenario, a2, ca);
  if (!first || !second) throw std::runtime_error("no encroachment");
  if (second->entry < first->exit) return {0.0, "overlap"};
  return {second->entry - first->exit, ""};
}

// ---------------------------------------------------------------------------
// Exposure and probability metrics
// ---------------------------------------------------------------------------

PersonalSpaceFn default_personal_space(double lateral_margin, double longitudinal_margin)
{
  return [lateral_margin, longitudinal_margin](const ActorState & s) {
    return geom::oriented_rectangle(
      s.position, s.yaw, s.length + 2.0 * longitudinal_margin, s.width + 2.0 * lateral_margin);
  };
}

long soi(
  const Scenario & scenario, const std::string & a1, const PersonalSpaceFn & personal_space)
{
  long violations = 0;
  for (const auto & scene : scenario.scenes) {
    const ActorState * subject = scene.find(a1);
    if (!subject) continue;
    const Polygon space1 = personal_space(*subject);
    for (const auto & other : scene.actors) {
      if (other.id == a1) continue;
      if (geom::polygons_overlap(space1, personal_space(other))) ++violations;
    }
  }
  return violations;
}

FlaggedValue pri(
  const Scenario & scenario, const std::string & a1, const ConflictArea & ca,
  const std::string & pedestrian, const models::PredictionModel & dmm, const EvalConfig & cfg)
{
  scenario.validate();
  const auto stop_time = [](const ActorState & s) {
    const double v_long = std::abs(decompose(s.velocity, s.yaw).longitudinal);
    return s.reaction_time.value_or(0.0) + v_long / std::abs(s.capabilities.a_long_min);
  };
  const auto impact_speed = [&](const ActorState & s) {
    const double v = s.velocity.norm();
    const double d = geom::distance_to_polygon(s, ca.polygon, cfg.mode);
    const double radicand =
      v * v + 2.0 * s.capabilities.a_long_min * (d - v * s.reaction_time.value_or(0.0));
    return radicand > 0.0 ? std::sqrt(radicand) : 0.0;
  };

  // Conflict scenes: TTZ(P) < TTZ(A1) < stop time of A1.
  std::vector<std::pair<double, double>> integrand;  // (t, s_imp^2 (t_s - ttz1))
  bool in_period = false;
  bool period_done = false;
  for (const auto & scene : scenario.scenes) {
    const ActorState * veh = scene.find(a1);
    const ActorState * ped = scene.find(pedestrian);
    bool conflict = false;
    double value = 0.0;
    if (veh && ped) {
      const double ttz_veh = tto(scene, a1, ca.polygon, dmm, cfg);
      const double ttz_ped = tto(scene, pedestrian, ca.polygon, dmm, cfg);
      const double ts = stop_time(*veh);
      conflict = ttz_ped < ttz_veh && ttz_veh < ts;
      if (conflict) {
        const double s_imp = impact_speed(*veh);
        value = s_imp * s_imp * (ts - ttz_veh);
      }
    }
    if (conflict) {
      if (period_done) throw std::runtime_error("incoherent conflict period");
      in_period = true;
      integrand.emplace_back(scene.t, value);
    } else if (in_period) {
      in_period = false;
      period_done = true;
    }
  }
  if (integrand.empty()) return {0.0, "no conflict period"};
  if (integrand.size() == 1) return {0.0, "degenerate conflict period"};
  double integral = 0.0;
  for (std::size_t i = 0; i + 1 < integrand.size(); ++i) {
    integral += trapezoid(
      integrand[i].first, integrand[i].second, integrand[i + 1].first, integrand[i + 1].second);
  }
  return {integral, ""};
}

double gaussian_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double cpi(
  const Scenario & scenario, const std::string & a1, const std::string & a2, double mu,
  double sigma, const models::PredictionModel & dmm, const EvalConfig & cfg)
{
  if (!(sigma > 0.0)) throw std::invalid_argument("cpi requires sigma > 0");
  scenario.validate();
  const double span = scenario.te() - scenario.t0();
  if (!(span > 0.0)) throw std::invalid_argument("cpi requires a scenario of positive duration");

  const auto series = metric_series(scenario, [&](const Scene & s) {
    const double required = a_long_req(s, a1, a2, dmm, cfg).value;
    // P(required < available), available ~ N(mu, sigma).
    return gaussian_cdf((mu - required) / sigma);
  });
  return aggregate_time(series, {AggregateKind::kIntegral, 0.0}) / span;
}

double ci_from_components(double pet_value, double delta_ke, double alpha, double beta)
{
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("ci requires alpha in [0, 1]");
  if (!(beta > 0.0)) throw std::invalid_argument("ci requires beta > 0");
  return alpha * delta_ke / std::exp(beta * pet_value);
}

double ci(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const ConflictArea & ca, double alpha, double beta)
{
  const auto first = encroachment_interval(scenario, a1, ca);
  const auto second = encroachment_interval(scenario, a2, ca);
  if (!first || !second) throw std::runtime_error("no encroachment");
  const double pet_value = std::max(0.0, second->entry - first->exit);

  const ActorState exit_state = actor_track(scenario, a1).state_at(first->exit);
  const ActorState entry_state = actor_track(scenario, a2).state_at(second->entry);
  if (!exit_state.mass || !entry_state.mass) {
    throw std::invalid_argument("ci requires actor masses");
  }
  const double m1 = *exit_state.mass;
  const double m2 = *entry_state.mass;
  // Hypothetical perfectly inelastic collision along the momentum sum.
  const Vec2 v_after = (m1 * exit_state.velocity + m2 * entry_state.velocity) / (m1 + m2);
  const double ke_before = 0.5 * m1 * exit_state.velocity.squaredNorm() +
                           0.5 * m2 * entry_state.velocity.squaredNorm();
  const double ke_after = 0.5 * (m1 + m2) * v_after.squaredNorm();
  return ci_from_components(pet_value, ke_before - ke_after, alpha, beta);
}

int am(const Scenario & scenario)
{
  if (!scenario.accident_events.empty()) return 1;
  for (const auto & scene : scenario.scenes) {
    for (std::size_t i = 0; i < scene.actors.size(); ++i) {
      for (std::size_t j = i + 1; j < scene.actors.size(); ++j) {
        if (geom::polygons_overlap(
              geom::footprint(scene.actors[i]), geom::footprint(scene.actors[j]))) {
          return 1;
        }
      }
    }
  }
  return 0;
}

double delta_v_event(const AccidentEvent & event, const std::string & actor_id)
{
  if (actor_id == event.actor1) return event.speed_after1 - event.speed_before1;
  if (actor_id == event.actor2) return event.speed_after2 - event.speed_before2;
  throw std::invalid_argument("actor not part of the accident event: " + actor_id);
}

double delta_v(const Scene & scene, const std::string & a1, const std::string & a2)
{
  const ActorState & s1 = scene.actor(a1);
  const ActorState & s2 = scene.actor(a2);
  if (!s1.mass || !s2.mass) throw std::invalid_argument("delta_v requires actor masses");
  const double m1 = *s1.mass;
  const double m2 = *s2.mass;
  return m2 / (m1 + m2) * (s2.velocity.norm() - s1.velocity.norm());
}

double joksch_fatality(double delta_v_value)
{
  const double r = std::abs(delta_v_value) / 31.74;
  const double r2 = r * r;
  return std::min(1.0, r2 * r2);
}

double cs(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const EvasiveDetector & detector, const models::PredictionModel & dmm, const EvalConfig & cfg)
{
  const auto t_evasive = detector(scenario, a1);
  if (!t_evasive) throw std::runtime_error("no evasive event");
  const Scene * at = nullptr;
  for (const auto & scene : scenario.scenes) {
    if (scene.t >= *t_evasive - 1e-12) {
      at = &scene;
      break;
    }
  }
  if (!at) throw std::runtime_error("no evasive event");

  const double tta_value = ttc(*at, a1, a2, dmm, cfg);
  const double dv = delta_v(*at, a1, a2);
  const ActorState & s1 = at->actor(a1);
  const ActorState & s2 = at->actor(a2);
  const double mass_ratio = *s2.mass / (*s1.mass + *s2.mass);
  const double a_norm = s1.acceleration.norm();
  if (a_norm <= 0.0 || tta_value == 0.0) return dv;
  if (std::isinf(tta_value)) return -kInf;
  return dv - tta_value * a_norm * mass_ratio;
}

}  // namespace criticality::metrics
