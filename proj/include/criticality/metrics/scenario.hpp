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

#ifndef CRITICALITY__METRICS__SCENARIO_HPP_
#define CRITICALITY__METRICS__SCENARIO_HPP_

#include "criticality/metrics/scene.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace criticality::metrics
{

// Sampled scene-metric values over a scenario. Interpolation between finite
// samples is piecewise-linear; segments with a non-finite endpoint contribute
// with the value of their left endpoint.
struct TimeSeries
{
  std::vector<std::pair<double, double>> samples;  // (t, value), strictly increasing t

  void validate() const;
  double duration() const;
};

enum class AggregateKind { kMin, kMax, kMean, kMedian, kQuantile, kIntegral };

struct Aggregate
{
  AggregateKind kind{AggregateKind::kMin};
  double p{0.5};  // quantile order, used by kQuantile only
};

// Mean and integral use trapezoidal weighting over time.
double aggregate_time(const TimeSeries & series, const Aggregate & agg);

using SceneMetricFn = std::function<double(const Scene &)>;

TimeSeries metric_series(const Scenario & scenario, const SceneMetricFn & metric);

enum class ActorAggregateMode { kDesignatedMax, kImpartialMean };

using PairMetricFn =
  std::function<double(const Scene &, const std::string &, const std::string &)>;

double aggregate_actors(
  const Scene & scene, const PairMetricFn & metric, ActorAggregateMode mode,
  const std::optional<std::string> & subject = std::nullopt);

using ScenarioPairMetricFn =
  std::function<double(const Scenario &, const std::string &, const std::string &)>;

// Scenario-level variant over the union of actors appearing in any scene.
double aggregate_actors(
  const Scenario & scenario, const ScenarioPairMetricFn & metric, ActorAggregateMode mode,
  const std::optional<std::string> & subject = std::nullopt);

// Per-actor sampled track across the scenario (scenes where the actor is
// present), for interpolated event localization.
models::Trajectory actor_track(const Scenario & scenario, const std::string & actor_id);

// ---------------------------------------------------------------------------
// Threshold-time aggregates of ttc
// ---------------------------------------------------------------------------

double tet_from_series(const TimeSeries & ttc_series, double tau);
double tit_from_series(const TimeSeries & ttc_series, double tau);

double tet(
  const Scenario & scenario, const std::string & a1, const std::string & a2, double tau,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
double tit(
  const Scenario & scenario, const std::string & a1, const std::string & a2, double tau,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// ---------------------------------------------------------------------------
// Evasive-event metrics
// ---------------------------------------------------------------------------

// Locates the first evasive maneuver of the actor; absolute scene time.
using EvasiveDetector =
  std::function<std::optional<double>(const Scenario &, const std::string &)>;

// Fires at the first sample with longitudinal acceleration at or below
// a_long_threshold or |lateral jerk| at or above lat_jerk_threshold.
EvasiveDetector default_evasive_detector(
  double a_long_threshold = -4.0, double lat_jerk_threshold = 5.0);

// ttc evaluated at the detected evasive time; throws when no evasive
// maneuver is found.
double tta(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const EvasiveDetector & detector, const models::PredictionModel & dmm, const EvalConfig & cfg);

// ---------------------------------------------------------------------------
// Conflict-area metrics
// ---------------------------------------------------------------------------

struct EncroachmentInterval
{
  double entry{0.0};
  double exit{0.0};  // absolute times
};

// First footprint-overlap onset/offset of the actor with the conflict area,
// located by interpolation between the bracketing samples.
std::optional<EncroachmentInterval> encroachment_interval(
  const Scenario & scenario, const std::string & actor_id, const ConflictArea & ca);

double et(const Scenario & scenario, const std::string & a1, const ConflictArea & ca);

// Time gap between a1 leaving and a2 entering the conflict area; 0 with flag
// "overlap" when a2 enters before a1 has left.
FlaggedValue pet(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const ConflictArea & ca);

// ---------------------------------------------------------------------------
// Exposure and probability metrics
// ---------------------------------------------------------------------------

using PersonalSpaceFn = std::function<Polygon(const ActorState &)>;

PersonalSpaceFn default_personal_space(double lateral_margin = 0.5, double longitudinal_margin = 1.0);

// Number of (scene sample, other actor) personal-space violations.
long soi(
  const Scenario & scenario, const std::string & a1, const PersonalSpaceFn & personal_space);

// Pedestrian risk integral over the unique conflict period; 0 with flag when
// no conflict period exists.
FlaggedValue pri(
  const Scenario & scenario, const std::string & a1, const ConflictArea & ca,
  const std::string & pedestrian, const models::PredictionModel & dmm, const EvalConfig & cfg);

double gaussian_cdf(double x);

// Time-normalized probability that the required deceleration exceeds the
// normally distributed available deceleration.
double cpi(
  const Scenario & scenario, const std::string & a1, const std::string & a2, double mu,
  double sigma, const models::PredictionModel & dmm, const EvalConfig & cfg);

double ci_from_components(double pet_value, double delta_ke, double alpha, double beta);

// Conflict index: hypothetical-collision energy released over the pet-based
// collision probability.
double ci(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const ConflictArea & ca, double alpha, double beta);

// 1 iff an accident was recorded or any footprint overlap occurs.
int am(const Scenario & scenario);

// Speed change of the given actor across a recorded collision.
double delta_v_event(const AccidentEvent & event, const std::string & actor_id);

// Mass-weighted two-actor speed difference.
double delta_v(const Scene & scene, const std::string & a1, const std::string & a2);

// Fatality probability as a quartic in the speed change, clamped to [0, 1].
double joksch_fatality(double delta_v_value);

// Conflict severity at the evasive event.
double cs(
  const Scenario & scenario, const std::string & a1, const std::string & a2,
  const EvasiveDetector & detector, const models::PredictionModel & dmm, const EvalConfig & cfg);

}  // namespace criticality::metrics

#endif  // CRITICALITY__METRICS__SCENARIO_HPP_
