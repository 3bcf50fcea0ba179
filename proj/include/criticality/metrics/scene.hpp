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

#ifndef CRITICALITY__METRICS__SCENE_HPP_
#define CRITICALITY__METRICS__SCENE_HPP_

#include "criticality/metrics/contact.hpp"
#include "criticality/models/models.hpp"

#include <functional>
#include <string>
#include <vector>

namespace criticality::metrics
{

// a_req_cond vanishes once the squared encroachment-time gap reaches this
// threshold (s^2).
inline constexpr double kSpretConditionThreshold = 3.0;

// ---------------------------------------------------------------------------
// Maneuver models
// ---------------------------------------------------------------------------

// Maneuver conditioned on a start offset: the actor follows its nominal
// prediction until state.t + start_offset, then executes the maneuver.
struct ManeuverModel
{
  std::string maneuver_id;  // brake, steer_left, steer_right, kickdown, custom
  std::function<models::Trajectory(const ActorState &, double start_offset)> generator;
};

ManeuverModel brake_maneuver(const models::PredictionModel & nominal);
ManeuverModel steer_maneuver(const models::PredictionModel & nominal, bool left);
ManeuverModel kickdown_maneuver(const models::PredictionModel & nominal);

// ---------------------------------------------------------------------------
// Temporal metrics
// ---------------------------------------------------------------------------

// Minimal time until the two actors collide under the model; +inf within the
// horizon otherwise.
double ttc(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Car-following closed form: constant velocity of the follower, constant
// longitudinal deceleration of the lead.
double pttc(
  const Scene & scene, const std::string & follower, const std::string & lead,
  const EvalConfig & cfg);

// Time until the actor reaches a static target; moving-actor targets reduce
// to ttc.
double tto(
  const Scene & scene, const std::string & a1, const Polygon & target,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
double tto(
  const Scene & scene, const std::string & a1, const std::string & target_actor,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

struct DceTtce
{
  double dce;   // m
  double ttce;  // s
};

// Minimum predicted distance and its earliest argmin; contact gives (0, ttc).
DceTtce dce_ttce(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Minimum first-contact time over all trajectory-set pairs.
double wttc(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Latest maneuver start in [0, ttc] that still avoids contact; -inf when even
// an immediate maneuver collides; +inf with flag when no collision is
// predicted in the first place.
FlaggedValue ttm(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const ManeuverModel & maneuver, const EvalConfig & cfg);

FlaggedValue ttr(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const std::vector<ManeuverModel> & maneuvers,
  const EvalConfig & cfg);

// Time for the follower to reach the lead's current position; headway is the
// current distance.
double thw(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
double hw(
  const Scene & scene, const std::string & a1, const std::string & a2, const EvalConfig & cfg);

// Predicted-encroachment times over path-point coincidences.
double pret(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
double spret(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
// Time advantage: pret under a constant-velocity model.
double ta(
  const Scene & scene, const std::string & a1, const std::string & a2, double horizon,
  double step, const EvalConfig & cfg);

// ---------------------------------------------------------------------------
// Distance and acceleration metrics
// ---------------------------------------------------------------------------

double msd(const Scene & scene, const std::string & a1);
double psd(
  const Scene & scene, const std::string & a1, const ConflictArea & ca, const EvalConfig & cfg);

// Gap-acceptance model: whether the actor acts given gap size s.
using GapAcceptanceModel = std::function<bool(const ActorState &, double t, double s)>;

double ags(
  const Scene & scene, const std::string & a1, const GapAcceptanceModel & action, double s_max,
  const EvalConfig & cfg);

// Least-magnitude constant longitudinal acceleration (<= 0) avoiding contact;
// accel_floor with flag "unavoidable" when none exists above the floor.
FlaggedValue a_long_req(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Least constant lateral acceleration magnitude avoiding contact, minimized
// over steering to the left and to the right. Footprint widths always enter.
FlaggedValue a_lat_req(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Car-following closed form evaluated from current lateral kinematics.
double a_lat_req_closed_form(
  const Scene & scene, const std::string & a1, const std::string & a2, double ttc_value);

FlaggedValue a_req(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
FlaggedValue a_req_cond(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Deceleration magnitude keeping a safety time of t_s under constant lead
// velocity; +inf with flag when the safety distance is already violated.
FlaggedValue dst(
  const Scene & scene, const std::string & a1, const std::string & a2, double t_s,
  const EvalConfig & cfg);

double btn(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);
double stn(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const EvalConfig & cfg);

// Yaw-frame jerk components; throws when the state carries no jerk.
FrameComponents jerk(const Scene & scene, const std::string & a1);

// ---------------------------------------------------------------------------
// Potential- and rule-based metrics
// ---------------------------------------------------------------------------

// k-norm of the clamped stop-time excesses over the earliest intersection
// time; k = inf selects the max norm.
double sp_from_times(double t_stop1, double t_stop2, double t_int, double k);
double sp(
  const Scene & scene, const std::string & a1, const std::string & a2,
  const models::PredictionModel & dmm, const ManeuverModel & safety1, const ManeuverModel & safety2,
  double k, const EvalConfig & cfg);

// Safe-distance indicator: 1 iff some other actor is simultaneously below
// both thresholds.
using SafeDistanceFn = std::function<double(const ActorState & ego, const ActorState & other)>;

int rss_ds(
  const Scene & scene, const std::string & a1, const SafeDistanceFn & d_min_long,
  const SafeDistanceFn & d_min_lat, const EvalConfig & cfg);

struct RssParams
{
  double response_time{0.5};     // s
  double a_max_accel{3.0};       // m/s^2
  double a_min_brake{4.0};       // m/s^2 (magnitude)
  double a_max_brake{8.0};       // m/s^2 (magnitude)
  double lateral_margin{0.5};    // m
  double a_lat_brake{2.0};       // m/s^2 (magnitude)
};

SafeDistanceFn default_rss_longitudinal(const RssParams & params);
SafeDistanceFn default_rss_lateral(const RssParams & params);

double pf_eval(const ActorState & a1, const std::vector<models::ScalarField> & potentials);

// ---------------------------------------------------------------------------
// Trajectory criticality (optimization-based)
// ---------------------------------------------------------------------------

struct TciWeights
{
  double w_long{1.0};
  double w_y{1.0};
  double w_ax{1.0};
  double w_ay{1.0};
};

struct TciParams
{
  double mu_max{0.8};
  double g{9.81};
  double v_max{70.0};
  double t_s{0.1};  // discrete step of the objective
};

struct TciOptions
{
  int control_intervals{3};
  int restarts{12};
  int descent_iterations{80};
  std::uint64_t seed{1};
};

// Piecewise-constant (a_long, a_lat) controls, one pair per control interval.
using TciControls = std::vector<std::pair<double, double>>;

// Discretized objective for a fixed control sequence; +inf when infeasible
// (off the drivable area, in contact with an obstacle, or outside Kamm's
// circle).
double tci_objective(
  const Scene & scene, const std::string & a1, double horizon, const TciControls & controls,
  const TciWeights & weights, const TciParams & params);

FlaggedValue tci(
  const Scene & scene, const std::string & a1, double horizon, const TciWeights & weights,
  const TciParams & params, const TciOptions & options = {});

}  // namespace criticality::metrics

#endif  // CRITICALITY__METRICS__SCENE_HPP_
