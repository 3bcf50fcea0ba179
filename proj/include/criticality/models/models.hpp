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

#ifndef CRITICALITY__MODELS__MODELS_HPP_
#define CRITICALITY__MODELS__MODELS_HPP_

#include "criticality/core/types.hpp"

#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace criticality::models
{

// Below this turn rate the turn models switch to their straight-line limit.
inline constexpr double kOmegaEps = 1e-6;

// Sampled future motion of one actor. Timestamps are absolute; states between
// samples interpolate linearly.
struct Trajectory
{
  std::vector<ActorState> states;
  std::optional<double> weight;

  bool empty() const { return states.empty(); }
  double start_time() const;
  double end_time() const;
  ActorState state_at(double t) const;
};

struct TrajectorySet
{
  std::vector<Trajectory> trajectories;

  // Weights, when present, must be >= 0 and sum to 1 within 1e-9.
  void validate() const;
};

enum class ModelKind { kSingleTrace, kTraceSet, kOccupancyDistribution };

// Pluggable motion predictor consumed by all metrics.
class PredictionModel
{
public:
  PredictionModel(ModelKind kind, double horizon, double step);
  virtual ~PredictionModel() = default;

  ModelKind kind() const { return kind_; }
  double horizon() const { return horizon_; }
  double step() const { return step_; }

  // Single nominal trace sampled at the model step over the horizon.
  virtual Trajectory predict(const ActorState & state) const = 0;

  // Trace-set prediction; defaults to the singleton nominal trace.
  virtual TrajectorySet predict_set(const ActorState & state) const;

private:
  ModelKind kind_;
  double horizon_;
  double step_;
};

// ---------------------------------------------------------------------------
// Model state-update operations
// ---------------------------------------------------------------------------

// Truncated-series advance of position/velocity/acceleration by dt using
// derivatives up to `order`. Missing derivatives are an error unless
// zero_fill_missing is set.
ActorState taylor_predict(
  const ActorState & state, int order, double dt, bool zero_fill_missing = false);

using ControlSignal = std::function<double(double)>;

// Fixed-step RK4 integration of the kinematic car with speed/steering-angle
// inputs; axle_distance is the wheelbase L.
Trajectory simple_car_integrate(
  const ActorState & state, const ControlSignal & speed_input,
  const ControlSignal & steering_angle_input, double dt, double axle_distance, double step);

// Same car with the steering angle integrated from a steering-rate input.
Trajectory continuous_steering_integrate(
  const ActorState & state, const ControlSignal & speed_input,
  const ControlSignal & steering_rate_input, double dt, double axle_distance, double step);

// Discrete coordinated-turn transition. Positive omega rotates the velocity
// clockwise; |omega| < kOmegaEps falls back to the constant-velocity limit.
struct CoordinatedTurnState
{
  Vec2 position;
  Vec2 velocity;
};
CoordinatedTurnState coordinated_turn_step(const Vec2 & p, const Vec2 & v, double omega, double T);

// Closed-form polar-velocity turn step at constant speed and turn rate.
// Positive omega increases the heading (counterclockwise).
struct PolarState
{
  Vec2 position;
  double v_long;
  double heading;
  double omega;
};
PolarState augmented_ct_polar_step(
  const Vec2 & p, double v_long, double heading, double omega, double T);

struct OneTrackParams
{
  double c_af;  // front cornering stiffness, N/rad
  double c_ar;  // rear cornering stiffness, N/rad
  double l_f;   // front axle to center of gravity, m
  double l_r;   // rear axle to center of gravity, m
  double m;     // mass, kg
  double i_z;   // yaw moment of inertia, kg m^2
};

// One RK4 step of the linear sideslip/yaw-rate dynamics at constant speed v.
// Throws for v at or below v_eps.
struct OneTrackState
{
  double sideslip;
  double yaw_rate;
};
OneTrackState one_track_step(
  const OneTrackState & state, double v, const OneTrackParams & params, double steering_angle,
  double T, double v_eps = 1e-3);

using ScalarField = std::function<double(const Vec2 &)>;

struct PotentialDescentConfig
{
  double gradient_h{1e-4};  // central-difference spacing
  int max_halvings{40};
};

// Gradient-descent path on the summed potential; the combined potential is
// non-increasing along the returned path.
std::vector<Vec2> potential_descent(
  const Vec2 & start, const std::vector<ScalarField> & potentials, double step, int iterations,
  const PotentialDescentConfig & config = {});

// ---------------------------------------------------------------------------
// Concrete prediction models
// ---------------------------------------------------------------------------

// Single point kinematics: order 1 = constant velocity, 2 = constant
// acceleration, 3 = constant jerk. Braking actors stop instead of reversing
// when the acceleration directly opposes the velocity.
class SinglePointKinematicsModel : public PredictionModel
{
public:
  SinglePointKinematicsModel(
    int order, double horizon, double step, bool zero_fill_missing = false,
    bool clamp_at_standstill = true);

  Trajectory predict(const ActorState & state) const override;

private:
  int order_;
  bool zero_fill_missing_;
  bool clamp_at_standstill_;
};

// Coordinated turn driven by the actor's yaw rate (counterclockwise positive).
class CoordinatedTurnModel : public PredictionModel
{
public:
  CoordinatedTurnModel(double horizon, double step);
  Trajectory predict(const ActorState & state) const override;
};

// Polar-velocity turn model driven by the actor's speed, yaw, and yaw rate.
class AugmentedPolarTurnModel : public PredictionModel
{
public:
  AugmentedPolarTurnModel(double horizon, double step);
  Trajectory predict(const ActorState & state) const override;
};

// Kinematic car under fixed control signals (shared by all actors).
class SimpleCarModel : public PredictionModel
{
public:
  SimpleCarModel(
    double axle_distance, ControlSignal speed_input, ControlSignal steering_angle_input,
    double horizon, double step);
  Trajectory predict(const ActorState & state) const override;

private:
  double axle_distance_;
  ControlSignal speed_input_;
  ControlSignal steering_angle_input_;
};

// Over-approximating trace-set model: one member model per behavior variant.
class TraceSetModel : public PredictionModel
{
public:
  TraceSetModel(
    std::vector<std::shared_ptr<const PredictionModel>> members, std::vector<double> weights,
    double horizon, double step);

  Trajectory predict(const ActorState & state) const override;  // first member
  TrajectorySet predict_set(const ActorState & state) const override;

private:
  std::vector<std::shared_ptr<const PredictionModel>> members_;
  std::vector<double> weights_;
};

// Straight-line trajectory under a constant acceleration vector. When the
// acceleration opposes the velocity, the actor stops and stays stopped.
Trajectory constant_accel_trajectory(
  const ActorState & state, const Vec2 & accel, double horizon, double step,
  bool clamp_at_standstill = true);

std::shared_ptr<const PredictionModel> make_model(
  const std::string & kind, double horizon, double step);

}  // namespace criticality::models

#endif  // CRITICALITY__MODELS__MODELS_HPP_
