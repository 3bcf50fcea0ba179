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

#include "criticality/models/models.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace criticality::models
{
namespace
{

double wrap_angle_delta(double d)
{
  while (d > M_PI) d -= 2.0 * M_PI;
  while (d < -M_PI) d += 2.0 * M_PI;
  return d;
}

bool finite(const Vec2 & v) { return std::isfinite(v.x()) && std::isfinite(v.y()); }

ActorState interpolate(const ActorState & a, const ActorState & b, double s)
{
  ActorState out = a;
  out.t = a.t + s * (b.t - a.t);
  out.position = a.position + s * (b.position - a.position);
  out.velocity = a.velocity + s * (b.velocity - a.velocity);
  out.acceleration = a.acceleration + s * (b.acceleration - a.acceleration);
  out.yaw = a.yaw + s * wrap_angle_delta(b.yaw - a.yaw);
  out.yaw_rate = a.yaw_rate + s * (b.yaw_rate - a.yaw_rate);
  if (a.jerk && b.jerk) out.jerk = *a.jerk + s * (*b.jerk - *a.jerk);
  return out;
}

}  // namespace

double Trajectory::start_time() const
{
  if (states.empty()) throw std::invalid_argument("empty trajectory");
  return states.front().t;
}

double Trajectory::end_time() const
{
  if (states.empty()) throw std::invalid_argument("empty trajectory");
  return states.back().t;
}

ActorState Trajectory::state_at(double t) const
{
  if (states.empty()) throw std::invalid_argument("empty trajectory");
  if (t <= states.front().t) return states.front();
  if (t >= states.back().t) return states.back();
  auto it = std::lower_bound(
    states.begin(), states.end(), t,
    [](const ActorState & s, double value) { return s.t < value; });
  if (it->t == t) return *it;
  const ActorState & hi = *it;
  const ActorState & lo = *(it - 1);
  const double span = hi.t - lo.t;
  return interpolate(lo, hi, span > 0.0 ? (t - lo.t) / span : 0.0);
}

void TrajectorySet::validate() const
{
  bool any_weight = false;
  double sum = 0.0;
  for (const auto & tr : trajectories) {
    if (tr.weight) {
      any_weight = true;
      if (*tr.weight < 0.0) throw std::invalid_argument("trajectory weight must be >= 0");
      sum += *tr.weight;
    }
  }
  if (any_weight && std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("trajectory weights must sum to 1");
  }
}

PredictionModel::PredictionModel(ModelKind kind, double horizon, double step)
: kind_(kind), horizon_(horizon), step_(step)
{
  if (!(horizon > 0.0)) throw std::invalid_argument("prediction horizon must be > 0");
  if (!(step > 0.0) || step > horizon) {
    throw std::invalid_argument("prediction step must satisfy 0 < T <= t_H");
  }
}

TrajectorySet PredictionModel::predict_set(const ActorState & state) const
{
  TrajectorySet set;
  set.trajectories.push_back(predict(state));
  set.trajectories.back().weight = 1.0;
  return set;
}

ActorState taylor_predict(const ActorState & state, int order, double dt, bool zero_fill_missing)
{
  if (order < 1) throw std::invalid_argument("taylor_predict requires order >= 1");
  if (order >= 3 && !state.jerk && !zero_fill_missing) {
    throw std::invalid_argument("insufficient derivatives for taylor_predict order " +
                                std::to_string(order));
  }
  if (order >= 4 && !zero_fill_missing) {
    throw std::invalid_argument("insufficient derivatives for taylor_predict order " +
                                std::to_string(order));
  }
  ActorState out = state;
  out.t = state.t + dt;
  const Vec2 j = (order >= 3 && state.jerk) ? *state.jerk : Vec2::Zero();
  out.position = state.position + state.velocity * dt;
  if (order >= 2) out.position += 0.5 * state.acceleration * dt * dt;
  if (order >= 3) out.position += j * dt * dt * dt / 6.0;
  if (order >= 2) out.velocity = state.velocity + state.acceleration * dt;
  if (order >= 3) out.velocity += 0.5 * j * dt * dt;
  if (order >= 3) out.acceleration = state.acceleration + j * dt;
  out.yaw = state.yaw + state.yaw_rate * dt;
  return out;
}

namespace
{

// RK4 on the (x, y, yaw, steering) car state; steering_rate < 0 sentinel means
// the steering angle follows the input signal directly.
Trajectory integrate_car(
  const ActorState & state, const ControlSignal & speed_input, const ControlSignal & angle_input,
  const ControlSignal * rate_input, double dt, double L, double step)
{
  if (!(L > 0.0)) throw std::invalid_argument("axle distance must be > 0");
  if (dt < 0.0 || !std::isfinite(dt)) throw std::invalid_argument("non-finite integration time");

  Trajectory traj;
  if (dt == 0.0) return traj;

  double x = state.position.x();
  double y = state.position.y();
  double yaw = state.yaw;
  double phi = state.steering_angle.value_or(0.0);

  const auto deriv = [&](double t, double xx, double yy, double ps, double ph, double * dx,
                         double * dy, double * dpsi, double * dphi) {
    (void)xx;
    (void)yy;
    const double us = speed_input(t - state.t);
    if (!std::isfinite(us)) throw std::invalid_argument("non-finite speed input");
    double angle = ph;
    if (!rate_input) {
      angle = angle_input(t - state.t);
      if (!std::isfinite(angle)) throw std::invalid_argument("non-finite steering input");
    }
    *dx = us * std::cos(ps);
    *dy = us * std::sin(ps);
    *dpsi = us / L * std::tan(angle);
    *dphi = rate_input ? (*rate_input)(t - state.t) : 0.0;
    if (rate_input && !std::isfinite(*dphi)) {
      throw std::invalid_argument("non-finite steering rate input");
    }
  };

  const auto push = [&](double t) {
    ActorState s = state;
    s.t = t;
    s.position = {x, y};
    const double us = speed_input(t - state.t);
    s.velocity = {us * std::cos(yaw), us * std::sin(yaw)};
    s.yaw = yaw;
    s.yaw_rate = us / L * std::tan(rate_input ? phi : angle_input(t - state.t));
    s.steering_angle = rate_input ? phi : angle_input(t - state.t);
    traj.states.push_back(s);
  };

  push(state.t);
  const int n = static_cast<int>(std::ceil(dt / step - 1e-12));
  for (int i = 0; i < n; ++i) {
    const double t = state.t + i * step;
    const double h = std::min(step, state.t + dt - t);
    double k1x, k1y, k1p, k1f, k2x, k2y, k2p, k2f, k3x, k3y, k3p, k3f, k4x, k4y, k4p, k4f;
    deriv(t, x, y, yaw, phi, &k1x, &k1y, &k1p, &k1f);
    deriv(t + 0.5 * h, x + 0.5 * h * k1x, y + 0.5 * h * k1y, yaw + 0.5 * h * k1p,
          phi + 0.5 * h * k1f, &k2x, &k2y, &k2p, &k2f);
    deriv(t + 0.5 * h, x + 0.5 * h * k2x, y + 0.5 * h * k2y, yaw + 0.5 * h * k2p,
          phi + 0.5 * h * k2f, &k3x, &k3y, &k3p, &k3f);
    deriv(t + h, x + h * k3x, y + h * k3y, yaw + h * k3p, phi + h * k3f, &k4x, &k4y, &k4p, &k4f);
    x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    y += h / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
    yaw += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
    phi += h / 6.0 * (k1f + 2.0 * k2f + 2.0 * k3f + k4f);
    push(t + h);
  }
  return traj;
}

// Heun-like substep used when the caller wants RK4 on the linear one-track
// dynamics; the derivative is affine so the standard weights apply.
OneTrackState one_track_deriv(
  const OneTrackState & s, double v, const OneTrackParams & p, double delta_f)
{
  const double a11 = -(p.c_af + p.c_ar) / (p.m * v);
  const double a12 = (p.c_ar * p.l_r - p.c_af * p.l_f) / (p.m * v * v) - 1.0;
  const double a21 = (p.c_ar * p.l_r - p.c_af * p.l_f) / p.i_z;
  const double a22 = -(p.c_af * p.l_f * p.l_f + p.c_ar * p.l_r * p.l_r) / (p.i_z * v);
  const double b1 = p.c_af / (p.m * v);
  const double b2 = p.c_af * p.l_f / p.i_z;
  return {a11 * s.sideslip + a12 * s.yaw_rate + b1 * delta_f,
          a21 * s.sideslip + a22 * s.yaw_rate + b2 * delta_f};
}

}  // namespace

Trajectory simple_car_integrate(
  const ActorState & state, const ControlSignal & speed_input,
  const ControlSignal & steering_angle_input, double dt, double axle_distance, double step)
{
  return integrate_car(state, speed_input, steering_angle_input, nullptr, dt, axle_distance, step);
}

Trajectory continuous_steering_integrate(
  const ActorState & state, const ControlSignal & speed_input,
  const ControlSignal & steering_rate_input, double dt, double axle_distance, double step)
{
  return integrate_car(
    state, speed_input, ControlSignal{}, &steering_rate_input, dt, axle_distance, step);
}

CoordinatedTurnState coordinated_turn_step(const Vec2 & p, const Vec2 & v, double omega, double T)
{
  if (std::abs(omega) < kOmegaEps) {
    return {p + v * T, v};
  }
  const double swt = std::sin(omega * T);
  const double cwt = std::cos(omega * T);
  const Vec2 p_next{
    p.x() + swt / omega * v.x() + (1.0 - cwt) / omega * v.y(),
    p.y() + (cwt - 1.0) / omega * v.x() + swt / omega * v.y()};
  const Vec2 v_next{cwt * v.x() + swt * v.y(), -swt * v.x() + cwt * v.y()};
  return {p_next, v_next};
}

PolarState augmented_ct_polar_step(
  const Vec2 & p, double v_long, double heading, double omega, double T)
{
  if (std::abs(omega) < kOmegaEps) {
    const Vec2 dir{std::cos(heading), std::sin(heading)};
    return {p + v_long * T * dir, v_long, heading + omega * T, omega};
  }
  const double chord = 2.0 * v_long / omega * std::sin(0.5 * omega * T);
  const double mid = heading + 0.5 * omega * T;
  return {p + chord * Vec2{std::cos(mid), std::sin(mid)}, v_long, heading + omega * T, omega};
}

OneTrackState one_track_step(
  const OneTrackState & state, double v, const OneTrackParams & params, double steering_angle,
  double T, double v_eps)
{
  if (!(v > v_eps)) throw std::invalid_argument("one-track model undefined at standstill");
  if (!(params.c_af > 0.0 && params.c_ar > 0.0 && params.l_f > 0.0 && params.l_r > 0.0 &&
        params.m > 0.0 && params.i_z > 0.0)) {
    throw std::invalid_argument("one-track parameters must be > 0");
  }
  const auto k1 = one_track_deriv(state, v, params, steering_angle);
  const auto k2 = one_track_deriv(
    {state.sideslip + 0.5 * T * k1.sideslip, state.yaw_rate + 0.5 * T * k1.yaw_rate}, v, params,
    steering_angle);
  const auto k3 = one_track_deriv(
    {state.sideslip + 0.5 * T * k2.sideslip, state.yaw_rate + 0.5 * T * k2.yaw_rate}, v, params,
    steering_angle);
  const auto k4 = one_track_deriv(
    {state.sideslip + T * k3.sideslip, state.yaw_rate + T * k3.yaw_rate}, v, params,
    steering_angle);
  return {
    state.sideslip +
      T / 6.0 * (k1.sideslip + 2.0 * k2.sideslip + 2.0 * k3.sideslip + k4.sideslip),
    state.yaw_rate +
      T / 6.0 * (k1.yaw_rate + 2.0 * k2.yaw_rate + 2.0 * k3.yaw_rate + k4.yaw_rate)};
}

std::vector<Vec2> potential_descent(
  const Vec2 & start, const std::vector<ScalarField> & potentials, double step, int iterations,
  const PotentialDescentConfig & config)
{
  const auto combined = [&](const Vec2 & p) {
    double u = 0.0;
    for (const auto & field : potentials) u += field(p);
    return u;
  };
  const auto gradient = [&](const Vec2 & p) {
    const double h = config.gradient_h;
    return Vec2{
      (combined({p.x() + h, p.y()}) - combined({p.x() - h, p.y()})) / (2.0 * h),
      (combined({p.x(), p.y() + h}) - combined({p.x(), p.y() - h})) / (2.0 * h)};
  };

  std::vector<Vec2> path{start};
  Vec2 current = start;
  double value = combined(current);
  double h = step;
  for (int i = 0; i < iterations; ++i) {
    const Vec2 g = gradient(current);
    if (g.norm() < 1e-12) break;
    Vec2 candidate = current - h * g;
    double candidate_value = combined(candidate);
    int halvings = 0;
    while (candidate_value > value && halvings < config.max_halvings) {
      h *= 0.5;
      candidate = current - h * g;
      candidate_value = combined(candidate);
      ++halvings;
    }
    if (candidate_value > value) {
      throw std::runtime_error("potential descent diverged: step reduction exhausted");
    }
    current = candidate;
    value = candidate_value;
    path.push_back(current);
  }
  return path;
}

SinglePointKinematicsModel::SinglePointKinematicsModel(
  int order, double horizon, double step, bool zero_fill_missing, bool clamp_at_standstill)
: PredictionModel(ModelKind::kSingleTrace, horizon, step),
  order_(order),
  zero_fill_missing_(zero_fill_missing),
  clamp_at_standstill_(clamp_at_standstill)
{
  if (order < 1) throw std::invalid_argument("kinematics order must be >= 1");
}

Trajectory SinglePointKinematicsModel::predict(const ActorState & state) const
{
  if (order_ == 2 && clamp_at_standstill_) {
    // Braking straight-line motion freezes at standstill; anything else falls
    // through to the pure series.
    const double v = state.velocity.norm();
    const double a = state.acceleration.norm();
    if (v > 1e-12 && a > 1e-12) {
      const double cross =
        state.velocity.x() * state.acceleration.y() - state.velocity.y() * state.acceleration.x();
      const bool antiparallel =
        std::abs(cross) <= 1e-9 * v * a && state.velocity.dot(state.acceleration) < 0.0;
      if (antiparallel) {
        return constant_accel_trajectory(state, state.acceleration, horizon(), step(), true);
      }
    }
  }
  Trajectory traj;
  const int n = static_cast<int>(std::round(horizon() / step()));
  traj.states.reserve(n + 1);
  for (int k = 0; k <= n; ++k) {
    traj.states.push_back(taylor_predict(state, order_, k * step(), zero_fill_missing_));
  }
  return traj;
}

CoordinatedTurnModel::CoordinatedTurnModel(double horizon, double step)
: PredictionModel(ModelKind::kSingleTrace, horizon, step)
{
}

Trajectory CoordinatedTurnModel::predict(const ActorState & state) const
{
  // The actor yaw rate is counterclockwise-positive; the discrete transition
  // rotates clockwise for positive omega, hence the sign flip.
  Trajectory traj;
  const int n = static_cast<int>(std::round(horizon() / step()));
  traj.states.reserve(n + 1);
  ActorState current = state;
  traj.states.push_back(current);
  for (int k = 1; k <= n; ++k) {
    const auto next = coordinated_turn_step(
      current.position, current.velocity, -state.yaw_rate, step());
    current.position = next.position;
    current.velocity = next.velocity;
    current.t = state.t + k * step();
    if (current.velocity.norm() > 1e-12) {
      current.yaw = std::atan2(current.velocity.y(), current.velocity.x());
    }
    traj.states.push_back(current);
  }
  return traj;
}

AugmentedPolarTurnModel::AugmentedPolarTurnModel(double horizon, double step)
: PredictionModel(ModelKind::kSingleTrace, horizon, step)
{
}

Trajectory AugmentedPolarTurnModel::predict(const ActorState & state) const
{
  Trajectory traj;
  const int n = static_cast<int>(std::round(horizon() / step()));
  traj.states.reserve(n + 1);
  const double v_long = decompose(state.velocity, state.yaw).longitudinal;
  PolarState polar{state.position, v_long, state.yaw, state.yaw_rate};
  for (int k = 0; k <= n; ++k) {
    ActorState s = state;
    s.t = state.t + k * step();
    s.position = polar.position;
    s.yaw = polar.heading;
    s.velocity = polar.v_long * Vec2{std::cos(polar.heading), std::sin(polar.heading)};
    traj.states.push_back(s);
    polar = augmented_ct_polar_step(polar.position, polar.v_long, polar.heading, polar.omega,
                                    step());
  }
  return traj;
}

SimpleCarModel::SimpleCarModel(
  double axle_distance, ControlSignal speed_input, ControlSignal steering_angle_input,
  double horizon, double step)
: PredictionModel(ModelKind::kSingleTrace, horizon, step),
  axle_distance_(axle_distance),
  speed_input_(std::move(speed_input)),
  steering_angle_input_(std::move(steering_angle_input))
{
}

Trajectory SimpleCarModel::predict(const ActorState & state) const
{
  return simple_car_integrate(
    state, speed_input_, steering_angle_input_, horizon(), axle_distance_, step());
}

TraceSetModel::TraceSetModel(
  std::vector<std::shared_ptr<const PredictionModel>> members, std::vector<double> weights,
  double horizon, double step)
: PredictionModel(ModelKind::kTraceSet, horizon, step),
  members_(std::move(members)),
  weights_(std::move(weights))
{
  if (members_.empty()) throw std::invalid_argument("trace-set model needs at least one member");
  if (!weights_.empty() && weights_.size() != members_.size()) {
    throw std::invalid_argument("trace-set weights must match member count");
  }
}

Trajectory TraceSetModel::predict(const ActorState & state) const
{
  return members_.front()->predict(state);
}

TrajectorySet TraceSetModel::predict_set(const ActorState & state) const
{
  TrajectorySet set;
  for (std::size_t i = 0; i < members_.size(); ++i) {
    Trajectory tr = members_[i]->predict(state);
    if (!weights_.empty()) tr.weight = weights_[i];
    set.trajectories.push_back(std::move(tr));
  }
  set.validate();
  return set;
}

Trajectory constant_accel_trajectory(
  const ActorState & state, const Vec2 & accel, double horizon, double step,
  bool clamp_at_standstill)
{
  if (!finite(accel)) throw std::invalid_argument("non-finite acceleration");
  Trajectory traj;
  const int n = static_cast<int>(std::round(horizon / step));
  traj.states.reserve(n + 1);

  // Stop time where the velocity component along its own direction vanishes.
  double t_stop = kInf;
  const double v0 = state.velocity.norm();
  if (clamp_at_standstill && v0 > 1e-12) {
    const Vec2 dir = state.velocity / v0;
    const double a_along = accel.dot(dir);
    if (a_along < -1e-12) t_stop = v0 / (-a_along);
  } else if (clamp_at_standstill && v0 <= 1e-12 && accel.norm() <= 1e-12) {
    t_stop = 0.0;
  }

  for (int k = 0; k <= n; ++k) {
    const double dt = k * step;
    ActorState s = state;
    s.t = state.t + dt;
    if (dt < t_stop) {
      s.position = state.position + state.velocity * dt + 0.5 * accel * dt * dt;
      s.velocity = state.velocity + accel * dt;
      s.acceleration = accel;
    } else {
      s.position = state.position + state.velocity * t_stop + 0.5 * accel * t_stop * t_stop;
      s.velocity = Vec2::Zero();
      s.acceleration = Vec2::Zero();
    }
    traj.states.push_back(s);
  }
  return traj;
}

std::shared_ptr<const PredictionModel> make_model(
  const std::string & kind, double horizon, double step)
{
  if (kind == "constant_velocity") {
    return std::make_shared<SinglePointKinematicsModel>(1, horizon, step);
  }
  if (kind == "constant_acceleration") {
    return std::make_shared<SinglePointKinematicsModel>(2, horizon, step);
  }
  if (kind == "coordinated_turn") {
    return std::make_shared<CoordinatedTurnModel>(horizon, step);
  }
  if (kind == "polar_turn") {
    return std::make_shared<AugmentedPolarTurnModel>(horizon, step);
  }
  throw std::invalid_argument("unknown prediction model: " + kind);
}

}  // namespace criticality::models
