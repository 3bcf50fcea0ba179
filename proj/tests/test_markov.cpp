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

#include "criticality/models/markov.hpp"

#include <doctest.h>

#include <cmath>

using namespace criticality;
using namespace criticality::models;

namespace
{

const PathDynamics kConstantVelocity10 = [](double s, double v, double, double dt) {
  return std::make_pair(s + 10.0 * dt, v);
};

}  // namespace

TEST_CASE("markov model: exact shift when the cell width equals v*T")
{
  const UniformPartition path{0.0, 100.0, 10};  // width 10 = v*T
  const UniformPartition vel{9.5, 10.5, 1};
  const auto model =
    build_markov_model(kConstantVelocity10, path, vel, {0.0}, {1.0}, 1.0, {400, 0});
  for (int e = 0; e + 1 < path.n; ++e) {
    const int col = model.flat_index(e, 0);
    CHECK(model.step_transition[0](model.flat_index(e + 1, 0), col) == doctest::Approx(1.0));
  }
  // The last cell's image leaves the grid and is absorbed.
  CHECK(
    model.step_transition[0](model.outside_index(), model.flat_index(path.n - 1, 0)) ==
    doctest::Approx(1.0));
}

TEST_CASE("markov model: half/half split when the cell width is 2*v*T")
{
  const UniformPartition path{0.0, 100.0, 5};  // width 20 = 2*v*T
  const UniformPartition vel{9.5, 10.5, 1};
  const auto model =
    build_markov_model(kConstantVelocity10, path, vel, {0.0}, {1.0}, 1.0, {10000, 0});
  const int col = model.flat_index(1, 0);
  CHECK(model.step_transition[0](model.flat_index(1, 0), col) == doctest::Approx(0.5));
  CHECK(model.step_transition[0](model.flat_index(2, 0), col) == doctest::Approx(0.5));
}

TEST_CASE("markov model: zero velocity and zero input self-transition")
{
  const PathDynamics still = [](double s, double v, double, double) {
    return std::make_pair(s, v);
  };
  const UniformPartition path{0.0, 10.0, 5};
  const UniformPartition vel{-0.5, 0.5, 1};
  const auto model = build_markov_model(still, path, vel, {0.0}, {1.0}, 1.0, {400, 0});
  for (int e = 0; e < path.n; ++e) {
    const int col = model.flat_index(e, 0);
    CHECK(model.step_transition[0](col, col) == doctest::Approx(1.0));
  }
}

TEST_CASE("markov model: stochastic columns and conserved mass over 100 steps")
{
  const PathDynamics accel = [](double s, double v, double u, double dt) {
    return std::make_pair(s + v * dt + 0.5 * u * dt * dt, v + u * dt);
  };
  const UniformPartition path{0.0, 60.0, 12};
  const UniformPartition vel{0.0, 12.0, 6};
  const auto model =
    build_markov_model(accel, path, vel, {-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25}, 0.5, {2500, 0});
  CHECK_NOTHROW(model.validate());  // columns stochastic within 1e-9

  for (const auto & phi : model.step_transition) {
    for (int c = 0; c < model.n_cells(); ++c) {
      CHECK(std::abs(phi.col(c).sum() - 1.0) <= 1e-9);
    }
  }

  Eigen::VectorXd dist = Eigen::VectorXd::Zero(model.n_cells());
  dist(model.flat_index(1, 2)) = 1.0;
  const Eigen::VectorXd out = model.propagate(dist, 100);
  CHECK(std::abs(out.sum() - 1.0) <= 1e-7);
  CHECK(out.minCoeff() >= -1e-15);
}

TEST_CASE("markov model: degenerate dynamics is rejected")
{
  const PathDynamics broken = [](double, double, double, double) {
    return std::make_pair(std::nan(""), 0.0);
  };
  const UniformPartition path{0.0, 10.0, 2};
  const UniformPartition vel{0.0, 1.0, 1};
  CHECK_THROWS_WITH_AS(
    build_markov_model(broken, path, vel, {0.0}, {1.0}, 1.0, {100, 0}),
    doctest::Contains("degenerate partition"), std::runtime_error);
}

TEST_CASE("markov model: interval transition covers intermediate cells")
{
  // Over [0, T] with v*T spanning two cells, the union occupancy puts mass on
  // the source cell and on the pass-through cell.
  const UniformPartition path{0.0, 100.0, 10};
  const UniformPartition vel{9.5, 10.5, 1};
  const auto model =
    build_markov_model(kConstantVelocity10, path, vel, {0.0}, {1.0}, 1.0, {2500, 0});
  const int col = model.flat_index(2, 0);
  const double stay = model.interval_transition[0](model.flat_index(2, 0), col);
  const double pass = model.interval_transition[0](model.flat_index(3, 0), col);
  CHECK(stay > 0.3);
  CHECK(pass > 0.3);
  CHECK(stay + pass == doctest::Approx(1.0).epsilon(1e-6));
}
