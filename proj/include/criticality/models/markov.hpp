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

#ifndef CRITICALITY__MODELS__MARKOV_HPP_
#define CRITICALITY__MODELS__MARKOV_HPP_

#include "criticality/core/types.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <vector>

namespace criticality::models
{

// Uniform 1-D partition of [lo, hi] into n cells.
struct UniformPartition
{
  double lo{0.0};
  double hi{1.0};
  int n{1};

  double width() const { return (hi - lo) / n; }
  // -1 when x lies outside [lo, hi).
  int cell_of(double x) const;
  double cell_lo(int i) const { return lo + i * width(); }
};

// Path-position/velocity dynamics under one scalar control input.
using PathDynamics =
  std::function<std::pair<double, double>(double s, double v, double input, double dt)>;

// Markov-chain abstraction of an actor's motion on a path-position x velocity
// grid. State index n_cells() - 1 is the absorbing out-of-grid state. Columns
// of each transition matrix are probability distributions over target cells.
struct MarkovChainModel
{
  UniformPartition path_cells;  // longitudinal position along the path
  UniformPartition vel_cells;
  std::vector<double> inputs;
  std::vector<double> input_policy;            // distribution over inputs
  std::vector<Eigen::MatrixXd> step_transition;      // per input, for time T
  std::vector<Eigen::MatrixXd> interval_transition;  // per input, for [0, T]
  double step{0.0};

  int n_cells() const { return path_cells.n * vel_cells.n + 1; }
  int flat_index(int path_cell, int vel_cell) const { return vel_cell * path_cells.n + path_cell; }
  int outside_index() const { return n_cells() - 1; }

  void validate() const;

  // Policy-averaged one-step transition applied `steps` times.
  Eigen::VectorXd propagate(const Eigen::VectorXd & distribution, int steps) const;

  // Policy-averaged occupancy over the interval [k T, (k+1) T] given the
  // distribution at step k.
  Eigen::VectorXd interval_occupancy(const Eigen::VectorXd & distribution) const;

  // Marginal over velocity cells (drops the absorbing state).
  Eigen::VectorXd path_marginal(const Eigen::VectorXd & distribution) const;
};

struct MarkovBuildConfig
{
  int samples_per_cell{10000};
  std::uint64_t seed{0};
};

// Builds transition matrices whose entries are reachable-volume fractions,
// estimated by stratified sampling of each source cell (and of the time
// axis for the interval version).
MarkovChainModel build_markov_model(
  const PathDynamics & dynamics, const UniformPartition & path_cells,
  const UniformPartition & vel_cells, const std::vector<double> & inputs,
  const std::vector<double> & input_policy, double T, const MarkovBuildConfig & config = {});

}  // namespace criticality::models

#endif  // CRITICALITY__MODELS__MARKOV_HPP_
