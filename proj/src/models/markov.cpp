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

#include <cmath>
#include <stdexcept>

namespace criticality::models
{

int UniformPartition::cell_of(double x) const
{
  if (x < lo || x >= hi) return -1;
  const int i = static_cast<int>((x - lo) / width());
  return std::min(i, n - 1);
}

void MarkovChainModel::validate() const
{
  if (step_transition.size() != inputs.size() || interval_transition.size() != inputs.size()) {
    throw std::invalid_argument("markov model: one transition matrix per input required");
  }
  if (input_policy.size() != inputs.size()) {
    throw std::invalid_argument("markov model: input policy size mismatch");
  }
  double policy_sum = 0.0;
  for (double p : input_policy) {
    if (p < 0.0) throw std::invalid_argument("markov model: negative policy probability");
    policy_sum += p;
  }
  if (std::abs(policy_sum - 1.0) > 1e-9) {
    throw std::invalid_argument("markov model: input policy must sum to 1");
  }
  const int n = n_cells();
  for (const auto * set : {&step_transition, &interval_transition}) {
    for (const auto & m : *set) {
      if (m.rows() != n || m.cols() != n) {
        throw std::invalid_argument("markov model: transition matrix size mismatch");
      }
      for (int col = 0; col < n; ++col) {
        double sum = 0.0;
        for (int row = 0; row < n; ++row) {
          if (m(row, col) < 0.0) {
            throw std::invalid_argument("markov model: negative transition probability");
          }
          sum += m(row, col);
        }
        if (std::abs(sum - 1.0) > 1e-9) {
          throw std::invalid_argument("markov model: transition column does not sum to 1");
        }
      }
    }
  }
}

Eigen::VectorXd MarkovChainModel::propagate(
  const Eigen::VectorXd & distribution, int steps) const
{
  Eigen::VectorXd current = distribution;
  Eigen::MatrixXd mixed = Eigen::MatrixXd::Zero(n_cells(), n_cells());
  for (std::size_t a = 0; a < inputs.size(); ++a) {
    mixed += input_policy[a] * step_transition[a];
  }
  for (int k = 0; k < steps; ++k) current = mixed * current;
  return current;
}

Eigen::VectorXd MarkovChainModel::interval_occupancy(const Eigen::VectorXd & distribution) const
{
  Eigen::VectorXd out = Eigen::VectorXd::Zero(n_cells());
  for (std::size_t a = 0; a < inputs.size(); ++a) {
    out += input_policy[a] * (interval_transition[a] * distribution);
  }
  return out;
}

Eigen::VectorXd MarkovChainModel::path_marginal(const Eigen::VectorXd & distribution) const
{
  Eigen::VectorXd marginal = Eigen::VectorXd::Zero(path_cells.n);
  for (int m = 0; m < vel_cells.n; ++m) {
    for (int e = 0; e < path_cells.n; ++e) {
      marginal(e) += distribution(flat_index(e, m));
    }
  }
  return marginal;
}

namespace
{

// Stratified midpoints keep the volume-fraction estimate deterministic and
// exact for axis-aligned landings.
std::vector<double> midpoints(double lo, double width, int k)
{
  std::vector<double> pts(k);
  for (int i = 0; i < k; ++i) pts[i] = lo + (i + 0.5) * width / k;
  return pts;
}

}  // namespace

MarkovChainModel build_markov_model(
  const PathDynamics & dynamics, const UniformPartition & path_cells,
  const UniformPartition & vel_cells, const std::vector<double> & inputs,
  const std::vector<double> & input_policy, double T, const MarkovBuildConfig & config)
{
  if (inputs.empty()) throw std::invalid_argument("markov model: need at least one input");
  if (!(T > 0.0)) throw std::invalid_argument("markov model: positive time step required");

  MarkovChainModel model;
  model.path_cells = path_cells;
  model.vel_cells = vel_cells;
  model.inputs = inputs;
  model.input_policy =
    input_policy.empty() ? std::vector<double>(inputs.size(), 1.0 / inputs.size()) : input_policy;
  model.step = T;

  const int n = model.n_cells();
  const int k_side = std::max(2, static_cast<int>(std::round(std::sqrt(
                                   static_cast<double>(config.samples_per_cell)))));
  const int k_time = 8;

  for (std::size_t a = 0; a < inputs.size(); ++a) {
    Eigen::MatrixXd phi_step = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd phi_interval = Eigen::MatrixXd::Zero(n, n);
    phi_step(model.outside_index(), model.outside_index()) = 1.0;
    phi_interval(model.outside_index(), model.outside_index()) = 1.0;

    for (int e = 0; e < path_cells.n; ++e) {
      for (int m = 0; m < vel_cells.n; ++m) {
        const int col = model.flat_index(e, m);
        const auto ss = midpoints(path_cells.cell_lo(e), path_cells.width(), k_side);
        const auto vs = midpoints(vel_cells.cell_lo(m), vel_cells.width(), k_side);

        long total = 0;
        for (double s0 : ss) {
          for (double v0 : vs) {
            const auto [s1, v1] = dynamics(s0, v0, inputs[a], T);
            if (!std::isfinite(s1) || !std::isfinite(v1)) {
              throw std::runtime_error("degenerate partition: non-finite dynamics output");
            }
            const int pe = path_cells.cell_of(s1);
            const int pm = vel_cells.cell_of(v1);
            ++total;
            if (pe < 0 || pm < 0) {
              // Out-of-grid mass is absorbed; covering the reachable region
              // of interest is the caller's contract.
              phi_step(model.outside_index(), col) += 1.0;
            } else {
              phi_step(model.flat_index(pe, pm), col) += 1.0;
            }
          }
        }
        phi_step.col(col) /= static_cast<double>(total);

        long total_i = 0;
        for (double s0 : ss) {
          for (double v0 : vs) {
            for (double tf : midpoints(0.0, T, k_time)) {
              const auto [s1, v1] = dynamics(s0, v0, inputs[a], tf);
              const int pe = path_cells.cell_of(s1);
              const int pm = vel_cells.cell_of(v1);
              ++total_i;
              if (pe < 0 || pm < 0) {
                phi_interval(model.outside_index(), col) += 1.0;
              } else {
                phi_interval(model.flat_index(pe, pm), col) += 1.0;
              }
            }
          }
        }
        phi_interval.col(col) /= static_cast<double>(total_i);
      }
    }
    model.step_transition.push_back(std::move(phi_step));
    model.interval_transition.push_back(std::move(phi_interval));
  }

  model.validate();
  return model;
}

}  // namespace criticality::models
