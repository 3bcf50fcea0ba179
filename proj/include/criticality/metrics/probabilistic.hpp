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

#ifndef CRITICALITY__METRICS__PROBABILISTIC_HPP_
#define CRITICALITY__METRICS__PROBABILISTIC_HPP_

#include "criticality/metrics/contact.hpp"
#include "criticality/models/markov.hpp"
#include "criticality/models/models.hpp"

#include <cstdint>
#include <istream>
#include <map>
#include <string>
#include <vector>

namespace criticality::prob
{

// ---------------------------------------------------------------------------
// P-MC: Monte Carlo collision probability
// ---------------------------------------------------------------------------

// One control hypothesis: held constant over the evolution. `probability`
// is the proposal mass, `goal_weight` the (unnormalized) desirability.
struct ControlChoice
{
  double a_long{0.0};
  double yaw_rate{0.0};
  double probability{1.0};
  double goal_weight{1.0};
};

struct ControlSampler
{
  std::vector<ControlChoice> choices;
  double alpha{1.0};  // goal exponent of this actor

  void validate() const;
};

struct PMcResult
{
  double probability{0.0};
  double std_error{0.0};
};

// Importance-weighted estimate of the collision probability of a1 over the
// horizon; entering a non-drivable cell counts as collision. Deterministic
// for a fixed seed (counter-based per-sample generators).
PMcResult p_mc(
  const Scene & scene, const std::string & a1, double horizon, double step,
  const std::map<std::string, ControlSampler> & samplers, int n_samples, std::uint64_t seed,
  const metrics::EvalConfig & cfg);

// Deterministic single evolution under fixed per-actor choices; exposed so
// exhaustive enumeration can share the dynamics.
bool p_mc_evolution_collides(
  const Scene & scene, const std::string & a1, double horizon, double step,
  const std::map<std::string, ControlChoice> & controls, const metrics::EvalConfig & cfg);

// ---------------------------------------------------------------------------
// P-SMH: scoring multiple hypotheses
// ---------------------------------------------------------------------------

struct Hypothesis
{
  models::Trajectory trajectory;
  double probability{0.0};
};

struct HypothesisSet
{
  std::vector<Hypothesis> hypotheses;

  void validate() const;  // probabilities >= 0, summing to 1 within 1e-9
};

// Exact double sum over ego/other hypothesis pairs with pairwise contact
// indicators.
double p_smh(
  const HypothesisSet & ego, const HypothesisSet & others, const metrics::EvalConfig & cfg);

// ---------------------------------------------------------------------------
// P-SRS: stochastic reachable sets
// ---------------------------------------------------------------------------

// Index tuple of body-intersecting (ego path, ego deviation, other path,
// other deviation) cells.
struct SrsCollisionTuple
{
  int ego_path{0};
  int ego_dev{0};
  int other_path{0};
  int other_dev{0};
};

// Propagates the other actor's occupancy per time interval, marginalizes
// path/deviation, and sums the colliding mass over the tuple list; collided
// mass is removed before the next step. Result clamped to [0, 1].
double p_srs(
  const std::vector<std::pair<int, int>> & ego_cells_per_interval,
  const models::MarkovChainModel & other, const Eigen::VectorXd & other_initial,
  const Eigen::VectorXd & deviation_distribution, const std::vector<SrsCollisionTuple> & omega,
  int steps);

// ---------------------------------------------------------------------------
// ACI: collision trees
// ---------------------------------------------------------------------------

struct CollisionTree
{
  struct Node
  {
    std::string id;
    bool is_leaf{false};
    int outcome{0};        // leaves: 0 or 1
    std::string metric;    // internal: metric feeding the condition (empty for chance nodes)
    std::string dist;      // normal | lognormal | deterministic | chance
    double p1{0.0};
    double p2{1.0};
    std::string on_true;   // metric value below the sampled threshold
    std::string on_false;
  };

  std::vector<Node> nodes;
  std::string root;

  const Node & node(const std::string & id) const;
  void validate() const;
};

// Sum of leaf reach-probability times leaf outcome given the metric values
// the tree conditions on.
double aci(const std::map<std::string, double> & metric_values, const CollisionTree & tree);

// Declarative text format: `root = <id>`, `node <id> ...`, `leaf <id>
// outcome=<0|1>` lines; '#' starts a comment.
CollisionTree load_collision_tree(std::istream & in);

}  // namespace criticality::prob

#endif  // CRITICALITY__METRICS__PROBABILISTIC_HPP_
