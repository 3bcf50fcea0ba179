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

#include "criticality/metrics/probabilistic.hpp"

#include "criticality/metrics/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace criticality::prob
{
namespace
{

std::uint64_t splitmix64(std::uint64_t x)
{
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Unicycle evolution under one held control choice.
models::Trajectory evolve(
  const ActorState & state, const ControlChoice & u, double horizon, double step)
{
  models::Trajectory traj;
  const int n = static_cast<int>(std::round(horizon / step));
  traj.states.reserve(n + 1);
  ActorState s = state;
  double v_long = decompose(state.velocity, state.yaw).longitudinal;
  traj.states.push_back(s);
  for (int k = 1; k <= n; ++k) {
    const double v_next = std::max(0.0, v_long + u.a_long * step);
    const double yaw_next = s.yaw + u.yaw_rate * step;
    const Vec2 dir{std::cos(s.yaw), std::sin(s.yaw)};
    ActorState next = s;
    next.t = state.t + k * step;
    next.position = s.position + 0.5 * (v_long + v_next) * step * dir;
    next.yaw = yaw_next;
    next.velocity = v_next * Vec2{std::cos(yaw_next), std::sin(yaw_next)};
    traj.states.push_back(next);
    s = next;
    v_long = v_next;
  }
  return traj;
}

}  // namespace

void ControlSampler::validate() const
{
  if (choices.empty()) throw std::invalid_argument("control sampler needs at least one choice");
  double sum = 0.0;
  for (const auto & c : choices) {
    if (c.probability < 0.0 || c.goal_weight < 0.0) {
      throw std::invalid_argument("control choice probabilities and goals must be >= 0");
    }
    sum += c.probability;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("control choice probabilities must sum to 1");
  }
}

bool p_mc_evolution_collides(
  const Scene & scene, const std::string & a1, double horizon, double step,
  const std::map<std::string, ControlChoice> & controls, const metrics::EvalConfig & cfg)
{
  const ActorState & ego_state = scene.actor(a1);
  const auto pick = [&](const std::string & id) {
    const auto it = controls.find(id);
    return it != controls.end() ? it->second : ControlChoice{};
  };

  const models::Trajectory ego = evolve(ego_state, pick(a1), horizon, step);
  if (scene.drivable_area) {
    for (const auto & s : ego.states) {
      if (!scene.drivable_area->is_drivable(s.position)) return true;
    }
  }
  for (const auto & other : scene.actors) {
    if (other.id == a1) continue;
    const models::Trajectory traj = evolve(other, pick(other.id), horizon, step);
    if (metrics::first_contact_time(ego, traj, cfg)) return true;
  }
  for (const auto & obstacle : scene.static_objects) {
    if (metrics::first_reach_time(ego, obstacle, cfg)) return true;
  }
  return false;
}

PMcResult p_mc(
  const Scene & scene, const std::string & a1, double horizon, double step,
  const std::map<std::string, ControlSampler> & samplers, int n_samples, std::uint64_t seed,
  const metrics::EvalConfig & cfg)
{
  if (n_samples < 1) throw std::invalid_argument("p_mc requires at least one sample");
  for (const auto & [id, sampler] : samplers) sampler.validate();

  double weight_sum = 0.0;
  double hit_weight = 0.0;
  std::vector<double> weights(n_samples);
  std::vector<bool> hits(n_samples);

  for (int i = 0; i < n_samples; ++i) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(i) + 1)));
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::map<std::string, ControlChoice> picked;
    double weight = 1.0;
    for (const auto & actor : scene.actors) {
      const auto it = samplers.find(actor.id);
      if (it == samplers.end()) continue;
      const auto & sampler = it->second;
      const double r = unit(rng);
      double acc = 0.0;
      const ControlChoice * choice = &sampler.choices.back();
      for (const auto & c : sampler.choices) {
        acc += c.probability;
        if (r <= acc) {
          choice = &c;
          break;
        }
      }
      picked[actor.id] = *choice;
      // Importance weight: target (combined goal) over proposal.
      const double target = std::pow(choice->goal_weight, sampler.alpha);
      weight *= choice->probability > 0.0 ? target / choice->probability : 0.0;
    }

    const bool collided = p_mc_evolution_collides(scene, a1, horizon, step, picked, cfg);
    weights[i] = weight;
    hits[i] = collided;
    weight_sum += weight;
    if (collided) hit_weight += weight;
  }

  if (weight_sum <= 0.0) throw std::runtime_error("degenerate goal function: all weights zero");
  const double p = hit_weight / weight_sum;
  double var_acc = 0.0;
  for (int i = 0; i < n_samples; ++i) {
    const double d = (hits[i] ? 1.0 : 0.0) - p;
    var_acc += weights[i] * weights[i] * d * d;
  }
  return {p, std::sqrt(var_acc) / weight_sum};
}

void HypothesisSet::validate() const
{
  double sum = 0.0;
  for (const auto & h : hypotheses) {
    if (h.probability < 0.0) throw std::invalid_argument("hypothesis probability must be >= 0");
    sum += h.probability;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("hypothesis probabilities must sum to 1");
  }
}

double p_smh(
  const HypothesisSet & ego, const HypothesisSet & others, const metrics::EvalConfig & cfg)
{
  ego.validate();
  others.validate();
  double probability = 0.0;
  for (const auto & hi : ego.hypotheses) {
    for (const auto & hj : others.hypotheses) {
      if (metrics::first_contact_time(hi.trajectory, hj.trajectory, cfg)) {
        probability += hi.probability * hj.probability;
      }
    }
  }
  return probability;
}

double p_srs(
  const std::vector<std::pair<int, int>> & ego_cells_per_interval,
  const models::MarkovChainModel & other, const Eigen::VectorXd & other_initial,
  const Eigen::VectorXd & deviation_distribution, const std::vector<SrsCollisionTuple> & omega,
  int steps)
{
  other.validate();
  if (other_initial.size() != other.n_cells()) {
    throw std::invalid_argument("p_srs: initial distribution size mismatch");
  }
  if (std::abs(deviation_distribution.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("p_srs: deviation distribution must sum to 1");
  }
  if (omega.empty()) return 0.0;
  if (static_cast<int>(ego_cells_per_interval.size()) < steps) {
    throw std::invalid_argument("p_srs: ego cell sequence shorter than the horizon");
  }

  Eigen::VectorXd dist = other_initial;
  double collision = 0.0;
  for (int k = 0; k < steps; ++k) {
    const Eigen::VectorXd occupancy = other.interval_occupancy(dist);
    const Eigen::VectorXd path = other.path_marginal(occupancy);
    const auto [ego_path, ego_dev] = ego_cells_per_interval[k];

    // Colliding deviation fraction per other path cell for this ego cell.
    Eigen::VectorXd collide_fraction = Eigen::VectorXd::Zero(other.path_cells.n);
    for (const auto & tuple : omega) {
      if (tuple.ego_path != ego_path || tuple.ego_dev != ego_dev) continue;
      if (tuple.other_path < 0 || tuple.other_path >= other.path_cells.n) continue;
      collide_fraction(tuple.other_path) += deviation_distribution(tuple.other_dev);
    }
    collide_fraction = collide_fraction.cwiseMin(1.0);

    for (int e = 0; e < other.path_cells.n; ++e) {
      collision += path(e) * collide_fraction(e);
    }

    // Remove collided mass, then advance one step.
    Eigen::VectorXd survived = dist;
    for (int e = 0; e < other.path_cells.n; ++e) {
      if (collide_fraction(e) <= 0.0) continue;
      for (int m = 0; m < other.vel_cells.n; ++m) {
        survived(other.flat_index(e, m)) *= 1.0 - collide_fraction(e);
      }
    }
    dist = other.propagate(survived, 1);
  }
  return std::clamp(collision, 0.0, 1.0);
}

const CollisionTree::Node & CollisionTree::node(const std::string & id) const
{
  for (const auto & n : nodes) {
    if (n.id == id) return n;
  }
  throw std::invalid_argument("collision tree node not found: " + id);
}

void CollisionTree::validate() const
{
  if (nodes.empty()) throw std::invalid_argument("empty collision tree");
  std::set<std::string> ids;
  for (const auto & n : nodes) {
    if (!ids.insert(n.id).second) {
      throw std::invalid_argument("duplicate collision tree node: " + n.id);
    }
    if (n.is_leaf) {
      if (n.outcome != 0 && n.outcome != 1) {
        throw std::invalid_argument("leaf outcome must be 0 or 1: " + n.id);
      }
    } else {
      node(n.on_true);
      node(n.on_false);
    }
  }
  node(root);
  // Shared subtrees are fine; cycles are not. Colors: 0 new, 1 on the
  // current path, 2 done.
  std::map<std::string, int> color;
  const std::function<void(const std::string &)> visit = [&](const std::string & id) {
    const int c = color[id];
    if (c == 1) throw std::invalid_argument("collision tree contains a cycle");
    if (c == 2) return;
    color[id] = 1;
    const Node & n = node(id);
    if (!n.is_leaf) {
      visit(n.on_true);
      visit(n.on_false);
    }
    color[id] = 2;
  };
  visit(root);
}

namespace
{

double condition_probability(
  const CollisionTree::Node & n, const std::map<std::string, double> & metric_values)
{
  if (n.dist == "chance") return n.p1;
  const auto it = metric_values.find(n.metric);
  if (it == metric_values.end()) {
    throw std::invalid_argument("collision tree references unknown metric: " + n.metric);
  }
  const double v = it->second;
  if (n.dist == "normal") {
    // P(v < Theta), Theta ~ N(p1, p2)
    return 1.0 - metrics::gaussian_cdf((v - n.p1) / n.p2);
  }
  if (n.dist == "lognormal") {
    if (v <= 0.0) return 1.0;
    return 1.0 - metrics::gaussian_cdf((std::log(v) - n.p1) / n.p2);
  }
  if (n.dist == "deterministic") {
    return v < n.p1 ? 1.0 : 0.0;
  }
  throw std::invalid_argument("unknown collision tree distribution: " + n.dist);
}

}  // namespace

double aci(const std::map<std::string, double> & metric_values, const CollisionTree & tree)
{
  tree.validate();
  double result = 0.0;
  double reach_sum = 0.0;
  // Depth-first accumulation of leaf reach probabilities.
  std::vector<std::pair<std::string, double>> stack{{tree.root, 1.0}};
  while (!stack.empty()) {
    const auto [id, p] = stack.back();
    stack.pop_back();
    const auto & n = tree.node(id);
    if (n.is_leaf) {
      reach_sum += p;
      result += p * n.outcome;
      continue;
    }
    const double pt = condition_probability(n, metric_values);
    if (pt < 0.0 || pt > 1.0) {
      throw std::runtime_error("collision tree condition probability outside [0, 1]");
    }
    stack.emplace_back(n.on_true, p * pt);
    stack.emplace_back(n.on_false, p * (1.0 - pt));
  }
  if (std::abs(reach_sum - 1.0) > 1e-9) {
    throw std::runtime_error("collision tree leaf probabilities do not sum to 1");
  }
  return result;
}

CollisionTree load_collision_tree(std::istream & in)
{
  CollisionTree tree;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head)) continue;

    const auto parse_kv = [&](const std::string & token, const std::string & key,
                              std::string * out) {
      if (token.rfind(key + "=", 0) == 0) {
        *out = token.substr(key.size() + 1);
        return true;
      }
      return false;
    };

    if (head == "root") {
      std::string eq;
      ls >> eq >> tree.root;
    } else if (head == "node" || head == "leaf") {
      CollisionTree::Node n;
      ls >> n.id;
      n.is_leaf = head == "leaf";
      std::string token;
      while (ls >> token) {
        std::string value;
        if (parse_kv(token, "metric", &value)) {
          n.metric = value;
        } else if (parse_kv(token, "dist", &value)) {
          n.dist = value;
        } else if (parse_kv(token, "p1", &value) || parse_kv(token, "p", &value)) {
          n.p1 = std::stod(value);
        } else if (parse_kv(token, "p2", &value)) {
          n.p2 = std::stod(value);
        } else if (parse_kv(token, "true", &value)) {
          n.on_true = value;
        } else if (parse_kv(token, "false", &value)) {
          n.on_false = value;
        } else if (parse_kv(token, "outcome", &value)) {
          n.outcome = std::stoi(value);
        } else {
          throw std::invalid_argument("malformed collision tree token: " + token);
        }
      }
      tree.nodes.push_back(std::move(n));
    } else {
      throw std::invalid_argument("malformed collision tree line: " + line);
    }
  }
  tree.validate();
  return tree;
}

}  // namespace criticality::prob
