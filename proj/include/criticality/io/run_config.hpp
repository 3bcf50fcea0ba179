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

#ifndef CRITICALITY__IO__RUN_CONFIG_HPP_
#define CRITICALITY__IO__RUN_CONFIG_HPP_

#include "criticality/core/geometry.hpp"
#include "criticality/core/types.hpp"
#include "criticality/metrics/contact.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace criticality::io
{

struct MetricSpec
{
  std::string id;
  std::map<std::string, double> params;  // tau, t_s, alpha, beta, mu, sigma, ...
};

struct FilterTarget
{
  std::string metric;
  double target{0.0};
  bool critical_below{true};  // false: crossing above the target is critical
};

struct RunConfig
{
  std::string model_kind{"constant_velocity"};
  double horizon{20.0};
  double step{0.1};
  geom::DistanceMode distance_mode{geom::DistanceMode::kCenter};
  std::uint64_t seed{0};
  int jobs{1};
  int jerk_window{1};
  std::vector<MetricSpec> metrics;
  std::vector<FilterTarget> targets;
  double margin_pre{0.0};
  double margin_post{0.0};
  std::vector<ConflictArea> conflict_areas;
  std::optional<std::string> subject;  // designated actor; all pairs otherwise
  metrics::EvalConfig eval;

  void validate() const;  // referenced metric/model ids and parameter ranges
};

RunConfig load_run_config(const std::string & path);
RunConfig parse_run_config(const std::string & json_text);

// `simulate` subcommand input: initial actor states evolved under a model.
struct SimConfig
{
  std::string recording_id{"sim"};
  std::string model_kind{"constant_velocity"};
  double horizon{10.0};
  double step{0.1};
  std::vector<ActorState> actors;
};

SimConfig load_sim_config(const std::string & path);
SimConfig parse_sim_config(const std::string & json_text);

}  // namespace criticality::io

#endif  // CRITICALITY__IO__RUN_CONFIG_HPP_
