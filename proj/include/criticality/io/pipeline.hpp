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

#ifndef CRITICALITY__IO__PIPELINE_HPP_
#define CRITICALITY__IO__PIPELINE_HPP_

#include "criticality/io/csv.hpp"
#include "criticality/io/run_config.hpp"

#include <set>
#include <string>
#include <vector>

namespace criticality::io
{

// Metric ids the batch pipeline can evaluate from trajectory tables alone.
const std::set<std::string> & batch_metric_ids();

// Long-format result table (one value per row), deterministic across runs
// and job counts. Per-row metric errors become error rows; the batch never
// aborts.
std::string compute_csv(const RunConfig & config, const std::vector<Recording> & recordings);

struct CriticalInterval
{
  std::string recording;
  double start{0.0};
  double end{0.0};
};

// Maximal merged intervals where any selected metric crosses its target in
// the critical direction; streaming over scenes in time order.
std::vector<CriticalInterval> filter_intervals(
  const RunConfig & config, const std::vector<Recording> & recordings);

std::string filter_csv(const RunConfig & config, const std::vector<Recording> & recordings);

// Evolves the configured actors under the configured model and renders the
// trajectory table.
std::string simulate_csv(const SimConfig & config);

}  // namespace criticality::io

#endif  // CRITICALITY__IO__PIPELINE_HPP_
