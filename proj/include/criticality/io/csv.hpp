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

#ifndef CRITICALITY__IO__CSV_HPP_
#define CRITICALITY__IO__CSV_HPP_

#include "criticality/core/types.hpp"

#include <istream>
#include <string>
#include <vector>

namespace criticality::io
{

struct Recording
{
  std::string id;
  Scenario scenario;
};

// Trajectory table columns: recording_id, t_s, actor_id, x_m, y_m, vx_mps,
// vy_mps, ax_mps2, ay_mps2, heading_rad, width_m, length_m, class and the
// optional mass_kg. Rows may arrive in any order; the parser sorts by time
// within each recording. Gaps in an actor's presence are allowed.
std::vector<Recording> parse_trajectories(const std::string & path);
std::vector<Recording> parse_trajectories_stream(std::istream & in, const std::string & name);

// Central-difference jerk over +-window samples for actors without a
// recorded jerk.
void derive_jerk(Scenario & scenario, int window = 1);

// Writes scenario states back into the trajectory table format with
// round-trip precision.
std::string trajectories_to_csv(const std::vector<Recording> & recordings);

}  // namespace criticality::io

#endif  // CRITICALITY__IO__CSV_HPP_
