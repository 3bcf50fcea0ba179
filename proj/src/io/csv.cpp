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

#include "criticality/io/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace criticality::io
{
namespace
{

std::vector<std::string> split_csv_line(const std::string & line)
{
  std::vector<std::string> fields;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) {
    const auto b = field.find_first_not_of(" \t\r");
    const auto e = field.find_last_not_of(" \t\r");
    fields.push_back(b == std::string::npos ? "" : field.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

struct Row
{
  std::string recording;
  double t;
  std::string actor;
  ActorState state;
};

}  // namespace

std::vector<Recording> parse_trajectories_stream(std::istream & in, const std::string & name)
{
  std::string header_line;
  if (!std::getline(in, header_line)) {
    throw std::runtime_error(name + ": missing header row");
  }
  const auto header = split_csv_line(header_line);
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i) col[header[i]] = i;

  const std::vector<std::string> mandatory = {
    "recording_id", "t_s",      "actor_id", "x_m",         "y_m",     "vx_mps", "vy_mps",
    "ax_mps2",      "ay_mps2",  "heading_rad", "width_m",  "length_m", "class"};
  for (const auto & c : mandatory) {
    if (!col.count(c)) throw std::runtime_error(name + ": missing mandatory column " + c);
  }
  const bool has_mass = col.count("mass_kg") > 0;

  std::vector<Row> rows;
  std::string line;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < mandatory.size()) {
      throw std::runtime_error(name + ": line " + std::to_string(lineno) + ": too few fields");
    }
    const auto num = [&](const std::string & c) {
      const std::string & raw = fields[col.at(c)];
      double v = 0.0;
      try {
        std::size_t pos = 0;
        v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument(raw);
      } catch (const std::exception &) {
        throw std::runtime_error(
          name + ": line " + std::to_string(lineno) + ": malformed numeric value in " + c);
      }
      if (!std::isfinite(v)) {
        throw std::runtime_error(
          name + ": line " + std::to_string(lineno) + ": non-finite value in " + c);
      }
      return v;
    };

    Row row;
    row.recording = fields[col.at("recording_id")];
    row.t = num("t_s");
    row.actor = fields[col.at("actor_id")];
    ActorState & s = row.state;
    s.id = row.actor;
    s.t = row.t;
    s.position = {num("x_m"), num("y_m")};
    s.velocity = {num("vx_mps"), num("vy_mps")};
    s.acceleration = {num("ax_mps2"), num("ay_mps2")};
    s.yaw = num("heading_rad");
    s.width = num("width_m");
    s.length = num("length_m");
    s.actor_class = actor_class_from_string(fields[col.at("class")]);
    if (has_mass && !fields[col.at("mass_kg")].empty()) s.mass = num("mass_kg");
    rows.push_back(std::move(row));
  }

  // Group by recording (first-appearance order), then by timestamp.
  std::vector<std::string> recording_order;
  std::map<std::string, std::vector<Row>> grouped;
  for (auto & row : rows) {
    if (!grouped.count(row.recording)) recording_order.push_back(row.recording);
    grouped[row.recording].push_back(std::move(row));
  }

  std::vector<Recording> out;
  for (const auto & rec_id : recording_order) {
    auto & rec_rows = grouped[rec_id];
    std::stable_sort(rec_rows.begin(), rec_rows.end(), [](const Row & a, const Row & b) {
      return a.t < b.t || (a.t == b.t && a.actor < b.actor);
    });
    Recording rec;
    rec.id = rec_id;
    Scene * current = nullptr;
    std::set<std::string> seen_in_scene;
    for (const auto & row : rec_rows) {
      if (!current || row.t != current->t) {
        rec.scenario.scenes.emplace_back();
        current = &rec.scenario.scenes.back();
        current->t = row.t;
        seen_in_scene.clear();
      }
      if (!seen_in_scene.insert(row.actor).second) {
        throw std::runtime_error(
          name + ": non-monotone timestamps: actor " + row.actor + " appears twice at t=" +
          format_value(row.t) + " in recording " + rec_id);
      }
      current->actors.push_back(row.state);
    }
    if (!rec.scenario.scenes.empty()) {
      rec.scenario.validate();
      out.push_back(std::move(rec));
    }
  }
  return out;
}

std::vector<Recording> parse_trajectories(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
  return parse_trajectories_stream(in, path);
}

void derive_jerk(Scenario & scenario, int window)
{
  if (window < 1) throw std::invalid_argument("jerk window must be >= 1");
  std::set<std::string> ids;
  for (const auto & scene : scenario.scenes) {
    for (const auto & a : scene.actors) ids.insert(a.id);
  }
  for (const auto & id : ids) {
    // Collect (scene index, state index) pairs for this actor.
    std::vector<std::pair<std::size_t, std::size_t>> locations;
    for (std::size_t si = 0; si < scenario.scenes.size(); ++si) {
      const auto & actors = scenario.scenes[si].actors;
      for (std::size_t ai = 0; ai < actors.size(); ++ai) {
        if (actors[ai].id == id) locations.emplace_back(si, ai);
      }
    }
    for (std::size_t k = 0; k < locations.size(); ++k) {
      auto & state = scenario.scenes[locations[k].first].actors[locations[k].second];
      if (state.jerk) continue;
      const std::size_t lo = k >= static_cast<std::size_t>(window) ? k - window : 0;
      const std::size_t hi = std::min(k + window, locations.size() - 1);
      if (hi == lo) {
        state.jerk = Vec2::Zero();
        continue;
      }
      const auto & s_lo = scenario.scenes[locations[lo].first].actors[locations[lo].second];
      const auto & s_hi = scenario.scenes[locations[hi].first].actors[locations[hi].second];
      state.jerk = (s_hi.acceleration - s_lo.acceleration) / (s_hi.t - s_lo.t);
    }
  }
}

std::string trajectories_to_csv(const std::vector<Recording> & recordings)
{
  std::ostringstream out;
  out << "recording_id,t_s,actor_id,x_m,y_m,vx_mps,vy_mps,ax_mps2,ay_mps2,heading_rad,"
         "width_m,length_m,class,mass_kg\n";
  char buf[64];
  const auto num = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  for (const auto & rec : recordings) {
    for (const auto & scene : rec.scenario.scenes) {
      for (const auto & a : scene.actors) {
        out << rec.id << ',' << num(scene.t) << ',' << a.id << ',' << num(a.position.x()) << ','
            << num(a.position.y()) << ',' << num(a.velocity.x()) << ',' << num(a.velocity.y())
            << ',' << num(a.acceleration.x()) << ',' << num(a.acceleration.y()) << ','
            << num(a.yaw) << ',' << num(a.width) << ',' << num(a.length) << ','
            << to_string(a.actor_class) << ',' << (a.mass ? num(*a.mass) : "") << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace criticality::io
