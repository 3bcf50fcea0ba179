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

#include "criticality/io/run_config.hpp"

#include "criticality/io/pipeline.hpp"

#include <json.hpp>

#include <fstream>
#include <stdexcept>

namespace criticality::io
{
namespace
{

using nlohmann::json;

std::string slurp(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

ActorState parse_actor(const json & j)
{
  ActorState s;
  s.id = j.at("id").get<std::string>();
  s.position = {j.at("x").get<double>(), j.at("y").get<double>()};
  s.velocity = {j.value("vx", 0.0), j.value("vy", 0.0)};
  s.acceleration = {j.value("ax", 0.0), j.value("ay", 0.0)};
  s.yaw = j.value("heading", 0.0);
  s.yaw_rate = j.value("yaw_rate", 0.0);
  s.width = j.value("width", 2.0);
  s.length = j.value("length", 5.0);
  if (j.contains("mass")) s.mass = j.at("mass").get<double>();
  if (j.contains("class")) s.actor_class = actor_class_from_string(j.at("class"));
  if (j.contains("a_long_min")) s.capabilities.a_long_min = j.at("a_long_min").get<double>();
  if (j.contains("a_long_max")) s.capabilities.a_long_max = j.at("a_long_max").get<double>();
  if (j.contains("a_lat_max")) s.capabilities.a_lat_max = j.at("a_lat_max").get<double>();
  if (j.contains("v_max")) s.capabilities.v_max = j.at("v_max").get<double>();
  if (j.contains("reaction_time")) s.reaction_time = j.at("reaction_time").get<double>();
  s.validate();
  return s;
}

}  // namespace

void RunConfig::validate() const
{
  if (!(horizon > 0.0) || !(step > 0.0) || step > horizon) {
    throw std::invalid_argument("run config: need 0 < step <= horizon");
  }
  if (jobs < 1) throw std::invalid_argument("run config: jobs must be >= 1");
  if (jerk_window < 1) throw std::invalid_argument("run config: jerk_window must be >= 1");
  if (margin_pre < 0.0 || margin_post < 0.0) {
    throw std::invalid_argument("run config: margins must be >= 0");
  }
  for (const auto & m : metrics) {
    if (!batch_metric_ids().count(m.id)) {
      throw std::invalid_argument("run config: unknown metric id: " + m.id);
    }
  }
  for (const auto & t : targets) {
    if (!batch_metric_ids().count(t.metric)) {
      throw std::invalid_argument("run config: unknown filter metric id: " + t.metric);
    }
  }
  for (const auto & ca : conflict_areas) ca.validate();
}

RunConfig parse_run_config(const std::string & text)
{
  const json j = json::parse(text);
  RunConfig cfg;
  if (j.contains("model")) {
    const auto & m = j.at("model");
    cfg.model_kind = m.value("kind", cfg.model_kind);
    cfg.horizon = m.value("horizon", cfg.horizon);
    cfg.step = m.value("step", cfg.step);
  }
  cfg.distance_mode = geom::distance_mode_from_string(j.value("distance_mode", "center"));
  cfg.seed = j.value("seed", cfg.seed);
  cfg.jobs = j.value("jobs", cfg.jobs);
  cfg.jerk_window = j.value("jerk_window", cfg.jerk_window);
  if (j.contains("subject")) cfg.subject = j.at("subject").get<std::string>();

  if (j.contains("metrics")) {
    for (const auto & jm : j.at("metrics")) {
      MetricSpec spec;
      spec.id = jm.at("id").get<std::string>();
      for (const auto & [key, value] : jm.items()) {
        if (key != "id") spec.params[key] = value.get<double>();
      }
      cfg.metrics.push_back(std::move(spec));
    }
  }
  if (j.contains("filter")) {
    const auto & f = j.at("filter");
    cfg.margin_pre = f.value("margin_pre", 0.0);
    cfg.margin_post = f.value("margin_post", 0.0);
    for (const auto & jt : f.at("targets")) {
      FilterTarget t;
      t.metric = jt.at("metric").get<std::string>();
      t.target = jt.at("target").get<double>();
      t.critical_below = jt.value("critical", "below") == "below";
      cfg.targets.push_back(std::move(t));
    }
  }
  if (j.contains("conflict_areas")) {
    for (const auto & jc : j.at("conflict_areas")) {
      ConflictArea ca;
      ca.id = jc.at("id").get<std::string>();
      for (const auto & jp : jc.at("polygon")) {
        ca.polygon.emplace_back(jp.at(0).get<double>(), jp.at(1).get<double>());
      }
      cfg.conflict_areas.push_back(std::move(ca));
    }
  }
  if (j.contains("eval")) {
    const auto & e = j.at("eval");
    cfg.eval.bisection_tol = e.value("bisection_tol", cfg.eval.bisection_tol);
    cfg.eval.contact_eps = e.value("contact_eps", cfg.eval.contact_eps);
    cfg.eval.accel_floor = e.value("accel_floor", cfg.eval.accel_floor);
    cfg.eval.accel_ceiling = e.value("accel_ceiling", cfg.eval.accel_ceiling);
  }
  cfg.eval.mode = cfg.distance_mode;
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string & path) { return parse_run_config(slurp(path)); }

SimConfig parse_sim_config(const std::string & text)
{
  const json j = json::parse(text);
  SimConfig cfg;
  cfg.recording_id = j.value("recording_id", cfg.recording_id);
  if (j.contains("model")) {
    const auto & m = j.at("model");
    cfg.model_kind = m.value("kind", cfg.model_kind);
    cfg.horizon = m.value("horizon", cfg.horizon);
    cfg.step = m.value("step", cfg.step);
  }
  for (const auto & ja : j.at("actors")) cfg.actors.push_back(parse_actor(ja));
  if (cfg.actors.empty()) throw std::invalid_argument("sim config: no actors");
  return cfg;
}

SimConfig load_sim_config(const std::string & path) { return parse_sim_config(slurp(path)); }

}  // namespace criticality::io
