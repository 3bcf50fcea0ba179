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

#include "criticality/io/pipeline.hpp"

#include "criticality/metrics/scenario.hpp"
#include "criticality/metrics/scene.hpp"
#include "criticality/models/models.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace criticality::io
{
namespace
{

using metrics::EvalConfig;
using models::PredictionModel;

struct EvalContext
{
  std::shared_ptr<const PredictionModel> model;
  EvalConfig eval;
  std::map<std::string, double> params;
  const std::vector<ConflictArea> * conflict_areas{nullptr};

  double param(const std::string & key, double fallback) const
  {
    const auto it = params.find(key);
    return it != params.end() ? it->second : fallback;
  }
};

enum class Stage { kScene, kScenario };
enum class Arity { kGlobal, kSingle, kPair };

struct MetricDescriptor
{
  Stage stage{Stage::kScene};
  Arity arity{Arity::kPair};
  bool per_conflict_area{false};
  Unit unit{Unit::kDimensionless};
  Scale scale{Scale::kRatio};
  // Scene metrics receive the scene; scenario metrics the whole scenario.
  std::function<FlaggedValue(
    const Scenario &, const Scene *, const std::string &, const std::string &,
    const ConflictArea *, const EvalContext &)>
    eval;
};

const std::map<std::string, MetricDescriptor> & registry()
{
  static const std::map<std::string, MetricDescriptor> table = [] {
    std::map<std::string, MetricDescriptor> reg;
    const auto scene_pair = [&](const std::string & id, Unit unit, auto fn) {
      MetricDescriptor d;
      d.stage = Stage::kScene;
      d.arity = Arity::kPair;
      d.unit = unit;
      d.eval = [fn](const Scenario &, const Scene * scene, const std::string & a,
                    const std::string & b, const ConflictArea *, const EvalContext & ctx) {
        return fn(*scene, a, b, ctx);
      };
      reg[id] = std::move(d);
    };
    const auto scene_single = [&](const std::string & id, Unit unit, auto fn) {
      MetricDescriptor d;
      d.stage = Stage::kScene;
      d.arity = Arity::kSingle;
      d.unit = unit;
      d.eval = [fn](const Scenario &, const Scene * scene, const std::string & a,
                    const std::string &, const ConflictArea *, const EvalContext & ctx) {
        return fn(*scene, a, ctx);
      };
      reg[id] = std::move(d);
    };

    scene_pair("ttc", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                       const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::ttc(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("pttc", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                        const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::pttc(s, a, b, ctx.eval), ""};
    });
    scene_pair("dce", Unit::kDistanceM, [](const Scene & s, const std::string & a,
                                           const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::dce_ttce(s, a, b, *ctx.model, ctx.eval).dce, ""};
    });
    scene_pair("ttce", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                        const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::dce_ttce(s, a, b, *ctx.model, ctx.eval).ttce, ""};
    });
    scene_pair("wttc", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                        const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::wttc(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("thw", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                       const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::thw(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("hw", Unit::kDistanceM, [](const Scene & s, const std::string & a,
                                          const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::hw(s, a, b, ctx.eval), ""};
    });
    scene_pair("pret", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                        const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::pret(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("spret", Unit::kTimeSquaredS2, [](const Scene & s, const std::string & a,
                                                 const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::spret(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("ta", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                      const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{
        metrics::ta(s, a, b, ctx.model->horizon(), ctx.model->step(), ctx.eval), ""};
    });
    scene_pair("a_long_req", Unit::kAccelMps2, [](const Scene & s, const std::string & a,
                                                  const std::string & b, const EvalContext & ctx) {
      return metrics::a_long_req(s, a, b, *ctx.model, ctx.eval);
    });
    scene_pair("a_lat_req", Unit::kAccelMps2, [](const Scene & s, const std::string & a,
                                                 const std::string & b, const EvalContext & ctx) {
      return metrics::a_lat_req(s, a, b, *ctx.model, ctx.eval);
    });
    scene_pair("a_req", Unit::kAccelMps2, [](const Scene & s, const std::string & a,
                                             const std::string & b, const EvalContext & ctx) {
      return metrics::a_req(s, a, b, *ctx.model, ctx.eval);
    });
    scene_pair("a_req_cond", Unit::kAccelMps2, [](const Scene & s, const std::string & a,
                                                  const std::string & b, const EvalContext & ctx) {
      return metrics::a_req_cond(s, a, b, *ctx.model, ctx.eval);
    });
    scene_pair("dst", Unit::kAccelMps2, [](const Scene & s, const std::string & a,
                                           const std::string & b, const EvalContext & ctx) {
      return metrics::dst(s, a, b, ctx.param("t_s", 0.0), ctx.eval);
    });
    scene_pair("btn", Unit::kDimensionless, [](const Scene & s, const std::string & a,
                                               const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::btn(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("stn", Unit::kDimensionless, [](const Scene & s, const std::string & a,
                                               const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::stn(s, a, b, *ctx.model, ctx.eval), ""};
    });
    scene_pair("ttb", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                       const std::string & b, const EvalContext & ctx) {
      return metrics::ttm(s, a, b, *ctx.model, metrics::brake_maneuver(*ctx.model), ctx.eval);
    });
    scene_pair("ttk", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                       const std::string & b, const EvalContext & ctx) {
      return metrics::ttm(s, a, b, *ctx.model, metrics::kickdown_maneuver(*ctx.model), ctx.eval);
    });
    scene_pair("tts", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                       const std::string & b, const EvalContext & ctx) {
      return metrics::ttr(
        s, a, b, *ctx.model,
        {metrics::steer_maneuver(*ctx.model, true), metrics::steer_maneuver(*ctx.model, false)},
        ctx.eval);
    });
    scene_pair("ttr", Unit::kTimeS, [](const Scene & s, const std::string & a,
                                       const std::string & b, const EvalContext & ctx) {
      return metrics::ttr(
        s, a, b, *ctx.model,
        {metrics::brake_maneuver(*ctx.model), metrics::steer_maneuver(*ctx.model, true),
         metrics::steer_maneuver(*ctx.model, false), metrics::kickdown_maneuver(*ctx.model)},
        ctx.eval);
    });
    scene_pair("delta_v", Unit::kSpeedMps, [](const Scene & s, const std::string & a,
                                              const std::string & b, const EvalContext &) {
      return FlaggedValue{metrics::delta_v(s, a, b), ""};
    });

    scene_single("msd", Unit::kDistanceM,
                 [](const Scene & s, const std::string & a, const EvalContext &) {
                   return FlaggedValue{metrics::msd(s, a), ""};
                 });
    scene_single("lat_j", Unit::kJerkMps3,
                 [](const Scene & s, const std::string & a, const EvalContext &) {
                   return FlaggedValue{metrics::jerk(s, a).lateral, ""};
                 });
    scene_single("long_j", Unit::kJerkMps3,
                 [](const Scene & s, const std::string & a, const EvalContext &) {
                   return FlaggedValue{metrics::jerk(s, a).longitudinal, ""};
                 });
    scene_single("rss_ds", Unit::kDimensionless,
                 [](const Scene & s, const std::string & a, const EvalContext & ctx) {
                   const metrics::RssParams params;
                   return FlaggedValue{static_cast<double>(metrics::rss_ds(
                     s, a, metrics::default_rss_longitudinal(params),
                     metrics::default_rss_lateral(params), ctx.eval)), ""};
                 });

    // Conflict-area scene metrics.
    {
      MetricDescriptor d;
      d.stage = Stage::kScene;
      d.arity = Arity::kSingle;
      d.per_conflict_area = true;
      d.unit = Unit::kTimeS;
      d.eval = [](const Scenario &, const Scene * scene, const std::string & a,
                  const std::string &, const ConflictArea * ca, const EvalContext & ctx) {
        return FlaggedValue{metrics::tto(*scene, a, ca->polygon, *ctx.model, ctx.eval), ""};
      };
      reg["tto"] = d;
      d.unit = Unit::kDimensionless;
      d.eval = [](const Scenario &, const Scene * scene, const std::string & a,
                  const std::string &, const ConflictArea * ca, const EvalContext & ctx) {
        return FlaggedValue{metrics::psd(*scene, a, *ca, ctx.eval), ""};
      };
      reg["psd"] = d;
    }

    const auto scenario_pair = [&](const std::string & id, Unit unit, auto fn) {
      MetricDescriptor d;
      d.stage = Stage::kScenario;
      d.arity = Arity::kPair;
      d.unit = unit;
      d.eval = [fn](const Scenario & sc, const Scene *, const std::string & a,
                    const std::string & b, const ConflictArea *, const EvalContext & ctx) {
        return fn(sc, a, b, ctx);
      };
      reg[id] = std::move(d);
    };

    scenario_pair("tet", Unit::kTimeS, [](const Scenario & sc, const std::string & a,
                                          const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{
        metrics::tet(sc, a, b, ctx.param("tau", 1.5), *ctx.model, ctx.eval), ""};
    });
    scenario_pair("tit", Unit::kTimeSquaredS2, [](const Scenario & sc, const std::string & a,
                                                  const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{
        metrics::tit(sc, a, b, ctx.param("tau", 1.5), *ctx.model, ctx.eval), ""};
    });
    scenario_pair("cpi", Unit::kProbability, [](const Scenario & sc, const std::string & a,
                                                const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{metrics::cpi(sc, a, b, ctx.param("mu", -8.0), ctx.param("sigma", 1.0),
                                       *ctx.model, ctx.eval),
                          ""};
    });
    scenario_pair("tta", Unit::kTimeS, [](const Scenario & sc, const std::string & a,
                                          const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{
        metrics::tta(sc, a, b, metrics::default_evasive_detector(), *ctx.model, ctx.eval), ""};
    });
    scenario_pair("cs", Unit::kSpeedMps, [](const Scenario & sc, const std::string & a,
                                            const std::string & b, const EvalContext & ctx) {
      return FlaggedValue{
        metrics::cs(sc, a, b, metrics::default_evasive_detector(), *ctx.model, ctx.eval), ""};
    });

    // Conflict-area scenario metrics.
    {
      MetricDescriptor d;
      d.stage = Stage::kScenario;
      d.arity = Arity::kSingle;
      d.per_conflict_area = true;
      d.unit = Unit::kTimeS;
      d.eval = [](const Scenario & sc, const Scene *, const std::string & a, const std::string &,
                  const ConflictArea * ca, const EvalContext &) {
        return FlaggedValue{metrics::et(sc, a, *ca), ""};
      };
      reg["et"] = d;

      d.arity = Arity::kPair;
      d.eval = [](const Scenario & sc, const Scene *, const std::string & a,
                  const std::string & b, const ConflictArea * ca, const EvalContext &) {
        return metrics::pet(sc, a, b, *ca);
      };
      reg["pet"] = d;

      d.unit = Unit::kEnergyJ;
      d.eval = [](const Scenario & sc, const Scene *, const std::string & a,
                  const std::string & b, const ConflictArea * ca, const EvalContext & ctx) {
        return FlaggedValue{
          metrics::ci(sc, a, b, *ca, ctx.param("alpha", 0.5), ctx.param("beta", 1.0)), ""};
      };
      reg["ci"] = d;
    }

    {
      MetricDescriptor d;
      d.stage = Stage::kScenario;
      d.arity = Arity::kSingle;
      d.unit = Unit::kCount;
      d.eval = [](const Scenario & sc, const Scene *, const std::string & a, const std::string &,
                  const ConflictArea *, const EvalContext & ctx) {
        return FlaggedValue{static_cast<double>(metrics::soi(
          sc, a, metrics::default_personal_space(ctx.param("lateral_margin", 0.5),
                                                 ctx.param("longitudinal_margin", 1.0)))),
                            ""};
      };
      reg["soi"] = d;
    }
    {
      MetricDescriptor d;
      d.stage = Stage::kScenario;
      d.arity = Arity::kGlobal;
      d.unit = Unit::kDimensionless;
      d.scale = Scale::kNominal;
      d.eval = [](const Scenario & sc, const Scene *, const std::string &, const std::string &,
                  const ConflictArea *, const EvalContext &) {
        return FlaggedValue{static_cast<double>(metrics::am(sc)), ""};
      };
      reg["am"] = d;
    }
    return reg;
  }();
  return table;
}

struct Row
{
  std::string recording;
  double t;
  std::string metric;
  std::string subjects;
  std::string value;
  std::string unit;
  std::string flag;

  bool operator<(const Row & o) const
  {
    return std::tie(recording, t, metric, subjects) <
           std::tie(o.recording, o.t, o.metric, o.subjects);
  }
};

std::vector<std::pair<std::string, std::string>> subject_slots(
  const Scenario & scenario, const RunConfig & config, Arity arity)
{
  std::vector<std::string> ids;
  for (const auto & scene : scenario.scenes) {
    for (const auto & a : scene.actors) {
      if (std::find(ids.begin(), ids.end(), a.id) == ids.end()) ids.push_back(a.id);
    }
  }
  std::sort(ids.begin(), ids.end());

  std::vector<std::pair<std::string, std::string>> slots;
  if (arity == Arity::kGlobal) {
    slots.emplace_back("", "");
  } else if (arity == Arity::kSingle) {
    if (config.subject) {
      slots.emplace_back(*config.subject, "");
    } else {
      for (const auto & id : ids) slots.emplace_back(id, "");
    }
  } else {
    for (const auto & a : ids) {
      if (config.subject && a != *config.subject) continue;
      for (const auto & b : ids) {
        if (a != b) slots.emplace_back(a, b);
      }
    }
  }
  return slots;
}

std::vector<Row> evaluate_recording(const RunConfig & config, const Recording & input)
{
  Recording recording = input;
  derive_jerk(recording.scenario, config.jerk_window);

  EvalConfig eval = config.eval;
  eval.mode = config.distance_mode;

  std::vector<Row> rows;
  for (const auto & spec : config.metrics) {
    const auto & desc = registry().at(spec.id);
    EvalContext ctx;
    ctx.model = models::make_model(config.model_kind, config.horizon, config.step);
    ctx.eval = eval;
    ctx.params = spec.params;
    ctx.conflict_areas = &config.conflict_areas;

    std::vector<const ConflictArea *> areas;
    if (desc.per_conflict_area) {
      for (const auto & ca : config.conflict_areas) areas.push_back(&ca);
      if (areas.empty()) {
        rows.push_back({recording.id, recording.scenario.t0(), spec.id, "", "error", "",
                        "no conflict areas configured"});
        continue;
      }
    } else {
      areas.push_back(nullptr);
    }

    const auto slots = subject_slots(recording.scenario, config, desc.arity);
    const auto emit = [&](double t, const std::string & subjects, const ConflictArea * ca) {
      const std::string subject_str =
        ca ? (subjects.empty() ? ca->id : subjects + "|" + ca->id) : subjects;
      const Scene * scene = nullptr;
      if (desc.stage == Stage::kScene) {
        for (const auto & s : recording.scenario.scenes) {
          if (s.t == t) {
            scene = &s;
            break;
          }
        }
      }
      Row row{recording.id, t, spec.id, subject_str, "", to_string(desc.unit), ""};
      try {
        const auto slot_pair = subjects.find('|');
        const std::string a = slot_pair == std::string::npos ? subjects
                                                             : subjects.substr(0, slot_pair);
        const std::string b =
          slot_pair == std::string::npos ? "" : subjects.substr(slot_pair + 1);
        const FlaggedValue v =
          desc.eval(recording.scenario, scene, a, b, ca, ctx);
        row.value = format_value(v.value);
        row.flag = v.flag;
      } catch (const std::exception & e) {
        row.value = "error";
        row.flag = e.what();
      }
      rows.push_back(std::move(row));
    };

    for (const ConflictArea * ca : areas) {
      for (const auto & [a, b] : slots) {
        const std::string subjects = b.empty() ? a : a + "|" + b;
        if (desc.stage == Stage::kScenario) {
          emit(recording.scenario.t0(), subjects, ca);
        } else {
          for (const auto & scene : recording.scenario.scenes) {
            // Skip scenes where a referenced actor is absent.
            if (!a.empty() && !scene.find(a)) continue;
            if (!b.empty() && !scene.find(b)) continue;
            emit(scene.t, subjects, ca);
          }
        }
      }
    }
  }
  std::sort(rows.begin(), rows.end());
  return rows;
}

// Deterministic parallel map over recordings: results are collected by input
// index regardless of completion order.
template <typename Fn>
auto parallel_over_recordings(const std::vector<Recording> & recordings, int jobs, Fn && fn)
{
  using Result = decltype(fn(recordings.front()));
  std::vector<Result> results(recordings.size());
  if (recordings.empty()) return results;
  const int workers = std::max(1, std::min<int>(jobs, recordings.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::vector<std::exception_ptr> errors(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = next.fetch_add(1); i < recordings.size(); i = next.fetch_add(1)) {
          results[i] = fn(recordings[i]);
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto & t : pool) t.join();
  for (const auto & e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace

const std::set<std::string> & batch_metric_ids()
{
  static const std::set<std::string> ids = [] {
    std::set<std::string> out;
    for (const auto & [id, desc] : registry()) out.insert(id);
    return out;
  }();
  return ids;
}

std::string compute_csv(const RunConfig & config, const std::vector<Recording> & recordings)
{
  config.validate();
  const auto per_recording = parallel_over_recordings(
    recordings, config.jobs,
    [&](const Recording & rec) { return evaluate_recording(config, rec); });

  std::ostringstream out;
  out << "recording,t,metric,subjects,value,unit,flag\n";
  for (const auto & rows : per_recording) {
    for (const auto & row : rows) {
      out << row.recording << ',' << format_value(row.t) << ',' << row.metric << ','
          << row.subjects << ',' << row.value << ',' << row.unit << ',' << row.flag << '\n';
    }
  }
  return out.str();
}

namespace
{

struct TargetState
{
  const FilterTarget * target;
  std::vector<std::pair<double, double>> series;  // (t, aggregated value)
};

}  // namespace

std::vector<CriticalInterval> filter_intervals(
  const RunConfig & config, const std::vector<Recording> & recordings)
{
  config.validate();
  if (config.targets.empty()) {
    throw std::invalid_argument("filter requires at least one target value");
  }
  for (const auto & t : config.targets) {
    if (registry().at(t.metric).stage != Stage::kScene) {
      throw std::invalid_argument("filter targets must be scene metrics: " + t.metric);
    }
  }

  const auto process = [&](const Recording & input) {
    Recording recording = input;
    derive_jerk(recording.scenario, config.jerk_window);
    EvalConfig eval = config.eval;
    eval.mode = config.distance_mode;
    EvalContext ctx;
    ctx.model = models::make_model(config.model_kind, config.horizon, config.step);
    ctx.eval = eval;
    ctx.conflict_areas = &config.conflict_areas;

    // Streaming pass: each scene evaluated once, in time order.
    std::vector<TargetState> states;
    for (const auto & target : config.targets) states.push_back({&target, {}});

    for (const auto & scene : recording.scenario.scenes) {
      for (auto & st : states) {
        const auto & desc = registry().at(st.target->metric);
        ctx.params.clear();
        // Critical-direction aggregate over subject slots: the most critical
        // pair decides.
        double aggregated = st.target->critical_below ? kInf : -kInf;
        bool any = false;
        const auto slots = subject_slots(recording.scenario, config, desc.arity);
        for (const auto & [a, b] : slots) {
          if (!a.empty() && !scene.find(a)) continue;
          if (!b.empty() && !scene.find(b)) continue;
          try {
            const FlaggedValue v = desc.eval(recording.scenario, &scene, a, b, nullptr, ctx);
            aggregated = st.target->critical_below ? std::min(aggregated, v.value)
                                                   : std::max(aggregated, v.value);
            any = true;
          } catch (const std::exception &) {
            // Error rows never abort the batch; they simply do not trigger.
          }
        }
        if (any) st.series.emplace_back(scene.t, aggregated);
      }
    }

    // Threshold crossings with linear interpolation, then union and margins.
    std::vector<std::pair<double, double>> intervals;
    for (const auto & st : states) {
      const double target = st.target->target;
      const bool below = st.target->critical_below;
      const auto critical = [&](double v) { return below ? v <= target : v >= target; };
      std::optional<double> open;
      for (std::size_t i = 0; i < st.series.size(); ++i) {
        const auto [t, v] = st.series[i];
        const bool crit = critical(v);
        if (crit && !open) {
          double start = t;
          if (i > 0) {
            const auto [t0, v0] = st.series[i - 1];
            if (std::isfinite(v0) && std::isfinite(v) && v != v0 && !critical(v0)) {
              start = t0 + (target - v0) / (v - v0) * (t - t0);
            }
          }
          open = start;
        } else if (!crit && open) {
          double end = t;
          const auto [t0, v0] = st.series[i - 1];
          if (std::isfinite(v0) && std::isfinite(v) && v != v0 && critical(v0)) {
            end = t0 + (target - v0) / (v - v0) * (t - t0);
          }
          intervals.emplace_back(*open, end);
          open.reset();
        }
      }
      if (open) intervals.emplace_back(*open, st.series.back().first);
    }

    const double t0 = recording.scenario.t0();
    const double te = recording.scenario.te();
    for (auto & [s, e] : intervals) {
      s = std::max(t0, s - config.margin_pre);
      e = std::min(te, e + config.margin_post);
    }
    std::sort(intervals.begin(), intervals.end());
    std::vector<CriticalInterval> merged;
    for (const auto & [s, e] : intervals) {
      if (!merged.empty() && s <= merged.back().end) {
        merged.back().end = std::max(merged.back().end, e);
      } else {
        merged.push_back({recording.id, s, e});
      }
    }
    return merged;
  };

  const auto per_recording = parallel_over_recordings(recordings, config.jobs, process);
  std::vector<CriticalInterval> out;
  for (const auto & intervals : per_recording) {
    out.insert(out.end(), intervals.begin(), intervals.end());
  }
  return out;
}

std::string filter_csv(const RunConfig & config, const std::vector<Recording> & recordings)
{
  std::ostringstream out;
  out << "recording,start_s,end_s\n";
  for (const auto & interval : filter_intervals(config, recordings)) {
    out << interval.recording << ',' << format_value(interval.start) << ','
        << format_value(interval.end) << '\n';
  }
  return out.str();
}

std::string simulate_csv(const SimConfig & config)
{
  const auto model = models::make_model(config.model_kind, config.horizon, config.step);
  std::vector<models::Trajectory> trajectories;
  for (const auto & actor : config.actors) trajectories.push_back(model->predict(actor));

  Recording rec;
  rec.id = config.recording_id;
  const std::size_t n = trajectories.front().states.size();
  for (std::size_t k = 0; k < n; ++k) {
    Scene scene;
    scene.t = trajectories.front().states[k].t;
    for (const auto & traj : trajectories) scene.actors.push_back(traj.states[k]);
    for (auto & a : scene.actors) a.t = scene.t;
    rec.scenario.scenes.push_back(std::move(scene));
  }
  return trajectories_to_csv({rec});
}

}  // namespace criticality::io
