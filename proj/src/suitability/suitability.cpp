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

#include "criticality/suitability/suitability.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace criticality::suitability
{
namespace
{

int scale_rank(Scale s)
{
  switch (s) {
    case Scale::kNominal: return 0;
    case Scale::kOrdinal: return 1;
    case Scale::kInterval: return 2;
    case Scale::kRatio: return 3;
  }
  return 0;
}

// depends never satisfies an ordered comparison; it must be accepted
// explicitly via is/in.
int level_rank(Level level)
{
  switch (level) {
    case Level::kLow: return 0;
    case Level::kMedium: return 1;
    case Level::kHigh: return 2;
    case Level::kDepends: return -1;
  }
  return -1;
}

std::vector<std::string> split_tokens(const std::string & s)
{
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool parse_bool(const std::string & s)
{
  if (s == "true") return true;
  if (s == "false") return false;
  throw std::invalid_argument("expected true/false, got: " + s);
}

}  // namespace

Level level_from_string(const std::string & s)
{
  if (s == "low") return Level::kLow;
  if (s == "medium") return Level::kMedium;
  if (s == "high") return Level::kHigh;
  if (s == "depends") return Level::kDepends;
  throw std::invalid_argument("unknown level: " + s);
}

std::string to_string(Level level)
{
  switch (level) {
    case Level::kLow: return "low";
    case Level::kMedium: return "medium";
    case Level::kHigh: return "high";
    case Level::kDepends: return "depends";
  }
  return "depends";
}

void MetricPropertyRecord::validate() const
{
  if (id.empty() || display_name.empty()) {
    throw std::invalid_argument("metric record needs id and name");
  }
  if (subject_types.empty() || scenario_types.empty() || required_inputs.empty()) {
    throw std::invalid_argument("metric record " + id + ": set-valued fields must be non-empty");
  }
}

bool Clause::matches(const MetricPropertyRecord & r) const
{
  const auto set_field = [&]() -> const std::set<std::string> * {
    if (field == "subjects") return &r.subject_types;
    if (field == "scenarios") return &r.scenario_types;
    if (field == "inputs") return &r.required_inputs;
    return nullptr;
  };

  if (const auto * set = set_field()) {
    if (op == "includes") {
      return std::all_of(args.begin(), args.end(),
                         [&](const std::string & a) { return set->count(a) > 0; });
    }
    if (op == "includes_any") {
      return std::any_of(args.begin(), args.end(),
                         [&](const std::string & a) { return set->count(a) > 0; });
    }
    if (op == "excludes") {
      return std::none_of(args.begin(), args.end(),
                          [&](const std::string & a) { return set->count(a) > 0; });
    }
    throw std::invalid_argument("unknown set operator: " + op);
  }

  if (field == "scale") {
    if (args.size() != 1 && op != "in") throw std::invalid_argument("scale clause needs one arg");
    if (op == "is") return r.output_scale == scale_from_string(args[0]);
    if (op == "at_least") return scale_rank(r.output_scale) >= scale_rank(scale_from_string(args[0]));
    if (op == "in") {
      return std::any_of(args.begin(), args.end(), [&](const std::string & a) {
        return r.output_scale == scale_from_string(a);
      });
    }
    throw std::invalid_argument("unknown scale operator: " + op);
  }

  if (field == "reliability" || field == "validity" || field == "sensitivity" ||
      field == "specificity") {
    const Level value = field == "reliability"   ? r.reliability
                        : field == "validity"    ? r.validity
                        : field == "sensitivity" ? r.sensitivity
                                                 : r.specificity;
    if (op == "is") return value == level_from_string(args.at(0));
    if (op == "in") {
      return std::any_of(args.begin(), args.end(),
                         [&](const std::string & a) { return value == level_from_string(a); });
    }
    if (op == "at_least") {
      const int want = level_rank(level_from_string(args.at(0)));
      const int have = level_rank(value);
      return have >= 0 && have >= want;
    }
    throw std::invalid_argument("unknown level operator: " + op);
  }

  if (field == "runtime_capable" || field == "target_values") {
    const bool value = field == "runtime_capable" ? r.runtime_capable : r.target_values_exist;
    if (op == "is") return value == parse_bool(args.at(0));
    throw std::invalid_argument("unknown boolean operator: " + op);
  }

  if (field == "prediction") {
    const auto name = [&]() {
      switch (r.prediction_need) {
        case PredictionNeed::kNone: return "none";
        case PredictionNeed::kLinearTime: return "linear_time";
        case PredictionNeed::kBranchingTime: return "branching_time";
      }
      return "none";
    }();
    if (op == "is") return args.at(0) == name;
    if (op == "in") return std::find(args.begin(), args.end(), name) != args.end();
    throw std::invalid_argument("unknown prediction operator: " + op);
  }

  throw std::invalid_argument("unknown clause field: " + field);
}

bool Requirement::satisfied_by(const MetricPropertyRecord & record) const
{
  return std::all_of(clauses.begin(), clauses.end(),
                     [&](const Clause & c) { return c.matches(record); });
}

void RequirementOrder::validate(const std::vector<Requirement> & requirements) const
{
  std::set<std::string> ids;
  for (const auto & r : requirements) ids.insert(r.id);
  for (const auto & [hi, lo] : edges) {
    if (!ids.count(hi) || !ids.count(lo)) {
      throw std::invalid_argument("order references unknown requirement: " + hi + " > " + lo);
    }
  }
  // Cycle check by repeated removal of sources.
  std::map<std::string, int> indegree;
  for (const auto & id : ids) indegree[id] = 0;
  for (const auto & [hi, lo] : edges) ++indegree[lo];
  std::vector<std::string> queue;
  for (const auto & [id, deg] : indegree) {
    if (deg == 0) queue.push_back(id);
  }
  std::size_t seen = 0;
  while (!queue.empty()) {
    const std::string id = queue.back();
    queue.pop_back();
    ++seen;
    for (const auto & [hi, lo] : edges) {
      if (hi == id && --indegree[lo] == 0) queue.push_back(lo);
    }
  }
  if (seen != ids.size()) throw std::invalid_argument("requirement order contains a cycle");
}

std::vector<std::string> RequirementOrder::maximal(const std::set<std::string> & remaining) const
{
  // Reachability over the full edge set so removed intermediates keep the
  // transitive dominance intact.
  const auto reaches = [&](const std::string & from, const std::string & to) {
    std::set<std::string> seen{from};
    std::vector<std::string> stack{from};
    while (!stack.empty()) {
      const std::string cur = stack.back();
      stack.pop_back();
      for (const auto & [hi, lo] : edges) {
        if (hi != cur) continue;
        if (lo == to) return true;
        if (seen.insert(lo).second) stack.push_back(lo);
      }
    }
    return false;
  };

  std::vector<std::string> out;
  for (const auto & candidate : remaining) {
    bool dominated = false;
    for (const auto & other : remaining) {
      if (other != candidate && reaches(other, candidate)) {
        dominated = true;
        break;
      }
    }
    if (!dominated) out.push_back(candidate);
  }
  std::sort(out.begin(), out.end());
  return out;
}

const std::set<std::string> & known_metric_ids()
{
  static const std::set<std::string> ids = {
    "aci", "ags",  "am",    "a_lat_req", "a_long_req", "a_req", "btn",  "ci",   "cpi",
    "cs",  "dce",  "delta_v", "dst",     "et",         "hw",    "lat_j", "long_j", "pet",
    "pf",  "p_mc", "pret",  "pri",       "psd",        "p_smh", "p_srs", "pttc", "rss_ds",
    "soi", "sp",   "stn",   "tci",       "tet",        "thw",   "tit",   "ttb",  "ttc",
    "ttce", "ttk", "ttm",   "ttr",       "tts",        "ttz",   "wttc"};
  return ids;
}

const std::map<std::string, std::string> & metric_record_aliases()
{
  static const std::map<std::string, std::string> aliases = {
    {"tto", "ttz"},     {"tta", "ttc"},    {"spret", "pret"}, {"ta", "pret"},
    {"msd", "psd"},     {"a_req_cond", "a_req"},              {"joksch", "delta_v"},
    {"jerk", "lat_j"},  {"hw", "hw"},
  };
  return aliases;
}

namespace
{

// Line-oriented block format: "[section id]" headers, "key = value" entries,
// '#' comments.
struct Block
{
  std::string kind;
  std::string id;
  std::vector<std::pair<std::string, std::string>> entries;
};

std::vector<Block> parse_blocks(std::istream & in)
{
  std::vector<Block> blocks;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    line = line.substr(first, last - first + 1);

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("malformed section header at line " + std::to_string(lineno));
      }
      std::istringstream hs(line.substr(1, line.size() - 2));
      Block b;
      hs >> b.kind >> b.id;
      blocks.push_back(std::move(b));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos || blocks.empty()) {
      throw std::invalid_argument("malformed entry at line " + std::to_string(lineno) + ": " +
                                  line);
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    const auto trim = [](std::string & s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      s = b == std::string::npos ? "" : s.substr(b, e - b + 1);
    };
    trim(key);
    trim(value);
    blocks.back().entries.emplace_back(key, value);
  }
  return blocks;
}

std::string require_entry(const Block & b, const std::string & key)
{
  for (const auto & [k, v] : b.entries) {
    if (k == key) return v;
  }
  throw std::invalid_argument("missing field '" + key + "' in [" + b.kind + " " + b.id + "]");
}

}  // namespace

KnowledgeBase load_knowledge_base(std::istream & in)
{
  KnowledgeBase records;
  std::set<std::string> seen;
  for (const auto & block : parse_blocks(in)) {
    if (block.kind != "metric") {
      throw std::invalid_argument("unexpected section in knowledge base: " + block.kind);
    }
    MetricPropertyRecord r;
    r.id = block.id;
    if (!known_metric_ids().count(r.id)) {
      throw std::invalid_argument("unknown metric id in knowledge base: " + r.id);
    }
    if (!seen.insert(r.id).second) {
      throw std::invalid_argument("duplicate metric id in knowledge base: " + r.id);
    }
    r.display_name = require_entry(block, "name");
    r.runtime_capable = parse_bool(require_entry(block, "runtime_capable"));
    r.target_values_exist = parse_bool(require_entry(block, "target_values"));
    for (const auto & t : split_tokens(require_entry(block, "subjects"))) r.subject_types.insert(t);
    for (const auto & t : split_tokens(require_entry(block, "scenarios"))) {
      r.scenario_types.insert(t);
    }
    for (const auto & t : split_tokens(require_entry(block, "inputs"))) r.required_inputs.insert(t);
    r.output_scale = scale_from_string(require_entry(block, "scale"));
    r.output_unit = unit_from_string(require_entry(block, "unit"));
    r.reliability = level_from_string(require_entry(block, "reliability"));
    r.validity = level_from_string(require_entry(block, "validity"));
    r.sensitivity = level_from_string(require_entry(block, "sensitivity"));
    r.specificity = level_from_string(require_entry(block, "specificity"));
    const auto pred = split_tokens(require_entry(block, "prediction"));
    if (pred.size() != 2) {
      throw std::invalid_argument("prediction entry needs '<need> <horizon>' in " + r.id);
    }
    if (pred[0] == "none") {
      r.prediction_need = PredictionNeed::kNone;
    } else if (pred[0] == "linear_time") {
      r.prediction_need = PredictionNeed::kLinearTime;
    } else if (pred[0] == "branching_time") {
      r.prediction_need = PredictionNeed::kBranchingTime;
    } else {
      throw std::invalid_argument("unknown prediction need: " + pred[0]);
    }
    if (pred[1] == "irrelevant") {
      r.horizon_class = HorizonClass::kIrrelevant;
    } else if (pred[1] == "bounded") {
      r.horizon_class = HorizonClass::kBounded;
    } else if (pred[1] == "unbounded") {
      r.horizon_class = HorizonClass::kUnbounded;
    } else {
      throw std::invalid_argument("unknown horizon class: " + pred[1]);
    }
    r.validate();
    records.push_back(std::move(r));
  }
  return records;
}

KnowledgeBase load_knowledge_base_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open knowledge base: " + path);
  return load_knowledge_base(in);
}

RequirementSet load_requirements(std::istream & in)
{
  RequirementSet set;
  for (const auto & block : parse_blocks(in)) {
    if (block.kind == "requirement") {
      Requirement r;
      r.id = block.id;
      for (const auto & [key, value] : block.entries) {
        if (key == "property") {
          r.property = value;
        } else if (key == "rationale") {
          r.rationale = value;
        } else if (key == "clause") {
          const auto tokens = split_tokens(value);
          if (tokens.size() < 3) {
            throw std::invalid_argument("clause needs '<field> <op> <args...>': " + value);
          }
          Clause c;
          c.field = tokens[0];
          c.op = tokens[1];
          c.args.assign(tokens.begin() + 2, tokens.end());
          r.clauses.push_back(std::move(c));
        } else {
          throw std::invalid_argument("unknown requirement entry: " + key);
        }
      }
      if (r.clauses.empty()) {
        throw std::invalid_argument("requirement " + r.id + " has no clauses");
      }
      set.requirements.push_back(std::move(r));
    } else if (block.kind == "order") {
      for (const auto & [key, value] : block.entries) {
        if (key != "edge") throw std::invalid_argument("order entries must be 'edge = hi lo'");
        const auto tokens = split_tokens(value);
        if (tokens.size() != 2) {
          throw std::invalid_argument("order edge needs two requirement ids: " + value);
        }
        set.order.edges.emplace_back(tokens[0], tokens[1]);
      }
    } else {
      throw std::invalid_argument("unexpected section in requirements: " + block.kind);
    }
  }
  set.order.validate(set.requirements);
  return set;
}

RequirementSet load_requirements_file(const std::string & path)
{
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open requirements: " + path);
  return load_requirements(in);
}

SuitabilityResult run_suitability(
  const KnowledgeBase & records, const RequirementSet & requirements, bool trace)
{
  (void)trace;
  requirements.order.validate(requirements.requirements);
  std::set<std::string> record_ids;
  for (const auto & r : records) record_ids.insert(r.id);

  std::set<std::string> remaining_reqs;
  for (const auto & r : requirements.requirements) remaining_reqs.insert(r.id);

  const auto find_req = [&](const std::string & id) -> const Requirement & {
    for (const auto & r : requirements.requirements) {
      if (r.id == id) return r;
    }
    throw std::invalid_argument("unknown requirement: " + id);
  };

  SuitabilityResult result;
  std::set<std::string> alive = record_ids;

  while (!remaining_reqs.empty() && !alive.empty()) {
    const auto maximal = requirements.order.maximal(remaining_reqs);
    const std::string chosen = maximal.front();  // deterministic: lexicographic
    const Requirement & req = find_req(chosen);

    EliminationRound round;
    round.requirement_id = chosen;
    for (const auto & record : records) {
      if (!alive.count(record.id)) continue;
      if (!req.satisfied_by(record)) {
        round.removed.push_back(record.id);
      }
    }
    std::sort(round.removed.begin(), round.removed.end());
    for (const auto & id : round.removed) alive.erase(id);
    result.rounds.push_back(std::move(round));
    remaining_reqs.erase(chosen);
  }

  result.survivors.assign(alive.begin(), alive.end());
  std::sort(result.survivors.begin(), result.survivors.end());
  result.no_suitable_metric = result.survivors.empty();
  return result;
}

std::string explain(
  const SuitabilityResult & result, const KnowledgeBase & records,
  const RequirementSet & requirements)
{
  const auto display = [&](const std::string & id) {
    for (const auto & r : records) {
      if (r.id == id) return r.display_name;
    }
    return id;
  };
  const auto property_of = [&](const std::string & id) {
    for (const auto & r : requirements.requirements) {
      if (r.id == id) return r.property;
    }
    return std::string{};
  };

  std::ostringstream out;
  std::size_t remaining = records.size();
  int round_no = 0;
  for (const auto & round : result.rounds) {
    ++round_no;
    remaining -= round.removed.size();
    out << "round " << round_no << ": requirement " << round.requirement_id << " ("
        << property_of(round.requirement_id) << ") removed " << round.removed.size() << ":";
    if (round.removed.empty()) {
      out << " none";
    } else {
      for (std::size_t i = 0; i < round.removed.size(); ++i) {
        out << (i == 0 ? " " : ", ") << display(round.removed[i]);
      }
    }
    out << "; remaining " << remaining << "\n";
  }
  if (result.no_suitable_metric) {
    out << "result: no suitable metric\n";
  } else {
    out << "result: " << result.survivors.size() << " suitable metrics:";
    for (std::size_t i = 0; i < result.survivors.size(); ++i) {
      out << (i == 0 ? " " : ", ") << display(result.survivors[i]);
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace criticality::suitability
