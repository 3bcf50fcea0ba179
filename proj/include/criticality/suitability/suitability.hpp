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

#ifndef CRITICALITY__SUITABILITY__SUITABILITY_HPP_
#define CRITICALITY__SUITABILITY__SUITABILITY_HPP_

#include "criticality/core/types.hpp"

#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace criticality::suitability
{

enum class Level { kLow, kMedium, kHigh, kDepends };

Level level_from_string(const std::string & s);
std::string to_string(Level level);

enum class PredictionNeed { kNone, kLinearTime, kBranchingTime };
enum class HorizonClass { kIrrelevant, kBounded, kUnbounded };

// One knowledge-base entry: the assessed properties of one metric.
struct MetricPropertyRecord
{
  std::string id;
  std::string display_name;
  bool runtime_capable{false};
  bool target_values_exist{false};
  std::set<std::string> subject_types;
  std::set<std::string> scenario_types;
  std::set<std::string> required_inputs;
  Scale output_scale{Scale::kRatio};
  Unit output_unit{Unit::kDimensionless};
  Level reliability{Level::kDepends};
  Level validity{Level::kDepends};
  Level sensitivity{Level::kDepends};
  Level specificity{Level::kDepends};
  PredictionNeed prediction_need{PredictionNeed::kNone};
  HorizonClass horizon_class{HorizonClass::kIrrelevant};

  void validate() const;
};

// Atomic predicate over one record field; a requirement is a conjunction.
struct Clause
{
  std::string field;
  std::string op;
  std::vector<std::string> args;

  bool matches(const MetricPropertyRecord & record) const;
};

struct Requirement
{
  std::string id;
  std::string property;
  std::string rationale;
  std::vector<Clause> clauses;

  bool satisfied_by(const MetricPropertyRecord & record) const;
};

// Strictly-more-important-than edges; the importance order is the transitive
// closure of the edge set.
struct RequirementOrder
{
  std::vector<std::pair<std::string, std::string>> edges;

  void validate(const std::vector<Requirement> & requirements) const;
  std::vector<std::string> maximal(const std::set<std::string> & remaining) const;
};

using KnowledgeBase = std::vector<MetricPropertyRecord>;

struct RequirementSet
{
  std::vector<Requirement> requirements;
  RequirementOrder order;
};

// Metric ids every shipped knowledge base must draw from.
const std::set<std::string> & known_metric_ids();

// Governing knowledge-base record for each implemented metric operation
// (variants share the record of the metric family they belong to).
const std::map<std::string, std::string> & metric_record_aliases();

KnowledgeBase load_knowledge_base(std::istream & in);
KnowledgeBase load_knowledge_base_file(const std::string & path);
RequirementSet load_requirements(std::istream & in);
RequirementSet load_requirements_file(const std::string & path);

struct EliminationRound
{
  std::string requirement_id;
  std::vector<std::string> removed;  // sorted metric ids
};

struct SuitabilityResult
{
  std::vector<std::string> survivors;  // sorted metric ids
  std::vector<EliminationRound> rounds;
  bool no_suitable_metric{false};
};

// Iteratively applies a maximal remaining requirement (lexicographic
// tie-break) and drops failing records until the requirements are exhausted
// or no metric remains.
SuitabilityResult run_suitability(
  const KnowledgeBase & records, const RequirementSet & requirements, bool trace = false);

// Human-readable per-round report.
std::string explain(
  const SuitabilityResult & result, const KnowledgeBase & records,
  const RequirementSet & requirements);

}  // namespace criticality::suitability

#endif  // CRITICALITY__SUITABILITY__SUITABILITY_HPP_
