// Copyright 2026 The IEGauge Authors.
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

#ifndef IEGAUGE_UNITS_HPP_
#define IEGAUGE_UNITS_HPP_

#include <string>
#include <vector>

#include "iegauge/matcher.hpp"
#include "iegauge/task_model.hpp"

namespace iegauge {

struct UnitOptions {
  // RE: drop units whose relation is the no-relation label.
  bool exclude_na = true;
  std::string na_label = "NA";
};

// Projects task-shaped annotations onto the per-task correctness units:
//
//   NER, EE-Trigger   (span; type)
//   RE-RC             (; relation)              NA excluded
//   RE-Triplet        (subject, object; relation)
//   EE-Argument       (argument; role)          within the given event
//   EE-Joint          (argument; event type, role)
//   ABSA-AE/OE/AOE    (term;)
//   ABSA-ALSC         (; polarity)
//   ABSA-AESC         (aspect; polarity)
//   ABSA-Pair         (aspect, opinion;)
//   ABSA-Triplet      (aspect, opinion; polarity)
inline std::vector<ScoringUnit> scoring_units(SubTask task, const Annotations& a,
                                              const UnitOptions& opts = {}) {
  std::vector<ScoringUnit> out;
  auto skip_na = [&](const std::string& rel) { return opts.exclude_na && labels_equal(rel, opts.na_label); };
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kEeTrigger:
      for (const auto& s : a.spans) out.push_back({{s.text}, {s.label}});
      break;
    case SubTask::kAbsaAe:
    case SubTask::kAbsaOe:
      for (const auto& s : a.spans) out.push_back({{s.text}, {}});
      break;
    case SubTask::kReRc:
      for (const auto& t : a.triples) {
        if (!skip_na(t.relation)) out.push_back({{}, {t.relation}});
      }
      break;
    case SubTask::kReTriplet:
      for (const auto& t : a.triples) {
        if (!skip_na(t.relation)) out.push_back({{t.subject.text, t.object.text}, {t.relation}});
      }
      break;
    case SubTask::kEeArgument:
      for (const auto& e : a.events) {
        for (const auto& arg : e.arguments) out.push_back({{arg.span.text}, {arg.role}});
      }
      break;
    case SubTask::kEeJoint:
      for (const auto& e : a.events) {
        for (const auto& arg : e.arguments) {
          out.push_back({{arg.span.text}, {e.event_type, arg.role}});
        }
      }
      break;
    case SubTask::kAbsaAlsc:
      for (const auto& x : a.absa) {
        if (x.polarity) out.push_back({{}, {*x.polarity}});
      }
      break;
    case SubTask::kAbsaAoe:
      for (const auto& x : a.absa) {
        if (x.opinion) out.push_back({{x.opinion->text}, {}});
      }
      break;
    case SubTask::kAbsaAesc:
      for (const auto& x : a.absa) {
        if (x.polarity) out.push_back({{x.aspect.text}, {*x.polarity}});
      }
      break;
    case SubTask::kAbsaPair:
      for (const auto& x : a.absa) {
        if (x.opinion) out.push_back({{x.aspect.text, x.opinion->text}, {}});
      }
      break;
    case SubTask::kAbsaTriplet:
      for (const auto& x : a.absa) {
        if (x.opinion && x.polarity) {
          out.push_back({{x.aspect.text, x.opinion->text}, {*x.polarity}});
        }
      }
      break;
  }
  return out;
}

// Ordered equivalence of unit lists: labels compare case-folded, spans after
// whitespace normalization.
inline bool same_units(const std::vector<ScoringUnit>& a, const std::vector<ScoringUnit>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!internal::unit_labels_equal(a[i], b[i]) || !internal::unit_spans_equal(a[i], b[i])) {
      return false;
    }
  }
  return true;
}

// Label used to bucket a unit into head/tail types: entity, relation or
// event type. Empty for tasks without a typed vocabulary.
inline std::string type_label(SubTask task, const ScoringUnit& unit) {
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kReRc:
    case SubTask::kReTriplet:
    case SubTask::kEeTrigger:
    case SubTask::kEeArgument:
    case SubTask::kEeJoint:
      return unit.labels.empty() ? std::string() : fold_label(unit.labels.front());
    default:
      return {};
  }
}

}  // namespace iegauge

#endif  // IEGAUGE_UNITS_HPP_
