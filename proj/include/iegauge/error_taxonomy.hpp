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

// Error taxonomy. Every predicted unit that is not a hard match gets one of
// five span/type error kinds; unmatched gold units and unparseable responses
// add MissingSpans and Other.

#ifndef IEGAUGE_ERROR_TAXONOMY_HPP_
#define IEGAUGE_ERROR_TAXONOMY_HPP_

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "iegauge/matcher.hpp"
#include "iegauge/metrics.hpp"
#include "iegauge/task_model.hpp"
#include "iegauge/units.hpp"

namespace iegauge {

enum class ErrorType {
  kMissingSpans,
  kUnmentionedSpans,
  kUnannotatedSpans,
  kIncorrectSpanOffsets,
  kUndefinedTypes,
  kIncorrectTypes,
  kOther,
};

inline constexpr std::array<ErrorType, 7> kAllErrorTypes = {
    ErrorType::kMissingSpans,        ErrorType::kUnmentionedSpans, ErrorType::kUnannotatedSpans,
    ErrorType::kIncorrectSpanOffsets, ErrorType::kUndefinedTypes,   ErrorType::kIncorrectTypes,
    ErrorType::kOther,
};

inline std::string_view to_string(ErrorType t) {
  switch (t) {
    case ErrorType::kMissingSpans: return "Missing spans";
    case ErrorType::kUnmentionedSpans: return "Unmentioned spans";
    case ErrorType::kUnannotatedSpans: return "Unannotated spans";
    case ErrorType::kIncorrectSpanOffsets: return "Incorrect span offsets";
    case ErrorType::kUndefinedTypes: return "Undefined types";
    case ErrorType::kIncorrectTypes: return "Incorrect types";
    case ErrorType::kOther: return "Other";
  }
  return "Other";
}

inline std::ostream& operator<<(std::ostream& os, ErrorType t) { return os << to_string(t); }

using ErrorCounts = std::map<ErrorType, std::size_t>;

// True when every label of the unit belongs to the task's vocabulary.
inline bool unit_labels_in_schema(SubTask task, const ScoringUnit& unit, const LabelSchema& schema) {
  for (std::size_t i = 0; i < unit.labels.size(); ++i) {
    const bool role = task == SubTask::kEeJoint && i == 1;
    if (!(role ? schema.contains_role(unit.labels[i]) : schema.contains(unit.labels[i]))) return false;
  }
  return true;
}

// Decision tree over one predicted unit: Unmentioned, Undefined types,
// Incorrect types / offsets, then Unannotated as the residual. When a span is
// close to gold units of both the same and a different label, the more
// similar candidate decides; ties go to Incorrect types.
inline std::optional<ErrorType> classify_unit_error(SubTask task, std::string_view sentence,
                                                    const std::vector<ScoringUnit>& gold,
                                                    const ScoringUnit& p, const LabelSchema& schema,
                                                    const MatchConfig& cfg) {
  if (hard_match_unit(gold, p).matched) return std::nullopt;
  for (const std::string& s : p.spans) {
    if (sentence.find(normalize_whitespace(s)) == std::string_view::npos) {
      return ErrorType::kUnmentionedSpans;
    }
  }
  if (!unit_labels_in_schema(task, p, schema)) {
    if (soft_match_unit(gold, p, cfg, nullptr, /*respect_labels=*/false).matched) {
      return ErrorType::kUndefinedTypes;
    }
    return ErrorType::kUnannotatedSpans;
  }
  std::vector<ScoringUnit> same;
  std::vector<ScoringUnit> different;
  for (const ScoringUnit& g : gold) {
    (internal::unit_labels_equal(g, p) ? same : different).push_back(g);
  }
  const MatchVerdict by_type = soft_match_unit(different, p, cfg, nullptr, false);
  const MatchVerdict by_span = soft_match_unit(same, p, cfg, nullptr, false);
  if (by_type.matched && (!by_span.matched || by_type.similarity >= by_span.similarity)) {
    return ErrorType::kIncorrectTypes;
  }
  if (by_span.matched) return ErrorType::kIncorrectSpanOffsets;
  return ErrorType::kUnannotatedSpans;
}

// Span-level form.
inline std::optional<ErrorType> classify_prediction_error(std::string_view sentence,
                                                          const std::vector<TypedSpan>& gold,
                                                          const TypedSpan& p, const LabelSchema& schema,
                                                          const MatchConfig& cfg) {
  return classify_unit_error(schema.task, sentence, units_of(gold), unit_of(p), schema, cfg);
}

inline ErrorCounts classify_instance(const GoldInstance& g, const PredictionSet& pred,
                                     const LabelSchema& schema, const MatchConfig& cfg,
                                     const UnitOptions& units = {}) {
  ErrorCounts out;
  const auto gold = scoring_units(g.task, g.gold, units);
  if (!pred.validity.valid) {
    out[ErrorType::kOther] += 1;
    if (!gold.empty()) out[ErrorType::kMissingSpans] += gold.size();
    return out;
  }
  const auto preds = scoring_units(g.task, pred.items, units);
  for (const ScoringUnit& p : preds) {
    if (auto e = classify_unit_error(g.task, g.sentence, gold, p, schema, cfg)) ++out[*e];
  }
  const Assignment a = assign_matches(gold, preds, cfg);
  if (!a.unmatched_gold.empty()) out[ErrorType::kMissingSpans] += a.unmatched_gold.size();
  return out;
}

struct ErrorLedger {
  ErrorCounts counts;              // every type present, possibly 0
  std::size_t total = 0;
  std::map<ErrorType, double> ratios;  // percentages, one decimal
};

inline ErrorLedger ledger(const std::vector<ErrorCounts>& parts) {
  ErrorLedger l;
  for (ErrorType t : kAllErrorTypes) l.counts[t] = 0;
  for (const auto& part : parts) {
    for (const auto& [t, n] : part) l.counts[t] += n;
  }
  for (const auto& [t, n] : l.counts) l.total += n;
  for (ErrorType t : kAllErrorTypes) {
    l.ratios[t] = l.total == 0 ? 0.0
                               : round_to(100.0 * static_cast<double>(l.counts[t]) /
                                              static_cast<double>(l.total),
                                          1);
  }
  return l;
}

// error_type,count,ratio with a closing Total row.
inline void write_ledger_csv(const ErrorLedger& l, std::ostream& os) {
  os << "error_type,count,ratio\n";
  for (ErrorType t : kAllErrorTypes) {
    os << to_string(t) << ',' << l.counts.at(t) << ',' << format_fixed(l.ratios.at(t), 1) << "%\n";
  }
  os << "Total," << l.total << ",100.0%\n";
}

// label,value pairs for plotting.
inline void write_ledger_chart(const ErrorLedger& l, std::ostream& os) {
  os << "label,value\n";
  for (ErrorType t : kAllErrorTypes) os << to_string(t) << ',' << format_fixed(l.ratios.at(t), 1) << '\n';
}

}  // namespace iegauge

#endif  // IEGAUGE_ERROR_TAXONOMY_HPP_
