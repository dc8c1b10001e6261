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

// Micro-F1 scoring. Counts are summed over the corpus before precision,
// recall and F1 are formed; per-instance F1 is never averaged.

#ifndef IEGAUGE_METRICS_HPP_
#define IEGAUGE_METRICS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "iegauge/matcher.hpp"
#include "iegauge/task_model.hpp"
#include "iegauge/units.hpp"

namespace iegauge {

class TaskMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DivisionByZero : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct Counts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  Counts& operator+=(const Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  friend Counts operator+(Counts a, const Counts& b) { return a += b; }
  bool operator==(const Counts&) const = default;
};

struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

inline Prf prf(const Counts& c) {
  Prf out;
  if (c.tp + c.fp > 0) out.precision = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
  if (c.tp + c.fn > 0) out.recall = static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
  if (out.precision + out.recall > 0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

struct ScoreReport {
  Counts counts;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  SubTask task = SubTask::kNerFlat;
  std::string dataset;
  int prompt_variant = 0;
  std::optional<int> demo_group;
  MatchMode match_mode = MatchMode::kHard;
  std::size_t invalid_count = 0;
  std::size_t instance_count = 0;
};

struct ScoringOptions {
  MatchConfig match;
  // RE-RC: the no-relation label is not a positive class.
  bool exclude_na = true;
  std::string na_label = "NA";

  UnitOptions units() const { return {exclude_na, na_label}; }
};

namespace internal {

inline void check_prediction_shape(const GoldInstance& g, const PredictionSet& p) {
  if (!p.instance_id.empty() && p.instance_id != g.instance_id) {
    throw TaskMismatch("prediction for " + p.instance_id + " scored against " + g.instance_id);
  }
  const FieldGroup group = field_group(g.task);
  const Annotations& a = p.items;
  if ((group != FieldGroup::kSpans && !a.spans.empty()) ||
      (group != FieldGroup::kTriples && !a.triples.empty()) ||
      (group != FieldGroup::kEvents && !a.events.empty()) ||
      (group != FieldGroup::kAbsa && !a.absa.empty())) {
    throw TaskMismatch("prediction items do not fit task " + std::string(to_string(g.task)));
  }
}

}  // namespace internal

// TP/FP/FN contribution of one instance. Invalid predictions miss every
// gold unit and add no false positives.
inline Counts score_instance(const GoldInstance& g, const PredictionSet& pred,
                             const ScoringOptions& opts = {}) {
  internal::check_prediction_shape(g, pred);
  const auto gold = scoring_units(g.task, g.gold, opts.units());
  if (!pred.validity.valid) return {0, 0, gold.size()};
  const auto preds = scoring_units(g.task, pred.items, opts.units());
  const Assignment a = assign_matches(gold, preds, opts.match);
  const std::size_t tp = a.matched_count();
  return {tp, preds.size() - tp, gold.size() - tp};
}

inline ScoreReport micro_f1(const std::vector<Counts>& contributions) {
  ScoreReport r;
  for (const Counts& c : contributions) r.counts += c;
  const Prf p = prf(r.counts);
  r.precision = p.precision;
  r.recall = p.recall;
  r.f1 = p.f1;
  return r;
}

// Per type-label counts for head/tail analysis. A matched unit counts under
// its gold label.
inline std::map<std::string, Counts> label_counts(const GoldInstance& g, const PredictionSet& pred,
                                                  const ScoringOptions& opts = {}) {
  internal::check_prediction_shape(g, pred);
  std::map<std::string, Counts> out;
  const auto gold = scoring_units(g.task, g.gold, opts.units());
  if (!pred.validity.valid) {
    for (const auto& u : gold) ++out[type_label(g.task, u)].fn;
    return out;
  }
  const auto preds = scoring_units(g.task, pred.items, opts.units());
  const Assignment a = assign_matches(gold, preds, opts.match);
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const MatchVerdict& v = a.verdicts[i];
    if (v.matched) {
      ++out[type_label(g.task, gold[*v.gold_index])].tp;
    } else {
      ++out[type_label(g.task, preds[i])].fp;
    }
  }
  for (std::size_t gi : a.unmatched_gold) ++out[type_label(g.task, gold[gi])].fn;
  return out;
}

// Scores predictions (keyed by instance id) against every gold instance.
// Absent predictions are an error: a run that skipped instances is not
// comparable.
class MissingPredictions : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

template <typename Lookup>
ScoreReport score_corpus(const std::vector<GoldInstance>& gold, Lookup&& find_prediction,
                         const ScoringOptions& opts = {}) {
  std::vector<Counts> parts;
  parts.reserve(gold.size());
  std::size_t invalid = 0;
  for (const GoldInstance& g : gold) {
    const PredictionSet* p = find_prediction(g.instance_id);
    if (p == nullptr) throw MissingPredictions("no prediction for " + g.instance_id);
    if (!p->validity.valid) ++invalid;
    parts.push_back(score_instance(g, *p, opts));
  }
  ScoreReport r = micro_f1(parts);
  r.invalid_count = invalid;
  r.instance_count = gold.size();
  r.match_mode = opts.match.mode;
  if (!gold.empty()) r.task = gold.front().task;
  return r;
}

struct AggregateReport {
  double max = 0.0;
  double min = 0.0;
  double mean = 0.0;
  double std = 0.0;
  std::size_t n_variants = 0;
};

// Population (divide by n) standard deviation reproduces the published
// max/min/mean/std quadruples; flip to use n - 1.
inline constexpr bool kPopulationStd = true;

inline AggregateReport aggregate(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("aggregate needs at least one value");
  AggregateReport a;
  a.n_variants = values.size();
  a.max = *std::max_element(values.begin(), values.end());
  a.min = *std::min_element(values.begin(), values.end());
  a.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - a.mean) * (v - a.mean);
  const std::size_t denom = kPopulationStd ? values.size() : values.size() - 1;
  a.std = denom == 0 ? 0.0 : std::sqrt(ss / static_cast<double>(denom));
  // Guard the ordering invariant against rounding in the mean.
  a.mean = std::clamp(a.mean, a.min, a.max);
  return a;
}

inline AggregateReport aggregate(const std::vector<ScoreReport>& reports) {
  std::vector<double> f1s;
  f1s.reserve(reports.size());
  for (const auto& r : reports) f1s.push_back(r.f1);
  return aggregate(f1s);
}

// mean F1 as a percentage of the state-of-the-art F1.
inline double ratio_at_sota(double mean_f1, double sota_f1) {
  if (sota_f1 == 0.0) throw DivisionByZero("SOTA F1 is zero");
  return 100.0 * mean_f1 / sota_f1;
}

inline double round_to(double value, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(value * scale) / scale;
}

// "117.7%"
inline std::string format_percent(double percent) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.1f%%", round_to(percent, 1));
  return buf;
}

inline std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_to(value, decimals));
  return buf;
}

}  // namespace iegauge

#endif  // IEGAUGE_METRICS_HPP_
