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

// Robustness analyses: invalid-output ratio, irrelevant-context injection,
// head/tail type frequency splits and subject/object order swaps.

#ifndef IEGAUGE_ROBUSTNESS_HPP_
#define IEGAUGE_ROBUSTNESS_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "iegauge/corpus.hpp"
#include "iegauge/metrics.hpp"
#include "iegauge/parser.hpp"
#include "iegauge/rng.hpp"
#include "iegauge/task_model.hpp"

namespace iegauge {

// ---------------------------------------------------------------------------
// Invalid output

struct InvalidRatio {
  double avg_invalid = 0.0;  // mean over prompt variants
  double ratio = 0.0;        // percentage of sentences
  std::size_t n_sentences = 0;
};

inline InvalidRatio invalid_ratio(const std::vector<std::size_t>& invalid_per_variant,
                                  std::size_t n_sentences) {
  if (invalid_per_variant.empty()) throw std::invalid_argument("no prompt variants");
  if (n_sentences == 0) throw DivisionByZero("no sentences");
  InvalidRatio r;
  r.n_sentences = n_sentences;
  double sum = 0.0;
  for (std::size_t c : invalid_per_variant) sum += static_cast<double>(c);
  r.avg_invalid = sum / static_cast<double>(invalid_per_variant.size());
  r.ratio = 100.0 * r.avg_invalid / static_cast<double>(n_sentences);
  return r;
}

// One vector of outcomes per prompt variant, all over the same instances.
inline InvalidRatio invalid_ratio(const std::vector<std::vector<ParseOutcome>>& per_variant) {
  if (per_variant.empty()) throw std::invalid_argument("no prompt variants");
  std::vector<std::size_t> counts;
  const std::size_t n = per_variant.front().size();
  for (const auto& variant : per_variant) {
    if (variant.size() != n) throw std::invalid_argument("prompt variants cover different instances");
    std::size_t invalid = 0;
    for (const auto& o : variant) invalid += o.prediction.validity.valid ? 0 : 1;
    counts.push_back(invalid);
  }
  return invalid_ratio(counts, n);
}

// ---------------------------------------------------------------------------
// Irrelevant context

class PoolExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Pool sentences usable around `g`: different from it and free of every
// target span text.
inline std::vector<std::string> filter_context_pool(const GoldInstance& g,
                                                    const std::vector<std::string>& pool) {
  std::vector<std::string> targets;
  for (const TypedSpan* s : all_spans(g.gold)) targets.push_back(s->text);
  for (const TypedSpan& s : g.given) targets.push_back(s.text);
  std::vector<std::string> out;
  for (const std::string& raw : pool) {
    const std::string s = normalize_whitespace(raw);
    if (s.empty() || s == g.sentence) continue;
    bool clean = true;
    for (const std::string& t : targets) {
      if (!t.empty() && s.find(t) != std::string::npos) {
        clean = false;
        break;
      }
    }
    if (clean) out.push_back(s);
  }
  return out;
}

// Surrounds the sentence with two distinct pool sentences:
// prefix + " " + sentence + " " + suffix. Span offsets shift with the prefix.
inline GoldInstance inject_irrelevant_context(const GoldInstance& g,
                                              const std::vector<std::string>& pool,
                                              std::uint64_t seed) {
  const std::vector<std::string> clean = filter_context_pool(g, pool);
  if (clean.size() < 2) {
    throw PoolExhausted("only " + std::to_string(clean.size()) + " usable context sentences for " +
                        g.instance_id);
  }
  SplitMix64 rng(seed);
  const std::size_t first = rng.below(clean.size());
  std::size_t second = rng.below(clean.size() - 1);
  if (second >= first) ++second;

  GoldInstance out = g;
  const std::string& prefix = clean[first];
  out.sentence = prefix + " " + g.sentence + " " + clean[second];
  const std::size_t shift = prefix.size() + 1;
  auto move = [shift](TypedSpan& s) {
    if (s.offset) s.offset = CharOffset{s.offset->start + shift, s.offset->end + shift};
  };
  for (auto& s : out.gold.spans) move(s);
  for (auto& t : out.gold.triples) {
    move(t.subject);
    move(t.object);
  }
  for (auto& e : out.gold.events) {
    move(e.trigger);
    for (auto& a : e.arguments) move(a.span);
  }
  for (auto& x : out.gold.absa) {
    move(x.aspect);
    if (x.opinion) move(*x.opinion);
  }
  for (auto& s : out.given) move(s);
  return out;
}

// ---------------------------------------------------------------------------
// Head / tail types

// Counts equal to K go to head: the two published rules ("more than K" for
// head, "less than K" for tail) leave K itself unassigned.
inline constexpr bool kBoundaryIsHead = true;

struct HeadTailSplit {
  std::size_t k = 1;
  std::set<std::string> head;
  std::set<std::string> tail;

  bool operator==(const HeadTailSplit&) const = default;
};

inline HeadTailSplit split_head_tail(const TypeFrequencyTable& freq, std::size_t k) {
  if (k < 1) throw std::invalid_argument("K must be >= 1");
  HeadTailSplit s;
  s.k = k;
  for (const auto& [label, count] : freq.counts) {
    if (count == 0) continue;
    const bool head = kBoundaryIsHead ? count >= k : count > k;
    (head ? s.head : s.tail).insert(fold_label(label));
  }
  return s;
}

struct HeadTailScore {
  Counts head;
  Counts tail;
  Counts unassigned;  // labels absent from the training table
  double head_f1 = 0.0;
  double tail_f1 = 0.0;
  std::optional<double> ratio;  // percentage; absent when head F1 is zero
};

inline double head_tail_ratio(double head_f1, double tail_f1) {
  if (head_f1 == 0.0) throw DivisionByZero("head F1 is zero");
  return 100.0 * tail_f1 / head_f1;
}

inline HeadTailScore score_by_split(const std::map<std::string, Counts>& per_label,
                                    const HeadTailSplit& split) {
  HeadTailScore s;
  for (const auto& [label, c] : per_label) {
    const std::string l = fold_label(label);
    if (split.head.count(l) != 0) {
      s.head += c;
    } else if (split.tail.count(l) != 0) {
      s.tail += c;
    } else {
      s.unassigned += c;
    }
  }
  s.head_f1 = prf(s.head).f1;
  s.tail_f1 = prf(s.tail).f1;
  if (s.head_f1 > 0.0) s.ratio = head_tail_ratio(s.head_f1, s.tail_f1);
  return s;
}

// ---------------------------------------------------------------------------
// Entity order

// Reverses the given (subject, object) pair of an RE-RC instance whose gold
// relation is asymmetric; the swapped instance expects the no-relation label.
// Symmetric-relation and no-relation instances yield nothing.
inline std::optional<GoldInstance> swap_entity_order(const GoldInstance& g, const LabelSchema& schema) {
  if (g.task != SubTask::kReRc || g.given.size() != 2 || g.gold.triples.size() != 1) return std::nullopt;
  const std::string& relation = g.gold.triples.front().relation;
  if (schema.is_na(relation) || schema.is_symmetric(relation)) return std::nullopt;
  GoldInstance out = g;
  std::swap(out.given[0], out.given[1]);
  out.gold.triples.front() = {out.given[0], schema.na_label, out.given[1]};
  return out;
}

struct OrderSwapReport {
  std::size_t n_pairs = 0;        // pairs with a valid post-swap response
  std::size_t changed_to_na = 0;
  std::size_t unchanged = 0;      // still a relation after the swap
  std::size_t same_label = 0;     // of `unchanged`: identical to the pre-swap label
  std::size_t invalid = 0;        // post-swap response unparseable; not in n_pairs
};

namespace internal {

// Relation of an RE-RC prediction; an empty answer reads as no relation.
inline std::string predicted_relation(const PredictionSet& p, const LabelSchema& schema) {
  if (p.items.triples.empty()) return fold_label(schema.na_label);
  return fold_label(p.items.triples.front().relation);
}

}  // namespace internal

inline OrderSwapReport order_sensitivity(const std::vector<PredictionSet>& before,
                                         const std::vector<PredictionSet>& after,
                                         const LabelSchema& schema) {
  if (before.size() != after.size()) throw std::invalid_argument("swap predictions not aligned");
  OrderSwapReport r;
  for (std::size_t i = 0; i < after.size(); ++i) {
    if (before[i].instance_id != after[i].instance_id) {
      throw std::invalid_argument("swap predictions not aligned at " + before[i].instance_id);
    }
    if (!after[i].validity.valid) {
      ++r.invalid;
      continue;
    }
    ++r.n_pairs;
    const std::string post = internal::predicted_relation(after[i], schema);
    if (schema.is_na(post)) {
      ++r.changed_to_na;
    } else {
      ++r.unchanged;
      if (before[i].validity.valid && post == internal::predicted_relation(before[i], schema)) {
        ++r.same_label;
      }
    }
  }
  return r;
}

struct OrderSwapSummary {
  double pairs = 0.0;
  double changed_mean = 0.0;
  double unchanged_mean = 0.0;
  double invalid_mean = 0.0;
  double changed_pct = 0.0;
  double unchanged_pct = 0.0;
};

// Means over prompt variants; percentages are shares of the valid pairs.
inline OrderSwapSummary summarize_order_swaps(const std::vector<OrderSwapReport>& variants) {
  if (variants.empty()) throw std::invalid_argument("no prompt variants");
  OrderSwapSummary s;
  const double n = static_cast<double>(variants.size());
  for (const auto& v : variants) {
    s.pairs += static_cast<double>(v.n_pairs + v.invalid) / n;
    s.changed_mean += static_cast<double>(v.changed_to_na) / n;
    s.unchanged_mean += static_cast<double>(v.unchanged) / n;
    s.invalid_mean += static_cast<double>(v.invalid) / n;
  }
  const double valid = s.changed_mean + s.unchanged_mean;
  if (valid > 0) {
    s.changed_pct = 100.0 * s.changed_mean / valid;
    s.unchanged_pct = 100.0 * s.unchanged_mean / valid;
  }
  return s;
}

}  // namespace iegauge

#endif  // IEGAUGE_ROBUSTNESS_HPP_
