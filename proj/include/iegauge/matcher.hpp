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

// Hard and soft span matching.
//
// Soft matching follows the containment-plus-similarity rule: among the gold
// candidates of the same label, take the one most similar to the prediction;
// the prediction matches when one span contains the other and the similarity
// is strictly greater than gamma. Similarity defaults to the gestalt
// (Ratcliff/Obershelp) ratio 2*M/(|a|+|b|).

#ifndef IEGAUGE_MATCHER_HPP_
#define IEGAUGE_MATCHER_HPP_

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "iegauge/task_model.hpp"

namespace iegauge {

namespace internal {

struct Block {
  std::size_t a = 0;
  std::size_t b = 0;
  std::size_t size = 0;
};

// Longest common substring of a[alo,ahi) and b[blo,bhi). Among equally long
// blocks the one starting earliest in `a` wins, then earliest in `b`.
inline Block longest_match(std::string_view a, std::size_t alo, std::size_t ahi,
                           std::string_view b, std::size_t blo, std::size_t bhi,
                           std::vector<std::size_t>& prev, std::vector<std::size_t>& cur) {
  Block best{alo, blo, 0};
  std::fill(prev.begin() + blo, prev.begin() + bhi + 1, 0);
  for (std::size_t i = alo; i < ahi; ++i) {
    cur[blo] = 0;
    for (std::size_t j = blo; j < bhi; ++j) {
      // cur[j + 1] = length of the common run ending at a[i], b[j].
      cur[j + 1] = a[i] == b[j] ? prev[j] + 1 : 0;
      if (cur[j + 1] > best.size) {
        best = {i + 1 - cur[j + 1], j + 1 - cur[j + 1], cur[j + 1]};
      }
    }
    std::swap(prev, cur);
  }
  return best;
}

}  // namespace internal

// Total characters matched by recursively taking the longest common
// substring and recursing on the unmatched left and right remainders.
inline std::size_t gestalt_matches(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  struct Range {
    std::size_t alo, ahi, blo, bhi;
  };
  std::vector<Range> todo{{0, a.size(), 0, b.size()}};
  std::size_t matched = 0;
  while (!todo.empty()) {
    const Range r = todo.back();
    todo.pop_back();
    if (r.alo >= r.ahi || r.blo >= r.bhi) continue;
    const internal::Block m = internal::longest_match(a, r.alo, r.ahi, b, r.blo, r.bhi, prev, cur);
    if (m.size == 0) continue;
    matched += m.size;
    todo.push_back({r.alo, m.a, r.blo, m.b});
    todo.push_back({m.a + m.size, r.ahi, m.b + m.size, r.bhi});
  }
  return matched;
}

// Gestalt ratio in [0, 1]. Two empty strings compare as 1.0.
inline double gestalt_similarity(std::string_view a, std::string_view b) {
  const std::size_t total = a.size() + b.size();
  if (total == 0) return 1.0;
  return 2.0 * static_cast<double>(gestalt_matches(a, b)) / static_cast<double>(total);
}

// 1 - levenshtein(a, b) / max(|a|, |b|). Offered for sensitivity analysis.
inline double levenshtein_similarity(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 1.0;
  std::vector<std::size_t> row(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) row[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diag = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t up = row[j];
      row[j] = std::min({row[j] + 1, row[j - 1] + 1, diag + (a[i - 1] == b[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return 1.0 - static_cast<double>(row[b.size()]) / static_cast<double>(longest);
}

enum class MatchMode { kHard, kSoft };
enum class SimilarityKind { kGestalt, kLevenshtein };

inline std::string_view to_string(MatchMode mode) {
  return mode == MatchMode::kHard ? "hard" : "soft";
}

struct MatchConfig {
  double gamma = 0.5;
  MatchMode mode = MatchMode::kSoft;
  SimilarityKind similarity = SimilarityKind::kGestalt;

  MatchConfig() = default;
  MatchConfig(double g, MatchMode m, SimilarityKind s = SimilarityKind::kGestalt)
      : gamma(g), mode(m), similarity(s) {
    if (!(gamma >= 0.0 && gamma <= 1.0)) {
      throw std::invalid_argument("gamma must lie in [0, 1]");
    }
  }

  double similar(std::string_view gold, std::string_view pred) const {
    return similarity == SimilarityKind::kGestalt ? gestalt_similarity(gold, pred)
                                                  : levenshtein_similarity(gold, pred);
  }
};

struct MatchVerdict {
  bool matched = false;
  std::optional<std::size_t> gold_index;  // best candidate; always set when matched
  double similarity = 0.0;
};

// The unit of correctness of a sub-task: the span components and label
// components that must all agree for a prediction to count.
struct ScoringUnit {
  std::vector<std::string> spans;
  std::vector<std::string> labels;

  bool operator==(const ScoringUnit&) const = default;
};

inline ScoringUnit unit_of(const TypedSpan& span) {
  return {{span.text}, {span.label}};
}

namespace internal {

inline bool unit_labels_equal(const ScoringUnit& a, const ScoringUnit& b) {
  if (a.labels.size() != b.labels.size()) return false;
  for (std::size_t i = 0; i < a.labels.size(); ++i) {
    if (!labels_equal(a.labels[i], b.labels[i])) return false;
  }
  return true;
}

inline bool unit_spans_equal(const ScoringUnit& a, const ScoringUnit& b) {
  if (a.spans.size() != b.spans.size()) return false;
  for (std::size_t i = 0; i < a.spans.size(); ++i) {
    if (normalize_whitespace(a.spans[i]) != normalize_whitespace(b.spans[i])) return false;
  }
  return true;
}

inline bool contains_either(std::string_view x, std::string_view y) {
  return x.find(y) != std::string_view::npos || y.find(x) != std::string_view::npos;
}

// Weakest-component similarity; 1 for label-only units.
inline double unit_similarity(const ScoringUnit& gold, const ScoringUnit& pred,
                              const MatchConfig& cfg) {
  double score = 1.0;
  for (std::size_t i = 0; i < gold.spans.size() && i < pred.spans.size(); ++i) {
    score = std::min(score, cfg.similar(normalize_whitespace(gold.spans[i]),
                                        normalize_whitespace(pred.spans[i])));
  }
  return gold.spans.size() == pred.spans.size() ? score : 0.0;
}

inline bool unit_contained(const ScoringUnit& gold, const ScoringUnit& pred) {
  if (gold.spans.size() != pred.spans.size()) return false;
  for (std::size_t i = 0; i < gold.spans.size(); ++i) {
    if (!contains_either(normalize_whitespace(gold.spans[i]), normalize_whitespace(pred.spans[i]))) {
      return false;
    }
  }
  return true;
}

}  // namespace internal

// Exact label and span-text equality against any unclaimed gold unit.
inline MatchVerdict hard_match_unit(const std::vector<ScoringUnit>& gold, const ScoringUnit& pred,
                                    const std::vector<bool>* claimed = nullptr) {
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (claimed != nullptr && (*claimed)[i]) continue;
    if (internal::unit_labels_equal(gold[i], pred) && internal::unit_spans_equal(gold[i], pred)) {
      return {true, i, 1.0};
    }
  }
  return {};
}

// Soft matching over label-filtered candidates. For compound units every
// span component must satisfy containment and the weakest component's
// similarity is compared against gamma. `respect_labels` = false drops the
// label filter (used by error analysis).
inline MatchVerdict soft_match_unit(const std::vector<ScoringUnit>& gold, const ScoringUnit& pred,
                                    const MatchConfig& cfg,
                                    const std::vector<bool>* claimed = nullptr,
                                    bool respect_labels = true) {
  MatchVerdict verdict;
  double best = -1.0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (claimed != nullptr && (*claimed)[i]) continue;
    if (respect_labels && !internal::unit_labels_equal(gold[i], pred)) continue;
    if (gold[i].spans.size() != pred.spans.size()) continue;
    const double score = internal::unit_similarity(gold[i], pred, cfg);
    if (score > best) {  // strict: lowest index wins ties
      best = score;
      verdict.gold_index = i;
    }
  }
  if (!verdict.gold_index) return verdict;
  const ScoringUnit& target = gold[*verdict.gold_index];
  verdict.similarity = best;
  if (pred.spans.empty()) {
    verdict.matched = true;  // nothing to relax: label equality decides
  } else {
    verdict.matched = internal::unit_contained(target, pred) && best > cfg.gamma;
  }
  return verdict;
}

inline MatchVerdict match_unit(const std::vector<ScoringUnit>& gold, const ScoringUnit& pred,
                               const MatchConfig& cfg,
                               const std::vector<bool>* claimed = nullptr) {
  return cfg.mode == MatchMode::kHard ? hard_match_unit(gold, pred, claimed)
                                      : soft_match_unit(gold, pred, cfg, claimed);
}

// Span-level entry points.

inline std::vector<ScoringUnit> units_of(const std::vector<TypedSpan>& spans) {
  std::vector<ScoringUnit> out;
  out.reserve(spans.size());
  for (const auto& s : spans) out.push_back(unit_of(s));
  return out;
}

inline MatchVerdict hard_match(const std::vector<TypedSpan>& gold, const TypedSpan& pred) {
  return hard_match_unit(units_of(gold), unit_of(pred));
}

// `sentence` is accepted for parity with the algorithm's inputs; matching
// itself only compares surface strings.
inline MatchVerdict soft_match(std::string_view /*sentence*/, const std::vector<TypedSpan>& gold,
                               const TypedSpan& pred, const MatchConfig& cfg) {
  if (cfg.mode != MatchMode::kSoft) throw std::invalid_argument("soft_match needs Soft mode");
  return soft_match_unit(units_of(gold), unit_of(pred), cfg);
}

struct Assignment {
  std::vector<MatchVerdict> verdicts;  // one per prediction
  std::vector<std::size_t> unmatched_gold;

  std::size_t matched_count() const {
    return static_cast<std::size_t>(
        std::count_if(verdicts.begin(), verdicts.end(), [](const MatchVerdict& v) { return v.matched; }));
  }
};

// One-to-one greedy assignment in prediction order: a gold unit claimed by an
// earlier prediction is no longer a candidate for later ones.
inline Assignment assign_matches(const std::vector<ScoringUnit>& gold,
                                 const std::vector<ScoringUnit>& preds, const MatchConfig& cfg) {
  Assignment out;
  std::vector<bool> claimed(gold.size(), false);
  out.verdicts.reserve(preds.size());
  for (const ScoringUnit& p : preds) {
    MatchVerdict v = match_unit(gold, p, cfg, &claimed);
    if (v.matched) claimed[*v.gold_index] = true;
    out.verdicts.push_back(v);
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!claimed[i]) out.unmatched_gold.push_back(i);
  }
  return out;
}

inline Assignment assign_matches(const std::vector<TypedSpan>& gold,
                                 const std::vector<TypedSpan>& preds, const MatchConfig& cfg) {
  return assign_matches(units_of(gold), units_of(preds), cfg);
}

}  // namespace iegauge

#endif  // IEGAUGE_MATCHER_HPP_
