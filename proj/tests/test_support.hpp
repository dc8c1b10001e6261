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

// Shared test fixtures: random instance generators and oracles written
// without the library's own matching or unit code.

#ifndef IEGAUGE_TESTS_TEST_SUPPORT_HPP_
#define IEGAUGE_TESTS_TEST_SUPPORT_HPP_

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "iegauge/task_model.hpp"

namespace iegauge::testing {

// ---------------------------------------------------------------------------
// Schemas

inline LabelSchema test_schema(SubTask task) {
  LabelSchema s;
  s.task = task;
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
      s.labels = {"person", "organization", "location"};
      break;
    case SubTask::kReRc:
    case SubTask::kReTriplet:
      s.labels = {"founded by", "works for", "located in", "sibling of", "NA"};
      s.symmetric = {"sibling of"};
      break;
    case SubTask::kEeTrigger:
      s.labels = {"Attack", "Transport", "Meet"};
      break;
    case SubTask::kEeArgument:
      s.labels = {"attacker", "target", "place"};
      break;
    case SubTask::kEeJoint:
      s.labels = {"Attack", "Transport", "Meet"};
      s.roles = {"attacker", "target", "place"};
      break;
    case SubTask::kAbsaAe:
      s.labels = {"aspect"};
      break;
    case SubTask::kAbsaOe:
      s.labels = {"opinion"};
      break;
    default:
      s.labels = {"positive", "negative", "neutral"};
      break;
  }
  return s;
}

// ---------------------------------------------------------------------------
// Random instances

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t uniform(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  // Distinct phrases of one or two words.
  std::vector<std::string> phrases(std::size_t n) {
    static const std::vector<std::string> kWords = {
        "alpha", "beta", "gamma", "delta", "omega", "kappa", "sigma", "theta",
        "north", "river", "stone", "maple", "harbor", "tower", "garden", "bridge"};
    std::vector<std::string> out;
    while (out.size() < n) {
      std::string p = kWords[uniform(kWords.size())];
      if (coin(0.4)) p += " " + kWords[uniform(kWords.size())];
      if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
  }

  const std::string& pick(const std::vector<std::string>& v) { return v[uniform(v.size())]; }

  // Sentence containing every phrase, separated by filler words.
  std::string sentence_with(const std::vector<std::string>& phrases) {
    static const std::vector<std::string> kFill = {"the", "said", "near", "and", "of", "was"};
    std::string s = "Report";
    for (const auto& p : phrases) s += " " + pick(kFill) + " " + p;
    return s + " today.";
  }

  // A well-formed gold instance of `task` with up to `max_items` items.
  GoldInstance instance(SubTask task, const LabelSchema& schema, std::size_t max_items, const std::string& id) {
    GoldInstance g;
    g.instance_id = id;
    g.task = task;
    const std::size_t n = uniform(max_items + 1);
    std::vector<std::string> labels;
    for (const auto& l : schema.labels) {
      if (!schema.is_na(l) || task == SubTask::kReRc) labels.push_back(l);
    }
    std::vector<std::string> ph = phrases(2 * n + 4);
    auto span = [](const std::string& t, std::string label = "") { return TypedSpan{t, std::move(label), std::nullopt}; };
    switch (task) {
      case SubTask::kNerFlat:
      case SubTask::kNerNested:
      case SubTask::kEeTrigger:
        for (std::size_t i = 0; i < n; ++i) g.gold.spans.push_back(span(ph[i], pick(labels)));
        break;
      case SubTask::kAbsaAe:
      case SubTask::kAbsaOe:
        for (std::size_t i = 0; i < n; ++i) g.gold.spans.push_back(span(ph[i], schema.labels.front()));
        break;
      case SubTask::kReRc:
        g.given = {span(ph[0]), span(ph[1])};
        g.gold.triples.push_back({g.given[0], pick(labels), g.given[1]});
        break;
      case SubTask::kReTriplet:
        for (std::size_t i = 0; i < n; ++i) g.gold.triples.push_back({span(ph[2 * i]), pick(labels), span(ph[2 * i + 1])});
        break;
      case SubTask::kEeArgument: {
        const TypedSpan trigger = span(ph.back(), "Attack");
        g.given = {trigger};
        EventRecord e{trigger, "Attack", {}};
        for (std::size_t i = 0; i < n; ++i) e.arguments.push_back({span(ph[i]), pick(labels)});
        g.gold.events.push_back(e);
        break;
      }
      case SubTask::kEeJoint: {
        std::size_t used = 0;
        while (used < n) {
          EventRecord e{span(ph[ph.size() - 1 - g.gold.events.size()]), pick(labels), {}};
          const std::size_t args = 1 + uniform(std::min<std::size_t>(2, n - used));
          for (std::size_t a = 0; a < args; ++a) e.arguments.push_back({span(ph[used++]), pick(schema.roles)});
          g.gold.events.push_back(e);
        }
        break;
      }
      case SubTask::kAbsaAlsc:
        g.given = {span(ph[0])};
        g.gold.absa.push_back({g.given[0], std::nullopt, pick(labels)});
        break;
      case SubTask::kAbsaAoe:
        g.given = {span(ph.back())};
        for (std::size_t i = 0; i < n; ++i) g.gold.absa.push_back({g.given[0], span(ph[i]), std::nullopt});
        break;
      case SubTask::kAbsaAesc:
        for (std::size_t i = 0; i < n; ++i) g.gold.absa.push_back({span(ph[i]), std::nullopt, pick(labels)});
        break;
      case SubTask::kAbsaPair:
        for (std::size_t i = 0; i < n; ++i) g.gold.absa.push_back({span(ph[2 * i]), span(ph[2 * i + 1]), std::nullopt});
        break;
      case SubTask::kAbsaTriplet:
        for (std::size_t i = 0; i < n; ++i) {
          g.gold.absa.push_back({span(ph[2 * i]), span(ph[2 * i + 1]), pick(labels)});
        }
        break;
    }
    g.sentence = sentence_with(ph);
    dedupe(g.gold);
    return g;
  }

  // A prediction derived from gold by dropping, relabelling, trimming,
  // extending and inventing items. Items stay in the task's shape.
  PredictionSet prediction(const GoldInstance& g, const LabelSchema& schema, std::size_t max_items) {
    PredictionSet p;
    p.instance_id = g.instance_id;
    if (coin(0.05)) {
      p.validity = Validity::Invalid("no parseable tuples");
      return p;
    }
    auto text = [&](const std::string& t) -> std::string {
      switch (uniform(6)) {
        case 0: return "the " + t;
        case 1: return t.size() > 3 ? t.substr(0, t.size() - 2) : t;
        case 2: return pick(phrases(3));
        default: return t;
      }
    };
    auto label = [&](const std::string& l) -> std::string {
      if (coin(0.2)) return pick(schema.labels);
      if (coin(0.1)) return to_lower(l) == l ? std::string(1, static_cast<char>(std::toupper(l[0]))) + l.substr(1) : l;
      return l;
    };
    auto keep = [&] { return coin(0.75); };
    Annotations& a = p.items;
    const Annotations& gold = g.gold;
    for (const auto& s : gold.spans) {
      if (keep()) a.spans.push_back({text(s.text), label(s.label), std::nullopt});
    }
    for (const auto& t : gold.triples) {
      if (keep()) a.triples.push_back({{text(t.subject.text), "", std::nullopt}, label(t.relation), {text(t.object.text), "", std::nullopt}});
    }
    for (const auto& e : gold.events) {
      EventRecord out{{text(e.trigger.text), e.trigger.label, std::nullopt}, label(e.event_type), {}};
      for (const auto& arg : e.arguments) {
        if (keep()) out.arguments.push_back({{text(arg.span.text), "", std::nullopt}, label(arg.role)});
      }
      if (!out.arguments.empty()) a.events.push_back(out);
    }
    for (const auto& x : gold.absa) {
      if (!keep()) continue;
      AbsaTuple y{{text(x.aspect.text), "", std::nullopt}, std::nullopt, std::nullopt};
      if (x.opinion) y.opinion = TypedSpan{text(x.opinion->text), "", std::nullopt};
      if (x.polarity) y.polarity = label(*x.polarity);
      a.absa.push_back(y);
    }
    // Spurious extras, possibly duplicating earlier items.
    const std::size_t extras = uniform(3);
    for (std::size_t i = 0; i < extras; ++i) {
      GoldInstance other = instance(g.task, schema, max_items, g.instance_id);
      if (coin(0.5)) other.gold = gold;
      if (!other.gold.spans.empty()) a.spans.push_back(other.gold.spans[uniform(other.gold.spans.size())]);
      if (!other.gold.triples.empty() && g.task != SubTask::kReRc) a.triples.push_back(other.gold.triples.front());
      if (!other.gold.events.empty() && g.task == SubTask::kEeJoint) a.events.push_back(other.gold.events.front());
      if (!other.gold.absa.empty() && g.task != SubTask::kAbsaAlsc) a.absa.push_back(other.gold.absa.front());
    }
    // Cap at max_items units.
    auto cap = [&](auto& v) {
      if (v.size() > max_items) v.resize(max_items);
    };
    cap(a.spans);
    cap(a.triples);
    cap(a.absa);
    std::size_t budget = max_items;
    std::vector<EventRecord> events;
    for (auto& e : a.events) {
      if (budget == 0) break;
      if (e.arguments.size() > budget) e.arguments.resize(budget);
      budget -= e.arguments.size();
      events.push_back(e);
    }
    a.events = events;
    return p;
  }

 private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Oracles

// Ratcliff/Obershelp matching-character count by direct recursion: longest
// common substring by exhaustive search (first in a, then first in b), then
// both flanks.
inline std::size_t oracle_matches(const std::string& a, const std::string& b) {
  std::size_t best = 0, bi = 0, bj = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t k = 0;
      while (i + k < a.size() && j + k < b.size() && a[i + k] == b[j + k]) ++k;
      if (k > best) {
        best = k;
        bi = i;
        bj = j;
      }
    }
  }
  if (best == 0) return 0;
  return best + oracle_matches(a.substr(0, bi), b.substr(0, bj)) +
         oracle_matches(a.substr(bi + best), b.substr(bj + best));
}

inline double oracle_ratio(const std::string& a, const std::string& b) {
  if (a.empty() && b.empty()) return 1.0;
  return 2.0 * static_cast<double>(oracle_matches(a, b)) / static_cast<double>(a.size() + b.size());
}

inline std::string oracle_norm(const std::string& s) {
  std::string out;
  bool space = false;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = !out.empty();
    } else {
      if (space) out.push_back(' ');
      space = false;
      out.push_back(c);
    }
  }
  return out;
}

inline std::string oracle_fold(const std::string& s) {
  std::string out = oracle_norm(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// One correctness key per unit: span components followed by "|" and the
// folded label components. NA relations are not positives.
struct OracleKey {
  std::vector<std::string> spans;
  std::vector<std::string> labels;
};

inline std::vector<OracleKey> oracle_keys(SubTask task, const Annotations& a) {
  std::vector<OracleKey> out;
  auto na = [](const std::string& r) { return oracle_fold(r) == "na"; };
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kEeTrigger:
      for (const auto& s : a.spans) out.push_back({{oracle_norm(s.text)}, {oracle_fold(s.label)}});
      break;
    case SubTask::kAbsaAe:
    case SubTask::kAbsaOe:
      for (const auto& s : a.spans) out.push_back({{oracle_norm(s.text)}, {}});
      break;
    case SubTask::kReRc:
      for (const auto& t : a.triples) {
        if (!na(t.relation)) out.push_back({{}, {oracle_fold(t.relation)}});
      }
      break;
    case SubTask::kReTriplet:
      for (const auto& t : a.triples) {
        if (!na(t.relation)) {
          out.push_back({{oracle_norm(t.subject.text), oracle_norm(t.object.text)}, {oracle_fold(t.relation)}});
        }
      }
      break;
    case SubTask::kEeArgument:
      for (const auto& e : a.events) {
        for (const auto& x : e.arguments) out.push_back({{oracle_norm(x.span.text)}, {oracle_fold(x.role)}});
      }
      break;
    case SubTask::kEeJoint:
      for (const auto& e : a.events) {
        for (const auto& x : e.arguments) {
          out.push_back({{oracle_norm(x.span.text)}, {oracle_fold(e.event_type), oracle_fold(x.role)}});
        }
      }
      break;
    case SubTask::kAbsaAlsc:
      for (const auto& x : a.absa) {
        if (x.polarity) out.push_back({{}, {oracle_fold(*x.polarity)}});
      }
      break;
    case SubTask::kAbsaAoe:
      for (const auto& x : a.absa) {
        if (x.opinion) out.push_back({{oracle_norm(x.opinion->text)}, {}});
      }
      break;
    case SubTask::kAbsaAesc:
      for (const auto& x : a.absa) {
        if (x.polarity) out.push_back({{oracle_norm(x.aspect.text)}, {oracle_fold(*x.polarity)}});
      }
      break;
    case SubTask::kAbsaPair:
      for (const auto& x : a.absa) {
        if (x.opinion) out.push_back({{oracle_norm(x.aspect.text), oracle_norm(x.opinion->text)}, {}});
      }
      break;
    case SubTask::kAbsaTriplet:
      for (const auto& x : a.absa) {
        if (x.opinion && x.polarity) {
          out.push_back({{oracle_norm(x.aspect.text), oracle_norm(x.opinion->text)}, {oracle_fold(*x.polarity)}});
        }
      }
      break;
  }
  return out;
}

struct OracleCounts {
  std::size_t tp = 0, fp = 0, fn = 0;
};

// Greedy one-to-one enumeration in prediction order. Hard: identical keys.
// Soft: same labels, every span contained one way or the other, weakest
// component ratio above gamma, best-scoring gold (first on ties).
inline OracleCounts oracle_count(const std::vector<OracleKey>& gold, const std::vector<OracleKey>& pred, bool soft,
                                 double gamma) {
  std::vector<bool> used(gold.size(), false);
  OracleCounts c;
  for (const OracleKey& p : pred) {
    long chosen = -1;
    if (!soft) {
      for (std::size_t i = 0; i < gold.size() && chosen < 0; ++i) {
        if (!used[i] && gold[i].spans == p.spans && gold[i].labels == p.labels) chosen = static_cast<long>(i);
      }
    } else {
      double best = -1.0;
      long best_i = -1;
      for (std::size_t i = 0; i < gold.size(); ++i) {
        if (used[i] || gold[i].labels != p.labels || gold[i].spans.size() != p.spans.size()) continue;
        double score = 1.0;
        for (std::size_t k = 0; k < p.spans.size(); ++k) score = std::min(score, oracle_ratio(gold[i].spans[k], p.spans[k]));
        if (score > best) {
          best = score;
          best_i = static_cast<long>(i);
        }
      }
      if (best_i >= 0) {
        bool ok = true;
        const OracleKey& g = gold[static_cast<std::size_t>(best_i)];
        for (std::size_t k = 0; k < p.spans.size(); ++k) {
          ok = ok && (g.spans[k].find(p.spans[k]) != std::string::npos || p.spans[k].find(g.spans[k]) != std::string::npos);
        }
        if (ok && (p.spans.empty() || best > gamma)) chosen = best_i;
      }
    }
    if (chosen >= 0) {
      used[static_cast<std::size_t>(chosen)] = true;
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  c.fn = gold.size() - c.tp;
  return c;
}

}  // namespace iegauge::testing

#endif  // IEGAUGE_TESTS_TEST_SUPPORT_HPP_
