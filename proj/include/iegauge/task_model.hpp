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

// Canonical value types shared by every stage of an evaluation: the 14
// sub-tasks, label schemas, typed spans, gold instances and parsed
// predictions.

#ifndef IEGAUGE_TASK_MODEL_HPP_
#define IEGAUGE_TASK_MODEL_HPP_

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace iegauge {

enum class SubTask {
  kNerFlat,
  kNerNested,
  kReRc,
  kReTriplet,
  kEeTrigger,
  kEeArgument,
  kEeJoint,
  kAbsaAe,
  kAbsaOe,
  kAbsaAlsc,
  kAbsaAoe,
  kAbsaAesc,
  kAbsaPair,
  kAbsaTriplet,
};

inline constexpr std::array<SubTask, 14> kAllSubTasks = {
    SubTask::kNerFlat,   SubTask::kNerNested,  SubTask::kReRc,
    SubTask::kReTriplet, SubTask::kEeTrigger,  SubTask::kEeArgument,
    SubTask::kEeJoint,   SubTask::kAbsaAe,     SubTask::kAbsaOe,
    SubTask::kAbsaAlsc,  SubTask::kAbsaAoe,    SubTask::kAbsaAesc,
    SubTask::kAbsaPair,  SubTask::kAbsaTriplet,
};

inline constexpr std::array<std::string_view, 14> kSubTaskNames = {
    "NER-Flat",   "NER-Nested", "RE-RC",     "RE-Triplet",  "EE-Trigger",
    "EE-Argument", "EE-Joint",  "ABSA-AE",   "ABSA-OE",     "ABSA-ALSC",
    "ABSA-AOE",   "ABSA-AESC",  "ABSA-Pair", "ABSA-Triplet",
};

inline std::string_view to_string(SubTask task) {
  return kSubTaskNames[static_cast<std::size_t>(task)];
}

inline std::optional<SubTask> parse_subtask(std::string_view name) {
  for (std::size_t i = 0; i < kSubTaskNames.size(); ++i) {
    if (kSubTaskNames[i] == name) return kAllSubTasks[i];
  }
  return std::nullopt;
}

// Which group of GoldInstance fields carries the annotations of a task.
enum class FieldGroup { kSpans, kTriples, kEvents, kAbsa };

inline FieldGroup field_group(SubTask task) {
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kEeTrigger:
    case SubTask::kAbsaAe:
    case SubTask::kAbsaOe:
      return FieldGroup::kSpans;
    case SubTask::kReRc:
    case SubTask::kReTriplet:
      return FieldGroup::kTriples;
    case SubTask::kEeArgument:
    case SubTask::kEeJoint:
      return FieldGroup::kEvents;
    default:
      return FieldGroup::kAbsa;
  }
}

// Tasks whose answer is one label rather than a list of tuples.
inline bool is_single_label(SubTask task) {
  return task == SubTask::kReRc || task == SubTask::kAbsaAlsc;
}

// Number of given targets an instance of `task` must carry.
inline std::size_t expected_given_count(SubTask task) {
  switch (task) {
    case SubTask::kReRc:
      return 2;  // subject, object
    case SubTask::kEeArgument:  // trigger text labelled with event type
    case SubTask::kAbsaAlsc:
    case SubTask::kAbsaAoe:
      return 1;
    default:
      return 0;
  }
}

// Whitespace and case helpers.

inline bool is_space(char c) {
  return std::isspace(static_cast<unsigned char>(c)) != 0;
}

// Collapses internal whitespace runs to one space and trims both ends.
inline std::string normalize_whitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char c : text) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

inline std::string to_lower(std::string_view text) {
  std::string out(text);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

inline std::string fold_label(std::string_view label) {
  return to_lower(normalize_whitespace(label));
}

inline bool labels_equal(std::string_view a, std::string_view b) {
  return fold_label(a) == fold_label(b);
}

// A closed label vocabulary. `labels` keep their display spelling for prompt
// rendering; comparisons always go through fold_label. Event tasks that need
// two vocabularies (EE-Joint: event types and roles) use `roles` for the
// second one.
struct LabelSchema {
  SubTask task = SubTask::kNerFlat;
  std::vector<std::string> labels;
  std::vector<std::string> roles;
  std::string na_label = "NA";  // RE only
  std::vector<std::string> symmetric;  // RE only

  bool contains(std::string_view label) const {
    const std::string folded = fold_label(label);
    return std::any_of(labels.begin(), labels.end(),
                       [&](const std::string& l) { return fold_label(l) == folded; });
  }
  bool contains_role(std::string_view role) const {
    const std::string folded = fold_label(role);
    return std::any_of(roles.begin(), roles.end(),
                       [&](const std::string& l) { return fold_label(l) == folded; });
  }
  bool is_na(std::string_view label) const { return labels_equal(label, na_label); }
  bool is_symmetric(std::string_view label) const {
    return std::any_of(symmetric.begin(), symmetric.end(),
                       [&](const std::string& l) { return labels_equal(l, label); });
  }
  // Display spelling of a label, or the label itself when unknown.
  std::string display(std::string_view label) const {
    const std::string folded = fold_label(label);
    for (const auto* vocab : {&labels, &roles}) {
      for (const std::string& l : *vocab) {
        if (fold_label(l) == folded) return l;
      }
    }
    return std::string(label);
  }

  // Empty when the schema is usable.
  std::vector<std::string> violations() const {
    std::vector<std::string> out;
    if (labels.empty()) out.push_back("labels empty");
    std::set<std::string> seen;
    for (const std::string& l : labels) {
      if (!seen.insert(fold_label(l)).second) out.push_back("duplicate label " + l);
    }
    std::set<std::string> seen_roles;
    for (const std::string& r : roles) {
      if (!seen_roles.insert(fold_label(r)).second) out.push_back("duplicate role " + r);
    }
    if (task == SubTask::kReRc || task == SubTask::kReTriplet) {
      if (!contains(na_label)) out.push_back("RE schema lacks NA label " + na_label);
      for (const std::string& s : symmetric) {
        if (!contains(s)) out.push_back("symmetric label not in schema: " + s);
      }
    }
    if ((task == SubTask::kEeJoint) && roles.empty()) {
      out.push_back("EE-Joint schema needs roles");
    }
    return out;
  }
};

struct LabelCheck {
  bool in_schema = false;
  std::string label;  // canonical (folded) when in schema, raw otherwise

  bool operator==(const LabelCheck&) const = default;
};

inline LabelCheck normalize_label(std::string_view raw, const LabelSchema& schema) {
  if (schema.contains(raw)) return {true, fold_label(raw)};
  return {false, std::string(raw)};
}

struct CharOffset {
  std::size_t start = 0;
  std::size_t end = 0;  // exclusive, in bytes

  bool operator==(const CharOffset&) const = default;
  auto operator<=>(const CharOffset&) const = default;
};

struct TypedSpan {
  std::string text;
  std::string label;
  std::optional<CharOffset> offset;

  bool operator==(const TypedSpan&) const = default;
};

struct RelationTriple {
  TypedSpan subject;
  std::string relation;
  TypedSpan object;

  bool operator==(const RelationTriple&) const = default;
};

struct EventArgument {
  TypedSpan span;
  std::string role;

  bool operator==(const EventArgument&) const = default;
};

struct EventRecord {
  TypedSpan trigger;
  std::string event_type;
  std::vector<EventArgument> arguments;

  bool operator==(const EventRecord&) const = default;
};

struct AbsaTuple {
  TypedSpan aspect;
  std::optional<TypedSpan> opinion;
  std::optional<std::string> polarity;

  bool operator==(const AbsaTuple&) const = default;
};

// Task-shaped annotations. Exactly one vector is populated for a given task;
// used both for gold annotations and for parsed predictions.
struct Annotations {
  std::vector<TypedSpan> spans;
  std::vector<RelationTriple> triples;
  std::vector<EventRecord> events;
  std::vector<AbsaTuple> absa;

  bool empty() const {
    return spans.empty() && triples.empty() && events.empty() && absa.empty();
  }
  bool operator==(const Annotations&) const = default;
};

struct GoldInstance {
  std::string instance_id;
  std::string sentence;
  SubTask task = SubTask::kNerFlat;
  Annotations gold;
  std::vector<TypedSpan> given;

  bool operator==(const GoldInstance&) const = default;
};

struct Validity {
  bool valid = true;
  std::string reason;

  static Validity Valid() { return {}; }
  static Validity Invalid(std::string why) { return {false, std::move(why)}; }
  bool operator==(const Validity&) const = default;
};

struct PredictionSet {
  std::string instance_id;
  int prompt_variant = 1;
  std::optional<int> demo_group;
  Annotations items;
  Validity validity;

  bool operator==(const PredictionSet&) const = default;
};

// Every span in an annotation set, in field order.
inline std::vector<const TypedSpan*> all_spans(const Annotations& a) {
  std::vector<const TypedSpan*> out;
  for (const auto& s : a.spans) out.push_back(&s);
  for (const auto& t : a.triples) {
    out.push_back(&t.subject);
    out.push_back(&t.object);
  }
  for (const auto& e : a.events) {
    out.push_back(&e.trigger);
    for (const auto& arg : e.arguments) out.push_back(&arg.span);
  }
  for (const auto& x : a.absa) {
    out.push_back(&x.aspect);
    if (x.opinion) out.push_back(&*x.opinion);
  }
  return out;
}

namespace internal {

inline bool spans_identical(const TypedSpan& a, const TypedSpan& b) {
  return normalize_whitespace(a.text) == normalize_whitespace(b.text) &&
         labels_equal(a.label, b.label);
}

inline bool triples_identical(const RelationTriple& a, const RelationTriple& b) {
  return spans_identical(a.subject, b.subject) && spans_identical(a.object, b.object) &&
         labels_equal(a.relation, b.relation);
}

inline bool events_identical(const EventRecord& a, const EventRecord& b) {
  if (!spans_identical(a.trigger, b.trigger) || !labels_equal(a.event_type, b.event_type) ||
      a.arguments.size() != b.arguments.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.arguments.size(); ++i) {
    if (!spans_identical(a.arguments[i].span, b.arguments[i].span) ||
        !labels_equal(a.arguments[i].role, b.arguments[i].role)) {
      return false;
    }
  }
  return true;
}

inline bool absa_identical(const AbsaTuple& a, const AbsaTuple& b) {
  if (!spans_identical(a.aspect, b.aspect)) return false;
  if (a.opinion.has_value() != b.opinion.has_value()) return false;
  if (a.opinion && !spans_identical(*a.opinion, *b.opinion)) return false;
  if (a.polarity.has_value() != b.polarity.has_value()) return false;
  return !a.polarity || labels_equal(*a.polarity, *b.polarity);
}

template <typename T, typename Eq>
void dedupe_in_place(std::vector<T>& items, Eq eq) {
  std::vector<T> kept;
  kept.reserve(items.size());
  for (auto& item : items) {
    bool seen = std::any_of(kept.begin(), kept.end(),
                            [&](const T& k) { return eq(k, item); });
    if (!seen) kept.push_back(std::move(item));
  }
  items = std::move(kept);
}

}  // namespace internal

// Collapses repeated items (text + label equality after normalization),
// keeping the first occurrence.
inline void dedupe(Annotations& a) {
  internal::dedupe_in_place(a.spans, internal::spans_identical);
  internal::dedupe_in_place(a.triples, internal::triples_identical);
  internal::dedupe_in_place(a.events, internal::events_identical);
  internal::dedupe_in_place(a.absa, internal::absa_identical);
}

// Lists every broken GoldInstance invariant; empty when the instance is
// well formed.
inline std::vector<std::string> validate_instance(const GoldInstance& g) {
  std::vector<std::string> out;
  if (g.instance_id.empty()) out.push_back("instance_id empty");
  if (g.sentence.empty()) out.push_back("sentence empty");

  const FieldGroup group = field_group(g.task);
  const bool mismatch = (group != FieldGroup::kSpans && !g.gold.spans.empty()) ||
                        (group != FieldGroup::kTriples && !g.gold.triples.empty()) ||
                        (group != FieldGroup::kEvents && !g.gold.events.empty()) ||
                        (group != FieldGroup::kAbsa && !g.gold.absa.empty());
  if (mismatch) out.push_back("field group mismatch for task " + std::string(to_string(g.task)));

  if (g.given.size() != expected_given_count(g.task)) {
    out.push_back("given has " + std::to_string(g.given.size()) + " targets, task " +
                  std::string(to_string(g.task)) + " expects " +
                  std::to_string(expected_given_count(g.task)));
  }
  if (g.task == SubTask::kReRc && g.gold.triples.size() > 1) {
    out.push_back("RE-RC instance carries more than one relation");
  }
  if (g.task == SubTask::kAbsaAlsc && g.gold.absa.size() > 1) {
    out.push_back("ABSA-ALSC instance carries more than one polarity");
  }
  if (g.task == SubTask::kEeArgument && g.gold.events.size() > 1) {
    out.push_back("EE-Argument instance carries more than one event");
  }

  auto check_span = [&](const TypedSpan& span, const std::string& where) {
    if (span.text.empty()) {
      out.push_back(where + " text empty");
      return;
    }
    if (g.sentence.find(span.text) == std::string::npos) {
      out.push_back(where + " not substring of sentence");
    }
    if (span.offset) {
      const auto [start, end] = *span.offset;
      if (start > end || end > g.sentence.size() ||
          g.sentence.compare(start, end - start, span.text) != 0) {
        out.push_back(where + " offset does not select its text");
      }
    }
  };
  for (std::size_t i = 0; i < g.gold.spans.size(); ++i) {
    check_span(g.gold.spans[i], "gold_spans[" + std::to_string(i) + "]");
  }
  for (std::size_t i = 0; i < g.gold.triples.size(); ++i) {
    const std::string p = "gold_triples[" + std::to_string(i) + "]";
    check_span(g.gold.triples[i].subject, p + ".subject");
    check_span(g.gold.triples[i].object, p + ".object");
  }
  for (std::size_t i = 0; i < g.gold.events.size(); ++i) {
    const std::string p = "gold_events[" + std::to_string(i) + "]";
    check_span(g.gold.events[i].trigger, p + ".trigger");
    for (std::size_t j = 0; j < g.gold.events[i].arguments.size(); ++j) {
      check_span(g.gold.events[i].arguments[j].span,
                 p + ".arguments[" + std::to_string(j) + "]");
    }
  }
  for (std::size_t i = 0; i < g.gold.absa.size(); ++i) {
    const std::string p = "gold_absa[" + std::to_string(i) + "]";
    check_span(g.gold.absa[i].aspect, p + ".aspect");
    if (g.gold.absa[i].opinion) check_span(*g.gold.absa[i].opinion, p + ".opinion");
  }
  for (std::size_t i = 0; i < g.given.size(); ++i) {
    check_span(g.given[i], "given[" + std::to_string(i) + "]");
  }
  return out;
}

// Labels of an instance that the schema does not define.
inline std::vector<std::string> out_of_schema_labels(const GoldInstance& g,
                                                     const LabelSchema& schema) {
  std::vector<std::string> out;
  auto need = [&](const std::string& label) {
    if (!schema.contains(label)) out.push_back(label);
  };
  auto need_role = [&](const std::string& role) {
    if (!schema.contains_role(role)) out.push_back(role);
  };
  switch (g.task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kEeTrigger:
      for (const auto& s : g.gold.spans) need(s.label);
      break;
    case SubTask::kReRc:
    case SubTask::kReTriplet:
      for (const auto& t : g.gold.triples) need(t.relation);
      break;
    case SubTask::kEeArgument:
      for (const auto& e : g.gold.events) {
        for (const auto& a : e.arguments) need(a.role);
      }
      break;
    case SubTask::kEeJoint:
      for (const auto& e : g.gold.events) {
        need(e.event_type);
        for (const auto& a : e.arguments) need_role(a.role);
      }
      break;
    case SubTask::kAbsaAlsc:
    case SubTask::kAbsaAesc:
    case SubTask::kAbsaTriplet:
      for (const auto& x : g.gold.absa) {
        if (x.polarity) need(*x.polarity);
      }
      break;
    default:
      break;
  }
  return out;
}

}  // namespace iegauge

#endif  // IEGAUGE_TASK_MODEL_HPP_
