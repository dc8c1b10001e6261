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

// Answer format shared by prompts and the response parser.
//
// Tuple tasks answer with bracketed, quoted, comma-separated tuples:
//
//   NER           ["entity_type", "entity_name"]
//   EE-Trigger    ["event_type", "trigger"]
//   EE-Argument   ["role", "argument"]
//   EE-Joint      ["event_type", "trigger", "role", "argument"]
//   RE-Triplet    ["subject", "relation", "object"]
//   ABSA-AE/OE    ["aspect"] / ["opinion"]
//   ABSA-AOE      ["opinion"]
//   ABSA-AESC     ["aspect", "polarity"]
//   ABSA-Pair     ["aspect", "opinion"]
//   ABSA-Triplet  ["aspect", "opinion", "polarity"]
//
// RE-RC and ABSA-ALSC answer with a single label. An empty answer is "[]".

#ifndef IEGAUGE_PARSER_HPP_
#define IEGAUGE_PARSER_HPP_

#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "iegauge/task_model.hpp"

namespace iegauge {

inline std::size_t tuple_arity(SubTask task) {
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kEeTrigger:
    case SubTask::kEeArgument:
    case SubTask::kAbsaAesc:
    case SubTask::kAbsaPair:
      return 2;
    case SubTask::kReTriplet:
    case SubTask::kAbsaTriplet:
      return 3;
    case SubTask::kEeJoint:
      return 4;
    case SubTask::kAbsaAe:
    case SubTask::kAbsaOe:
    case SubTask::kAbsaAoe:
      return 1;
    default:
      return 0;  // single label
  }
}

// Label of the span items of AE/OE style tasks.
inline std::string span_role_label(SubTask task) {
  return task == SubTask::kAbsaOe ? "opinion" : task == SubTask::kAbsaAe ? "aspect" : "";
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string render_tuple(const std::vector<std::string>& fields) {
  std::string out = "[";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ", ";
    out += quote(fields[i]);
  }
  return out + "]";
}

// Gold answer string in the output format of `task`; labels take their
// display spelling from the schema.
inline std::string render_answer(SubTask task, const Annotations& a, const LabelSchema& schema) {
  if (is_single_label(task)) {
    std::string label;
    if (task == SubTask::kReRc && !a.triples.empty()) label = a.triples.front().relation;
    if (task == SubTask::kAbsaAlsc && !a.absa.empty() && a.absa.front().polarity) {
      label = *a.absa.front().polarity;
    }
    return label.empty() ? "[]" : schema.display(label);
  }
  std::vector<std::vector<std::string>> rows;
  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
    case SubTask::kEeTrigger:
      for (const auto& s : a.spans) rows.push_back({schema.display(s.label), s.text});
      break;
    case SubTask::kAbsaAe:
    case SubTask::kAbsaOe:
      for (const auto& s : a.spans) rows.push_back({s.text});
      break;
    case SubTask::kReTriplet:
      for (const auto& t : a.triples) {
        rows.push_back({t.subject.text, schema.display(t.relation), t.object.text});
      }
      break;
    case SubTask::kEeArgument:
      for (const auto& e : a.events) {
        for (const auto& arg : e.arguments) rows.push_back({schema.display(arg.role), arg.span.text});
      }
      break;
    case SubTask::kEeJoint:
      for (const auto& e : a.events) {
        for (const auto& arg : e.arguments) {
          rows.push_back({schema.display(e.event_type), e.trigger.text, schema.display(arg.role),
                          arg.span.text});
        }
      }
      break;
    case SubTask::kAbsaAoe:
      for (const auto& x : a.absa) {
        if (x.opinion) rows.push_back({x.opinion->text});
      }
      break;
    case SubTask::kAbsaAesc:
      for (const auto& x : a.absa) {
        if (x.polarity) rows.push_back({x.aspect.text, schema.display(*x.polarity)});
      }
      break;
    case SubTask::kAbsaPair:
      for (const auto& x : a.absa) {
        if (x.opinion) rows.push_back({x.aspect.text, x.opinion->text});
      }
      break;
    case SubTask::kAbsaTriplet:
      for (const auto& x : a.absa) {
        if (x.opinion && x.polarity) {
          rows.push_back({x.aspect.text, x.opinion->text, schema.display(*x.polarity)});
        }
      }
      break;
    default:
      break;
  }
  if (rows.empty()) return "[]";
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (i > 0) out += ", ";
    out += render_tuple(rows[i]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

struct Diagnostic {
  std::size_t offset = 0;
  std::string message;
};

struct TupleScan {
  std::vector<std::vector<std::string>> tuples;  // correct arity, in order
  std::vector<Diagnostic> diagnostics;
  std::size_t wrong_arity = 0;
  bool saw_empty_list = false;
};

namespace internal {

inline bool starts_with_at(std::string_view text, std::size_t pos, std::string_view what) {
  return text.substr(pos, what.size()) == what;
}

inline std::size_t skip_spaces(std::string_view text, std::size_t pos) {
  while (pos < text.size() && is_space(text[pos])) ++pos;
  return pos;
}

inline constexpr std::string_view kLeftCurly = "\xE2\x80\x9C";   // “
inline constexpr std::string_view kRightCurly = "\xE2\x80\x9D";  // ”

// Parses one quoted element starting at `pos`. Returns the position after the
// closing quote, or npos.
inline std::size_t parse_quoted(std::string_view text, std::size_t pos, std::string& out) {
  out.clear();
  if (pos >= text.size()) return std::string_view::npos;
  if (text[pos] == '"') {
    for (std::size_t i = pos + 1; i < text.size(); ++i) {
      if (text[i] == '\\' && i + 1 < text.size()) {
        out.push_back(text[++i]);
      } else if (text[i] == '"') {
        return i + 1;
      } else {
        out.push_back(text[i]);
      }
    }
    return std::string_view::npos;
  }
  if (starts_with_at(text, pos, kLeftCurly)) {
    const std::size_t close = text.find(kRightCurly, pos + kLeftCurly.size());
    if (close == std::string_view::npos) return close;
    out = std::string(text.substr(pos + kLeftCurly.size(), close - pos - kLeftCurly.size()));
    return close + kRightCurly.size();
  }
  if (text[pos] == '\'') {
    // A single quote closes only when followed by a separator, so that
    // apostrophes inside the element survive.
    for (std::size_t i = pos + 1; i < text.size(); ++i) {
      if (text[i] != '\'') continue;
      const std::size_t next = skip_spaces(text, i + 1);
      if (next < text.size() && (text[next] == ',' || text[next] == ']')) {
        out = std::string(text.substr(pos + 1, i - pos - 1));
        return i + 1;
      }
    }
    return std::string_view::npos;
  }
  return std::string_view::npos;
}

// Parses a flat list of quoted strings at `pos` (which holds '['). Returns
// the position after ']' or npos.
inline std::size_t parse_list(std::string_view text, std::size_t pos,
                              std::vector<std::string>& fields) {
  fields.clear();
  std::size_t i = skip_spaces(text, pos + 1);
  if (i < text.size() && text[i] == ']') return i + 1;
  std::string element;
  while (i < text.size()) {
    i = parse_quoted(text, i, element);
    if (i == std::string_view::npos) return i;
    fields.push_back(normalize_whitespace(element));
    i = skip_spaces(text, i);
    if (i >= text.size()) return std::string_view::npos;
    if (text[i] == ']') return i + 1;
    if (text[i] != ',') return std::string_view::npos;
    i = skip_spaces(text, i + 1);
  }
  return std::string_view::npos;
}

}  // namespace internal

// Scans free text for bracketed tuples; never throws.
inline TupleScan scan_tuples(std::string_view text, std::size_t arity) {
  TupleScan scan;
  std::vector<std::string> fields;
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '[') {
      ++i;
      continue;
    }
    const std::size_t end = internal::parse_list(text, i, fields);
    if (end == std::string_view::npos) {
      ++i;
      continue;
    }
    if (fields.empty()) {
      scan.saw_empty_list = true;
    } else if (fields.size() == arity) {
      scan.tuples.push_back(fields);
    } else {
      ++scan.wrong_arity;
      scan.diagnostics.push_back({i, "skipped " + std::to_string(fields.size()) +
                                         "-tuple, expected " + std::to_string(arity)});
    }
    i = end;
  }
  return scan;
}

inline std::vector<std::vector<std::string>> parse_tuples(std::string_view text, std::size_t arity) {
  return scan_tuples(text, arity).tuples;
}

// Whole-word, case-insensitive search for schema labels. The label whose
// occurrence ends last wins; at equal end the longer label wins.
inline std::optional<std::string> recover_label(std::string_view text, const LabelSchema& schema) {
  const std::string hay = to_lower(text);
  auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_'; };
  std::optional<std::string> best;
  std::size_t best_end = 0, best_len = 0;
  for (const std::string& label : schema.labels) {
    const std::string needle = fold_label(label);
    if (needle.empty()) continue;
    for (std::size_t pos = hay.find(needle); pos != std::string::npos; pos = hay.find(needle, pos + 1)) {
      const std::size_t end = pos + needle.size();
      const bool left_ok = pos == 0 || !word(needle.front()) || !word(hay[pos - 1]);
      const bool right_ok = end == hay.size() || !word(needle.back()) || !word(hay[end]);
      if (!left_ok || !right_ok) continue;
      if (!best || end > best_end || (end == best_end && needle.size() > best_len)) {
        best = needle;
        best_end = end;
        best_len = needle.size();
      }
    }
  }
  return best;
}

struct ParseOutcome {
  PredictionSet prediction;
  std::vector<Diagnostic> diagnostics;
};

namespace internal {

inline std::string label_or_raw(const std::string& raw, const LabelSchema& schema) {
  return normalize_label(raw, schema).label;
}

inline std::string role_or_raw(const std::string& raw, const LabelSchema& schema) {
  return schema.contains_role(raw) ? fold_label(raw) : raw;
}

inline TypedSpan given_at(const std::vector<TypedSpan>& given, std::size_t i) {
  return i < given.size() ? given[i] : TypedSpan{};
}

inline Annotations items_from_tuples(SubTask task, const std::vector<std::vector<std::string>>& tuples,
                                     const LabelSchema& schema, const std::vector<TypedSpan>& given) {
  Annotations a;
  for (const auto& t : tuples) {
    switch (task) {
      case SubTask::kNerFlat:
      case SubTask::kNerNested:
      case SubTask::kEeTrigger:
        a.spans.push_back({t[1], label_or_raw(t[0], schema), std::nullopt});
        break;
      case SubTask::kAbsaAe:
      case SubTask::kAbsaOe:
        a.spans.push_back({t[0], span_role_label(task), std::nullopt});
        break;
      case SubTask::kReTriplet:
        a.triples.push_back({{t[0], "", std::nullopt}, label_or_raw(t[1], schema), {t[2], "", std::nullopt}});
        break;
      case SubTask::kEeArgument: {
        if (a.events.empty()) {
          const TypedSpan trigger = given_at(given, 0);
          a.events.push_back({trigger, trigger.label, {}});
        }
        a.events.front().arguments.push_back({{t[1], "", std::nullopt}, label_or_raw(t[0], schema)});
        break;
      }
      case SubTask::kEeJoint: {
        const std::string type = label_or_raw(t[0], schema);
        if (a.events.empty() || a.events.back().trigger.text != t[1] ||
            a.events.back().event_type != type) {
          a.events.push_back({{t[1], "", std::nullopt}, type, {}});
        }
        a.events.back().arguments.push_back({{t[3], "", std::nullopt}, role_or_raw(t[2], schema)});
        break;
      }
      case SubTask::kAbsaAoe:
        a.absa.push_back({given_at(given, 0), TypedSpan{t[0], "", std::nullopt}, std::nullopt});
        break;
      case SubTask::kAbsaAesc:
        a.absa.push_back({{t[0], "", std::nullopt}, std::nullopt, label_or_raw(t[1], schema)});
        break;
      case SubTask::kAbsaPair:
        a.absa.push_back({{t[0], "", std::nullopt}, TypedSpan{t[1], "", std::nullopt}, std::nullopt});
        break;
      case SubTask::kAbsaTriplet:
        a.absa.push_back({{t[0], "", std::nullopt}, TypedSpan{t[1], "", std::nullopt},
                          label_or_raw(t[2], schema)});
        break;
      default:
        break;
    }
  }
  // Argument lists of one event may repeat after grouping.
  for (auto& e : a.events) {
    std::vector<EventArgument> kept;
    for (auto& arg : e.arguments) {
      bool seen = false;
      for (const auto& k : kept) {
        seen = seen || (k.span.text == arg.span.text && labels_equal(k.role, arg.role));
      }
      if (!seen) kept.push_back(std::move(arg));
    }
    e.arguments = std::move(kept);
  }
  dedupe(a);
  return a;
}

}  // namespace internal

// Converts one raw response into a typed prediction. Invalidity is purely
// structural: no "[]", no tuple of the task's arity, and (for single-label
// tasks) no recoverable schema label.
inline ParseOutcome parse_response(std::string_view text, SubTask task, const LabelSchema& schema,
                                   const std::vector<TypedSpan>& given = {}) {
  ParseOutcome out;
  PredictionSet& p = out.prediction;

  if (is_single_label(task)) {
    const auto label = recover_label(text, schema);
    if (label) {
      if (task == SubTask::kReRc) {
        p.items.triples.push_back(
            {internal::given_at(given, 0), *label, internal::given_at(given, 1)});
      } else {
        p.items.absa.push_back({internal::given_at(given, 0), std::nullopt, *label});
      }
      return out;
    }
    const TupleScan scan = scan_tuples(text, 1);
    if (scan.saw_empty_list && scan.tuples.empty() && scan.wrong_arity == 0) return out;
    p.validity = Validity::Invalid("no recoverable label");
    out.diagnostics.push_back({0, "no schema label found in response"});
    return out;
  }

  TupleScan scan = scan_tuples(text, tuple_arity(task));
  out.diagnostics = std::move(scan.diagnostics);
  if (!scan.tuples.empty()) {
    p.items = internal::items_from_tuples(task, scan.tuples, schema, given);
    return out;
  }
  if (scan.wrong_arity > 0) {
    p.validity = Validity::Invalid("arity mismatch");
    return out;
  }
  if (scan.saw_empty_list) return out;
  p.validity = Validity::Invalid("no parseable tuples");
  out.diagnostics.push_back({0, "no bracketed tuple found"});
  return out;
}

}  // namespace iegauge

#endif  // IEGAUGE_PARSER_HPP_
