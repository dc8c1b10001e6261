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

// Prompt assembly. A prompt has five parts: the task instruction, the
// candidate labels, the output-format description, optional demonstrations
// and the input sentence. Templates carry the first three as text with
// placeholders:
//
//   {labels}       ["Organization", "Person"]
//   {labels_and}   "Organization", "Person" and "Location"
//   {labels_or}    "Organization", "Person" or "Location"
//   {label_count}  number of labels
//   {roles}        ["Agent", "Place"]           (EE-Joint)
//   {subject} {object}                          (RE-RC given pair)
//   {aspect}                                    (ALSC, AOE given aspect)
//   {event_type} {trigger}                      (EE-Argument given event)
//   {demos}        demonstration block, empty for zero-shot
//   {sentence}     the input sentence

#ifndef IEGAUGE_PROMPT_HPP_
#define IEGAUGE_PROMPT_HPP_

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iegauge/corpus.hpp"
#include "iegauge/json_io.hpp"
#include "iegauge/parser.hpp"
#include "iegauge/rng.hpp"
#include "iegauge/task_model.hpp"
#include "iegauge/units.hpp"

namespace iegauge {

class TemplateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MissingExplanation : public std::runtime_error {
 public:
  explicit MissingExplanation(std::size_t index)
      : std::runtime_error("demo " + std::to_string(index) + " has no explanation"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

class InsufficientData : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::string_view kInputBlock = "{demos}Sentence:\n\"{sentence}\"\nAnswer:";

struct PromptTemplate {
  int template_id = 1;
  SubTask task = SubTask::kNerFlat;
  std::string body;  // full text with placeholders

  static PromptTemplate compose(int id, SubTask task, const std::string& instruction,
                                const std::string& format_clause) {
    return {id, task, instruction + "\n" + format_clause + "\n" + std::string(kInputBlock)};
  }
};

struct DemoExample {
  std::string sentence;
  std::string answer;
  std::optional<std::string> explanation;

  bool operator==(const DemoExample&) const = default;
};

struct DemoGroup {
  int group_id = 1;
  std::vector<DemoExample> examples;

  bool operator==(const DemoGroup&) const = default;
};

namespace internal {

inline std::string join_quoted(const std::vector<std::string>& labels, std::string_view last_sep) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += (i + 1 == labels.size()) ? std::string(last_sep) : std::string(", ");
    out += "\"" + labels[i] + "\"";
  }
  return out;
}

inline std::string json_list(const std::vector<std::string>& labels) {
  std::string out = "[";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i > 0) out += ", ";
    out += "\"" + labels[i] + "\"";
  }
  return out + "]";
}

inline void replace_all(std::string& text, std::string_view key, std::string_view value) {
  for (std::size_t pos = text.find(key); pos != std::string::npos;
       pos = text.find(key, pos + value.size())) {
    text.replace(pos, key.size(), value);
  }
}

inline bool is_ident(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

// First `{identifier}` left in `text` other than `allowed`, if any.
inline std::optional<std::string> unfilled_placeholder(const std::string& text, std::string_view allowed = {}) {
  for (std::size_t open = text.find('{'); open != std::string::npos; open = text.find('{', open + 1)) {
    std::size_t i = open + 1;
    while (i < text.size() && is_ident(text[i])) ++i;
    if (i > open + 1 && i < text.size() && text[i] == '}') {
      std::string slot = text.substr(open, i - open + 1);
      if (slot != allowed) return slot;
    }
  }
  return std::nullopt;
}

inline std::string demo_block(const std::vector<DemoExample>& demos, bool with_explanations) {
  std::string out;
  for (const DemoExample& d : demos) {
    out += "Sentence:\n\"" + d.sentence + "\"\nAnswer:\n";
    if (with_explanations) {
      const std::string suffix = "So, answer: " + d.answer;
      const std::string& e = *d.explanation;
      if (e.size() >= suffix.size() && e.compare(e.size() - suffix.size(), suffix.size(), suffix) == 0) {
        out += e;
      } else {
        out += e + " " + suffix;
      }
    } else {
      out += d.answer;
    }
    out += "\n";
  }
  return out;
}

// Fills every placeholder except {demos}.
inline std::string fill(const PromptTemplate& t, const LabelSchema& schema, const GoldInstance& g,
                        const std::string& demos) {
  if (t.task != g.task) {
    throw TemplateError("template task " + std::string(to_string(t.task)) + " vs instance task " +
                        std::string(to_string(g.task)));
  }
  std::string text = t.body;
  if (text.find("{sentence}") == std::string::npos) throw TemplateError("template lacks {sentence}");
  const auto given = [&](std::size_t i) { return i < g.given.size() ? g.given[i] : TypedSpan{}; };
  // {demos} goes first so that demo text is never rescanned for placeholders.
  const std::size_t demos_at = text.find("{demos}");
  if (demos_at == std::string::npos && !demos.empty()) throw TemplateError("template lacks {demos}");
  std::string head = demos_at == std::string::npos ? text : text.substr(0, demos_at);
  std::string tail = demos_at == std::string::npos ? "" : text.substr(demos_at + 7);
  for (std::string* part : {&head, &tail}) {
    replace_all(*part, "{labels}", json_list(schema.labels));
    replace_all(*part, "{labels_and}", join_quoted(schema.labels, " and "));
    replace_all(*part, "{labels_or}", join_quoted(schema.labels, " or "));
    replace_all(*part, "{label_count}", std::to_string(schema.labels.size()));
    replace_all(*part, "{roles}", json_list(schema.roles));
    if (g.task == SubTask::kReRc) {
      replace_all(*part, "{subject}", given(0).text);
      replace_all(*part, "{object}", given(1).text);
    }
    if (g.task == SubTask::kAbsaAlsc || g.task == SubTask::kAbsaAoe) {
      replace_all(*part, "{aspect}", given(0).text);
    }
    if (g.task == SubTask::kEeArgument) {
      replace_all(*part, "{event_type}", given(0).label);
      replace_all(*part, "{trigger}", given(0).text);
    }
    if (auto missing = unfilled_placeholder(*part, "{sentence}")) {
      throw TemplateError("unfilled slot " + *missing);
    }
  }
  // The sentence is substituted last and only once.
  const std::string marker = "{sentence}";
  std::string* holder = tail.find(marker) != std::string::npos ? &tail : &head;
  holder->replace(holder->find(marker), marker.size(), g.sentence);
  return head + demos + tail;
}

}  // namespace internal

inline std::string render_zero_shot(const PromptTemplate& t, const LabelSchema& schema,
                                    const GoldInstance& g) {
  return internal::fill(t, schema, g, "");
}

inline void check_demos(const DemoGroup& demos, const GoldInstance& g) {
  if (demos.examples.empty()) throw TemplateError("demonstration group is empty");
  for (const DemoExample& d : demos.examples) {
    if (d.sentence == g.sentence) throw TemplateError("demonstration repeats the test sentence");
  }
}

inline std::string render_icl(const PromptTemplate& t, const LabelSchema& schema,
                              const DemoGroup& demos, const GoldInstance& g) {
  check_demos(demos, g);
  return internal::fill(t, schema, g, internal::demo_block(demos.examples, false));
}

// ICL rendering where each demonstration answer follows its explanation as
// "<explanation> So, answer: <answer>".
inline std::string render_cot(const PromptTemplate& t, const LabelSchema& schema,
                              const DemoGroup& demos, const GoldInstance& g) {
  check_demos(demos, g);
  for (std::size_t i = 0; i < demos.examples.size(); ++i) {
    const auto& e = demos.examples[i].explanation;
    if (!e || normalize_whitespace(*e).empty()) throw MissingExplanation(i);
  }
  return internal::fill(t, schema, g, internal::demo_block(demos.examples, true));
}

// `n_groups` groups of `k` distinct training instances. Each group draws from
// its own split of the seeded stream, so groups are independent of each
// other and of n_groups. Training sentences listed in `exclude` (normally the
// test sentences) are never drawn.
inline std::vector<DemoGroup> select_demo_groups(const Corpus& train, std::size_t k,
                                                 std::size_t n_groups, std::uint64_t seed,
                                                 const std::set<std::string>& exclude = {}) {
  std::vector<const GoldInstance*> pool;
  for (const auto& g : train.instances) {
    if (exclude.count(g.sentence) == 0) pool.push_back(&g);
  }
  if (k == 0 || pool.size() < k) {
    throw InsufficientData("need " + std::to_string(k) + " training instances, have " +
                           std::to_string(pool.size()));
  }
  const SplitMix64 root(seed);
  std::vector<DemoGroup> groups;
  for (std::size_t gi = 0; gi < n_groups; ++gi) {
    SplitMix64 rng = root.split(gi);
    DemoGroup group;
    group.group_id = static_cast<int>(gi) + 1;
    for (std::size_t idx : sample_indices(pool.size(), k, rng)) {
      const GoldInstance& inst = *pool[idx];
      group.examples.push_back({inst.sentence, render_answer(train.task, inst.gold, train.schema), {}});
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

// Demo file: JSONL {"sentence", "answer", "explanation"?, "group"?}. Lines
// without "group" belong to group 1.
inline std::vector<DemoGroup> read_demo_groups(std::istream& in) {
  std::map<int, DemoGroup> by_id;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;
    try {
      const Json j = Json::parse(line);
      DemoExample d;
      d.sentence = j.at("sentence").get<std::string>();
      d.answer = j.at("answer").get<std::string>();
      if (j.contains("explanation") && !j["explanation"].is_null()) {
        d.explanation = j["explanation"].get<std::string>();
      }
      const int id = j.value("group", 1);
      by_id[id].group_id = id;
      by_id[id].examples.push_back(std::move(d));
    } catch (const Json::exception& e) {
      throw FormatError("demo line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::vector<DemoGroup> out;
  for (auto& [id, g] : by_id) out.push_back(std::move(g));
  return out;
}

inline void write_demo_groups(std::ostream& out, const std::vector<DemoGroup>& groups) {
  for (const DemoGroup& g : groups) {
    for (const DemoExample& d : g.examples) {
      Json j = {{"group", g.group_id}, {"sentence", d.sentence}, {"answer", d.answer}};
      if (d.explanation) j["explanation"] = *d.explanation;
      out << j.dump() << '\n';
    }
  }
}

// Whether a demo answer parses back to exactly the gold units of `gold`.
inline bool demo_consistent(const DemoExample& d, SubTask task, const Annotations& gold,
                            const LabelSchema& schema, const std::vector<TypedSpan>& given = {}) {
  const ParseOutcome parsed = parse_response(d.answer, task, schema, given);
  if (!parsed.prediction.validity.valid) return false;
  UnitOptions opts;
  opts.na_label = schema.na_label;
  return same_units(scoring_units(task, parsed.prediction.items, opts), scoring_units(task, gold, opts));
}

}  // namespace iegauge

#endif  // IEGAUGE_PROMPT_HPP_
