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

#ifndef IEGAUGE_CORPUS_HPP_
#define IEGAUGE_CORPUS_HPP_

#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iegauge/json_io.hpp"
#include "iegauge/rng.hpp"
#include "iegauge/task_model.hpp"

namespace iegauge {

enum class Split { kTrain, kDev, kTest };

inline std::string_view to_string(Split split) {
  switch (split) {
    case Split::kTrain:
      return "train";
    case Split::kDev:
      return "dev";
    default:
      return "test";
  }
}

struct Corpus {
  std::string dataset_name;
  SubTask task = SubTask::kNerFlat;
  LabelSchema schema;
  std::vector<GoldInstance> instances;
  Split split = Split::kTest;

  bool operator==(const Corpus& o) const {
    return dataset_name == o.dataset_name && task == o.task && instances == o.instances &&
           split == o.split;
  }
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A line of a gold file that breaks an invariant. `line` is 1-based.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::size_t line, const std::string& violation)
      : std::runtime_error("line " + std::to_string(line) + ": " + violation),
        line_(line),
        violation_(violation) {}
  std::size_t line() const { return line_; }
  const std::string& violation() const { return violation_; }

 private:
  std::size_t line_;
  std::string violation_;
};

struct LoadOptions {
  bool lenient = false;  // skip bad lines instead of aborting
  Split split = Split::kTest;
  std::string dataset_name;
};

// Whitespace-normalizes the sentence and every span text of an instance.
// Offsets are dropped when normalization changed the sentence, since they no
// longer index it.
inline void normalize_instance(GoldInstance& g) {
  std::string normalized = normalize_whitespace(g.sentence);
  const bool changed = normalized != g.sentence;
  g.sentence = std::move(normalized);
  auto fix = [&](TypedSpan& s) {
    s.text = normalize_whitespace(s.text);
    if (changed) s.offset.reset();
  };
  for (auto& s : g.gold.spans) fix(s);
  for (auto& t : g.gold.triples) {
    fix(t.subject);
    fix(t.object);
  }
  for (auto& e : g.gold.events) {
    fix(e.trigger);
    for (auto& a : e.arguments) fix(a.span);
  }
  for (auto& x : g.gold.absa) {
    fix(x.aspect);
    if (x.opinion) fix(*x.opinion);
  }
  for (auto& s : g.given) fix(s);
}

// Parses a gold JSONL stream. `warnings` receives one message per skipped
// line in lenient mode.
inline Corpus load_corpus(std::istream& in, SubTask task, const LabelSchema& schema,
                          const LoadOptions& opts = {}, std::vector<std::string>* warnings = nullptr) {
  if (auto bad = schema.violations(); !bad.empty()) throw SchemaError(0, "schema: " + bad.front());
  Corpus c;
  c.dataset_name = opts.dataset_name;
  c.task = task;
  c.schema = schema;
  c.split = opts.split;
  std::set<std::string> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (normalize_whitespace(line).empty()) continue;
    std::string violation;
    GoldInstance g;
    try {
      g = gold_from_json(Json::parse(line));
      normalize_instance(g);
      if (g.task != task) {
        violation = "task " + std::string(to_string(g.task)) + " differs from corpus task " +
                    std::string(to_string(task));
      } else if (auto v = validate_instance(g); !v.empty()) {
        violation = v.front();
      } else if (auto labels = out_of_schema_labels(g, schema); !labels.empty()) {
        violation = "label outside schema: " + labels.front();
      } else if (ids.count(g.instance_id) != 0) {
        violation = "duplicate instance_id " + g.instance_id;
      }
    } catch (const Json::exception& e) {
      violation = std::string("malformed JSON: ") + e.what();
    } catch (const FormatError& e) {
      violation = e.what();
    }
    if (!violation.empty()) {
      if (!opts.lenient) throw SchemaError(line_no, violation);
      if (warnings != nullptr) {
        warnings->push_back("line " + std::to_string(line_no) + " skipped: " + violation);
      }
      continue;
    }
    ids.insert(g.instance_id);
    c.instances.push_back(std::move(g));
  }
  return c;
}

inline Corpus load_corpus(const std::string& path, SubTask task, const LabelSchema& schema,
                          LoadOptions opts = {}, std::vector<std::string>* warnings = nullptr) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  if (opts.dataset_name.empty()) opts.dataset_name = path;
  return load_corpus(in, task, schema, opts, warnings);
}

inline void write_corpus(std::ostream& out, const Corpus& c) {
  for (const auto& g : c.instances) out << to_json(g).dump() << '\n';
}

inline LabelSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  try {
    return schema_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

// At most `cap` instances chosen uniformly at random under `seed`, original
// order preserved. Corpora at or below the cap are returned unchanged.
inline Corpus sample_cap(const Corpus& c, std::size_t cap, std::uint64_t seed) {
  if (cap < 1) throw std::invalid_argument("cap must be >= 1");
  if (c.instances.size() <= cap) return c;
  SplitMix64 rng(seed);
  Corpus out = c;
  out.instances.clear();
  for (std::size_t i : sample_indices(c.instances.size(), cap, rng)) {
    out.instances.push_back(c.instances[i]);
  }
  return out;
}

inline constexpr std::size_t kDefaultSampleCap = 3000;

struct TypeFrequencyTable {
  std::map<std::string, std::size_t> counts;  // folded label -> count

  std::size_t total() const {
    std::size_t t = 0;
    for (const auto& [label, n] : counts) t += n;
    return t;
  }
  bool operator==(const TypeFrequencyTable&) const = default;
};

// Occurrences of each label over the gold items of a training corpus. Every
// schema label appears, with zero when unseen. Items are the label carriers:
// spans (NER, EE-Trigger), relations, events (EE-Joint), arguments
// (EE-Argument) and polarity tuples.
inline TypeFrequencyTable count_type_frequencies(const Corpus& train) {
  TypeFrequencyTable t;
  for (const auto& l : train.schema.labels) t.counts[fold_label(l)] = 0;
  auto bump = [&](const std::string& label) {
    if (!label.empty()) ++t.counts[fold_label(label)];
  };
  for (const auto& g : train.instances) {
    for (const auto& s : g.gold.spans) bump(s.label);
    for (const auto& r : g.gold.triples) bump(r.relation);
    for (const auto& e : g.gold.events) {
      if (train.task == SubTask::kEeArgument) {
        for (const auto& a : e.arguments) bump(a.role);
      } else {
        bump(e.event_type);
      }
    }
    for (const auto& x : g.gold.absa) {
      if (x.polarity) bump(*x.polarity);
    }
  }
  return t;
}

inline void write_frequency_csv(std::ostream& out, const TypeFrequencyTable& t) {
  out << "label,count\n";
  for (const auto& [label, n] : t.counts) out << label << ',' << n << '\n';
}

inline TypeFrequencyTable read_frequency_csv(std::istream& in) {
  TypeFrequencyTable t;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      header = false;
      if (line.rfind("label,", 0) == 0) continue;
    }
    if (normalize_whitespace(line).empty()) continue;
    const auto comma = line.rfind(',');
    if (comma == std::string::npos) throw FormatError("frequency row without comma: " + line);
    try {
      t.counts[fold_label(line.substr(0, comma))] = std::stoull(line.substr(comma + 1));
    } catch (const std::exception&) {
      throw FormatError("bad count in row: " + line);
    }
  }
  return t;
}

}  // namespace iegauge

#endif  // IEGAUGE_CORPUS_HPP_
