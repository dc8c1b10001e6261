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

// Run orchestration: manifests, the prompt-variant sweep (render, complete,
// parse) and the persisted artifacts of a run.

#ifndef IEGAUGE_PIPELINE_HPP_
#define IEGAUGE_PIPELINE_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "iegauge/corpus.hpp"
#include "iegauge/gateway.hpp"
#include "iegauge/json_io.hpp"
#include "iegauge/matcher.hpp"
#include "iegauge/metrics.hpp"
#include "iegauge/parser.hpp"
#include "iegauge/prompt.hpp"
#include "iegauge/rng.hpp"
#include "iegauge/templates.hpp"

namespace iegauge {

inline constexpr char kToolkitVersion[] = "0.1.0";
inline constexpr std::size_t kDemoGroups = 5;

enum class PromptMode { kZeroShot, kIcl, kCot };

inline std::string_view to_string(PromptMode m) {
  switch (m) {
    case PromptMode::kIcl: return "icl";
    case PromptMode::kCot: return "cot";
    default: return "zero-shot";
  }
}

inline PromptMode parse_prompt_mode(std::string_view s) {
  if (s == "zero-shot" || s == "zero") return PromptMode::kZeroShot;
  if (s == "icl") return PromptMode::kIcl;
  if (s == "cot") return PromptMode::kCot;
  throw std::invalid_argument("unknown prompt mode " + std::string(s));
}

struct ModelParams {
  std::string name = "gpt-3.5-turbo";
  double temperature = 0.0;
  int max_tokens = 512;
};

struct RunManifest {
  std::string run_id;
  std::string dataset;         // display name
  std::string dataset_path;
  std::string dataset_sha256;
  std::string schema_path;
  std::string schema_sha256;
  SubTask task = SubTask::kNerFlat;
  PromptMode mode = PromptMode::kZeroShot;
  std::string templates_dir;
  std::vector<int> template_ids;
  std::string demos_path;      // explicit demo file, or
  std::string train_path;      // training corpus to draw groups from
  std::size_t shots = 0;
  std::vector<int> demo_groups;
  std::uint64_t demo_seed = 0;
  std::size_t cap = kDefaultSampleCap;
  std::uint64_t sample_seed = 0;
  std::string match = "both";
  double gamma = 0.5;
  ModelParams model;
  std::string toolkit_version = kToolkitVersion;
  std::string created_at;
};

inline Json to_json(const RunManifest& m) {
  return Json{
      {"run_id", m.run_id},
      {"dataset", {{"name", m.dataset}, {"path", m.dataset_path}, {"sha256", m.dataset_sha256}}},
      {"schema", {{"path", m.schema_path}, {"sha256", m.schema_sha256}}},
      {"task", std::string(to_string(m.task))},
      {"prompting",
       {{"mode", std::string(to_string(m.mode))},
        {"templates_dir", m.templates_dir},
        {"template_ids", m.template_ids}}},
      {"demos",
       {{"path", m.demos_path},
        {"train_path", m.train_path},
        {"shots", m.shots},
        {"groups", m.demo_groups},
        {"seed", m.demo_seed}}},
      {"sampling", {{"cap", m.cap}, {"seed", m.sample_seed}, {"rng", std::string(kRngName)}}},
      {"match", {{"mode", m.match}, {"gamma", m.gamma}}},
      {"model",
       {{"name", m.model.name}, {"temperature", m.model.temperature}, {"max_tokens", m.model.max_tokens}}},
      {"toolkit_version", m.toolkit_version},
      {"created_at", m.created_at},
  };
}

inline RunManifest manifest_from_json(const Json& j) {
  try {
    RunManifest m;
    m.run_id = j.at("run_id").get<std::string>();
    m.dataset = j.at("dataset").at("name").get<std::string>();
    m.dataset_path = j.at("dataset").at("path").get<std::string>();
    m.dataset_sha256 = j.at("dataset").value("sha256", std::string());
    m.schema_path = j.at("schema").at("path").get<std::string>();
    m.schema_sha256 = j.at("schema").value("sha256", std::string());
    const auto task = parse_subtask(j.at("task").get<std::string>());
    if (!task) throw FormatError("unknown task in manifest");
    m.task = *task;
    const Json& p = j.at("prompting");
    m.mode = parse_prompt_mode(p.at("mode").get<std::string>());
    m.templates_dir = p.value("templates_dir", std::string());
    m.template_ids = p.at("template_ids").get<std::vector<int>>();
    const Json& d = j.at("demos");
    m.demos_path = d.value("path", std::string());
    m.train_path = d.value("train_path", std::string());
    m.shots = d.value("shots", std::size_t{0});
    m.demo_groups = d.value("groups", std::vector<int>{});
    m.demo_seed = d.value("seed", std::uint64_t{0});
    m.cap = j.at("sampling").at("cap").get<std::size_t>();
    m.sample_seed = j.at("sampling").at("seed").get<std::uint64_t>();
    m.match = j.at("match").at("mode").get<std::string>();
    m.gamma = j.at("match").at("gamma").get<double>();
    m.model.name = j.at("model").at("name").get<std::string>();
    m.model.temperature = j.at("model").at("temperature").get<double>();
    m.model.max_tokens = j.at("model").at("max_tokens").get<int>();
    m.toolkit_version = j.value("toolkit_version", std::string());
    m.created_at = j.value("created_at", std::string());
    return m;
  } catch (const Json::exception& e) {
    throw FormatError(std::string("manifest: ") + e.what());
  }
}

// Digest of everything but the id and the timestamp.
inline std::string compute_run_id(const RunManifest& m) {
  Json j = to_json(m);
  j.erase("run_id");
  j.erase("created_at");
  return sha256_hex(j.dump()).substr(0, 16);
}

inline std::string file_sha256(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return sha256_hex(s.str());
}

// ---------------------------------------------------------------------------
// Artifacts

struct RunPaths {
  std::filesystem::path dir;
  std::string run_id;

  std::filesystem::path file(std::string_view stem, std::string_view ext) const {
    return dir / (std::string(stem) + "-" + run_id + std::string(ext));
  }
  std::filesystem::path manifest() const { return file("manifest", ".json"); }
  std::filesystem::path responses() const { return file("responses", ".jsonl"); }
  std::filesystem::path predictions() const { return file("predictions", ".jsonl"); }
};

// Writes the manifest unless this run id already has one.
inline void write_manifest(const RunPaths& paths, const RunManifest& m) {
  std::filesystem::create_directories(paths.dir);
  if (std::filesystem::exists(paths.manifest())) return;
  std::ofstream out(paths.manifest());
  out << to_json(m).dump(2) << '\n';
  if (!out) throw IoError("cannot write " + paths.manifest().string());
}

inline RunManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return manifest_from_json(Json::parse(in));
  } catch (const Json::exception& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Sweep

struct Variant {
  int template_id = 1;
  std::optional<int> demo_group;

  bool operator<(const Variant& o) const {
    return std::pair(template_id, demo_group.value_or(0)) < std::pair(o.template_id, o.demo_group.value_or(0));
  }
  bool operator==(const Variant&) const = default;
};

inline std::string variant_name(const Variant& v) {
  std::string s = "p" + std::to_string(v.template_id);
  if (v.demo_group) s += "-g" + std::to_string(*v.demo_group);
  return s;
}

struct ResponseRow {
  std::string instance_id;
  Variant variant;
  std::string request_key;
  std::string response_text;
  bool truncated = false;
};

struct VariantOutput {
  Variant variant;
  std::vector<ResponseRow> responses;     // in corpus order
  std::vector<PredictionSet> predictions;  // in corpus order
};

struct RunOutput {
  std::vector<VariantOutput> variants;
  std::vector<std::string> errors;  // "<stage> <variant> <instance>: <message>"
};

struct RunPlan {
  std::vector<PromptTemplate> templates;
  PromptMode mode = PromptMode::kZeroShot;
  std::vector<DemoGroup> demo_groups;  // unused in zero-shot mode
  ModelParams model;
  std::size_t max_in_flight = 4;
};

inline std::string render_prompt(const RunPlan& plan, const PromptTemplate& t, const LabelSchema& schema,
                                 const DemoGroup* group, const GoldInstance& g) {
  switch (plan.mode) {
    case PromptMode::kIcl: return render_icl(t, schema, *group, g);
    case PromptMode::kCot: return render_cot(t, schema, *group, g);
    default: return render_zero_shot(t, schema, g);
  }
}

// Every template (times every demo group in few-shot modes) over every
// instance. Failed items are reported in `errors` and left out of the
// variant's predictions; completed ones stay in the cache for a resume.
inline RunOutput run_sweep(const Corpus& corpus, const RunPlan& plan, Gateway& gateway) {
  struct Job {
    std::size_t variant;
    std::size_t instance;
  };
  RunOutput out;
  std::vector<CompletionRequest> requests;
  std::vector<Job> jobs;
  std::vector<const DemoGroup*> groups;
  if (plan.mode == PromptMode::kZeroShot) {
    groups.push_back(nullptr);
  } else {
    if (plan.demo_groups.empty()) throw std::invalid_argument("few-shot run without demonstration groups");
    for (const auto& g : plan.demo_groups) groups.push_back(&g);
  }
  for (const PromptTemplate& t : plan.templates) {
    for (const DemoGroup* group : groups) {
      VariantOutput v;
      v.variant.template_id = t.template_id;
      if (group != nullptr) v.variant.demo_group = group->group_id;
      const std::size_t vi = out.variants.size();
      for (std::size_t i = 0; i < corpus.instances.size(); ++i) {
        const GoldInstance& g = corpus.instances[i];
        try {
          requests.push_back({plan.model.name, render_prompt(plan, t, corpus.schema, group, g),
                              plan.model.temperature, plan.model.max_tokens});
          jobs.push_back({vi, i});
        } catch (const std::exception& e) {
          out.errors.push_back("render " + variant_name(v.variant) + " " + g.instance_id + ": " + e.what());
        }
      }
      out.variants.push_back(std::move(v));
    }
  }

  const auto results = gateway.run_batch(requests, plan.max_in_flight);
  for (std::size_t j = 0; j < jobs.size(); ++j) {
    VariantOutput& v = out.variants[jobs[j].variant];
    const GoldInstance& g = corpus.instances[jobs[j].instance];
    const auto& item = results[j];
    if (!item.record) {
      out.errors.push_back("complete " + variant_name(v.variant) + " " + g.instance_id + ": " + item.error);
      continue;
    }
    v.responses.push_back({g.instance_id, v.variant, item.record->request_key, item.record->response_text,
                           item.record->truncated});
    ParseOutcome parsed = parse_response(item.record->response_text, corpus.task, corpus.schema, g.given);
    parsed.prediction.instance_id = g.instance_id;
    parsed.prediction.prompt_variant = v.variant.template_id;
    parsed.prediction.demo_group = v.variant.demo_group;
    v.predictions.push_back(std::move(parsed.prediction));
  }
  return out;
}

inline Json to_json(const ResponseRow& r) {
  return Json{{"instance_id", r.instance_id},
              {"prompt_variant", r.variant.template_id},
              {"demo_group", r.variant.demo_group ? Json(*r.variant.demo_group) : Json(nullptr)},
              {"request_key", r.request_key},
              {"response_text", r.response_text},
              {"truncated", r.truncated}};
}

inline void write_run_outputs(const RunPaths& paths, const RunOutput& run, SubTask task) {
  std::filesystem::create_directories(paths.dir);
  std::ofstream responses(paths.responses());
  std::ofstream predictions(paths.predictions());
  for (const VariantOutput& v : run.variants) {
    for (const auto& r : v.responses) responses << to_json(r).dump() << '\n';
    for (const auto& p : v.predictions) predictions << to_json(p, task).dump() << '\n';
  }
  if (!responses || !predictions) throw IoError("cannot write run outputs to " + paths.dir.string());
}

// Predictions grouped by variant, variants in (template, group) order.
inline std::map<Variant, std::vector<PredictionSet>> read_predictions(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingPredictions("no predictions at " + path.string());
  std::map<Variant, std::vector<PredictionSet>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (normalize_whitespace(line).empty()) continue;
    PredictionSet p = prediction_from_json(Json::parse(line));
    out[{p.prompt_variant, p.demo_group}].push_back(std::move(p));
  }
  if (out.empty()) throw MissingPredictions("no predictions at " + path.string());
  return out;
}

inline std::map<Variant, std::vector<PredictionSet>> predictions_by_variant(const RunOutput& run) {
  std::map<Variant, std::vector<PredictionSet>> out;
  for (const auto& v : run.variants) out[v.variant] = v.predictions;
  return out;
}

// ---------------------------------------------------------------------------
// Scoring a run

struct VariantScore {
  Variant variant;
  ScoreReport report;
};

inline std::vector<VariantScore> score_variants(const Corpus& corpus,
                                                const std::map<Variant, std::vector<PredictionSet>>& preds,
                                                const ScoringOptions& opts) {
  std::vector<VariantScore> out;
  for (const auto& [variant, list] : preds) {
    std::map<std::string, const PredictionSet*> by_id;
    for (const auto& p : list) by_id[p.instance_id] = &p;
    ScoreReport r = score_corpus(
        corpus.instances,
        [&](const std::string& id) -> const PredictionSet* {
          auto it = by_id.find(id);
          return it == by_id.end() ? nullptr : it->second;
        },
        opts);
    r.dataset = corpus.dataset_name;
    r.prompt_variant = variant.template_id;
    r.demo_group = variant.demo_group;
    out.push_back({variant, r});
  }
  return out;
}

}  // namespace iegauge

#endif  // IEGAUGE_PIPELINE_HPP_
