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

// iegauge: ingest, prompt, run, score and analyse LLM information
// extraction outputs.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "iegauge/http_transport.hpp"
#include "iegauge/reports.hpp"

namespace fs = std::filesystem;

namespace iegauge {
namespace {

struct Flags {
  // Global.
  std::string dataset;
  std::string task;
  std::string match = "both";
  double gamma = 0.5;
  std::uint64_t seed = 0;
  std::size_t cap = kDefaultSampleCap;
  std::string templates;
  std::string demos;
  double sota = 0.0;
  std::size_t k = 2000;

  // Shared by several commands.
  std::string schema;
  std::string name;
  std::string out;
  std::string manifest;
  std::string mode = "zero-shot";
  std::string train;
  std::size_t shots = 5;
  std::vector<int> variants;
  std::string model = ModelParams{}.name;
  double temperature = 0.0;
  int max_tokens = 512;
  std::size_t max_in_flight = 4;
  bool lenient = false;
  std::string freq;
  std::string pool;
  std::size_t limit = 0;

  CLI::App* app = nullptr;
  bool given(const std::string& flag) const { return app->get_option(flag)->count() > 0; }
  std::optional<double> sota_f1() const { return given("--sota") ? std::optional<double>(sota) : std::nullopt; }
};

SubTask require_task(const std::string& name) {
  const auto t = parse_subtask(name);
  if (!t) throw std::invalid_argument("unknown task '" + name + "'");
  return *t;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw IoError("cannot write " + path.string());
  std::cout << "wrote " << path.string() << '\n';
}

template <typename Writer>
std::string render(Writer&& w) {
  std::ostringstream os;
  w(os);
  return os.str();
}

RunManifest manifest_from_flags(const Flags& f) {
  if (f.dataset.empty() || f.schema.empty() || f.task.empty()) {
    throw std::invalid_argument("--dataset, --schema and --task are required");
  }
  RunManifest m;
  m.dataset = f.name.empty() ? fs::path(f.dataset).stem().string() : f.name;
  m.dataset_path = f.dataset;
  m.dataset_sha256 = file_sha256(f.dataset);
  m.schema_path = f.schema;
  m.schema_sha256 = file_sha256(f.schema);
  m.task = require_task(f.task);
  m.mode = parse_prompt_mode(f.mode);
  m.templates_dir = f.templates;
  m.template_ids = f.variants;
  if (m.template_ids.empty()) {
    for (int i = 1; i <= kTemplatesPerTask; ++i) m.template_ids.push_back(i);
  }
  if (m.mode != PromptMode::kZeroShot) {
    m.demos_path = f.demos;
    m.train_path = f.train;
    m.shots = f.shots;
    for (int i = 1; i <= static_cast<int>(kDemoGroups); ++i) m.demo_groups.push_back(i);
  }
  m.demo_seed = f.seed;
  m.cap = f.cap;
  m.sample_seed = f.seed;
  match_modes(f.match);
  m.match = f.match;
  m.gamma = MatchConfig(f.gamma, MatchMode::kSoft).gamma;
  m.model.name = f.model;
  m.model.temperature = f.temperature;
  m.model.max_tokens = f.max_tokens;
  m.created_at = utc_timestamp();
  m.run_id = compute_run_id(m);
  return m;
}

struct LoadedRun {
  RunManifest manifest;
  RunPaths paths;
  Corpus corpus;
};

LoadedRun load_run(const Flags& f) {
  if (f.manifest.empty()) throw std::invalid_argument("--manifest is required");
  LoadedRun r;
  r.manifest = read_manifest(f.manifest);
  r.paths = {fs::path(f.manifest).parent_path(), r.manifest.run_id};
  r.corpus = load_run_corpus(r.manifest);
  return r;
}

std::string match_of(const Flags& f, const RunManifest& m) { return f.given("--match") ? f.match : m.match; }
double gamma_of(const Flags& f, const RunManifest& m) { return f.given("--gamma") ? f.gamma : m.gamma; }

std::unique_ptr<Gateway> make_gateway(const fs::path& run_dir) {
  const std::string env_dir = env_or(kCacheDirEnv);
  const fs::path cache = env_dir.empty() ? run_dir / "cache" / "responses.jsonl" : fs::path(env_dir) / "responses.jsonl";
  return std::make_unique<Gateway>(HttpChatTransport::from_env(), std::make_shared<ResponseCache>(cache));
}

// Prints one line per failing stage. Returns the number of failures.
std::size_t report_errors(const std::vector<std::string>& errors) {
  std::map<std::string, std::pair<std::size_t, std::string>> by_stage;
  for (const auto& e : errors) {
    auto& slot = by_stage[e.substr(0, e.find(' '))];
    if (slot.first++ == 0) slot.second = e;
  }
  for (const auto& [stage, s] : by_stage) {
    std::cerr << stage << ": " << s.first << " failed; first: " << s.second << '\n';
  }
  return errors.size();
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Flags& f) {
  if (f.dataset.empty() || f.schema.empty() || f.task.empty()) {
    throw std::invalid_argument("--dataset, --schema and --task are required");
  }
  LoadOptions opts;
  opts.lenient = f.lenient;
  opts.dataset_name = f.name;
  std::vector<std::string> warnings;
  const Corpus full = load_corpus(f.dataset, require_task(f.task), load_schema(f.schema), opts, &warnings);
  for (const auto& w : warnings) std::cerr << "skipped " << w << '\n';
  const Corpus kept = sample_cap(full, f.cap, f.seed);
  std::cerr << full.instances.size() << " instances loaded, " << kept.instances.size() << " kept, "
            << warnings.size() << " skipped\n";
  const std::string body = render([&](std::ostream& os) { write_corpus(os, kept); });
  if (f.out.empty()) {
    std::cout << body;
  } else {
    write_file(f.out, body);
  }
  if (!f.freq.empty()) write_file(f.freq, render([&](std::ostream& os) { write_frequency_csv(os, count_type_frequencies(full)); }));
  return 0;
}

int cmd_prompt(const Flags& f) {
  const RunManifest m = manifest_from_flags(f);
  const Corpus corpus = load_run_corpus(m);
  const RunPlan plan = build_plan(m, corpus);
  std::vector<const DemoGroup*> groups = {nullptr};
  if (plan.mode != PromptMode::kZeroShot) {
    groups.clear();
    for (const auto& g : plan.demo_groups) groups.push_back(&g);
  }
  std::size_t n = 0;
  for (const auto& g : corpus.instances) {
    if (f.limit != 0 && n++ >= f.limit) break;
    for (const auto& t : plan.templates) {
      for (const DemoGroup* group : groups) {
        Variant v{t.template_id, group ? std::optional<int>(group->group_id) : std::nullopt};
        std::cout << Json{{"instance_id", g.instance_id},
                          {"variant", variant_name(v)},
                          {"prompt", render_prompt(plan, t, corpus.schema, group, g)}}
                         .dump()
                  << '\n';
      }
    }
  }
  return 0;
}

int cmd_run(const Flags& f) {
  if (f.out.empty()) throw std::invalid_argument("--out is required");
  const RunManifest m = manifest_from_flags(f);
  const RunPaths paths{f.out, m.run_id};
  const Corpus corpus = load_run_corpus(m);
  RunPlan plan = build_plan(m, corpus);
  plan.max_in_flight = f.max_in_flight;
  auto gateway = make_gateway(f.out);
  write_manifest(paths, m);
  const RunOutput run = run_sweep(corpus, plan, *gateway);
  write_run_outputs(paths, run, corpus.task);
  std::cout << "run " << m.run_id << ": " << run.variants.size() << " variants x " << corpus.instances.size()
            << " instances, " << gateway->network_calls() << " network calls\n"
            << "manifest " << paths.manifest().string() << '\n'
            << "predictions " << paths.predictions().string() << '\n';
  return report_errors(run.errors) == 0 ? 0 : 2;
}

int cmd_score(const Flags& f) {
  const LoadedRun r = load_run(f);
  const auto preds = read_predictions(r.paths.predictions());
  const std::string match = match_of(f, r.manifest);
  const ModeScores scores = score_run(r.corpus, preds, match_modes(match), gamma_of(f, r.manifest));
  write_file(r.paths.file("scores", ".csv"), render([&](std::ostream& os) { write_scores_csv(os, scores); }));
  const std::string agg = render([&](std::ostream& os) { write_aggregate_csv(os, scores, f.sota_f1()); });
  write_file(r.paths.file("aggregate", ".csv"), agg);
  write_file(r.paths.file("invalid", ".csv"),
             render([&](std::ostream& os) { write_invalid_csv(os, run_invalid_ratio(r.corpus, preds)); }));
  std::cout << agg;
  if (match == "both") {
    const std::string delta = render([&](std::ostream& os) { write_delta_csv(os, scores); });
    write_file(r.paths.file("delta", ".csv"), delta);
    std::cout << delta;
  }
  return 0;
}

// Re-runs the manifest's plan on a derived corpus; failures are reported
// and leave the affected instances out.
RunOutput rerun(const Flags& f, const LoadedRun& r, const Corpus& corpus, const char* stem) {
  RunPlan plan = build_plan(r.manifest, r.corpus);
  plan.max_in_flight = f.max_in_flight;
  auto gateway = make_gateway(r.paths.dir);
  RunOutput run = run_sweep(corpus, plan, *gateway);
  RunPaths derived = r.paths;
  std::ofstream preds(derived.file(std::string("predictions-") + stem, ".jsonl"));
  for (const auto& v : run.variants) {
    for (const auto& p : v.predictions) preds << to_json(p, corpus.task).dump() << '\n';
  }
  std::cout << stem << ": " << gateway->network_calls() << " network calls\n";
  return run;
}

int cmd_perturb(const Flags& f) {
  const LoadedRun r = load_run(f);
  std::vector<std::string> pool;
  if (f.pool.empty()) {
    for (const auto& g : r.corpus.instances) pool.push_back(g.sentence);
  } else {
    std::ifstream in(f.pool);
    if (!in) throw IoError("cannot open " + f.pool);
    for (std::string line; std::getline(in, line);) {
      if (!normalize_whitespace(line).empty()) pool.push_back(normalize_whitespace(line));
    }
  }
  const std::uint64_t seed = f.given("--seed") ? f.seed : r.manifest.sample_seed;
  const SplitMix64 root(seed);
  Corpus original = r.corpus, perturbed = r.corpus;
  original.instances.clear();
  perturbed.instances.clear();
  std::size_t skipped = 0;
  for (std::size_t i = 0; i < r.corpus.instances.size(); ++i) {
    const GoldInstance& g = r.corpus.instances[i];
    try {
      perturbed.instances.push_back(inject_irrelevant_context(g, pool, root.split(i).next()));
      original.instances.push_back(g);
    } catch (const PoolExhausted&) {
      ++skipped;
    }
  }
  if (skipped != 0) std::cerr << skipped << " instances without enough clean context, left out\n";
  const RunOutput run = rerun(f, r, perturbed, "perturbed");
  const auto before = read_predictions(r.paths.predictions());
  const auto after = predictions_by_variant(run);
  const double gamma = gamma_of(f, r.manifest);
  const auto modes = match_modes(match_of(f, r.manifest));
  const ModeScores a = score_run(original, before, modes, gamma);
  const ModeScores b = score_run(perturbed, after, modes, gamma);
  const std::string csv = render([&](std::ostream& os) {
    os << "variant,mode,original_f1,perturbed_f1,delta_f1\n";
    for (MatchMode mode : modes) {
      for (std::size_t i = 0; i < a.at(mode).size() && i < b.at(mode).size(); ++i) {
        const double x = f1_percent(a.at(mode)[i].report), y = f1_percent(b.at(mode)[i].report);
        os << variant_name(a.at(mode)[i].variant) << ',' << to_string(mode) << ',' << format_fixed(x, 3) << ','
           << format_fixed(y, 3) << ',' << format_fixed(y - x, 3) << '\n';
      }
    }
  });
  write_file(r.paths.file("perturb", ".csv"), csv);
  std::cout << csv;
  return report_errors(run.errors) == 0 ? 0 : 2;
}

int cmd_split(const Flags& f) {
  if (f.freq.empty()) throw std::invalid_argument("--freq is required");
  std::ifstream in(f.freq);
  if (!in) throw IoError("cannot open " + f.freq);
  const HeadTailSplit split = split_head_tail(read_frequency_csv(in), f.k);
  const std::string table = render([&](std::ostream& os) { write_split_csv(os, split); });
  std::cout << table;
  if (f.manifest.empty()) {
    if (!f.out.empty()) write_file(f.out, table);
    return 0;
  }
  const LoadedRun r = load_run(f);
  write_file(r.paths.file("split-k" + std::to_string(f.k), ".csv"), table);
  const auto preds = read_predictions(r.paths.predictions());
  for (MatchMode mode : match_modes(match_of(f, r.manifest))) {
    ScoringOptions opts;
    opts.match = MatchConfig(gamma_of(f, r.manifest), mode);
    opts.na_label = r.corpus.schema.na_label;
    std::vector<std::pair<Variant, HeadTailScore>> rows;
    for (const auto& [v, list] : preds) rows.emplace_back(v, score_by_split(run_label_counts(r.corpus, list, opts), split));
    const std::string csv = render([&](std::ostream& os) { write_split_scores_csv(os, rows); });
    write_file(r.paths.file("split-k" + std::to_string(f.k) + "-" + std::string(to_string(mode)), ".csv"), csv);
    std::cout << csv;
  }
  return 0;
}

int cmd_swap(const Flags& f) {
  const LoadedRun r = load_run(f);
  if (r.corpus.task != SubTask::kReRc) throw std::invalid_argument("swap needs an RE-RC run");
  Corpus swapped = r.corpus;
  swapped.instances.clear();
  for (const auto& g : r.corpus.instances) {
    if (auto s = swap_entity_order(g, r.corpus.schema)) swapped.instances.push_back(std::move(*s));
  }
  if (swapped.instances.empty()) throw std::invalid_argument("no asymmetric relation instances to swap");
  const RunOutput run = rerun(f, r, swapped, "swapped");
  const auto before = read_predictions(r.paths.predictions());
  std::vector<std::pair<Variant, OrderSwapReport>> rows;
  for (const auto& v : run.variants) {
    auto it = before.find(v.variant);
    if (it == before.end()) continue;
    std::map<std::string, const PredictionSet*> by_id;
    for (const auto& p : it->second) by_id[p.instance_id] = &p;
    std::vector<PredictionSet> pre, post;
    for (const auto& p : v.predictions) {
      auto b = by_id.find(p.instance_id);
      if (b == by_id.end()) continue;
      pre.push_back(*b->second);
      post.push_back(p);
    }
    rows.emplace_back(v.variant, order_sensitivity(pre, post, r.corpus.schema));
  }
  const std::string csv = render([&](std::ostream& os) { write_swap_csv(os, rows); });
  write_file(r.paths.file("swap", ".csv"), csv);
  std::cout << csv;
  return report_errors(run.errors) == 0 ? 0 : 2;
}

int cmd_errors(const Flags& f) {
  const LoadedRun r = load_run(f);
  const auto preds = read_predictions(r.paths.predictions());
  const ErrorLedger l = run_error_ledger(r.corpus, preds, MatchConfig(gamma_of(f, r.manifest), MatchMode::kSoft));
  const std::string csv = render([&](std::ostream& os) { write_ledger_csv(l, os); });
  write_file(r.paths.file("errors", ".csv"), csv);
  write_file(r.paths.file("errors-chart", ".csv"), render([&](std::ostream& os) { write_ledger_chart(l, os); }));
  std::cout << csv;
  return 0;
}

int cmd_report(const Flags& f) {
  const LoadedRun r = load_run(f);
  const auto preds = read_predictions(r.paths.predictions());
  RunManifest m = r.manifest;
  m.gamma = gamma_of(f, m);
  const ModeScores scores = score_run(r.corpus, preds, match_modes(match_of(f, m)), m.gamma);
  write_file(r.paths.file("report", ".json"), report_json(m, r.corpus, scores, preds, f.sota_f1()).dump(2) + "\n");
  return 0;
}

}  // namespace
}  // namespace iegauge

int main(int argc, char** argv) {
  using namespace iegauge;
  Flags f;
  CLI::App app{"Evaluate LLM outputs on information extraction tasks."};
  f.app = &app;
  app.require_subcommand(1);
  app.fallthrough();

  app.add_option("--dataset", f.dataset, "Gold JSONL file");
  app.add_option("--task", f.task, "Sub-task, e.g. NER-Flat or RE-RC");
  app.add_option("--match", f.match, "hard, soft or both")->check(CLI::IsMember({"hard", "soft", "both"}));
  app.add_option("--gamma", f.gamma, "Soft-match threshold")->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", f.seed, "Seed for sampling, demos and context draws");
  app.add_option("--cap", f.cap, "Maximum evaluated instances")->check(CLI::PositiveNumber);
  app.add_option("--templates", f.templates, "Directory of template overrides");
  app.add_option("--demos", f.demos, "Demonstration JSONL file");
  app.add_option("--sota", f.sota, "State-of-the-art F1 for Ratio@SOTA");
  app.add_option("--k", f.k, "Head/tail frequency threshold")->check(CLI::PositiveNumber);

  auto* ingest = app.add_subcommand("ingest", "Validate, cap-sample and normalize a gold file");
  auto* prompt = app.add_subcommand("prompt", "Render prompts as JSONL");
  auto* run = app.add_subcommand("run", "Render, complete and parse every prompt variant");
  auto* score = app.add_subcommand("score", "Score a run's predictions");
  auto* perturb = app.add_subcommand("perturb", "Re-run with irrelevant context around each sentence");
  auto* split = app.add_subcommand("split", "Head/tail type analysis");
  auto* swap = app.add_subcommand("swap", "Re-run RE-RC with subject and object swapped");
  auto* errors = app.add_subcommand("errors", "Error type distribution");
  auto* report = app.add_subcommand("report", "Combined JSON report");

  for (auto* c : {ingest, prompt, run}) {
    c->add_option("--schema", f.schema, "Label schema JSON");
    c->add_option("--name", f.name, "Dataset display name");
  }
  for (auto* c : {prompt, run}) {
    c->add_option("--mode", f.mode, "zero-shot, icl or cot")->check(CLI::IsMember({"zero-shot", "zero", "icl", "cot"}));
    c->add_option("--train", f.train, "Training corpus to draw demonstrations from");
    c->add_option("--shots", f.shots, "Demonstrations per group");
    c->add_option("--variants", f.variants, "Template ids (default: all)");
  }
  run->add_option("--model", f.model, "Model name");
  run->add_option("--temperature", f.temperature, "Sampling temperature");
  run->add_option("--max-tokens", f.max_tokens, "Completion token limit");
  for (auto* c : {run, perturb, swap}) c->add_option("--max-in-flight", f.max_in_flight, "Concurrent requests");
  ingest->add_option("--out", f.out, "Output JSONL (default: stdout)");
  ingest->add_option("--freq", f.freq, "Also write type frequencies CSV");
  ingest->add_flag("--lenient", f.lenient, "Skip bad lines instead of failing");
  prompt->add_option("--limit", f.limit, "Only the first N instances");
  run->add_option("--out", f.out, "Run directory")->required();
  for (auto* c : {score, perturb, split, swap, errors, report}) {
    c->add_option("--manifest", f.manifest, "Run manifest")->required(c != split);
  }
  split->add_option("--freq", f.freq, "Type frequency CSV")->required();
  split->add_option("--out", f.out, "Output CSV when no manifest is given");
  perturb->add_option("--pool", f.pool, "Context sentences, one per line (default: the corpus)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*ingest) return cmd_ingest(f);
    if (*prompt) return cmd_prompt(f);
    if (*run) return cmd_run(f);
    if (*score) return cmd_score(f);
    if (*perturb) return cmd_perturb(f);
    if (*split) return cmd_split(f);
    if (*swap) return cmd_swap(f);
    if (*errors) return cmd_errors(f);
    if (*report) return cmd_report(f);
  } catch (const AuthError& e) {
    std::cerr << "AuthError: " << e.what() << '\n';
  } catch (const MissingPredictions& e) {
    std::cerr << "MissingPredictions: " << e.what() << '\n';
  } catch (const SchemaError& e) {
    std::cerr << "SchemaError: " << e.what() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
  }
  return 1;
}
