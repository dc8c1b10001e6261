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

// Rebuilding a run from its manifest, and the report files derived from it.
// Writers are pure functions of their inputs; nothing here reads a clock.

#ifndef IEGAUGE_REPORTS_HPP_
#define IEGAUGE_REPORTS_HPP_

#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "iegauge/error_taxonomy.hpp"
#include "iegauge/pipeline.hpp"
#include "iegauge/robustness.hpp"

namespace iegauge {

inline std::vector<MatchMode> match_modes(std::string_view match) {
  if (match == "hard") return {MatchMode::kHard};
  if (match == "soft") return {MatchMode::kSoft};
  if (match == "both") return {MatchMode::kHard, MatchMode::kSoft};
  throw std::invalid_argument("match must be hard, soft or both, got " + std::string(match));
}

// The evaluated corpus of a run: gold file, schema and cap sample. Fails
// when the gold file no longer has the recorded digest.
inline Corpus load_run_corpus(const RunManifest& m) {
  if (!m.dataset_sha256.empty() && file_sha256(m.dataset_path) != m.dataset_sha256) {
    throw IoError(m.dataset_path + " changed since run " + m.run_id);
  }
  LabelSchema schema = load_schema(m.schema_path);
  LoadOptions opts;
  opts.dataset_name = m.dataset;
  return sample_cap(load_corpus(m.dataset_path, m.task, schema, opts), m.cap, m.sample_seed);
}

inline RunPlan build_plan(const RunManifest& m, const Corpus& test) {
  RunPlan plan;
  plan.mode = m.mode;
  plan.model = m.model;
  const std::set<int> ids(m.template_ids.begin(), m.template_ids.end());
  for (PromptTemplate& t : load_templates(m.task, m.templates_dir)) {
    if (ids.empty() || ids.count(t.template_id) != 0) plan.templates.push_back(std::move(t));
  }
  if (plan.templates.empty()) throw std::invalid_argument("no prompt templates selected");
  if (m.mode == PromptMode::kZeroShot) return plan;

  std::vector<DemoGroup> groups;
  if (!m.demos_path.empty()) {
    std::ifstream in(m.demos_path);
    if (!in) throw IoError("cannot open " + m.demos_path);
    groups = read_demo_groups(in);
  } else if (!m.train_path.empty()) {
    const Corpus train = load_corpus(m.train_path, m.task, test.schema);
    std::set<std::string> exclude;
    for (const auto& g : test.instances) exclude.insert(g.sentence);
    groups = select_demo_groups(train, m.shots, kDemoGroups, m.demo_seed, exclude);
  } else {
    throw std::invalid_argument("few-shot run needs a demo file or a training corpus");
  }
  const std::set<int> wanted(m.demo_groups.begin(), m.demo_groups.end());
  for (DemoGroup& g : groups) {
    if (wanted.empty() || wanted.count(g.group_id) != 0) plan.demo_groups.push_back(std::move(g));
  }
  if (plan.demo_groups.empty()) throw std::invalid_argument("no demonstration groups selected");
  return plan;
}

// ---------------------------------------------------------------------------
// Scores

using ModeScores = std::map<MatchMode, std::vector<VariantScore>>;

inline ModeScores score_run(const Corpus& corpus, const std::map<Variant, std::vector<PredictionSet>>& preds,
                            const std::vector<MatchMode>& modes, double gamma) {
  ModeScores out;
  for (MatchMode mode : modes) {
    ScoringOptions opts;
    opts.match = MatchConfig(gamma, mode);
    opts.na_label = corpus.schema.na_label;
    out[mode] = score_variants(corpus, preds, opts);
  }
  return out;
}

inline double f1_percent(const ScoreReport& r) { return 100.0 * r.f1; }

inline AggregateReport aggregate_percent(const std::vector<VariantScore>& scores) {
  std::vector<double> f1s;
  for (const auto& s : scores) f1s.push_back(f1_percent(s.report));
  return aggregate(f1s);
}

inline void write_scores_csv(std::ostream& os, const ModeScores& scores) {
  os << "variant,mode,tp,fp,fn,precision,recall,f1,invalid,instances\n";
  for (const auto& [mode, list] : scores) {
    for (const auto& s : list) {
      const ScoreReport& r = s.report;
      os << variant_name(s.variant) << ',' << to_string(mode) << ',' << r.counts.tp << ',' << r.counts.fp << ','
         << r.counts.fn << ',' << format_fixed(100.0 * r.precision, 3) << ','
         << format_fixed(100.0 * r.recall, 3) << ',' << format_fixed(f1_percent(r), 3) << ','
         << r.invalid_count << ',' << r.instance_count << '\n';
    }
  }
}

// max, min, mean and std over variants, in F1 points.
inline void write_aggregate_csv(std::ostream& os, const ModeScores& scores, std::optional<double> sota) {
  os << "mode,variants,max,min,mean,std,ratio_at_sota\n";
  for (const auto& [mode, list] : scores) {
    const AggregateReport a = aggregate_percent(list);
    os << to_string(mode) << ',' << a.n_variants << ',' << format_fixed(a.max, 3) << ','
       << format_fixed(a.min, 3) << ',' << format_fixed(a.mean, 3) << ',' << format_fixed(a.std, 3) << ','
       << (sota ? format_percent(ratio_at_sota(a.mean, *sota)) : std::string()) << '\n';
  }
}

// Hard, Soft and their difference per variant, then over the variant means.
inline void write_delta_csv(std::ostream& os, const ModeScores& scores) {
  const auto& hard = scores.at(MatchMode::kHard);
  const auto& soft = scores.at(MatchMode::kSoft);
  os << "variant,hard,soft,delta_f1\n";
  for (std::size_t i = 0; i < hard.size() && i < soft.size(); ++i) {
    const double h = f1_percent(hard[i].report), s = f1_percent(soft[i].report);
    os << variant_name(hard[i].variant) << ',' << format_fixed(h, 3) << ',' << format_fixed(s, 3) << ','
       << format_fixed(s - h, 3) << '\n';
  }
  const double h = aggregate_percent(hard).mean, s = aggregate_percent(soft).mean;
  os << "mean," << format_fixed(h, 3) << ',' << format_fixed(s, 3) << ',' << format_fixed(s - h, 3) << '\n';
}

inline InvalidRatio run_invalid_ratio(const Corpus& corpus,
                                      const std::map<Variant, std::vector<PredictionSet>>& preds) {
  std::vector<std::size_t> counts;
  for (const auto& [variant, list] : preds) {
    std::size_t n = 0;
    for (const auto& p : list) n += p.validity.valid ? 0 : 1;
    counts.push_back(n);
  }
  return invalid_ratio(counts, corpus.instances.size());
}

inline void write_invalid_csv(std::ostream& os, const InvalidRatio& r) {
  os << "avg_invalid,sentences,ratio\n"
     << format_fixed(r.avg_invalid, 1) << ',' << r.n_sentences << ',' << format_percent(r.ratio) << '\n';
}

// ---------------------------------------------------------------------------
// Errors

// Error counts summed over every variant of the run.
inline ErrorLedger run_error_ledger(const Corpus& corpus, const std::map<Variant, std::vector<PredictionSet>>& preds,
                                    const MatchConfig& cfg) {
  std::map<std::string, const GoldInstance*> gold;
  for (const auto& g : corpus.instances) gold[g.instance_id] = &g;
  UnitOptions units;
  units.na_label = corpus.schema.na_label;
  std::vector<ErrorCounts> parts;
  for (const auto& [variant, list] : preds) {
    for (const auto& p : list) {
      auto it = gold.find(p.instance_id);
      if (it == gold.end()) continue;
      parts.push_back(classify_instance(*it->second, p, corpus.schema, cfg, units));
    }
  }
  return ledger(parts);
}

// ---------------------------------------------------------------------------
// Head and tail types

inline std::map<std::string, Counts> run_label_counts(const Corpus& corpus, const std::vector<PredictionSet>& preds,
                                                      const ScoringOptions& opts) {
  std::map<std::string, const PredictionSet*> by_id;
  for (const auto& p : preds) by_id[p.instance_id] = &p;
  std::map<std::string, Counts> out;
  for (const auto& g : corpus.instances) {
    auto it = by_id.find(g.instance_id);
    if (it == by_id.end()) throw MissingPredictions("no prediction for " + g.instance_id);
    for (const auto& [label, c] : label_counts(g, *it->second, opts)) out[label] += c;
  }
  return out;
}

inline void write_split_csv(std::ostream& os, const HeadTailSplit& split) {
  os << "set,types,labels\n";
  auto row = [&](const char* name, const std::set<std::string>& labels) {
    os << name << ',' << labels.size() << ',';
    bool first = true;
    for (const auto& l : labels) {
      os << (first ? "" : ";") << l;
      first = false;
    }
    os << '\n';
  };
  row("head", split.head);
  row("tail", split.tail);
}

inline void write_split_scores_csv(std::ostream& os, const std::vector<std::pair<Variant, HeadTailScore>>& rows) {
  os << "variant,head_f1,tail_f1,ratio\n";
  double head = 0.0, tail = 0.0;
  for (const auto& [v, s] : rows) {
    os << variant_name(v) << ',' << format_fixed(100.0 * s.head_f1, 2) << ',' << format_fixed(100.0 * s.tail_f1, 2)
       << ',' << (s.ratio ? format_percent(*s.ratio) : std::string()) << '\n';
    head += 100.0 * s.head_f1 / static_cast<double>(rows.size());
    tail += 100.0 * s.tail_f1 / static_cast<double>(rows.size());
  }
  if (!rows.empty() && head > 0.0) {
    os << "mean," << format_fixed(head, 2) << ',' << format_fixed(tail, 2) << ','
       << format_percent(head_tail_ratio(head, tail)) << '\n';
  }
}

// ---------------------------------------------------------------------------
// Order swap

inline void write_swap_csv(std::ostream& os, const std::vector<std::pair<Variant, OrderSwapReport>>& rows) {
  os << "variant,pairs,changed_to_na,unchanged,same_label,invalid\n";
  std::vector<OrderSwapReport> reports;
  for (const auto& [v, r] : rows) {
    os << variant_name(v) << ',' << r.n_pairs << ',' << r.changed_to_na << ',' << r.unchanged << ','
       << r.same_label << ',' << r.invalid << '\n';
    reports.push_back(r);
  }
  if (reports.empty()) return;
  const OrderSwapSummary s = summarize_order_swaps(reports);
  os << "mean," << format_fixed(s.pairs, 1) << ',' << format_fixed(s.changed_mean, 1) << " ("
     << format_percent(s.changed_pct) << ")," << format_fixed(s.unchanged_mean, 1) << " ("
     << format_percent(s.unchanged_pct) << "),," << format_fixed(s.invalid_mean, 1) << '\n';
}

// ---------------------------------------------------------------------------
// Combined report

inline Json report_json(const RunManifest& m, const Corpus& corpus, const ModeScores& scores,
                        const std::map<Variant, std::vector<PredictionSet>>& preds, std::optional<double> sota) {
  Json j;
  j["run_id"] = m.run_id;
  j["dataset"] = m.dataset;
  j["task"] = std::string(to_string(m.task));
  j["mode"] = std::string(to_string(m.mode));
  j["model"] = m.model.name;
  j["gamma"] = m.gamma;
  j["instances"] = corpus.instances.size();
  for (const auto& [mode, list] : scores) {
    Json variants = Json::array();
    for (const auto& s : list) {
      variants.push_back({{"variant", variant_name(s.variant)},
                          {"tp", s.report.counts.tp},
                          {"fp", s.report.counts.fp},
                          {"fn", s.report.counts.fn},
                          {"f1", round_to(f1_percent(s.report), 3)},
                          {"invalid", s.report.invalid_count}});
    }
    const AggregateReport a = aggregate_percent(list);
    Json agg = {{"max", round_to(a.max, 3)},
                {"min", round_to(a.min, 3)},
                {"mean", round_to(a.mean, 3)},
                {"std", round_to(a.std, 3)}};
    if (sota) agg["ratio_at_sota"] = format_percent(ratio_at_sota(a.mean, *sota));
    j["scores"][std::string(to_string(mode))] = {{"variants", variants}, {"aggregate", agg}};
  }
  const InvalidRatio inv = run_invalid_ratio(corpus, preds);
  j["invalid"] = {{"avg_invalid", round_to(inv.avg_invalid, 3)}, {"ratio", format_percent(inv.ratio)}};
  const ErrorLedger l = run_error_ledger(corpus, preds, MatchConfig(m.gamma, MatchMode::kSoft));
  Json errors;
  for (ErrorType t : kAllErrorTypes) {
    errors[std::string(to_string(t))] = {{"count", l.counts.at(t)}, {"ratio", l.ratios.at(t)}};
  }
  errors["Total"] = {{"count", l.total}};
  j["errors"] = errors;
  return j;
}

}  // namespace iegauge

#endif  // IEGAUGE_REPORTS_HPP_
