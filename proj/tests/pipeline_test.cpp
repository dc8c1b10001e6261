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

#include "iegauge/pipeline.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "iegauge/reports.hpp"
#include "test_support.hpp"

namespace iegauge {
namespace {

namespace fs = std::filesystem;

class ScriptedTransport : public ChatTransport {
 public:
  HttpReply post(const std::string& body) override {
    ++calls;
    const std::string prompt = Json::parse(body)["messages"][0]["content"];
    std::string answer = "[\"person\", \"Ada\"]";
    if (prompt.find("Sentence:\n\"Nobody") != std::string::npos) answer = "I am not sure.";
    return {200,
            Json{{"choices", Json::array({Json{{"message", {{"content", answer}}}, {"finish_reason", "stop"}}})}}
                .dump(),
            ""};
  }
  std::atomic<int> calls{0};
};

Corpus People(std::size_t n) {
  Corpus c;
  c.dataset_name = "people";
  c.task = SubTask::kNerFlat;
  c.schema = testing::test_schema(SubTask::kNerFlat);
  for (std::size_t i = 0; i < n; ++i) {
    GoldInstance g;
    g.instance_id = "i" + std::to_string(i);
    g.task = SubTask::kNerFlat;
    g.sentence = i == 0 ? "Nobody came." : "Ada met person " + std::to_string(i) + ".";
    if (i != 0) g.gold.spans = {{"Ada", "person", {}}};
    c.instances.push_back(g);
  }
  return c;
}

RunManifest Sample() {
  RunManifest m;
  m.dataset = "people";
  m.dataset_path = "people.jsonl";
  m.schema_path = "schema.json";
  m.task = SubTask::kReRc;
  m.mode = PromptMode::kIcl;
  m.template_ids = {1, 3};
  m.demo_groups = {1, 2};
  m.shots = 4;
  m.demo_seed = 9;
  m.sample_seed = 11;
  m.gamma = 0.6;
  m.created_at = "2026-01-01T00:00:00Z";
  m.run_id = compute_run_id(m);
  return m;
}

TEST(Manifest, JsonRoundTrip) {
  const RunManifest m = Sample();
  const RunManifest back = manifest_from_json(to_json(m));
  EXPECT_EQ(to_json(back), to_json(m));
  EXPECT_THROW(manifest_from_json(Json::object()), FormatError);
}

TEST(Manifest, RunIdIgnoresTimestampOnly) {
  RunManifest a = Sample(), b = Sample();
  b.created_at = "2027-05-05T00:00:00Z";
  EXPECT_EQ(compute_run_id(a), compute_run_id(b));
  EXPECT_EQ(a.run_id.size(), 16u);
  b.gamma = 0.7;
  EXPECT_NE(compute_run_id(a), compute_run_id(b));
  b = Sample();
  b.sample_seed = 12;
  EXPECT_NE(compute_run_id(a), compute_run_id(b));
}

TEST(Manifest, WrittenOnce) {
  const fs::path dir = fs::temp_directory_path() / "iegauge_manifest_test";
  fs::remove_all(dir);
  RunManifest m = Sample();
  const RunPaths paths{dir, m.run_id};
  write_manifest(paths, m);
  m.created_at = "later";
  write_manifest(paths, m);
  EXPECT_EQ(read_manifest(paths.manifest()).created_at, "2026-01-01T00:00:00Z");
  EXPECT_NE(paths.predictions().filename().string().find(m.run_id), std::string::npos);
  fs::remove_all(dir);
}

TEST(Variant, NamesAndOrder) {
  EXPECT_EQ(variant_name({2, std::nullopt}), "p2");
  EXPECT_EQ(variant_name({2, 4}), "p2-g4");
  EXPECT_LT((Variant{1, 5}), (Variant{2, 1}));
  EXPECT_EQ(parse_prompt_mode("zero"), PromptMode::kZeroShot);
  EXPECT_THROW(parse_prompt_mode("few"), std::invalid_argument);
}

RunPlan ZeroShotPlan() {
  RunPlan plan;
  plan.templates = default_templates(SubTask::kNerFlat);
  return plan;
}

TEST(RunSweep, FiveVariantsPerInstanceAndWarmReplay) {
  const Corpus corpus = People(8);
  auto transport = std::make_shared<ScriptedTransport>();
  auto cache = std::make_shared<ResponseCache>();
  Gateway cold(transport, cache);
  const RunOutput first = run_sweep(corpus, ZeroShotPlan(), cold);
  EXPECT_TRUE(first.errors.empty());
  ASSERT_EQ(first.variants.size(), 5u);
  std::size_t total = 0;
  for (const auto& v : first.variants) total += v.predictions.size();
  EXPECT_EQ(total, 5u * 8u);
  EXPECT_EQ(transport->calls, 40);
  EXPECT_FALSE(first.variants[0].predictions[0].validity.valid);
  EXPECT_TRUE(first.variants[0].predictions[1].validity.valid);

  Gateway warm(transport, cache);
  const RunOutput second = run_sweep(corpus, ZeroShotPlan(), warm);
  EXPECT_EQ(warm.network_calls(), 0u);
  EXPECT_EQ(predictions_by_variant(second), predictions_by_variant(first));

  const auto scores = score_variants(corpus, predictions_by_variant(first), {});
  ASSERT_EQ(scores.size(), 5u);
  EXPECT_EQ(scores[0].report.counts, (Counts{7, 0, 0}));
  EXPECT_EQ(scores[0].report.invalid_count, 1u);
}

TEST(RunSweep, FewShotMultipliesByGroups) {
  const Corpus corpus = People(3);
  Corpus train = People(12);
  for (auto& g : train.instances) g.sentence = "Train " + g.sentence;
  RunPlan plan = ZeroShotPlan();
  plan.mode = PromptMode::kIcl;
  plan.demo_groups = select_demo_groups(train, 2, kDemoGroups, 1);
  Gateway g(std::make_shared<ScriptedTransport>(), nullptr);
  const RunOutput out = run_sweep(corpus, plan, g);
  EXPECT_EQ(out.variants.size(), 25u);
  EXPECT_EQ(out.variants[6].variant, (Variant{2, 2}));
  plan.demo_groups.clear();
  EXPECT_THROW(run_sweep(corpus, plan, g), std::invalid_argument);
}

TEST(RunSweep, FailuresAreCollected) {
  Gateway offline(nullptr, nullptr);
  const RunOutput out = run_sweep(People(2), ZeroShotPlan(), offline);
  EXPECT_EQ(out.errors.size(), 10u);
  EXPECT_EQ(out.errors[0].rfind("complete p1 i0: ", 0), 0u);
}

TEST(RunOutputs, PredictionsRoundTrip) {
  const fs::path dir = fs::temp_directory_path() / "iegauge_outputs_test";
  fs::remove_all(dir);
  const RunPaths paths{dir, "abc"};
  EXPECT_THROW(read_predictions(paths.predictions()), MissingPredictions);
  Gateway g(std::make_shared<ScriptedTransport>(), nullptr);
  const RunOutput run = run_sweep(People(4), ZeroShotPlan(), g);
  write_run_outputs(paths, run, SubTask::kNerFlat);
  EXPECT_EQ(read_predictions(paths.predictions()), predictions_by_variant(run));
  std::ofstream(paths.predictions(), std::ios::trunc) << "\n";
  EXPECT_THROW(read_predictions(paths.predictions()), MissingPredictions);
  fs::remove_all(dir);
}

VariantScore Scored(int id, Counts c) {
  VariantScore s{{id, std::nullopt}, micro_f1({c})};
  return s;
}

TEST(Reports, AggregateAndDeltaTables) {
  EXPECT_EQ(match_modes("both"), (std::vector<MatchMode>{MatchMode::kHard, MatchMode::kSoft}));
  EXPECT_THROW(match_modes("fuzzy"), std::invalid_argument);
  const ModeScores scores = {{MatchMode::kHard, {Scored(1, {1, 1, 0}), Scored(2, {0, 1, 1})}},
                             {MatchMode::kSoft, {Scored(1, {2, 0, 0}), Scored(2, {1, 0, 1})}}};
  std::ostringstream agg, delta;
  write_aggregate_csv(agg, scores, 100.0);
  write_delta_csv(delta, scores);
  EXPECT_EQ(agg.str(),
            "mode,variants,max,min,mean,std,ratio_at_sota\n"
            "hard,2,66.667,0.000,33.333,33.333,33.3%\n"
            "soft,2,100.000,66.667,83.333,16.667,83.3%\n");
  EXPECT_EQ(delta.str(),
            "variant,hard,soft,delta_f1\n"
            "p1,66.667,100.000,33.333\n"
            "p2,0.000,66.667,66.667\n"
            "mean,33.333,83.333,50.000\n");
}

TEST(Reports, SwapAndSplitTables) {
  OrderSwapReport r;
  r.n_pairs = 4;
  r.changed_to_na = 1;
  r.unchanged = 3;
  r.same_label = 2;
  std::ostringstream swap;
  write_swap_csv(swap, {{Variant{1, std::nullopt}, r}});
  EXPECT_EQ(swap.str(),
            "variant,pairs,changed_to_na,unchanged,same_label,invalid\n"
            "p1,4,1,3,2,0\n"
            "mean,4.0,1.0 (25.0%),3.0 (75.0%),,0.0\n");

  HeadTailSplit split;
  split.head = {"loc", "org"};
  split.tail = {"per"};
  std::ostringstream table, scores;
  write_split_csv(table, split);
  EXPECT_EQ(table.str(), "set,types,labels\nhead,2,loc;org\ntail,1,per\n");
  HeadTailScore zero;
  write_split_scores_csv(scores, {{Variant{1, std::nullopt}, zero}});
  EXPECT_EQ(scores.str(), "variant,head_f1,tail_f1,ratio\np1,0.00,0.00,\n");
}

// ---------------------------------------------------------------------------
// Command line

#ifdef IEGAUGE_CLI_PATH

int Cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + std::string(IEGAUGE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / "iegauge_cli_test";
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "schema.json") << to_json(testing::test_schema(SubTask::kNerFlat)).dump();
    std::ofstream gold(dir_ / "gold.jsonl");
    write_corpus(gold, People(6));
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string Path(const char* name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

TEST_F(CliTest, IngestAndSplit) {
  EXPECT_EQ(Cli("ingest --dataset " + Path("gold.jsonl") + " --schema " + Path("schema.json") +
                " --task NER-Flat --cap 3 --out " + Path("kept.jsonl") + " --freq " + Path("freq.csv")),
            0);
  std::ifstream kept(Path("kept.jsonl"));
  std::size_t lines = 0;
  for (std::string l; std::getline(kept, l);) ++lines;
  EXPECT_EQ(lines, 3u);
  EXPECT_EQ(Cli("split --freq " + Path("freq.csv") + " --k 5 --out " + Path("split.csv")), 0);
  std::ifstream split(Path("split.csv"));
  std::stringstream s;
  s << split.rdbuf();
  EXPECT_EQ(s.str(), "set,types,labels\nhead,1,person\ntail,0,\n");
}

TEST_F(CliTest, ErrorsExitNonzero) {
  EXPECT_NE(Cli("score --manifest " + Path("missing.json")), 0);
  EXPECT_NE(Cli("bogus"), 0);
  EXPECT_NE(Cli("ingest --dataset " + Path("gold.jsonl") + " --schema " + Path("schema.json") + " --task Nope"), 0);
  // No credentials and a cold cache.
  EXPECT_EQ(Cli("run --dataset " + Path("gold.jsonl") + " --schema " + Path("schema.json") +
                    " --task NER-Flat --out " + Path("run") + " --cap 2",
                "env -u IEGAUGE_API_KEY -u IEGAUGE_CACHE_DIR"),
            2);
  EXPECT_NE(Cli("score --manifest " + Path("run") + "/none.json"), 0);
}

#endif

}  // namespace
}  // namespace iegauge
