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

#include "iegauge/metrics.hpp"

#include <gtest/gtest.h>

#include <map>

#include "test_support.hpp"

namespace iegauge {
namespace {

TEST(Prf, Basics) {
  const Prf p = prf({3, 1, 2});
  EXPECT_DOUBLE_EQ(p.precision, 0.75);
  EXPECT_DOUBLE_EQ(p.recall, 0.6);
  EXPECT_DOUBLE_EQ(p.f1, 2 * 0.75 * 0.6 / 1.35);
  const Prf zero = prf({0, 0, 0});
  EXPECT_EQ(zero.f1, 0.0);
}

GoldInstance Ner(std::vector<TypedSpan> spans) {
  GoldInstance g;
  g.instance_id = "g";
  g.task = SubTask::kNerFlat;
  g.sentence = "s";
  g.gold.spans = std::move(spans);
  return g;
}

PredictionSet Pred(std::vector<TypedSpan> spans) {
  PredictionSet p;
  p.instance_id = "g";
  p.items.spans = std::move(spans);
  return p;
}

TEST(ScoreInstance, CountsAndInvalid) {
  const GoldInstance g = Ner({{"Paris", "loc", {}}, {"Rome", "loc", {}}});
  ScoringOptions hard;
  hard.match = MatchConfig(0.5, MatchMode::kHard);
  EXPECT_EQ(score_instance(g, Pred({{"Paris", "loc", {}}, {"Oslo", "loc", {}}}), hard), (Counts{1, 1, 1}));
  PredictionSet invalid = Pred({});
  invalid.validity = Validity::Invalid("no parseable tuples");
  EXPECT_EQ(score_instance(g, invalid, hard), (Counts{0, 0, 2}));
  EXPECT_EQ(score_instance(Ner({}), Pred({}), hard), (Counts{0, 0, 0}));
}

TEST(ScoreInstance, SoftRecoversBoundaryErrors) {
  const GoldInstance g = Ner({{"University of Michigan", "org", {}}});
  const PredictionSet p = Pred({{"The University of Michigan", "org", {}}});
  ScoringOptions opts;
  opts.match = MatchConfig(0.5, MatchMode::kHard);
  EXPECT_EQ(score_instance(g, p, opts).tp, 0u);
  opts.match = MatchConfig(0.5, MatchMode::kSoft);
  EXPECT_EQ(score_instance(g, p, opts).tp, 1u);
}

TEST(ScoreInstance, ShapeMismatchThrows) {
  PredictionSet p;
  p.instance_id = "g";
  p.items.triples.push_back({});
  EXPECT_THROW(score_instance(Ner({}), p), TaskMismatch);
  PredictionSet other = Pred({});
  other.instance_id = "h";
  EXPECT_THROW(score_instance(Ner({}), other), TaskMismatch);
}

TEST(ScoreInstance, NaIsNotAPositiveClass) {
  GoldInstance g;
  g.instance_id = "g";
  g.task = SubTask::kReRc;
  g.sentence = "A B";
  g.given = {{"A", "", {}}, {"B", "", {}}};
  g.gold.triples = {{g.given[0], "NA", g.given[1]}};
  PredictionSet p;
  p.instance_id = "g";
  p.items.triples = {{g.given[0], "NA", g.given[1]}};
  EXPECT_EQ(score_instance(g, p), (Counts{0, 0, 0}));
  p.items.triples[0].relation = "works for";
  EXPECT_EQ(score_instance(g, p), (Counts{0, 1, 0}));
}

TEST(MicroF1, SumsCountsNotScores) {
  // Instance F1s 1.0 and 0.0 average to 0.5; micro F1 over (1,0,0)+(0,0,3) is 0.4.
  const ScoreReport r = micro_f1({{1, 0, 0}, {0, 0, 3}});
  EXPECT_EQ(r.counts, (Counts{1, 0, 3}));
  EXPECT_DOUBLE_EQ(r.f1, 0.4);
}

TEST(MicroF1, MatchesOracleOnRandomCorpora) {
  testing::Gen gen(5);
  for (SubTask t : kAllSubTasks) {
    const LabelSchema schema = testing::test_schema(t);
    for (bool soft : {false, true}) {
      ScoringOptions opts;
      opts.match = MatchConfig(0.5, soft ? MatchMode::kSoft : MatchMode::kHard);
      std::vector<Counts> parts;
      testing::OracleCounts total;
      for (int i = 0; i < 60; ++i) {
        const GoldInstance g = gen.instance(t, schema, 4, "x");
        const PredictionSet p = gen.prediction(g, schema, 4);
        parts.push_back(score_instance(g, p, opts));
        const auto gk = testing::oracle_keys(t, g.gold);
        const auto c = p.validity.valid ? testing::oracle_count(gk, testing::oracle_keys(t, p.items), soft, 0.5)
                                        : testing::OracleCounts{0, 0, gk.size()};
        ASSERT_EQ(parts.back(), (Counts{c.tp, c.fp, c.fn})) << to_string(t);
        total.tp += c.tp;
        total.fp += c.fp;
        total.fn += c.fn;
      }
      EXPECT_EQ(micro_f1(parts).counts, (Counts{total.tp, total.fp, total.fn}));
    }
  }
}

TEST(ScoreCorpus, MissingPredictionThrows) {
  const std::vector<GoldInstance> gold = {Ner({})};
  EXPECT_THROW(score_corpus(gold, [](const std::string&) -> const PredictionSet* { return nullptr; }),
               MissingPredictions);
  const PredictionSet p = Pred({});
  const ScoreReport r = score_corpus(gold, [&](const std::string&) { return &p; });
  EXPECT_EQ(r.instance_count, 1u);
  EXPECT_EQ(r.invalid_count, 0u);
}

TEST(LabelCounts, SplitByGoldLabel) {
  const GoldInstance g = Ner({{"Paris", "loc", {}}, {"Ada", "per", {}}});
  const auto c = label_counts(g, Pred({{"Paris", "LOC", {}}, {"Ada", "loc", {}}}));
  EXPECT_EQ(c.at("loc"), (Counts{1, 1, 0}));
  EXPECT_EQ(c.at("per"), (Counts{0, 0, 1}));
}

TEST(Aggregate, PopulationStdAndOrdering) {
  const AggregateReport a = aggregate(std::vector<double>{65.138, 63.614, 59.873, 56.132, 55.718});
  EXPECT_NEAR(a.max, 65.138, 1e-9);
  EXPECT_NEAR(a.min, 55.718, 1e-9);
  EXPECT_NEAR(a.mean, 60.095, 1e-3);
  EXPECT_NEAR(a.std, 3.814, 1e-3);
  EXPECT_EQ(a.n_variants, 5u);
  const AggregateReport one = aggregate(std::vector<double>{0.5});
  EXPECT_EQ(one.std, 0.0);
  EXPECT_THROW(aggregate(std::vector<double>{}), std::invalid_argument);
}

TEST(RatioAtSota, PublishedRows) {
  EXPECT_EQ(format_percent(ratio_at_sota(88.13, 74.9)), "117.7%");
  EXPECT_EQ(format_percent(ratio_at_sota(60.10, 94.6)), "63.5%");
  EXPECT_THROW(ratio_at_sota(1.0, 0.0), DivisionByZero);
  EXPECT_EQ(format_fixed(3.8137, 3), "3.814");
}

}  // namespace
}  // namespace iegauge
