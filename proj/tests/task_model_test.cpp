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

#include "iegauge/task_model.hpp"

#include <gtest/gtest.h>

#include "iegauge/json_io.hpp"
#include "iegauge/rng.hpp"
#include "iegauge/units.hpp"
#include "test_support.hpp"

namespace iegauge {
namespace {

TEST(SubTask, NamesRoundTrip) {
  EXPECT_EQ(kAllSubTasks.size(), 14u);
  for (SubTask t : kAllSubTasks) {
    const auto parsed = parse_subtask(to_string(t));
    ASSERT_TRUE(parsed.has_value());
    EXPECT_EQ(*parsed, t);
  }
  EXPECT_FALSE(parse_subtask("NER").has_value());
}

TEST(SubTask, GivenCounts) {
  EXPECT_EQ(expected_given_count(SubTask::kReRc), 2u);
  EXPECT_EQ(expected_given_count(SubTask::kAbsaAoe), 1u);
  EXPECT_EQ(expected_given_count(SubTask::kNerFlat), 0u);
  EXPECT_TRUE(is_single_label(SubTask::kAbsaAlsc));
  EXPECT_FALSE(is_single_label(SubTask::kReTriplet));
}

TEST(Text, NormalizeWhitespaceAndFold) {
  EXPECT_EQ(normalize_whitespace("  a \t b\n c  "), "a b c");
  EXPECT_EQ(normalize_whitespace(""), "");
  EXPECT_EQ(fold_label(" Works  For "), "works for");
  EXPECT_TRUE(labels_equal("PERSON", "person"));
}

TEST(LabelSchema, ViolationsAndLookup) {
  LabelSchema s = testing::test_schema(SubTask::kReRc);
  EXPECT_TRUE(s.violations().empty());
  EXPECT_TRUE(s.is_symmetric("Sibling Of"));
  EXPECT_TRUE(s.is_na("na"));
  EXPECT_EQ(s.display("WORKS FOR"), "works for");
  s.labels.pop_back();  // drop NA
  EXPECT_FALSE(s.violations().empty());
  LabelSchema dup;
  dup.labels = {"a", "A"};
  EXPECT_FALSE(dup.violations().empty());
  EXPECT_FALSE(LabelSchema{}.violations().empty());
}

TEST(LabelSchema, NormalizeLabel) {
  const LabelSchema s = testing::test_schema(SubTask::kNerFlat);
  EXPECT_EQ(normalize_label("Person", s), (LabelCheck{true, "person"}));
  EXPECT_EQ(normalize_label("Vehicle", s), (LabelCheck{false, "Vehicle"}));
}

GoldInstance NerInstance() {
  GoldInstance g;
  g.instance_id = "s1";
  g.sentence = "Alice moved to Paris.";
  g.task = SubTask::kNerFlat;
  g.gold.spans = {{"Alice", "person", CharOffset{0, 5}}, {"Paris", "location", CharOffset{15, 20}}};
  return g;
}

TEST(ValidateInstance, AcceptsWellFormed) { EXPECT_TRUE(validate_instance(NerInstance()).empty()); }

TEST(ValidateInstance, ReportsBrokenInvariants) {
  GoldInstance g = NerInstance();
  g.gold.spans[0].text = "Bob";
  g.gold.spans[0].offset.reset();
  EXPECT_EQ(validate_instance(g), std::vector<std::string>{"gold_spans[0] not substring of sentence"});

  g = NerInstance();
  g.gold.spans[1].offset = CharOffset{14, 19};
  EXPECT_EQ(validate_instance(g).size(), 1u);

  g = NerInstance();
  g.task = SubTask::kReRc;
  const auto v = validate_instance(g);
  EXPECT_NE(std::find(v.begin(), v.end(), "field group mismatch for task RE-RC"), v.end());
}

TEST(Dedupe, KeepsFirstOccurrence) {
  Annotations a;
  a.spans = {{"Paris", "loc", {}}, {"Paris ", "LOC", {}}, {"Rome", "loc", {}}};
  dedupe(a);
  ASSERT_EQ(a.spans.size(), 2u);
  EXPECT_EQ(a.spans[0].text, "Paris");
}

TEST(ScoringUnits, PerTaskShapes) {
  Annotations a;
  a.triples = {{{"A", "", {}}, "works for", {"B", "", {}}}, {{"A", "", {}}, "NA", {"C", "", {}}}};
  EXPECT_EQ(scoring_units(SubTask::kReTriplet, a).size(), 1u);
  EXPECT_EQ(scoring_units(SubTask::kReRc, a), (std::vector<ScoringUnit>{{{}, {"works for"}}}));
  UnitOptions keep;
  keep.exclude_na = false;
  EXPECT_EQ(scoring_units(SubTask::kReRc, a, keep).size(), 2u);

  Annotations e;
  e.events = {{{"fired", "", {}}, "Attack", {{{"troops", "", {}}, "attacker"}, {{"city", "", {}}, "target"}}}};
  const auto joint = scoring_units(SubTask::kEeJoint, e);
  ASSERT_EQ(joint.size(), 2u);
  EXPECT_EQ(joint[0], (ScoringUnit{{"troops"}, {"Attack", "attacker"}}));
  EXPECT_EQ(scoring_units(SubTask::kEeArgument, e)[1], (ScoringUnit{{"city"}, {"target"}}));

  Annotations x;
  x.absa = {{{"screen", "", {}}, TypedSpan{"bright", "", {}}, "positive"}};
  EXPECT_EQ(scoring_units(SubTask::kAbsaTriplet, x)[0], (ScoringUnit{{"screen", "bright"}, {"positive"}}));
  EXPECT_EQ(scoring_units(SubTask::kAbsaPair, x)[0], (ScoringUnit{{"screen", "bright"}, {}}));
  EXPECT_EQ(scoring_units(SubTask::kAbsaAesc, x)[0], (ScoringUnit{{"screen"}, {"positive"}}));
  EXPECT_EQ(scoring_units(SubTask::kAbsaAlsc, x)[0], (ScoringUnit{{}, {"positive"}}));
  EXPECT_EQ(scoring_units(SubTask::kAbsaAoe, x)[0], (ScoringUnit{{"bright"}, {}}));
}

TEST(JsonIo, GoldRoundTripAllTasks) {
  testing::Gen gen(3);
  for (SubTask t : kAllSubTasks) {
    const LabelSchema schema = testing::test_schema(t);
    for (int i = 0; i < 20; ++i) {
      const GoldInstance g = gen.instance(t, schema, 3, "id" + std::to_string(i));
      ASSERT_TRUE(validate_instance(g).empty()) << to_string(t);
      EXPECT_EQ(gold_from_json(Json::parse(to_json(g).dump())), g);
    }
  }
}

TEST(JsonIo, PredictionAndSchemaRoundTrip) {
  PredictionSet p;
  p.instance_id = "x";
  p.prompt_variant = 3;
  p.demo_group = 2;
  p.items.spans = {{"Paris", "location", {}}};
  EXPECT_EQ(prediction_from_json(to_json(p, SubTask::kNerFlat)), p);
  p.validity = Validity::Invalid("arity mismatch");
  p.items = {};
  p.demo_group.reset();
  EXPECT_EQ(prediction_from_json(to_json(p, SubTask::kNerFlat)), p);

  const LabelSchema s = testing::test_schema(SubTask::kReRc);
  const LabelSchema back = schema_from_json(to_json(s));
  EXPECT_EQ(back.labels, s.labels);
  EXPECT_EQ(back.symmetric, s.symmetric);
}

TEST(JsonIo, RejectsMalformed) {
  EXPECT_THROW(gold_from_json(Json::parse(R"({"instance_id":"a"})")), FormatError);
  EXPECT_THROW(gold_from_json(Json::parse(R"({"instance_id":"a","sentence":"s","task":"NER"})")), FormatError);
}

// Reference outputs computed independently from the published SplitMix64
// recurrence.
TEST(SplitMix64, FrozenSequence) {
  SplitMix64 r(0);
  EXPECT_EQ(r.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(r.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(r.next(), 0x06c45d188009454fULL);

  SplitMix64 b(42);
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 8; ++i) draws.push_back(b.below(10));
  EXPECT_EQ(draws, (std::vector<std::uint64_t>{3, 1, 8, 4, 0, 2, 5, 8}));

  SplitMix64 s(7);
  EXPECT_EQ(sample_indices(10, 4, s), (std::vector<std::size_t>{2, 5, 7, 9}));
}

TEST(SplitMix64, SplitDoesNotAdvanceParent) {
  SplitMix64 a(9), b(9);
  SplitMix64 child = a.split(1);
  EXPECT_EQ(a.next(), b.next());
  EXPECT_NE(child.next(), a.split(2).next());
}

TEST(SampleIndices, AscendingDistinctAndSized) {
  SplitMix64 r(5);
  for (std::size_t n = 0; n < 40; ++n) {
    for (std::size_t k = 0; k <= n; k += 3) {
      const auto idx = sample_indices(n, k, r);
      ASSERT_EQ(idx.size(), k);
      for (std::size_t i = 1; i < idx.size(); ++i) ASSERT_LT(idx[i - 1], idx[i]);
      if (!idx.empty()) {
        ASSERT_LT(idx.back(), n);
      }
    }
  }
  EXPECT_THROW(sample_indices(2, 3, r), std::invalid_argument);
}

}  // namespace
}  // namespace iegauge
