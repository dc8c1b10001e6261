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

// Shipped zero-shot templates, five per sub-task. Template files in a
// directory (<task>.<id>.txt, e.g. NER-Flat.2.txt) override them one by one.

#ifndef IEGAUGE_TEMPLATES_HPP_
#define IEGAUGE_TEMPLATES_HPP_

#include <array>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "iegauge/prompt.hpp"
#include "iegauge/task_model.hpp"

namespace iegauge {

inline constexpr int kTemplatesPerTask = 5;

namespace internal {

struct TemplateText {
  std::array<std::string_view, kTemplatesPerTask> instructions;
  std::string_view format_clause;
};

inline const TemplateText& template_text(SubTask task) {
  static const TemplateText kNer{
      {"Considering {label_count} types of named entities including {labels_and}, recognize all "
       "named entities in the given sentence.",
       "Given the list of entity types {labels}, read the given sentence and find out all "
       "words/phrases that indicate the above types of named entities.",
       "Read the given sentence carefully, identify all named entities of type {labels_or}.",
       "Analyze the given sentence and extract all word spans that refer to specific named "
       "entities of type {labels_or}.",
       "What named entities are mentioned in the given sentence? Only return named entities of "
       "type {labels_or}."},
      "Answer in the format [\"entity_type\", \"entity_name\"] without any explanation. If no "
      "entity exists, then just answer \"[]\"."};
  static const TemplateText kReRc{
      {"Considering {label_count} types of relations including {labels_and}, classify the "
       "relation from the subject \"{subject}\" to the object \"{object}\" in the given sentence.",
       "Given the list of relation types {labels}, read the given sentence and find out which "
       "relation holds from the subject \"{subject}\" to the object \"{object}\".",
       "Read the given sentence carefully, decide whether the relation from \"{subject}\" to "
       "\"{object}\" is {labels_or}.",
       "Analyze the given sentence and determine the relation type between the subject "
       "\"{subject}\" and the object \"{object}\" among {labels_or}.",
       "What is the relation from the subject \"{subject}\" to the object \"{object}\" in the "
       "given sentence? Only return one of {labels_or}."},
      "Answer with only one relation type without any explanation. If the relation cannot be "
      "determined, then just answer \"[]\"."};
  static const TemplateText kReTriplet{
      {"Considering {label_count} types of relations including {labels_and}, recognize all "
       "relational triplets in the given sentence.",
       "Given the list of relation types {labels}, read the given sentence and find out all "
       "subject-object pairs that express the above types of relations.",
       "Read the given sentence carefully, identify all relational triplets whose relation is "
       "{labels_or}.",
       "Analyze the given sentence and extract all (subject, relation, object) triplets with "
       "relation type {labels_or}.",
       "What relational triplets are mentioned in the given sentence? Only return triplets with "
       "relation type {labels_or}."},
      "Answer in the format [\"subject\", \"relation_type\", \"object\"] without any "
      "explanation. If no relation exists, then just answer \"[]\"."};
  static const TemplateText kEeTrigger{
      {"Considering {label_count} types of events including {labels_and}, recognize all event "
       "triggers in the given sentence.",
       "Given the list of event types {labels}, read the given sentence and find out all "
       "words/phrases that trigger the above types of events.",
       "Read the given sentence carefully, identify all event triggers of type {labels_or}.",
       "Analyze the given sentence and extract all word spans that trigger events of type "
       "{labels_or}.",
       "What events are mentioned in the given sentence? Only return event triggers of type "
       "{labels_or}."},
      "Answer in the format [\"event_type\", \"trigger_word\"] without any explanation. If no "
      "event exists, then just answer \"[]\"."};
  static const TemplateText kEeArgument{
      {"Considering {label_count} types of argument roles including {labels_and}, recognize all "
       "arguments of the \"{event_type}\" event triggered by \"{trigger}\" in the given "
       "sentence.",
       "Given the list of argument roles {labels}, read the given sentence and find out all "
       "words/phrases that play the above roles in the \"{event_type}\" event triggered by "
       "\"{trigger}\".",
       "Read the given sentence carefully, identify all arguments of the \"{event_type}\" event "
       "triggered by \"{trigger}\" with role {labels_or}.",
       "Analyze the given sentence and extract all word spans that act as arguments of the "
       "\"{event_type}\" event triggered by \"{trigger}\", with role {labels_or}.",
       "Which arguments does the \"{event_type}\" event triggered by \"{trigger}\" have in the "
       "given sentence? Only return arguments with role {labels_or}."},
      "Answer in the format [\"role_type\", \"argument\"] without any explanation. If no "
      "argument exists, then just answer \"[]\"."};
  static const TemplateText kEeJoint{
      {"Considering {label_count} types of events including {labels_and}, and the argument roles "
       "{roles}, recognize all events and their arguments in the given sentence.",
       "Given the list of event types {labels} and the list of argument roles {roles}, read the "
       "given sentence and find out all event triggers and the arguments that play the above "
       "roles.",
       "Read the given sentence carefully, identify all events of type {labels_or} and their "
       "arguments with roles {roles}.",
       "Analyze the given sentence and extract all events of type {labels_or}, together with "
       "their arguments whose roles come from {roles}.",
       "What events are mentioned in the given sentence, and what are their arguments? Only "
       "return events of type {labels_or} and arguments with roles {roles}."},
      "Answer in the format [\"event_type\", \"trigger_word\", \"role_type\", \"argument\"] "
      "without any explanation. If no event argument exists, then just answer \"[]\"."};
  static const TemplateText kAbsaAe{
      {"Considering the target type {labels_and}, recognize all aspect terms in the given review "
       "sentence.",
       "Given the list of target types {labels}, read the given review sentence and find out all "
       "words/phrases that indicate aspects of the product or service.",
       "Read the given review sentence carefully, identify all {labels_or} terms that are "
       "commented on.",
       "Analyze the given review sentence and extract all word spans of type {labels_or} that "
       "name a feature of the reviewed item.",
       "What aspects are mentioned in the given review sentence? Only return terms of type "
       "{labels_or}."},
      "Answer in the format [\"aspect_term\"] without any explanation. If no aspect term exists, "
      "then just answer \"[]\"."};
  static const TemplateText kAbsaOe{
      {"Considering the target type {labels_and}, recognize all opinion terms in the given "
       "review sentence.",
       "Given the list of target types {labels}, read the given review sentence and find out all "
       "words/phrases that express opinions.",
       "Read the given review sentence carefully, identify all {labels_or} terms that express a "
       "sentiment.",
       "Analyze the given review sentence and extract all word spans of type {labels_or} that "
       "carry an evaluation.",
       "What opinions are expressed in the given review sentence? Only return terms of type "
       "{labels_or}."},
      "Answer in the format [\"opinion_term\"] without any explanation. If no opinion term "
      "exists, then just answer \"[]\"."};
  static const TemplateText kAbsaAlsc{
      {"Considering {label_count} sentiment polarities including {labels_and}, recognize the "
       "sentiment polarity of the aspect term \"{aspect}\" in the given review sentence.",
       "Given the list of sentiment polarities {labels}, read the given review sentence and find "
       "out the sentiment expressed towards \"{aspect}\".",
       "Read the given review sentence carefully, decide whether the sentiment towards "
       "\"{aspect}\" is {labels_or}.",
       "Analyze the given review sentence and classify the sentiment polarity of the aspect "
       "\"{aspect}\" as {labels_or}.",
       "What is the sentiment towards \"{aspect}\" in the given review sentence? Only return "
       "{labels_or}."},
      "Answer with only one sentiment polarity without any explanation. If the polarity cannot be "
      "determined, then just answer \"[]\"."};
  static const TemplateText kAbsaAoe{
      {"Considering the target type {labels_and}, recognize all opinion terms about the aspect "
       "\"{aspect}\" in the given review sentence.",
       "Given the list of target types {labels}, read the given review sentence and find out all "
       "words/phrases that express opinions on \"{aspect}\".",
       "Read the given review sentence carefully, identify all {labels_or} terms describing "
       "\"{aspect}\".",
       "Analyze the given review sentence and extract all word spans of type {labels_or} that "
       "evaluate the aspect \"{aspect}\".",
       "What opinions about \"{aspect}\" are expressed in the given review sentence? Only return "
       "terms of type {labels_or}."},
      "Answer in the format [\"opinion_term\"] without any explanation. If no opinion term "
      "exists, then just answer \"[]\"."};
  static const TemplateText kAbsaAesc{
      {"Considering {label_count} sentiment polarities including {labels_and}, recognize all "
       "aspect terms and their sentiment polarities in the given review sentence.",
       "Given the list of sentiment polarities {labels}, read the given review sentence and find "
       "out all aspect terms together with the sentiment expressed towards them.",
       "Read the given review sentence carefully, identify all aspect terms and whether their "
       "sentiment is {labels_or}.",
       "Analyze the given review sentence and extract all aspect terms, each with a polarity of "
       "{labels_or}.",
       "What aspects are mentioned in the given review sentence and how are they judged? Only "
       "return polarities {labels_or}."},
      "Answer in the format [\"aspect_term\", \"sentiment_polarity\"] without any explanation. "
      "If no aspect term exists, then just answer \"[]\"."};
  static const TemplateText kAbsaPair{
      {"Considering the target types {labels_and}, recognize all aspect terms and their "
       "corresponding opinion terms in the given review sentence.",
       "Given the list of target types {labels}, read the given review sentence and find out all "
       "pairs of aspect terms and the opinion terms describing them.",
       "Read the given review sentence carefully, identify all ({labels_and}) pairs.",
       "Analyze the given review sentence and extract all aspect-opinion pairs, where each pair "
       "links a term of type {labels_or} to its counterpart.",
       "Which aspects are evaluated in the given review sentence and with which words? Only "
       "return pairs of {labels_and} terms."},
      "Answer in the format [\"aspect_term\", \"opinion_term\"] without any explanation. If no "
      "pair exists, then just answer \"[]\"."};
  static const TemplateText kAbsaTriplet{
      {"Considering {label_count} sentiment polarities including {labels_and}, recognize all "
       "aspect terms, their opinion terms and sentiment polarities in the given review sentence.",
       "Given the list of sentiment polarities {labels}, read the given review sentence and find "
       "out all aspect terms, the opinion terms describing them and the resulting sentiment.",
       "Read the given review sentence carefully, identify all aspect-opinion-sentiment triplets "
       "with sentiment {labels_or}.",
       "Analyze the given review sentence and extract all triplets of aspect term, opinion term "
       "and a polarity of {labels_or}.",
       "What aspects are evaluated in the given review sentence, with which words, and how? Only "
       "return polarities {labels_or}."},
      "Answer in the format [\"aspect_term\", \"opinion_term\", \"sentiment_polarity\"] without "
      "any explanation. If no triplet exists, then just answer \"[]\"."};

  switch (task) {
    case SubTask::kNerFlat:
    case SubTask::kNerNested:
      return kNer;
    case SubTask::kReRc:
      return kReRc;
    case SubTask::kReTriplet:
      return kReTriplet;
    case SubTask::kEeTrigger:
      return kEeTrigger;
    case SubTask::kEeArgument:
      return kEeArgument;
    case SubTask::kEeJoint:
      return kEeJoint;
    case SubTask::kAbsaAe:
      return kAbsaAe;
    case SubTask::kAbsaOe:
      return kAbsaOe;
    case SubTask::kAbsaAlsc:
      return kAbsaAlsc;
    case SubTask::kAbsaAoe:
      return kAbsaAoe;
    case SubTask::kAbsaAesc:
      return kAbsaAesc;
    case SubTask::kAbsaPair:
      return kAbsaPair;
    case SubTask::kAbsaTriplet:
      return kAbsaTriplet;
  }
  return kNer;
}

}  // namespace internal

inline std::vector<PromptTemplate> default_templates(SubTask task) {
  const auto& text = internal::template_text(task);
  std::vector<PromptTemplate> out;
  for (int id = 1; id <= kTemplatesPerTask; ++id) {
    out.push_back(PromptTemplate::compose(id, task, std::string(text.instructions[id - 1]),
                                          std::string(text.format_clause)));
  }
  return out;
}

inline std::string template_file_name(SubTask task, int id) {
  return std::string(to_string(task)) + "." + std::to_string(id) + ".txt";
}

// Defaults, with any <task>.<id>.txt found in `dir` replacing its slot.
inline std::vector<PromptTemplate> load_templates(SubTask task, const std::filesystem::path& dir) {
  std::vector<PromptTemplate> out = default_templates(task);
  if (dir.empty()) return out;
  for (PromptTemplate& t : out) {
    const auto path = dir / template_file_name(task, t.template_id);
    if (!std::filesystem::exists(path)) continue;
    std::ifstream in(path);
    std::ostringstream body;
    body << in.rdbuf();
    t.body = body.str();
    while (!t.body.empty() && (t.body.back() == '\n' || t.body.back() == '\r')) t.body.pop_back();
  }
  return out;
}

}  // namespace iegauge

#endif  // IEGAUGE_TEMPLATES_HPP_
