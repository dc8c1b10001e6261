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

// JSON encoding of the task model.
//
// Gold line:
//   {"instance_id": "...", "sentence": "...", "task": "NER-Flat",
//    "gold": {"spans": [...]} | {"triples": [...]} | {"events": [...]} |
//            {"absa": [...]},
//    "given": [span, ...]}
// span     = {"text": "...", "label": "...", "offset": [start, end]}
//            (label and offset optional; offsets are UTF-8 byte positions)
// triple   = {"subject": span, "relation": "...", "object": span}
// event    = {"trigger": span, "event_type": "...",
//             "arguments": [{"span": span, "role": "..."}]}
// absa     = {"aspect": span, "opinion": span|null, "polarity": "..."|null}
//
// Prediction line:
//   {"instance_id": "...", "prompt_variant": 1, "demo_group": null,
//    "validity": "valid"|"invalid", "reason": "...", "items": {...gold shape...}}

#ifndef IEGAUGE_JSON_IO_HPP_
#define IEGAUGE_JSON_IO_HPP_

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "iegauge/task_model.hpp"

namespace iegauge {

using Json = nlohmann::json;

// Raised for a JSON document that does not have the canonical shape.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json to_json(const TypedSpan& s) {
  Json j = {{"text", s.text}};
  if (!s.label.empty()) j["label"] = s.label;
  if (s.offset) j["offset"] = {s.offset->start, s.offset->end};
  return j;
}

inline TypedSpan span_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("text") || !j["text"].is_string()) {
    throw FormatError("span needs a string \"text\"");
  }
  TypedSpan s;
  s.text = j["text"].get<std::string>();
  if (j.contains("label") && !j["label"].is_null()) s.label = j["label"].get<std::string>();
  if (j.contains("offset") && !j["offset"].is_null()) {
    const Json& o = j["offset"];
    if (!o.is_array() || o.size() != 2) throw FormatError("offset must be [start, end]");
    s.offset = CharOffset{o[0].get<std::size_t>(), o[1].get<std::size_t>()};
  }
  return s;
}

inline Json to_json(const Annotations& a, SubTask task) {
  Json j = Json::object();
  switch (field_group(task)) {
    case FieldGroup::kSpans: {
      Json arr = Json::array();
      for (const auto& s : a.spans) arr.push_back(to_json(s));
      j["spans"] = arr;
      break;
    }
    case FieldGroup::kTriples: {
      Json arr = Json::array();
      for (const auto& t : a.triples) {
        arr.push_back({{"subject", to_json(t.subject)},
                       {"relation", t.relation},
                       {"object", to_json(t.object)}});
      }
      j["triples"] = arr;
      break;
    }
    case FieldGroup::kEvents: {
      Json arr = Json::array();
      for (const auto& e : a.events) {
        Json args = Json::array();
        for (const auto& arg : e.arguments) {
          args.push_back({{"span", to_json(arg.span)}, {"role", arg.role}});
        }
        arr.push_back({{"trigger", to_json(e.trigger)},
                       {"event_type", e.event_type},
                       {"arguments", args}});
      }
      j["events"] = arr;
      break;
    }
    case FieldGroup::kAbsa: {
      Json arr = Json::array();
      for (const auto& x : a.absa) {
        arr.push_back({{"aspect", to_json(x.aspect)},
                       {"opinion", x.opinion ? to_json(*x.opinion) : Json(nullptr)},
                       {"polarity", x.polarity ? Json(*x.polarity) : Json(nullptr)}});
      }
      j["absa"] = arr;
      break;
    }
  }
  return j;
}

inline Annotations annotations_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("annotations must be an object");
  Annotations a;
  if (j.contains("spans")) {
    for (const auto& s : j["spans"]) a.spans.push_back(span_from_json(s));
  }
  if (j.contains("triples")) {
    for (const auto& t : j["triples"]) {
      a.triples.push_back({span_from_json(t.at("subject")), t.at("relation").get<std::string>(),
                           span_from_json(t.at("object"))});
    }
  }
  if (j.contains("events")) {
    for (const auto& e : j["events"]) {
      EventRecord rec;
      rec.trigger = span_from_json(e.at("trigger"));
      rec.event_type = e.at("event_type").get<std::string>();
      if (e.contains("arguments")) {
        for (const auto& arg : e["arguments"]) {
          rec.arguments.push_back({span_from_json(arg.at("span")), arg.at("role").get<std::string>()});
        }
      }
      a.events.push_back(std::move(rec));
    }
  }
  if (j.contains("absa")) {
    for (const auto& x : j["absa"]) {
      AbsaTuple t;
      t.aspect = span_from_json(x.at("aspect"));
      if (x.contains("opinion") && !x["opinion"].is_null()) t.opinion = span_from_json(x["opinion"]);
      if (x.contains("polarity") && !x["polarity"].is_null()) {
        t.polarity = x["polarity"].get<std::string>();
      }
      a.absa.push_back(std::move(t));
    }
  }
  return a;
}

inline Json to_json(const GoldInstance& g) {
  Json given = Json::array();
  for (const auto& s : g.given) given.push_back(to_json(s));
  return {{"instance_id", g.instance_id},
          {"sentence", g.sentence},
          {"task", std::string(to_string(g.task))},
          {"gold", to_json(g.gold, g.task)},
          {"given", given}};
}

inline GoldInstance gold_from_json(const Json& j) {
  try {
    GoldInstance g;
    g.instance_id = j.at("instance_id").get<std::string>();
    g.sentence = j.at("sentence").get<std::string>();
    const std::string task = j.at("task").get<std::string>();
    const auto parsed = parse_subtask(task);
    if (!parsed) throw FormatError("unknown task " + task);
    g.task = *parsed;
    if (j.contains("gold")) g.gold = annotations_from_json(j["gold"]);
    if (j.contains("given") && !j["given"].is_null()) {
      for (const auto& s : j["given"]) g.given.push_back(span_from_json(s));
    }
    return g;
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

inline Json to_json(const PredictionSet& p, SubTask task) {
  return {{"instance_id", p.instance_id},
          {"prompt_variant", p.prompt_variant},
          {"demo_group", p.demo_group ? Json(*p.demo_group) : Json(nullptr)},
          {"validity", p.validity.valid ? "valid" : "invalid"},
          {"reason", p.validity.reason},
          {"items", to_json(p.items, task)}};
}

inline PredictionSet prediction_from_json(const Json& j) {
  try {
    PredictionSet p;
    p.instance_id = j.at("instance_id").get<std::string>();
    p.prompt_variant = j.at("prompt_variant").get<int>();
    if (j.contains("demo_group") && !j["demo_group"].is_null()) p.demo_group = j["demo_group"].get<int>();
    const std::string validity = j.at("validity").get<std::string>();
    if (validity != "valid" && validity != "invalid") throw FormatError("bad validity " + validity);
    p.validity.valid = validity == "valid";
    p.validity.reason = j.value("reason", std::string());
    if (j.contains("items")) p.items = annotations_from_json(j["items"]);
    return p;
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

// Schema file: {"task": "...", "labels": [...], "roles": [...],
//               "na_label": "NA", "symmetric": [...]}
inline Json to_json(const LabelSchema& s) {
  return {{"task", std::string(to_string(s.task))},
          {"labels", s.labels},
          {"roles", s.roles},
          {"na_label", s.na_label},
          {"symmetric", s.symmetric}};
}

inline LabelSchema schema_from_json(const Json& j) {
  try {
    LabelSchema s;
    const auto task = parse_subtask(j.at("task").get<std::string>());
    if (!task) throw FormatError("unknown task in schema");
    s.task = *task;
    s.labels = j.at("labels").get<std::vector<std::string>>();
    s.roles = j.value("roles", std::vector<std::string>{});
    s.na_label = j.value("na_label", std::string("NA"));
    s.symmetric = j.value("symmetric", std::vector<std::string>{});
    return s;
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

}  // namespace iegauge

#endif  // IEGAUGE_JSON_IO_HPP_
