#include "cofee/annotation_json.hpp"

#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& what) { throw ParseError("annotation JSON: " + what); }

const json& member(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) fail(std::string("missing field '") + key + "'");
  return *it;
}

std::string string_field(const json& j, const char* key) {
  const json& v = member(j, key);
  if (!v.is_string()) fail(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

std::string string_field_or(const json& j, const char* key, std::string fallback) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) fail(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

int int_value(const json& v, const char* what) {
  if (!v.is_number_integer()) fail(std::string(what) + " must be an integer");
  auto x = v.get<long long>();
  if (x < INT32_MIN || x > INT32_MAX) fail(std::string(what) + " out of range");
  return static_cast<int>(x);
}

Span span_field(const json& j) {
  const json& v = member(j, "span");
  if (!v.is_array() || v.size() != 2) fail("span must be [start, end]");
  return {int_value(v[0], "span start"), int_value(v[1], "span end")};
}

const json& array_field(const json& j, const char* key) {
  static const json empty = json::array();
  auto it = j.find(key);
  if (it == j.end()) return empty;
  if (!it->is_array()) fail(std::string("field '") + key + "' must be an array");
  return *it;
}

template <typename T, typename Parse>
T enum_field(const json& j, const char* key, T fallback, Parse parse) {
  auto it = j.find(key);
  if (it == j.end()) return fallback;
  if (!it->is_string()) fail(std::string("field '") + key + "' must be a string");
  auto value = parse(it->get<std::string>());
  if (!value) fail(std::string("bad ") + key + " value " + internal::quote(it->get<std::string>()));
  return *value;
}

void require_object(const json& j, const char* what) {
  if (!j.is_object()) fail(std::string(what) + " must be an object");
}

EntityMention entity_from_json(const json& j) {
  require_object(j, "entity");
  EntityMention e;
  e.id = string_field(j, "id");
  e.span = span_field(j);
  e.entity_type = string_field(j, "type");
  e.surface = string_field_or(j, "surface", "");
  return e;
}

TriggerMention trigger_from_json(const json& j) {
  require_object(j, "trigger");
  TriggerMention t;
  t.id = string_field(j, "id");
  t.span = span_field(j);
  t.subtype = string_field(j, "subtype");
  t.tense = enum_field(j, "tense", Tense::kUnspecified, parse_tense);
  t.polarity = enum_field(j, "polarity", Polarity::kPositive, parse_polarity);
  t.modality = enum_field(j, "modality", Modality::kAsserted, parse_modality);
  return t;
}

ArgumentLink argument_from_json(const json& j) {
  require_object(j, "argument");
  return {string_field(j, "trigger"), string_field(j, "entity"), string_field(j, "role")};
}

}  // namespace

ordered_json to_json(const SentenceAnnotation& s) {
  ordered_json j;
  j["doc_id"] = s.doc_id;
  j["language"] = s.language;
  j["text"] = s.text;
  auto& tokens = j["tokens"] = ordered_json::array();
  for (const auto& t : s.tokens) {
    ordered_json o;
    o["s"] = t.char_start;
    o["e"] = t.char_end;
    tokens.push_back(std::move(o));
  }
  auto& entities = j["entities"] = ordered_json::array();
  for (const auto& e : s.entities) {
    ordered_json o;
    o["id"] = e.id;
    o["span"] = {e.span.start, e.span.end};
    o["type"] = e.entity_type;
    o["surface"] = e.surface;
    entities.push_back(std::move(o));
  }
  auto& triggers = j["triggers"] = ordered_json::array();
  for (const auto& t : s.triggers) {
    ordered_json o;
    o["id"] = t.id;
    o["span"] = {t.span.start, t.span.end};
    o["subtype"] = t.subtype;
    o["tense"] = to_string(t.tense);
    o["polarity"] = to_string(t.polarity);
    o["modality"] = to_string(t.modality);
    triggers.push_back(std::move(o));
  }
  auto& arguments = j["arguments"] = ordered_json::array();
  for (const auto& a : s.arguments) {
    ordered_json o;
    o["trigger"] = a.trigger_id;
    o["entity"] = a.entity_id;
    o["role"] = a.role;
    arguments.push_back(std::move(o));
  }
  return j;
}

AnnotationPayload payload_from_json(const json& j) {
  require_object(j, "annotations");
  AnnotationPayload p;
  for (const auto& e : array_field(j, "entities")) p.entities.push_back(entity_from_json(e));
  for (const auto& t : array_field(j, "triggers")) p.triggers.push_back(trigger_from_json(t));
  for (const auto& a : array_field(j, "arguments")) p.arguments.push_back(argument_from_json(a));
  return p;
}

SentenceAnnotation sentence_from_json(const json& j) {
  require_object(j, "document");
  SentenceAnnotation s;
  s.doc_id = string_field(j, "doc_id");
  s.text = string_field(j, "text");
  s.language = string_field_or(j, "language", "en");
  if (j.contains("tokens")) {
    int index = 0;
    for (const auto& t : array_field(j, "tokens")) {
      require_object(t, "token");
      s.tokens.push_back({index++, int_value(member(t, "s"), "token s"),
                          int_value(member(t, "e"), "token e")});
    }
  } else {
    s.tokens = tokenize(s.text, TokenizerProfile::for_language(s.language));
  }
  AnnotationPayload p = payload_from_json(j);
  s.entities = std::move(p.entities);
  s.triggers = std::move(p.triggers);
  s.arguments = std::move(p.arguments);
  for (std::size_t i = 0; i < s.entities.size(); ++i) {
    auto& e = s.entities[i];
    if (!array_field(j, "entities")[i].contains("surface")) {
      try {
        e.surface = span_surface(s, e.span);
      } catch (const UnknownElementError&) {
        // left empty; validation reports the bad span
      }
    }
  }
  return s;
}

std::string write_jsonl(const std::vector<SentenceAnnotation>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += to_json(d).dump();
    out += '\n';
  }
  return out;
}

std::vector<SentenceAnnotation> read_jsonl(std::string_view data) {
  std::vector<SentenceAnnotation> docs;
  int line_no = 0;
  for (auto line : internal::split(data, '\n')) {
    ++line_no;
    line = internal::trim(line);
    if (line.empty()) continue;
    try {
      docs.push_back(sentence_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw ParseError("JSONL line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("JSONL line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return docs;
}

}  // namespace cofee
