#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cofee/annotation.hpp"

namespace cofee {

// Canonical document object:
//   {doc_id, language, text, tokens:[{s,e}], entities:[{id,span,type,surface}],
//    triggers:[{id,span,subtype,tense,polarity,modality}],
//    arguments:[{trigger,entity,role}]}
// Spans are [start_token, end_token], both inclusive. Token offsets are code
// points, e exclusive.
nlohmann::ordered_json to_json(const SentenceAnnotation& s);

// Accepts the canonical object. "tokens" may be omitted, in which case the
// text is tokenized with the language's profile; "language" defaults to
// "en"; trigger properties default to unspecified/positive/asserted; an
// omitted entity surface is filled from the span. Throws ParseError.
SentenceAnnotation sentence_from_json(const nlohmann::json& j);

// Only the mention lists, as submitted by annotation clients.
struct AnnotationPayload {
  std::vector<EntityMention> entities;
  std::vector<TriggerMention> triggers;
  std::vector<ArgumentLink> arguments;
};
AnnotationPayload payload_from_json(const nlohmann::json& j);

// One canonical object per line, each followed by '\n'.
std::string write_jsonl(const std::vector<SentenceAnnotation>& docs);

// Blank lines are skipped; errors name the 1-based line.
std::vector<SentenceAnnotation> read_jsonl(std::string_view data);

}  // namespace cofee
