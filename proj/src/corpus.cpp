#include "cofee/corpus.hpp"

#include <charconv>
#include <set>

#include "cofee/annotation_json.hpp"
#include "cofee/csv.hpp"
#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {
namespace {

using internal::quote;

int parse_index(std::string_view s, const std::string& where) {
  s = internal::trim(s);
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ParseError(where + ": bad token index " + quote(s));
  }
  return v;
}

std::vector<EntityMention> parse_entity_cell(const SentenceAnnotation& doc, std::string_view cell,
                                             const std::string& where) {
  std::vector<EntityMention> out;
  for (auto item : internal::split(cell, ';')) {
    item = internal::trim(item);
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ParseError(where + ": entity " + quote(item) + " is not start-end:type");
    }
    auto range = item.substr(0, colon);
    auto dash = range.find('-');
    Span span;
    if (dash == std::string_view::npos) {
      span.start = span.end = parse_index(range, where);
    } else {
      span.start = parse_index(range.substr(0, dash), where);
      span.end = parse_index(range.substr(dash + 1), where);
    }
    EntityMention e;
    e.id = "E" + std::to_string(out.size() + 1);
    e.span = span;
    e.entity_type = std::string(internal::trim(item.substr(colon + 1)));
    try {
      e.surface = span_surface(doc, span);
    } catch (const UnknownElementError&) {
      throw ParseError(where + ": entity span " + quote(range) + " outside the text");
    }
    out.push_back(std::move(e));
  }
  return out;
}

void require_valid(const std::vector<SentenceAnnotation>& docs, const Ontology& ontology) {
  for (const auto& d : docs) {
    auto violations = validate_annotation(d, ontology);
    if (violations.empty()) continue;
    std::string msg = "document " + quote(d.doc_id) + " is invalid:";
    for (const auto& v : violations) msg += " [" + v.element_id + " " + v.rule + "]";
    throw Error(msg);
  }
}

template <typename E, std::size_t N>
std::map<std::string, std::size_t> zero_map(const E (&values)[N]) {
  std::map<std::string, std::size_t> m;
  for (E v : values) m[std::string(to_string(v))] = 0;
  return m;
}

template <typename Map>
void add_into(Map& into, const Map& from) {
  for (const auto& [k, v] : from) into[k] += v;
}

}  // namespace

std::vector<SentenceAnnotation> import_table(std::string_view csv, const ColumnMap& map) {
  CsvTable table = CsvTable::parse(csv);
  std::size_t text_col = table.require_column(map.text_column);
  std::optional<std::size_t> id_col, language_col, entities_col;
  if (map.id_column) id_col = table.require_column(*map.id_column);
  if (map.language_column) language_col = table.require_column(*map.language_column);
  if (map.entities_column) entities_col = table.require_column(*map.entities_column);

  std::vector<SentenceAnnotation> docs;
  std::set<std::string> ids;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const CsvRow& row = table.rows()[r];
    std::string where = "CSV record " + std::to_string(r + 1);
    std::string id = id_col ? std::string(internal::trim(row[*id_col]))
                            : map.id_prefix + std::to_string(r + 1);
    if (id.empty()) throw ParseError(where + ": empty document id");
    if (!ids.insert(id).second) throw ParseError(where + ": duplicate document id " + quote(id));
    std::string language = map.default_language;
    if (language_col && !internal::trim(row[*language_col]).empty()) {
      language = std::string(internal::trim(row[*language_col]));
    }
    SentenceAnnotation doc = make_sentence(std::move(id), row[text_col], std::move(language));
    if (entities_col) doc.entities = parse_entity_cell(doc, row[*entities_col], where);
    docs.push_back(std::move(doc));
  }
  return docs;
}

std::optional<ExportFormat> parse_export_format(std::string_view s) {
  if (s == "csv") return ExportFormat::kCsv;
  if (s == "jsonl") return ExportFormat::kJsonl;
  return std::nullopt;
}

const std::vector<std::string>& export_csv_columns() {
  static const std::vector<std::string> columns = {
      "doc_id",      "sentence",     "trigger_id",   "trigger_text", "trigger_start",
      "trigger_end", "type",         "subtype",      "tense",        "polarity",
      "modality",    "entity_id",    "entity_text",  "entity_start", "entity_end",
      "entity_type", "role"};
  return columns;
}

std::string export_annotations(const std::vector<SentenceAnnotation>& docs, ExportFormat format,
                               const Ontology& ontology) {
  require_valid(docs, ontology);
  if (format == ExportFormat::kJsonl) return write_jsonl(docs);

  std::string out = csv_line(export_csv_columns());
  for (const auto& d : docs) {
    for (const auto& t : d.triggers) {
      const EventSubtype* subtype = ontology.find_subtype(t.subtype);
      std::vector<std::string> trigger_fields = {
          d.doc_id,
          d.text,
          t.id,
          span_surface(d, t.span),
          std::to_string(t.span.start),
          std::to_string(t.span.end),
          subtype ? subtype->parent : "",
          t.subtype,
          std::string(to_string(t.tense)),
          std::string(to_string(t.polarity)),
          std::string(to_string(t.modality))};
      bool any = false;
      for (const auto& a : d.arguments) {
        if (a.trigger_id != t.id) continue;
        const EntityMention* e = d.find_entity(a.entity_id);
        auto fields = trigger_fields;
        fields.insert(fields.end(), {e->id, e->surface, std::to_string(e->span.start),
                                     std::to_string(e->span.end), e->entity_type, a.role});
        out += csv_line(fields);
        any = true;
      }
      if (!any) {
        auto fields = trigger_fields;
        fields.resize(export_csv_columns().size());
        out += csv_line(fields);
      }
    }
  }
  return out;
}

DatasetStats::DatasetStats()
    : triggers_by_tense(zero_map(kAllTenses)),
      triggers_by_polarity(zero_map(kAllPolarities)),
      triggers_by_modality(zero_map(kAllModalities)) {}

DatasetStats& DatasetStats::operator+=(const DatasetStats& other) {
  n_sentences += other.n_sentences;
  n_words += other.n_words;
  n_entity_mentions += other.n_entity_mentions;
  n_triggers += other.n_triggers;
  n_arguments += other.n_arguments;
  add_into(triggers_by_tense, other.triggers_by_tense);
  add_into(triggers_by_polarity, other.triggers_by_polarity);
  add_into(triggers_by_modality, other.triggers_by_modality);
  add_into(per_subtype_trigger_counts, other.per_subtype_trigger_counts);
  return *this;
}

nlohmann::ordered_json DatasetStats::to_json() const {
  nlohmann::ordered_json j;
  j["n_sentences"] = n_sentences;
  j["n_words"] = n_words;
  j["n_entity_mentions"] = n_entity_mentions;
  j["n_triggers"] = n_triggers;
  j["n_arguments"] = n_arguments;
  j["triggers_by_tense"] = triggers_by_tense;
  j["triggers_by_polarity"] = triggers_by_polarity;
  j["triggers_by_modality"] = triggers_by_modality;
  j["per_subtype_trigger_counts"] = per_subtype_trigger_counts;
  return j;
}

DatasetStats compute_stats(const std::vector<SentenceAnnotation>& docs) {
  DatasetStats s;
  for (const auto& d : docs) {
    ++s.n_sentences;
    s.n_words += d.tokens.size();
    s.n_entity_mentions += d.entities.size();
    s.n_triggers += d.triggers.size();
    s.n_arguments += d.arguments.size();
    for (const auto& t : d.triggers) {
      ++s.triggers_by_tense[std::string(to_string(t.tense))];
      ++s.triggers_by_polarity[std::string(to_string(t.polarity))];
      ++s.triggers_by_modality[std::string(to_string(t.modality))];
      ++s.per_subtype_trigger_counts[t.subtype];
    }
  }
  return s;
}

}  // namespace cofee
