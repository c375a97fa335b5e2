#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cofee/annotation.hpp"
#include "cofee/ontology.hpp"

namespace cofee {

struct ColumnMap {
  std::string text_column = "text";
  // Without an id column documents get "<id_prefix><row>", rows counted from 1.
  std::optional<std::string> id_column;
  std::string id_prefix = "row-";
  std::optional<std::string> language_column;
  std::string default_language = "en";
  // Pre-extracted entities as "start-end:type;start-end:type" over token
  // indices (end inclusive); ids are E1, E2, ... per document.
  std::optional<std::string> entities_column;
};

// One skeleton document per CSV row. Throws ParseError naming a missing
// mapped column, a duplicate document id or a malformed entity cell.
std::vector<SentenceAnnotation> import_table(std::string_view csv, const ColumnMap& map);

enum class ExportFormat { kCsv, kJsonl };
std::optional<ExportFormat> parse_export_format(std::string_view s);

// Column order of the CSV export.
const std::vector<std::string>& export_csv_columns();

// CSV: one row per (trigger, argument) pair plus one row per trigger with no
// arguments; sentences without triggers produce no rows. JSONL: canonical
// documents. Throws Error listing the violations of the first invalid doc.
std::string export_annotations(const std::vector<SentenceAnnotation>& docs, ExportFormat format,
                               const Ontology& ontology);

struct DatasetStats {
  std::size_t n_sentences = 0;
  std::size_t n_words = 0;
  std::size_t n_entity_mentions = 0;
  std::size_t n_triggers = 0;
  std::size_t n_arguments = 0;
  // Every enum value is present, possibly with count 0.
  std::map<std::string, std::size_t> triggers_by_tense;
  std::map<std::string, std::size_t> triggers_by_polarity;
  std::map<std::string, std::size_t> triggers_by_modality;
  std::map<std::string, std::size_t> per_subtype_trigger_counts;

  DatasetStats();
  DatasetStats& operator+=(const DatasetStats& other);
  bool operator==(const DatasetStats&) const = default;

  nlohmann::ordered_json to_json() const;
};

DatasetStats compute_stats(const std::vector<SentenceAnnotation>& docs);

}  // namespace cofee
