#include "cofee/lexicon.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

#include "cofee/csv.hpp"
#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {
namespace {

using internal::quote;

// "Natural Disasters" / "natural_disasters" / "natural-disasters" -> natural-disasters
std::string name_key(std::string_view name) {
  std::string out;
  bool gap = false;
  for (char c : internal::trim(name)) {
    if (c == ' ' || c == '_' || c == '-' || c == '\t') {
      gap = true;
      continue;
    }
    if (gap && !out.empty()) out += '-';
    gap = false;
    out += (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
  }
  return out;
}

std::string_view id_suffix(std::string_view id) {
  auto dot = id.find('.');
  return dot == std::string_view::npos ? id : id.substr(dot + 1);
}

bool type_matches(const EventType& t, std::string_view column) {
  return column.empty() || t.id == column || name_key(t.display_name) == name_key(column);
}

const EventSubtype& resolve_subtype(const Ontology& o, std::string_view type_column,
                                    std::string_view subtype_column, std::size_t record) {
  if (const EventSubtype* exact = o.find_subtype(subtype_column)) return *exact;
  std::string key = name_key(subtype_column);
  std::vector<const EventSubtype*> found;
  for (const auto& s : o.subtypes()) {
    const EventType* parent = o.find_event_type(s.parent);
    if (!parent || !type_matches(*parent, type_column)) continue;
    if (id_suffix(s.id) == key || name_key(s.display_name) == key ||
        (!s.code.empty() && s.code == subtype_column)) {
      found.push_back(&s);
    }
  }
  std::string where = "lexicon record " + std::to_string(record) + ": ";
  if (found.empty()) throw UnknownElementError(where + "unknown subtype " + quote(subtype_column));
  if (found.size() > 1) {
    throw UnknownElementError(where + "ambiguous subtype " + quote(subtype_column) +
                              "; give the event type");
  }
  return *found.front();
}

std::size_t count_tokens(std::string_view normalized) {
  return normalized.empty() ? 0 : std::count(normalized.begin(), normalized.end(), ' ') + 1;
}

}  // namespace

std::string_view to_string(Provenance p) {
  switch (p) {
    case Provenance::kSeed: return "seed";
    case Provenance::kExpanded: return "expanded";
    case Provenance::kCustom: return "custom";
  }
  return "seed";
}

std::optional<Provenance> parse_provenance(std::string_view s) {
  for (Provenance p : {Provenance::kSeed, Provenance::kExpanded, Provenance::kCustom}) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

void Lexicon::add(const std::string& normalized, const std::string& subtype,
                  Provenance provenance) {
  auto [it, inserted] = entries_.try_emplace(normalized);
  LexiconEntry& e = it->second;
  if (inserted) {
    e.phrase = normalized;
    e.provenance = provenance;
    e.n_tokens = count_tokens(normalized);
  }
  e.subtypes.insert(subtype);
}

Lexicon Lexicon::from_csv(std::string_view csv, const Ontology& o) {
  CsvTable table = CsvTable::parse(csv);
  std::size_t type_col = table.require_column("type");
  std::size_t subtype_col = table.require_column("subtype");
  std::size_t phrase_col = table.require_column("phrase");
  auto provenance_col = table.column("provenance");

  Lexicon lex;
  for (std::size_t r = 0; r < table.rows().size(); ++r) {
    const CsvRow& row = table.rows()[r];
    const std::size_t record = r + 1;
    std::string normalized = normalize_phrase(row[phrase_col]);
    if (normalized.empty()) {
      throw ParseError("lexicon record " + std::to_string(record) + ": empty phrase");
    }
    if (count_tokens(normalized) > kMaxPhraseTokens) {
      throw ParseError("lexicon record " + std::to_string(record) + ": phrase " +
                       quote(row[phrase_col]) + " longer than " +
                       std::to_string(kMaxPhraseTokens) + " tokens");
    }
    Provenance provenance = Provenance::kSeed;
    if (provenance_col && !internal::trim(row[*provenance_col]).empty()) {
      auto p = parse_provenance(internal::trim(row[*provenance_col]));
      if (!p) {
        throw ParseError("lexicon record " + std::to_string(record) + ": bad provenance " +
                         quote(row[*provenance_col]));
      }
      provenance = *p;
    }
    const EventSubtype& subtype = resolve_subtype(o, internal::trim(row[type_col]),
                                                  internal::trim(row[subtype_col]), record);
    lex.add(normalized, subtype.id, provenance);
  }
  return lex;
}

Lexicon Lexicon::load_file(const std::filesystem::path& path, const Ontology& o) {
  return from_csv(read_file(path), o);
}

Lexicon Lexicon::with_entry(std::string_view phrase, std::string_view subtype_id,
                            Provenance provenance, const Ontology& o) const {
  if (!o.find_subtype(subtype_id)) {
    throw UnknownElementError("unknown subtype " + quote(subtype_id));
  }
  std::string normalized = normalize_phrase(phrase);
  if (normalized.empty()) throw ParseError("empty phrase");
  if (count_tokens(normalized) > kMaxPhraseTokens) {
    throw ParseError("phrase " + quote(phrase) + " longer than " +
                     std::to_string(kMaxPhraseTokens) + " tokens");
  }
  Lexicon out = *this;
  out.add(normalized, std::string(subtype_id), provenance);
  return out;
}

const LexiconEntry* Lexicon::find(std::string_view normalized_phrase) const {
  auto it = entries_.find(normalized_phrase);
  return it == entries_.end() ? nullptr : &it->second;
}

bool Lexicon::contains(std::string_view normalized_phrase, std::string_view subtype_id) const {
  const LexiconEntry* e = find(normalized_phrase);
  return e && e->subtypes.count(std::string(subtype_id));
}

std::set<std::string> Lexicon::covered_subtypes() const {
  std::set<std::string> out;
  for (const auto& [phrase, e] : entries_) out.insert(e.subtypes.begin(), e.subtypes.end());
  return out;
}

std::vector<MatchHit> match(const std::vector<std::string>& tokens, const Lexicon& lex) {
  std::vector<std::string> norm;
  norm.reserve(tokens.size());
  for (const auto& t : tokens) norm.push_back(normalize_token(t));

  std::vector<MatchHit> hits;
  const std::size_t n = norm.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t longest = std::min(kMaxPhraseTokens, n - i);
    bool hit = false;
    for (std::size_t len = longest; len >= 1; --len) {
      std::string key = norm[i];
      for (std::size_t j = i + 1; j < i + len; ++j) {
        key += ' ';
        key += norm[j];
      }
      if (const LexiconEntry* e = lex.find(key)) {
        hits.push_back({{static_cast<int>(i), static_cast<int>(i + len - 1)},
                        e->phrase,
                        {e->subtypes.begin(), e->subtypes.end()}});
        i += len;
        hit = true;
        break;
      }
    }
    if (!hit) ++i;
  }
  return hits;
}

std::vector<MatchHit> match_text(std::string_view text, const Lexicon& lex,
                                 const TokenizerProfile& profile) {
  return match(token_texts(text, tokenize(text, profile)), lex);
}

CoverageReport& CoverageReport::operator+=(const CoverageReport& other) {
  total_records += other.total_records;
  covered_records += other.covered_records;
  for (const auto& [k, v] : other.per_subtype_record_counts) per_subtype_record_counts[k] += v;
  for (const auto& [k, v] : other.per_subtype_occurrence_counts) {
    per_subtype_occurrence_counts[k] += v;
  }
  coverage = total_records ? static_cast<double>(covered_records) / total_records : 0.0;
  return *this;
}

nlohmann::json CoverageReport::to_json() const {
  nlohmann::json j;
  j["total_records"] = total_records;
  j["covered_records"] = covered_records;
  j["coverage"] = coverage;
  j["per_subtype_record_counts"] = per_subtype_record_counts;
  j["per_subtype_occurrence_counts"] = per_subtype_occurrence_counts;
  return j;
}

CoverageReport record_coverage(std::string_view record, const Lexicon& lex,
                               const TokenizerProfile& profile) {
  CoverageReport r;
  r.total_records = 1;
  auto hits = match_text(record, lex, profile);
  std::set<std::string> seen;
  for (const auto& h : hits) {
    for (const auto& s : h.subtypes) {
      ++r.per_subtype_occurrence_counts[s];
      seen.insert(s);
    }
  }
  for (const auto& s : seen) r.per_subtype_record_counts[s] = 1;
  r.covered_records = hits.empty() ? 0 : 1;
  r.coverage = static_cast<double>(r.covered_records);
  return r;
}

CoverageReport coverage(const std::vector<std::string>& records, const Lexicon& lex,
                        const TokenizerProfile& profile) {
  if (records.empty()) throw Error("coverage of an empty corpus is undefined");
  CoverageReport total;
  for (const auto& r : records) total += record_coverage(r, lex, profile);
  return total;
}

std::string coverage_report_text(const CoverageReport& report) {
  return report.to_json().dump(2) + "\n";
}

EmbeddingTable EmbeddingTable::parse(std::string_view text) {
  EmbeddingTable t;
  int line_no = 0;
  for (auto raw : internal::split(text, '\n')) {
    ++line_no;
    auto line = internal::trim(raw);
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    for (auto f : internal::split(line, ' ')) {
      if (!f.empty()) fields.push_back(f);
    }
    if (line_no == 1 && fields.size() == 2 &&
        std::all_of(line.begin(), line.end(), [](char c) { return c == ' ' || std::isdigit(static_cast<unsigned char>(c)); })) {
      continue;  // "count dim" header
    }
    if (fields.size() < 2) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": no vector");
    }
    std::vector<double> v;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = 0;
      auto [ptr, ec] = std::from_chars(fields[i].data(), fields[i].data() + fields[i].size(), x);
      if (ec != std::errc() || ptr != fields[i].data() + fields[i].size()) {
        throw ParseError("embedding line " + std::to_string(line_no) + ": bad number " +
                         quote(fields[i]));
      }
      v.push_back(x);
    }
    if (t.dim_ == 0) t.dim_ = v.size();
    if (v.size() != t.dim_) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": dimension " +
                       std::to_string(v.size()) + ", expected " + std::to_string(t.dim_));
    }
    double norm = std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
    if (norm == 0.0) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": zero vector");
    }
    for (double& x : v) x /= norm;
    std::string word(fields[0]);
    if (!t.index_.emplace(word, t.words_.size()).second) {
      throw ParseError("embedding line " + std::to_string(line_no) + ": duplicate word " +
                       quote(word));
    }
    t.words_.push_back(std::move(word));
    t.unit_vectors_.push_back(std::move(v));
  }
  return t;
}

EmbeddingTable EmbeddingTable::load_file(const std::filesystem::path& path) {
  return parse(read_file(path));
}

std::vector<std::string> EmbeddingTable::neighbors(std::string_view phrase, std::size_t k) const {
  auto it = index_.find(phrase);
  if (it == index_.end()) {
    throw UnknownElementError("no vector for " + quote(phrase));
  }
  const auto& q = unit_vectors_[it->second];
  std::vector<std::pair<double, std::size_t>> scored;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i == it->second) continue;
    const auto& v = unit_vectors_[i];
    scored.emplace_back(std::inner_product(q.begin(), q.end(), v.begin(), 0.0), i);
  }
  auto better = [this](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return words_[a.second] < words_[b.second];
  };
  std::size_t take = std::min(k, scored.size());
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(), better);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < take; ++i) out.push_back(words_[scored[i].second]);
  return out;
}

ExpansionResult expand_lexicon(const Lexicon& seed, const SimilarityProvider& provider,
                               std::size_t k, const Lemmatizer& lemmatize) {
  ExpansionResult result;
  std::set<std::pair<std::string, std::string>> proposed;
  for (const auto& [phrase, entry] : seed.entries()) {
    std::vector<std::string> neighbors;
    try {
      neighbors = provider.neighbors(phrase, k);
    } catch (const std::exception& e) {
      result.failures.push_back({phrase, e.what()});
      continue;
    }
    if (neighbors.size() > k) neighbors.resize(k);
    for (const auto& n : neighbors) {
      std::string candidate = normalize_phrase(lemmatize ? lemmatize(n) : n);
      if (candidate.empty() || candidate == phrase) continue;
      for (const auto& subtype : entry.subtypes) {
        if (seed.contains(candidate, subtype)) continue;
        if (!proposed.emplace(candidate, subtype).second) continue;
        result.candidates.push_back({candidate, subtype, phrase});
      }
    }
  }
  return result;
}

std::string candidates_to_csv(const std::vector<ExpansionCandidate>& candidates) {
  std::string out = csv_line({"phrase", "subtype", "source_seed"});
  for (const auto& c : candidates) out += csv_line({c.phrase, c.subtype, c.source_seed});
  return out;
}

}  // namespace cofee
