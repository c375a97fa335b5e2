#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cofee/annotation.hpp"
#include "cofee/ontology.hpp"
#include "cofee/text.hpp"

namespace cofee {

inline constexpr std::size_t kMaxPhraseTokens = 5;

enum class Provenance { kSeed, kExpanded, kCustom };
std::string_view to_string(Provenance p);
std::optional<Provenance> parse_provenance(std::string_view s);

struct LexiconEntry {
  std::string phrase;  // normalized tokens joined by single spaces
  std::set<std::string> subtypes;
  Provenance provenance = Provenance::kSeed;  // of the first row that introduced the phrase
  std::size_t n_tokens = 0;

  bool operator==(const LexiconEntry&) const = default;
};

class Lexicon {
 public:
  Lexicon() = default;

  // CSV with header type,subtype,phrase,provenance. The subtype column may
  // hold a subtype id, the part of the id after the dot, the display name or
  // the code alias; the type column (may be empty) narrows the search by
  // event type id or display name. Throws UnknownElementError for an
  // unresolvable subtype and ParseError for empty or over-long phrases.
  static Lexicon from_csv(std::string_view csv, const Ontology& o);
  static Lexicon load_file(const std::filesystem::path& path, const Ontology& o);

  // New lexicon with one more (phrase, subtype) pair; this one is unchanged.
  Lexicon with_entry(std::string_view phrase, std::string_view subtype_id,
                     Provenance provenance, const Ontology& o) const;

  const LexiconEntry* find(std::string_view normalized_phrase) const;
  bool contains(std::string_view normalized_phrase, std::string_view subtype_id) const;
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const { return entries_; }
  std::set<std::string> covered_subtypes() const;
  std::size_t size() const { return entries_.size(); }

 private:
  void add(const std::string& normalized, const std::string& subtype, Provenance provenance);

  std::map<std::string, LexiconEntry, std::less<>> entries_;
};

struct MatchHit {
  Span span;
  std::string phrase;
  std::vector<std::string> subtypes;  // sorted

  bool operator==(const MatchHit&) const = default;
};

// Leftmost-longest scan over windows of up to five tokens; a hit consumes
// its window so overlapped shorter phrases are not reported.
std::vector<MatchHit> match(const std::vector<std::string>& tokens, const Lexicon& lex);
std::vector<MatchHit> match_text(std::string_view text, const Lexicon& lex,
                                 const TokenizerProfile& profile = TokenizerProfile{});

struct CoverageReport {
  std::size_t total_records = 0;
  std::size_t covered_records = 0;
  double coverage = 0.0;
  std::map<std::string, std::size_t> per_subtype_record_counts;
  std::map<std::string, std::size_t> per_subtype_occurrence_counts;

  // Shard merge: counts add, coverage is recomputed.
  CoverageReport& operator+=(const CoverageReport& other);
  bool operator==(const CoverageReport&) const = default;

  nlohmann::json to_json() const;
};

// Report for a single record; sums of these give corpus reports.
CoverageReport record_coverage(std::string_view record, const Lexicon& lex,
                               const TokenizerProfile& profile = TokenizerProfile{});

// Throws Error on an empty corpus.
CoverageReport coverage(const std::vector<std::string>& records, const Lexicon& lex,
                        const TokenizerProfile& profile = TokenizerProfile{});

// Pretty-printed report with sorted keys and a trailing newline.
std::string coverage_report_text(const CoverageReport& report);

class SimilarityProvider {
 public:
  virtual ~SimilarityProvider() = default;
  // Most similar phrases first. May throw; the caller records the failure.
  virtual std::vector<std::string> neighbors(std::string_view phrase, std::size_t k) const = 0;
};

// Word vectors in the common text format: one "word v1 v2 ... vd" per line.
// An optional "count dim" first line is skipped. Neighbors rank by cosine
// similarity, ties by word, and never include the query itself.
class EmbeddingTable : public SimilarityProvider {
 public:
  static EmbeddingTable parse(std::string_view text);
  static EmbeddingTable load_file(const std::filesystem::path& path);

  std::vector<std::string> neighbors(std::string_view phrase, std::size_t k) const override;
  std::size_t size() const { return words_.size(); }
  std::size_t dimension() const { return dim_; }

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> words_;
  std::vector<std::vector<double>> unit_vectors_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

using Lemmatizer = std::function<std::string(std::string_view)>;

struct ExpansionCandidate {
  std::string phrase;
  std::string subtype;
  std::string source_seed;

  bool operator==(const ExpansionCandidate&) const = default;
};

struct ExpansionFailure {
  std::string seed;
  std::string message;
};

struct ExpansionResult {
  std::vector<ExpansionCandidate> candidates;
  std::vector<ExpansionFailure> failures;
};

// For each lexicon phrase (sorted), asks the provider for k neighbors,
// lemmatizes and normalizes them, and proposes (neighbor, subtype) for every
// subtype of the seed unless the lexicon already has that pair or it was
// already proposed. Candidates are for review; the lexicon is not changed.
ExpansionResult expand_lexicon(const Lexicon& seed, const SimilarityProvider& provider,
                               std::size_t k, const Lemmatizer& lemmatize = {});

// Header phrase,subtype,source_seed then one CRLF-terminated row per candidate.
std::string candidates_to_csv(const std::vector<ExpansionCandidate>& candidates);

}  // namespace cofee
