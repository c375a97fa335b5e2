#pragma once

#include <algorithm>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cofee/annotation.hpp"
#include "cofee/ontology.hpp"

namespace fixtures {

inline std::filesystem::path path(const std::string& name) {
  return std::filesystem::path(COFEE_FIXTURE_DIR) / name;
}

inline std::string read(const std::string& name) { return cofee::read_file(path(name)); }

inline constexpr const char* kCholeraText =
    "A cholera outbreak has since April 27 killed at least 115 people and left another "
    "8,500 ill across Yemen.";

// The example sentence with every entity and arc drawn in the worked
// example: 7 entities, 3 triggers, 15 links.
//   0 A  1 cholera  2 outbreak  3 has  4 since  5 April  6 27  7 killed
//   8 at  9 least  10 115  11 people  12 and  13 left  14 another  15 8,500
//   16 ill  17 across  18 Yemen  19 .
inline cofee::SentenceAnnotation cholera() {
  using namespace cofee;
  SentenceAnnotation s = make_sentence("cholera", kCholeraText, "en");
  s.entities = {
      {"E1", {0, 1}, "disease", "A cholera"},
      {"E2", {4, 6}, "time", "since April 27"},
      {"E3", {10, 10}, "numeric", "115"},
      {"E4", {11, 11}, "person", "people"},
      {"E5", {14, 14}, "person", "another"},
      {"E6", {15, 15}, "numeric", "8,500"},
      {"E7", {18, 18}, "geo-political-entity", "Yemen"},
  };
  s.triggers = {
      {"T1", {2, 2}, "environment.epidemics", Tense::kPast, Polarity::kPositive,
       Modality::kAsserted},
      {"T2", {7, 7}, "life.death", Tense::kPast, Polarity::kPositive, Modality::kAsserted},
      {"T3", {16, 16}, "life.injury", Tense::kPast, Polarity::kPositive, Modality::kAsserted},
  };
  s.arguments = {
      {"T1", "E1", "source"},
      {"T1", "E2", "time"},
      {"T1", "E3", "number-of-deaths"},
      {"T1", "E4", "target"},
      {"T1", "E5", "target"},
      {"T1", "E6", "number-of-injuries"},
      {"T1", "E7", "place"},
      {"T2", "E2", "time"},
      {"T2", "E3", "number-of-participants"},
      {"T2", "E4", "participant"},
      {"T2", "E7", "place"},
      {"T3", "E2", "time"},
      {"T3", "E5", "participant"},
      {"T3", "E6", "number-of-participants"},
      {"T3", "E7", "place"},
  };
  return s;
}

inline const std::vector<std::string>& vocabulary() {
  static const std::vector<std::string> words = {
      "storm", "hits",  "coast",  "police", "arrest", "two",   "men",     "in",
      "city",  "bank",  "raises", "rates",  "the",    "fire",  "kills",   "three",
      "vote",  "held",  "on",     "sunday", "quake",  "near",  "capital", "strike",
  };
  return words;
}

// Random sentence that passes validate_annotation: non-overlapping
// triggers, entities typed to fit the slot they fill, at most one link per
// (trigger, entity) pair.
template <class Rng>
cofee::SentenceAnnotation random_valid(const cofee::Ontology& o, Rng& rng, std::string doc_id,
                                       int max_tokens = 20) {
  using namespace cofee;
  std::uniform_int_distribution<int> n_dist(1, max_tokens);
  const int n = n_dist(rng);
  std::string text;
  for (int i = 0; i < n; ++i) {
    if (i) text += ' ';
    text += vocabulary()[rng() % vocabulary().size()];
  }
  SentenceAnnotation s = make_sentence(std::move(doc_id), text, "en");

  // Triggers: walk left to right, sometimes opening a span of 1-3 tokens.
  int pos = 0;
  while (pos < n) {
    if (rng() % 3 == 0) {
      int len = 1 + static_cast<int>(rng() % 3);
      len = std::min(len, n - pos);
      const auto& sub = o.subtypes()[rng() % o.subtypes().size()];
      TriggerMention t;
      t.id = "T" + std::to_string(s.triggers.size() + 1);
      t.span = {pos, pos + len - 1};
      t.subtype = sub.id;
      t.tense = kAllTenses[rng() % 4];
      t.polarity = kAllPolarities[rng() % 2];
      t.modality = kAllModalities[rng() % 2];
      s.triggers.push_back(t);
      pos += len;
    } else {
      ++pos;
    }
  }

  for (const auto& t : s.triggers) {
    auto slots = o.allowed_roles(t.subtype);
    std::shuffle(slots.begin(), slots.end(), rng);
    std::size_t k = rng() % (std::min<std::size_t>(slots.size(), 3) + 1);
    for (std::size_t i = 0; i < k; ++i) {
      const auto& slot = slots[i];
      const std::string& type =
          slot.allowed_entity_types[rng() % slot.allowed_entity_types.size()];
      int a = static_cast<int>(rng() % n);
      int b = std::min(n - 1, a + static_cast<int>(rng() % 2));
      EntityMention e;
      e.id = "E" + std::to_string(s.entities.size() + 1);
      e.span = {a, b};
      e.entity_type = type;
      e.surface = span_surface(s, e.span);
      s.entities.push_back(e);
      s.arguments.push_back({t.id, e.id, slot.role});
    }
  }
  return s;
}

// Gold/pred micro-corpora for scorer checks. Labels come from tiny pools so
// collisions and duplicate keys are common; a few links dangle.
template <class Rng>
std::pair<std::vector<cofee::SentenceAnnotation>, std::vector<cofee::SentenceAnnotation>>
random_scoring_pair(Rng& rng, int max_docs = 10) {
  using namespace cofee;
  static const char* kSubtypes[] = {"life.death", "life.injury", "justice.arrest"};
  static const char* kRoles[] = {"participant", "time", "place"};
  auto pick_span = [&rng] {
    int a = static_cast<int>(rng() % 4);
    return Span{a, a + static_cast<int>(rng() % 2)};
  };
  auto random_doc = [&](const std::string& id) {
    SentenceAnnotation d;
    d.doc_id = id;
    int nt = static_cast<int>(rng() % 4), ne = static_cast<int>(rng() % 4);
    for (int i = 0; i < nt; ++i) {
      d.triggers.push_back({"T" + std::to_string(i + 1), pick_span(), kSubtypes[rng() % 3]});
    }
    for (int i = 0; i < ne; ++i) {
      d.entities.push_back({"E" + std::to_string(i + 1), pick_span(), "person", ""});
    }
    int na = static_cast<int>(rng() % 6);
    for (int i = 0; i < na && nt > 0 && ne > 0; ++i) {
      std::string t = "T" + std::to_string(1 + rng() % (nt + (rng() % 8 == 0)));
      std::string e = "E" + std::to_string(1 + rng() % (ne + (rng() % 8 == 0)));
      d.arguments.push_back({t, e, kRoles[rng() % 3]});
    }
    return d;
  };

  int n = 1 + static_cast<int>(rng() % max_docs);
  std::vector<SentenceAnnotation> gold, pred;
  for (int i = 0; i < n; ++i) {
    auto g = random_doc("d" + std::to_string(i));
    SentenceAnnotation p = rng() % 4 == 0 ? random_doc(g.doc_id) : g;
    for (auto& t : p.triggers) {
      if (rng() % 4 == 0) t.subtype = kSubtypes[rng() % 3];
      if (rng() % 5 == 0) t.span = pick_span();
    }
    for (auto& e : p.entities) {
      if (rng() % 5 == 0) e.span = pick_span();
    }
    for (auto& a : p.arguments) {
      if (rng() % 4 == 0) a.role = kRoles[rng() % 3];
    }
    if (!p.arguments.empty() && rng() % 3 == 0) p.arguments.push_back(p.arguments.front());
    if (!p.triggers.empty() && rng() % 3 == 0) p.triggers.push_back(p.triggers.back());
    gold.push_back(std::move(g));
    pred.push_back(std::move(p));
  }
  std::shuffle(pred.begin(), pred.end(), rng);
  return {gold, pred};
}

// Sentences with 0-3 triggers; subtypes drawn with Zipf-like weights so the
// corpus has both large classes and a long tail of rare ones.
inline std::vector<cofee::SentenceAnnotation> synthetic_corpus(std::size_t n, std::uint64_t seed) {
  const cofee::Ontology& o = cofee::bundled_ontology();
  std::mt19937_64 rng(seed);
  std::vector<double> weights;
  for (std::size_t i = 0; i < o.subtypes().size(); ++i) weights.push_back(1.0 / double(i + 1));
  std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
  std::vector<std::size_t> order(o.subtypes().size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<cofee::SentenceAnnotation> out;
  for (std::size_t i = 0; i < n; ++i) {
    cofee::SentenceAnnotation s = cofee::make_sentence("s" + std::to_string(i), "a b c d e f");
    int k = static_cast<int>(rng() % 4);
    for (int t = 0; t < k; ++t) {
      s.triggers.push_back({"T" + std::to_string(t + 1), {t, t},
                            o.subtypes()[order[pick(rng)]].id});
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace fixtures
