#include "cofee/evaluator.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {
namespace {

void check_same_documents(const std::vector<SentenceAnnotation>& gold,
                          const std::vector<SentenceAnnotation>& pred) {
  auto ids = [](const std::vector<SentenceAnnotation>& corpus, std::string_view side) {
    std::set<std::string> out;
    for (const auto& d : corpus) {
      if (!out.insert(d.doc_id).second) {
        throw Error("duplicate document " + internal::quote(d.doc_id) + " in " +
                    std::string(side));
      }
    }
    return out;
  };
  auto g = ids(gold, "gold");
  auto p = ids(pred, "predictions");
  for (const auto& id : g) {
    if (!p.count(id)) throw Error("document " + internal::quote(id) + " missing from predictions");
  }
  for (const auto& id : p) {
    if (!g.count(id)) throw Error("document " + internal::quote(id) + " missing from gold");
  }
}

template <typename Key>
std::size_t multiset_intersection(const std::vector<Key>& gold, const std::vector<Key>& pred) {
  std::map<Key, std::size_t> counts;
  for (const auto& k : gold) ++counts[k];
  std::size_t tp = 0;
  for (const auto& k : pred) {
    auto it = counts.find(k);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++tp;
    }
  }
  return tp;
}

template <typename Key>
PRF score_keys(const std::vector<Key>& gold, const std::vector<Key>& pred) {
  return PRF::from_counts(multiset_intersection(gold, pred), pred.size(), gold.size());
}

template <typename Emit>
void for_each_argument(const std::vector<SentenceAnnotation>& corpus, ArgMatch mode, Emit emit) {
  for (const auto& d : corpus) {
    for (const auto& link : d.arguments) {
      const TriggerMention* t = d.find_trigger(link.trigger_id);
      const EntityMention* e = d.find_entity(link.entity_id);
      if (!t || !e) continue;
      Span trigger_span = mode == ArgMatch::kSubtypeSpan ? t->span : Span{};
      emit(d.doc_id, t->subtype, trigger_span, e->span, link.role);
    }
  }
}

}  // namespace

PRF PRF::from_counts(std::size_t tp, std::size_t n_pred, std::size_t n_gold) {
  PRF r;
  r.tp = tp;
  r.n_pred = n_pred;
  r.n_gold = n_gold;
  r.precision = n_pred ? static_cast<double>(tp) / static_cast<double>(n_pred) : 0.0;
  r.recall = n_gold ? static_cast<double>(tp) / static_cast<double>(n_gold) : 0.0;
  double sum = r.precision + r.recall;
  r.f1 = sum > 0 ? 2.0 * r.precision * r.recall / sum : 0.0;
  return r;
}

std::string_view to_string(ArgMatch m) {
  return m == ArgMatch::kSubtypeSpan ? "subtype-span" : "subtype-only";
}

std::optional<ArgMatch> parse_arg_match(std::string_view s) {
  if (s == "subtype-span") return ArgMatch::kSubtypeSpan;
  if (s == "subtype-only") return ArgMatch::kSubtypeOnly;
  return std::nullopt;
}

std::vector<TriggerKey> trigger_keys(const std::vector<SentenceAnnotation>& corpus) {
  std::vector<TriggerKey> keys;
  for (const auto& d : corpus) {
    for (const auto& t : d.triggers) keys.emplace_back(d.doc_id, t.span, t.subtype);
  }
  return keys;
}

std::vector<ArgIdKey> argument_id_keys(const std::vector<SentenceAnnotation>& corpus,
                                       ArgMatch mode) {
  std::vector<ArgIdKey> keys;
  for_each_argument(corpus, mode,
                    [&](const std::string& doc, const std::string& subtype, Span ts, Span es,
                        const std::string&) { keys.emplace_back(doc, subtype, ts, es); });
  return keys;
}

std::vector<ArgClsKey> argument_cls_keys(const std::vector<SentenceAnnotation>& corpus,
                                         ArgMatch mode) {
  std::vector<ArgClsKey> keys;
  for_each_argument(corpus, mode,
                    [&](const std::string& doc, const std::string& subtype, Span ts, Span es,
                        const std::string& role) {
                      keys.emplace_back(doc, subtype, ts, es, role);
                    });
  return keys;
}

PRF score_triggers(const std::vector<SentenceAnnotation>& gold,
                   const std::vector<SentenceAnnotation>& pred) {
  check_same_documents(gold, pred);
  return score_keys(trigger_keys(gold), trigger_keys(pred));
}

PRF score_argument_identification(const std::vector<SentenceAnnotation>& gold,
                                  const std::vector<SentenceAnnotation>& pred, ArgMatch mode) {
  check_same_documents(gold, pred);
  return score_keys(argument_id_keys(gold, mode), argument_id_keys(pred, mode));
}

PRF score_argument_classification(const std::vector<SentenceAnnotation>& gold,
                                  const std::vector<SentenceAnnotation>& pred, ArgMatch mode) {
  check_same_documents(gold, pred);
  return score_keys(argument_cls_keys(gold, mode), argument_cls_keys(pred, mode));
}

ScoreReport score_all(const std::vector<SentenceAnnotation>& gold,
                      const std::vector<SentenceAnnotation>& pred, ArgMatch mode) {
  return {score_triggers(gold, pred), score_argument_identification(gold, pred, mode),
          score_argument_classification(gold, pred, mode)};
}

nlohmann::ordered_json to_json(const ScoreReport& report) {
  auto row = [](std::string_view task, const PRF& s) {
    nlohmann::ordered_json j;
    j["task"] = task;
    j["tp"] = s.tp;
    j["n_pred"] = s.n_pred;
    j["n_gold"] = s.n_gold;
    j["p"] = s.precision;
    j["r"] = s.recall;
    j["f1"] = s.f1;
    return j;
  };
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  out.push_back(row("trigger-classification", report.trigger_classification));
  out.push_back(row("argument-identification", report.argument_identification));
  out.push_back(row("argument-classification", report.argument_classification));
  return out;
}

}  // namespace cofee
