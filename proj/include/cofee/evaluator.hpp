#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "cofee/annotation.hpp"

namespace cofee {

struct PRF {
  std::size_t tp = 0;
  std::size_t n_pred = 0;
  std::size_t n_gold = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;

  static PRF from_counts(std::size_t tp, std::size_t n_pred, std::size_t n_gold);
  bool operator==(const PRF&) const = default;
};

// How an argument's trigger is identified when matching arguments.
enum class ArgMatch {
  kSubtypeSpan,  // trigger subtype and span
  kSubtypeOnly,  // trigger subtype only
};
std::string_view to_string(ArgMatch m);
std::optional<ArgMatch> parse_arg_match(std::string_view s);

using TriggerKey = std::tuple<std::string, Span, std::string>;  // doc, span, subtype
// doc, trigger subtype, trigger span (zeroed in subtype-only mode), argument span
using ArgIdKey = std::tuple<std::string, std::string, Span, Span>;
using ArgClsKey = std::tuple<std::string, std::string, Span, Span, std::string>;

std::vector<TriggerKey> trigger_keys(const std::vector<SentenceAnnotation>& corpus);
// Links whose trigger or entity id does not resolve are skipped.
std::vector<ArgIdKey> argument_id_keys(const std::vector<SentenceAnnotation>& corpus,
                                       ArgMatch mode);
std::vector<ArgClsKey> argument_cls_keys(const std::vector<SentenceAnnotation>& corpus,
                                         ArgMatch mode);

// Micro-averaged scores with multiset matching: each gold key is consumed at
// most once. Both sides must hold the same set of document ids, each once;
// otherwise Error names the first offending id.
PRF score_triggers(const std::vector<SentenceAnnotation>& gold,
                   const std::vector<SentenceAnnotation>& pred);
PRF score_argument_identification(const std::vector<SentenceAnnotation>& gold,
                                  const std::vector<SentenceAnnotation>& pred,
                                  ArgMatch mode = ArgMatch::kSubtypeSpan);
PRF score_argument_classification(const std::vector<SentenceAnnotation>& gold,
                                  const std::vector<SentenceAnnotation>& pred,
                                  ArgMatch mode = ArgMatch::kSubtypeSpan);

struct ScoreReport {
  PRF trigger_classification;
  PRF argument_identification;
  PRF argument_classification;
};

ScoreReport score_all(const std::vector<SentenceAnnotation>& gold,
                      const std::vector<SentenceAnnotation>& pred,
                      ArgMatch mode = ArgMatch::kSubtypeSpan);

// [{task, tp, n_pred, n_gold, p, r, f1}, ...] in the order trigger-classification,
// argument-identification, argument-classification.
nlohmann::ordered_json to_json(const ScoreReport& report);

}  // namespace cofee
