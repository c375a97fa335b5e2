#include <doctest.h>

#include <cmath>
#include <random>

#include "cofee/annotation_json.hpp"
#include "cofee/error.hpp"
#include "cofee/evaluator.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace cofee;

namespace {

void check_equal(const PRF& got, const oracle::Counts& want) {
  CHECK(got.tp == want.tp);
  CHECK(got.n_pred == want.n_pred);
  CHECK(got.n_gold == want.n_gold);
  CHECK(std::abs(got.precision - want.p) <= 1e-12);
  CHECK(std::abs(got.recall - want.r) <= 1e-12);
  CHECK(std::abs(got.f1 - want.f1) <= 1e-12);
}

SentenceAnnotation small_doc() {
  SentenceAnnotation d = make_sentence("s", "fire kills three in city");
  d.entities = {{"E1", {2, 2}, "numeric", "three"}, {"E2", {4, 4}, "location", "city"}};
  d.triggers = {{"T1", {1, 1}, "life.death"}};
  d.arguments = {{"T1", "E1", "number-of-participants"}, {"T1", "E2", "place"}};
  return d;
}

}  // namespace

TEST_CASE("hand-counted fixture") {
  auto gold = read_jsonl(fixtures::read("scorer_gold.jsonl"));
  auto pred = read_jsonl(fixtures::read("scorer_pred.jsonl"));
  for (ArgMatch mode : {ArgMatch::kSubtypeSpan, ArgMatch::kSubtypeOnly}) {
    CAPTURE(to_string(mode));
    auto r = score_all(gold, pred, mode);
    CHECK(r.trigger_classification.tp == 3);
    CHECK(r.trigger_classification.n_pred == 4);
    CHECK(r.trigger_classification.n_gold == 5);
    CHECK(r.trigger_classification.precision == 0.75);
    CHECK(r.trigger_classification.recall == 0.6);
    CHECK(std::abs(r.trigger_classification.f1 - 2.0 / 3.0) <= 1e-12);
    CHECK(r.argument_identification.tp == 4);
    CHECK(r.argument_identification.n_pred == 5);
    CHECK(r.argument_identification.n_gold == 6);
    CHECK(std::abs(r.argument_identification.f1 - 8.0 / 11.0) <= 1e-12);
    CHECK(r.argument_classification.tp == 3);
    CHECK(std::abs(r.argument_classification.f1 - 6.0 / 11.0) <= 1e-12);
  }
}

TEST_CASE("perfect and empty predictions") {
  auto gold = std::vector<SentenceAnnotation>{fixtures::cholera(), small_doc()};
  auto r = score_all(gold, gold);
  for (const PRF* s : {&r.trigger_classification, &r.argument_identification,
                       &r.argument_classification}) {
    CHECK(s->precision == 1.0);
    CHECK(s->recall == 1.0);
    CHECK(s->f1 == 1.0);
  }
  CHECK(r.argument_classification.n_gold == 17);

  auto empty = gold;
  for (auto& d : empty) {
    d.triggers.clear();
    d.arguments.clear();
  }
  r = score_all(gold, empty);
  CHECK(r.trigger_classification.n_pred == 0);
  CHECK(r.trigger_classification.precision == 0.0);
  CHECK(r.trigger_classification.f1 == 0.0);
  CHECK(r.argument_classification.recall == 0.0);

  r = score_all(empty, empty);
  CHECK(r.trigger_classification.f1 == 0.0);
}

TEST_CASE("right span, wrong role") {
  auto gold = std::vector<SentenceAnnotation>{small_doc()};
  auto pred = gold;
  pred[0].arguments[1].role = "time";
  CHECK(score_argument_identification(gold, pred).tp == 2);
  CHECK(score_argument_classification(gold, pred).tp == 1);
}

TEST_CASE("subtype-only ignores the trigger span") {
  auto gold = std::vector<SentenceAnnotation>{small_doc()};
  auto pred = gold;
  pred[0].triggers[0].span = {0, 1};
  CHECK(score_triggers(gold, pred).tp == 0);
  CHECK(score_argument_identification(gold, pred, ArgMatch::kSubtypeSpan).tp == 0);
  CHECK(score_argument_identification(gold, pred, ArgMatch::kSubtypeOnly).tp == 2);
  CHECK(score_argument_classification(gold, pred, ArgMatch::kSubtypeOnly).tp == 2);
  pred[0].triggers[0].subtype = "life.injury";
  CHECK(score_argument_identification(gold, pred, ArgMatch::kSubtypeOnly).tp == 0);
}

TEST_CASE("duplicates count once per gold item") {
  auto gold = std::vector<SentenceAnnotation>{small_doc()};
  auto pred = gold;
  pred[0].triggers.push_back(pred[0].triggers[0]);
  auto s = score_triggers(gold, pred);
  CHECK(s.tp == 1);
  CHECK(s.n_pred == 2);
  CHECK(s.precision == 0.5);

  gold[0].triggers.push_back(gold[0].triggers[0]);
  s = score_triggers(gold, pred);
  CHECK(s.tp == 2);
  CHECK(s.f1 == 1.0);
}

TEST_CASE("document sets must agree") {
  auto gold = std::vector<SentenceAnnotation>{small_doc()};
  auto pred = gold;
  pred[0].doc_id = "other";
  CHECK_THROWS_AS(score_triggers(gold, pred), Error);
  CHECK_THROWS_AS(score_all(gold, {}), Error);
  auto twice = std::vector<SentenceAnnotation>{small_doc(), small_doc()};
  try {
    score_triggers(twice, twice);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("'s'") != std::string::npos);
  }
}

TEST_CASE("scores equal the brute-force matcher on random micro-corpora") {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 500; ++trial) {
    auto [gold, pred] = fixtures::random_scoring_pair(rng);
    CAPTURE(trial);
    check_equal(score_triggers(gold, pred),
                oracle::greedy(oracle::trigger_items(gold), oracle::trigger_items(pred)));
    for (bool span_mode : {true, false}) {
      ArgMatch mode = span_mode ? ArgMatch::kSubtypeSpan : ArgMatch::kSubtypeOnly;
      check_equal(score_argument_identification(gold, pred, mode),
                  oracle::greedy(oracle::argument_items(gold, false, span_mode),
                                 oracle::argument_items(pred, false, span_mode)));
      check_equal(score_argument_classification(gold, pred, mode),
                  oracle::greedy(oracle::argument_items(gold, true, span_mode),
                                 oracle::argument_items(pred, true, span_mode)));
    }
  }
}

TEST_CASE("score relations") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    auto [gold, pred] = fixtures::random_scoring_pair(rng);
    auto span = score_all(gold, pred, ArgMatch::kSubtypeSpan);
    auto loose = score_all(gold, pred, ArgMatch::kSubtypeOnly);
    // A role match implies an identification match; dropping the span only adds matches.
    CHECK(span.argument_classification.tp <= span.argument_identification.tp);
    CHECK(span.argument_identification.tp <= loose.argument_identification.tp);
    CHECK(span.argument_classification.tp <= loose.argument_classification.tp);
    // Swapping sides swaps precision and recall.
    auto swapped = score_triggers(pred, gold);
    CHECK(swapped.precision == span.trigger_classification.recall);
    CHECK(swapped.recall == span.trigger_classification.precision);
  }
}

TEST_CASE("report JSON and mode names") {
  auto gold = std::vector<SentenceAnnotation>{small_doc()};
  auto j = to_json(score_all(gold, gold));
  REQUIRE(j.size() == 3);
  CHECK(j[0]["task"] == "trigger-classification");
  CHECK(j[1]["task"] == "argument-identification");
  CHECK(j[2]["task"] == "argument-classification");
  std::vector<std::string> keys;
  for (auto it = j[2].begin(); it != j[2].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"task", "tp", "n_pred", "n_gold", "p", "r", "f1"});
  CHECK(j[2]["n_gold"] == 2);

  CHECK(parse_arg_match("subtype-only") == ArgMatch::kSubtypeOnly);
  CHECK(parse_arg_match("subtype-span") == ArgMatch::kSubtypeSpan);
  CHECK_FALSE(parse_arg_match("span").has_value());
  CHECK(to_string(ArgMatch::kSubtypeOnly) == "subtype-only");
}
