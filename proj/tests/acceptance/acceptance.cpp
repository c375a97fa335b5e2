// Acceptance gate: one PASS/FAIL/SKIP line per criterion. Exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "cofee/annotation_json.hpp"
#include "cofee/corpus.hpp"
#include "cofee/csv.hpp"
#include "cofee/evaluator.hpp"
#include "cofee/iob.hpp"
#include "cofee/lexicon.hpp"
#include "cofee/split.hpp"
#include "support/oracles.hpp"
#include "support/service_harness.hpp"

using namespace cofee;

namespace {

struct Outcome {
  enum Kind { kPass, kFail, kSkip } kind = kPass;
  std::string detail;
};

// Accumulates failures; the first one becomes the detail.
struct Checker {
  bool ok = true;
  std::string first;
  void expect(bool cond, const std::string& what) {
    if (!cond && ok) first = what;
    ok = ok && cond;
  }
  Outcome done(const std::string& summary) const {
    return ok ? Outcome{Outcome::kPass, summary} : Outcome{Outcome::kFail, first};
  }
};

int failures = 0;

void run(const char* name, double limit_s, const std::function<Outcome()>& body) {
  auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {Outcome::kFail, std::string("exception: ") + e.what()};
  }
  double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (o.kind != Outcome::kSkip && limit_s > 0 && s >= limit_s) {
    o = {Outcome::kFail, o.detail + "; took " + std::to_string(s) + " s, limit " +
                             std::to_string(limit_s) + " s"};
  }
  const char* tag = o.kind == Outcome::kPass ? "PASS" : o.kind == Outcome::kFail ? "FAIL" : "SKIP";
  if (o.kind == Outcome::kFail) ++failures;
  std::printf("%s  %-28s %8.3f s  %s\n", tag, name, s, o.detail.c_str());
  std::fflush(stdout);
}

bool close(double a, double b) { return std::abs(a - b) <= 1e-12; }

bool same(const PRF& got, const oracle::Counts& want) {
  return got.tp == want.tp && got.n_pred == want.n_pred && got.n_gold == want.n_gold &&
         close(got.precision, want.p) && close(got.recall, want.r) && close(got.f1, want.f1);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    if (nl > pos) out.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  return out;
}

Outcome ontology_integrity() {
  Ontology o = Ontology::load_file(data_dir() / "cofee.ontology");
  Checker c;
  c.expect(o.event_types().size() == 12, "event types: " + std::to_string(o.event_types().size()));
  c.expect(o.subtypes().size() == 119, "subtypes: " + std::to_string(o.subtypes().size()));
  c.expect(o.roles().size() == 21, "roles: " + std::to_string(o.roles().size()));
  c.expect(o.entity_types().size() == 11,
           "entity types: " + std::to_string(o.entity_types().size()));
  std::size_t types = 0;
  for (const auto& slot : o.role_slots()) {
    bool ok = o.find_subtype(slot.subtype) && o.find_role(slot.role) &&
              o.find_slot(slot.subtype, slot.role) == &slot && !slot.allowed_entity_types.empty();
    for (const auto& t : slot.allowed_entity_types) ok = ok && o.find_entity_type(t);
    c.expect(ok, "unresolved slot " + slot.subtype + "/" + slot.role);
    types += slot.allowed_entity_types.size();
  }
  return c.done("12/119/21/11; " + std::to_string(o.role_slots().size()) + " slots, " +
                std::to_string(types) + " entity-type references resolve");
}

Outcome iob_round_trip() {
  const Ontology& o = bundled_ontology();
  TriggerLabelSet alphabet(o);
  Checker c;
  c.expect(alphabet.size() == 239, "alphabet size " + std::to_string(alphabet.size()));
  std::mt19937_64 rng(2021);
  std::size_t triggers = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto s = fixtures::random_valid(o, rng, "d" + std::to_string(trial), 30);
    auto decoded = iob_decode_triggers(iob_encode_triggers(s), alphabet);
    bool ok = decoded.size() == s.triggers.size();
    for (std::size_t i = 0; ok && i < decoded.size(); ++i) {
      ok = decoded[i].id == s.triggers[i].id && decoded[i].span == s.triggers[i].span &&
           decoded[i].subtype == s.triggers[i].subtype;
    }
    c.expect(ok, "trial " + std::to_string(trial) + " differs after decode");
    triggers += s.triggers.size();
  }
  return c.done("1000 sets, " + std::to_string(triggers) + " triggers, 239 labels");
}

Outcome scorer_oracle() {
  std::mt19937_64 rng(99);
  Checker c;
  for (int trial = 0; trial < 500; ++trial) {
    auto [gold, pred] = fixtures::random_scoring_pair(rng, 10);
    std::string at = "trial " + std::to_string(trial) + ": ";
    c.expect(same(score_triggers(gold, pred),
                  oracle::greedy(oracle::trigger_items(gold), oracle::trigger_items(pred))),
             at + "trigger classification");
    for (bool span_mode : {true, false}) {
      ArgMatch mode = span_mode ? ArgMatch::kSubtypeSpan : ArgMatch::kSubtypeOnly;
      c.expect(same(score_argument_identification(gold, pred, mode),
                    oracle::greedy(oracle::argument_items(gold, false, span_mode),
                                   oracle::argument_items(pred, false, span_mode))),
               at + "argument identification");
      c.expect(same(score_argument_classification(gold, pred, mode),
                    oracle::greedy(oracle::argument_items(gold, true, span_mode),
                                   oracle::argument_items(pred, true, span_mode))),
               at + "argument classification");
    }
  }
  return c.done("500 micro-corpora, 3 metrics x 2 argument modes");
}

Outcome lexicon_matcher() {
  const Ontology& o = bundled_ontology();
  Lexicon lex = Lexicon::load_file(data_dir() / "seed.lexicon.csv", o);
  Checker c;
  const LexiconEntry* quake = lex.find("quake");
  c.expect(quake && quake->subtypes == std::set<std::string>{"natural-disasters.earthquake"},
           "quake does not map to earthquake");
  const LexiconEntry* capture = lex.find("capture");
  c.expect(capture && capture->subtypes ==
                          std::set<std::string>{"justice.arrest", "politics.conquering"},
           "capture does not map to arrest and conquering");

  std::vector<std::string> vocab = {"the", "Quake", "kills", "in", "of", "capture", "."};
  for (const auto& [phrase, e] : lex.entries()) {
    if (e.n_tokens < 2) continue;
    std::size_t start = 0;
    while (start <= phrase.size()) {
      std::size_t sp = phrase.find(' ', start);
      if (sp == std::string::npos) sp = phrase.size();
      vocab.push_back(phrase.substr(start, sp - start));
      start = sp + 1;
    }
  }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> tokens(rng() % 50);
    for (auto& t : tokens) t = vocab[rng() % vocab.size()];
    auto hits = match(tokens, lex);
    auto want = oracle::longest_match(tokens, lex);
    bool ok = hits.size() == want.size();
    for (std::size_t i = 0; ok && i < hits.size(); ++i) {
      ok = hits[i].span.start == want[i].start && hits[i].span.end == want[i].end &&
           hits[i].phrase == want[i].phrase;
    }
    c.expect(ok, "longest match differs on sequence " + std::to_string(trial));
  }

  auto records = lines_of(fixtures::read("headlines200.txt"));
  auto report = coverage(records, lex);
  c.expect(records.size() == 200 &&
               coverage_report_text(report) == fixtures::read("headlines200.coverage.json"),
           "coverage report differs from the golden file");

  Lexicon grown = lex;
  double prev = report.coverage;
  for (int trial = 0; trial < 100; ++trial) {
    const auto& rec = records[rng() % records.size()];
    auto words = token_texts(rec, tokenize(rec));
    std::size_t a = rng() % words.size();
    std::size_t len = 1 + rng() % std::min<std::size_t>(kMaxPhraseTokens, words.size() - a);
    std::string phrase;
    for (std::size_t i = a; i < a + len; ++i) phrase += (i > a ? " " : "") + words[i];
    grown = grown.with_entry(phrase, o.subtypes()[rng() % o.subtypes().size()].id,
                             Provenance::kCustom, o);
    double now = coverage(records, grown).coverage;
    c.expect(now >= prev, "coverage dropped at extension " + std::to_string(trial));
    prev = now;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "lookups ok; 200 sequences; golden coverage %.2f; 100 extensions (%.2f -> %.2f)",
                report.coverage, report.coverage, prev);
  return c.done(buf);
}

Outcome stratified() {
  auto data = fixtures::synthetic_corpus(2000, 11);
  SplitOptions options;
  options.seed = 2021;
  auto r = stratified_split(data, options);
  auto again = stratified_split(data, options);
  Checker c;
  c.expect(r.train == again.train && r.test == again.test, "rerun differs");
  c.expect(r.train.size() + r.test.size() == data.size(), "not a partition");

  std::set<std::size_t> test(r.test.begin(), r.test.end());
  std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
  for (std::size_t i = 0; i < data.size(); ++i) {
    std::set<std::string> subs;
    for (const auto& t : data[i].triggers) subs.insert(t.subtype);
    for (const auto& s : subs) {
      ++counts[s].first;
      counts[s].second += test.count(i);
    }
  }
  std::size_t checked = 0;
  double lo = 1, hi = 0;
  for (const auto& [sub, n] : counts) {
    if (n.first < 5) continue;
    double share = double(n.second) / double(n.first);
    c.expect(share >= 0.10 && share <= 0.20,
             sub + " test share " + std::to_string(share) + " of " + std::to_string(n.first));
    lo = std::min(lo, share);
    hi = std::max(hi, share);
    ++checked;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu subtypes with n>=5, shares in [%.3f, %.3f]; deterministic",
                checked, lo, hi);
  return c.done(buf);
}

Outcome service_linearizability() {
  using namespace harness;
  Checker c;
  TempDb db;
  Workspace w(std::make_shared<SqliteStore>(db.path.string()));
  AnnotationService& svc = *w.service;
  std::string csv = "id,text\r\n";
  for (int i = 0; i < 6; ++i) {
    csv += csv_line({"doc" + std::to_string(i), fixtures::kCholeraText});
  }
  ColumnMap columns;
  columns.id_column = "id";
  svc.import_csv(w.admin, w.project.id, csv, columns);
  svc.assign_documents(w.admin, w.project.id, {w.alice.user.id});

  auto outcome = race(svc, w.alice.user, w.admin, "doc0", 1000);
  c.expect(outcome.clean == 1000,
           std::to_string(1000 - outcome.clean) + " races without exactly one winner");
  c.expect(outcome.final_version == 1000, "final version " +
                                              std::to_string(outcome.final_version));

  for (const char* id : {"doc1", "doc2"}) {
    svc.submit_annotation(w.alice.user, id, cholera_submission(0, true));
  }
  std::size_t audited = 0;
  for (const auto& d : w.store->documents(w.project.id)) {
    c.expect(gapless(d), "audit of " + d.id + " has gaps");
    c.expect(validate_annotation(d.annotation, bundled_ontology()).empty(),
             d.id + " stored invalid");
    audited += d.audit.size();
  }

  std::string jsonl = svc.export_project(w.admin, w.project.id, ExportFormat::kJsonl);
  std::string exported_csv = svc.export_project(w.admin, w.project.id, ExportFormat::kCsv);
  Workspace fresh(memory_store());
  fresh.service->import_documents(fresh.admin, fresh.project.id, read_jsonl(jsonl));
  c.expect(fresh.service->export_project(fresh.admin, fresh.project.id, ExportFormat::kJsonl) ==
                   jsonl &&
               fresh.service->export_project(fresh.admin, fresh.project.id,
                                             ExportFormat::kCsv) == exported_csv,
           "export after re-import differs");
  c.expect(read_jsonl(jsonl).size() == 6, "export lost documents");

  return c.done("1000/1000 races clean; " + std::to_string(audited) +
                " audit entries gapless; export->import lossless; primary libraries only");
}

Outcome dataset_statistics() {
  std::filesystem::path path;
  if (const char* env = std::getenv("COFEE_DATASET")) path = env;
  if (path.empty()) path = data_dir() / "cofee_dataset.jsonl";
  if (!std::filesystem::exists(path)) {
    return {Outcome::kSkip, "released dataset not found at " + path.string()};
  }
  auto stats = compute_stats(read_jsonl(read_file(path)));
  Checker c;
  c.expect(stats.n_sentences == 24119, "sentences " + std::to_string(stats.n_sentences));
  c.expect(stats.n_triggers == 28393, "triggers " + std::to_string(stats.n_triggers));
  const auto& t = stats.triggers_by_tense;
  c.expect(t.at("past") == 18372 && t.at("present") == 7068 && t.at("future") == 1345 &&
               t.at("unspecified") == 1608,
           "tense map " + std::to_string(t.at("past")) + "/" + std::to_string(t.at("present")) +
               "/" + std::to_string(t.at("future")) + "/" + std::to_string(t.at("unspecified")));
  return c.done("24119 sentences, 28393 triggers, tense 18372/7068/1345/1608");
}

}  // namespace

int main() {
  run("ontology-integrity", 1.0, ontology_integrity);
  run("iob-round-trip", 5.0, iob_round_trip);
  run("scorer-oracle-equivalence", 0, scorer_oracle);
  run("lexicon-matcher", 0, lexicon_matcher);
  run("stratified-split", 0, stratified);
  run("service-linearizability", 0, service_linearizability);
  run("dataset-statistics", 0, dataset_statistics);
  std::printf("%s\n", failures ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED");
  return failures ? 1 : 0;
}
