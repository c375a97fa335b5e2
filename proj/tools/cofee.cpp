// Command-line front end for the COfEE toolkit.

#include <CLI11.hpp>
#include <httplib.h>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cofee/annotation_json.hpp"
#include "cofee/corpus.hpp"
#include "cofee/csv.hpp"
#include "cofee/evaluator.hpp"
#include "cofee/lexicon.hpp"
#include "cofee/ontology.hpp"
#include "cofee/service/credentials.hpp"
#include "cofee/service/http_api.hpp"
#include "cofee/service/memory_store.hpp"
#include "cofee/service/service.hpp"
#include "cofee/service/sqlite_store.hpp"
#include "cofee/split.hpp"

namespace {

struct Globals {
  std::string ontology_path;
  std::string lexicon_path;
};

std::string read_input(const std::string& path) {
  if (path == "-") {
    return std::string(std::istreambuf_iterator<char>(std::cin), {});
  }
  return cofee::read_file(path);
}

void write_output(const std::string& path, const std::string& data) {
  if (path.empty() || path == "-") {
    std::cout << data;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw cofee::Error("cannot write " + path);
  out << data;
}

cofee::Ontology load_ontology(const Globals& g) {
  if (g.ontology_path.empty()) return cofee::bundled_ontology();
  return cofee::Ontology::load_file(g.ontology_path);
}

cofee::Lexicon load_lexicon(const Globals& g, const cofee::Ontology& o) {
  std::filesystem::path p = g.lexicon_path;
  if (p.empty()) p = cofee::data_dir() / "seed.lexicon.csv";
  return cofee::Lexicon::load_file(p, o);
}

std::vector<std::string> read_records(const std::string& path, const std::string& column) {
  std::string data = read_input(path);
  std::vector<std::string> records;
  if (!column.empty()) {
    auto table = cofee::CsvTable::parse(data);
    std::size_t c = table.require_column(column);
    for (const auto& row : table.rows()) records.push_back(c < row.size() ? row[c] : "");
    return records;
  }
  std::size_t pos = 0;
  while (pos < data.size()) {
    std::size_t nl = data.find('\n', pos);
    if (nl == std::string::npos) nl = data.size();
    std::string line = data.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) records.push_back(std::move(line));
    pos = nl + 1;
  }
  return records;
}

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

int serve(const Globals& g, std::string bind, std::string storage) {
  using namespace cofee::service;
  std::shared_ptr<Store> store;
  if (storage == "memory") {
    store = std::make_shared<MemoryStore>();
  } else {
    store = std::make_shared<SqliteStore>(storage);
  }
  AnnotationService service(store, load_ontology(g));

  std::string token = env_or("COFEE_ADMIN_TOKEN", "");
  if (token.empty()) {
    token = generate_token();
    std::cerr << "admin token: " << token << "\n";
  }
  User admin = service.bootstrap_admin(env_or("COFEE_ADMIN_NAME", "admin"), token);

  auto colon = bind.rfind(':');
  if (colon == std::string::npos) throw cofee::Error("bind address must be host:port");
  std::string host = bind.substr(0, colon);
  int port = std::stoi(bind.substr(colon + 1));

  httplib::Server server;
  install_routes(server, service);
  std::cerr << "listening on " << host << ":" << port << " as admin '" << admin.id
            << "', storage " << storage << "\n";
  if (!server.listen(host, port)) throw cofee::Error("cannot listen on " + bind);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"COfEE event extraction toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--ontology", g.ontology_path, "Ontology file (default: bundled)");
  app.add_option("--lexicon", g.lexicon_path, "Lexicon CSV (default: bundled)");

  std::string language = "en";
  std::string column;

  auto* match_cmd = app.add_subcommand("match", "Lexicon hits per record, as JSONL");
  std::vector<std::string> match_text;
  std::string match_corpus, match_out;
  match_cmd->add_option("text", match_text, "Text to scan instead of a corpus");
  match_cmd->add_option("--corpus", match_corpus, "One record per line, or CSV with --column");
  match_cmd->add_option("--column", column, "CSV column holding the records");
  match_cmd->add_option("--language", language, "Language tag");
  match_cmd->add_option("--out", match_out, "Hits JSONL (default: stdout)");

  auto* cov_cmd = app.add_subcommand("coverage", "Lexicon coverage of a corpus");
  std::string cov_corpus, cov_report;
  cov_cmd->add_option("--corpus", cov_corpus, "One record per line, or CSV with --column")
      ->required();
  cov_cmd->add_option("--column", column, "CSV column holding the records");
  cov_cmd->add_option("--language", language, "Language tag");
  cov_cmd->add_option("--report", cov_report, "Report JSON (default: stdout)");

  auto* exp_cmd = app.add_subcommand("expand", "Propose lexicon candidates from embeddings");
  std::string exp_embeddings, exp_out;
  std::size_t exp_k = 10;
  exp_cmd->add_option("--embeddings", exp_embeddings, "Word vectors (text format)")
      ->required()
      ->check(CLI::ExistingFile);
  exp_cmd->add_option("-k", exp_k, "Neighbors per seed phrase");
  exp_cmd->add_option("--out", exp_out, "Candidate CSV (default: stdout)");

  auto* score_cmd = app.add_subcommand("score", "Score predictions against gold");
  std::string score_gold, score_pred, score_report, score_mode = "subtype-span";
  score_cmd->add_option("--gold", score_gold, "Gold JSONL")->required();
  score_cmd->add_option("--pred", score_pred, "Predicted JSONL")->required();
  score_cmd->add_option("--arg-match", score_mode, "subtype-span or subtype-only");
  score_cmd->add_option("--report", score_report, "Report JSON (default: stdout)");

  auto* split_cmd = app.add_subcommand("split", "Stratified train/test split");
  std::string split_in, split_train, split_test;
  cofee::SplitOptions split_opts;
  split_cmd->add_option("--in", split_in, "Annotated JSONL")->required();
  split_cmd->add_option("--train", split_train, "Train JSONL output")->required();
  split_cmd->add_option("--test", split_test, "Test JSONL output")->required();
  split_cmd->add_option("--seed", split_opts.seed, "Shuffle seed");
  split_cmd->add_option("--frac", split_opts.test_fraction, "Target test share");

  auto* stats_cmd = app.add_subcommand("stats", "Dataset statistics");
  std::string stats_in = "-", stats_out;
  stats_cmd->add_option("--in", stats_in, "Annotated JSONL");
  stats_cmd->add_option("--out", stats_out, "Stats JSON (default: stdout)");

  auto* val_cmd = app.add_subcommand("validate", "Check annotations against the ontology");
  std::string val_in = "-";
  val_cmd->add_option("--in", val_in, "Annotated JSONL");

  auto* export_cmd = app.add_subcommand("export", "Convert annotated JSONL to CSV or JSONL");
  std::string export_in = "-", export_format = "csv", export_out;
  export_cmd->add_option("--in", export_in, "Annotated JSONL");
  export_cmd->add_option("--format", export_format, "csv or jsonl");
  export_cmd->add_option("--out", export_out, "Output file (default: stdout)");

  auto* import_cmd = app.add_subcommand("import", "Turn a CSV of sentences into JSONL");
  std::string import_in = "-", import_out;
  cofee::ColumnMap columns;
  std::string id_column, language_column, entities_column;
  import_cmd->add_option("--in", import_in, "CSV file");
  import_cmd->add_option("--text-column", columns.text_column, "Column with the sentence");
  import_cmd->add_option("--id-column", id_column, "Column with document ids");
  import_cmd->add_option("--id-prefix", columns.id_prefix, "Prefix for row-number ids");
  import_cmd->add_option("--language-column", language_column, "Column with language tags");
  import_cmd->add_option("--language", columns.default_language, "Default language tag");
  import_cmd->add_option("--entities-column", entities_column, "Column with start-end:type;...");
  import_cmd->add_option("--out", import_out, "Output JSONL (default: stdout)");

  auto* ont_cmd = app.add_subcommand("ontology", "Print the ontology or a subtype's roles");
  std::string ont_subtype;
  ont_cmd->add_option("--roles-of", ont_subtype, "Subtype id");

  auto* serve_cmd = app.add_subcommand("serve", "Run the annotation service");
  std::string bind = env_or("COFEE_BIND", "127.0.0.1:8080");
  std::string storage = env_or("COFEE_STORAGE", "cofee.db");
  serve_cmd->add_option("--bind", bind, "host:port (env COFEE_BIND)");
  serve_cmd->add_option("--storage", storage, "SQLite file or 'memory' (env COFEE_STORAGE)");

  CLI11_PARSE(app, argc, argv);

  using nlohmann::ordered_json;
  try {
    auto profile = cofee::TokenizerProfile::for_language(language);
    if (*match_cmd) {
      auto o = load_ontology(g);
      auto lex = load_lexicon(g, o);
      std::vector<std::string> records;
      if (!match_corpus.empty()) {
        records = read_records(match_corpus, column);
      } else if (!match_text.empty()) {
        std::string text;
        for (const auto& part : match_text) text += (text.empty() ? "" : " ") + part;
        records.push_back(text);
      } else {
        throw cofee::Error("match needs --corpus or text");
      }
      std::string out;
      for (std::size_t i = 0; i < records.size(); ++i) {
        ordered_json hits = ordered_json::array();
        for (const auto& hit : cofee::match_text(records[i], lex, profile)) {
          hits.push_back({{"span", {hit.span.start, hit.span.end}},
                          {"phrase", hit.phrase},
                          {"subtypes", hit.subtypes}});
        }
        out += ordered_json{{"record", i + 1}, {"hits", hits}}.dump() + "\n";
      }
      write_output(match_out, out);
    } else if (*cov_cmd) {
      auto o = load_ontology(g);
      auto lex = load_lexicon(g, o);
      auto report = cofee::coverage(read_records(cov_corpus, column), lex, profile);
      write_output(cov_report, cofee::coverage_report_text(report));
    } else if (*exp_cmd) {
      auto o = load_ontology(g);
      auto lex = load_lexicon(g, o);
      auto table = cofee::EmbeddingTable::load_file(exp_embeddings);
      auto result = cofee::expand_lexicon(lex, table, exp_k);
      for (const auto& f : result.failures) {
        std::cerr << "no neighbors for '" << f.seed << "': " << f.message << "\n";
      }
      write_output(exp_out, cofee::candidates_to_csv(result.candidates));
      std::cerr << result.candidates.size() << " candidates, " << result.failures.size()
                << " seeds without neighbors\n";
    } else if (*score_cmd) {
      auto mode = cofee::parse_arg_match(score_mode);
      if (!mode) throw cofee::Error("unknown --arg-match '" + score_mode + "'");
      auto gold = cofee::read_jsonl(read_input(score_gold));
      auto pred = cofee::read_jsonl(read_input(score_pred));
      write_output(score_report,
                   cofee::to_json(cofee::score_all(gold, pred, *mode)).dump(2) + "\n");
    } else if (*split_cmd) {
      auto docs = cofee::read_jsonl(read_input(split_in));
      auto result = cofee::stratified_split(docs, split_opts);
      std::vector<cofee::SentenceAnnotation> train, test;
      for (auto i : result.train) train.push_back(docs[i]);
      for (auto i : result.test) test.push_back(docs[i]);
      write_output(split_train, cofee::write_jsonl(train));
      write_output(split_test, cofee::write_jsonl(test));
      std::cerr << train.size() << " train, " << test.size() << " test\n";
      for (const auto& s : result.unmet_subtypes) std::cerr << "bounds not met for " << s << "\n";
    } else if (*stats_cmd) {
      auto docs = cofee::read_jsonl(read_input(stats_in));
      write_output(stats_out, cofee::compute_stats(docs).to_json().dump(2) + "\n");
    } else if (*val_cmd) {
      auto o = load_ontology(g);
      auto docs = cofee::read_jsonl(read_input(val_in));
      std::size_t bad = 0;
      for (const auto& d : docs) {
        auto violations = cofee::validate_annotation(d, o);
        if (!violations.empty()) ++bad;
        for (const auto& v : violations) {
          std::cout << d.doc_id << "\t" << v.element_id << "\t" << v.rule << "\t" << v.message
                    << "\n";
        }
      }
      std::cerr << docs.size() << " documents, " << bad << " invalid\n";
      return bad == 0 ? 0 : 1;
    } else if (*export_cmd) {
      auto format = cofee::parse_export_format(export_format);
      if (!format) throw cofee::Error("unknown --format '" + export_format + "'");
      auto o = load_ontology(g);
      auto docs = cofee::read_jsonl(read_input(export_in));
      write_output(export_out, cofee::export_annotations(docs, *format, o));
    } else if (*import_cmd) {
      if (!id_column.empty()) columns.id_column = id_column;
      if (!language_column.empty()) columns.language_column = language_column;
      if (!entities_column.empty()) columns.entities_column = entities_column;
      auto docs = cofee::import_table(read_input(import_in), columns);
      write_output(import_out, cofee::write_jsonl(docs));
    } else if (*ont_cmd) {
      auto o = load_ontology(g);
      if (ont_subtype.empty()) {
        std::cout << o.serialize();
      } else {
        for (const auto& slot : o.allowed_roles(ont_subtype)) {
          std::cout << slot.role << "\t";
          for (std::size_t i = 0; i < slot.allowed_entity_types.size(); ++i) {
            std::cout << (i ? "," : "") << slot.allowed_entity_types[i];
          }
          std::cout << "\n";
        }
      }
    } else if (*serve_cmd) {
      return serve(g, bind, storage);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
