#include "cofee/service/sqlite_store.hpp"

#include <sqlite3.h>

#include <json.hpp>

#include "cofee/annotation_json.hpp"

namespace cofee::service {
namespace {

constexpr const char* kSchema = R"sql(
CREATE TABLE IF NOT EXISTS users (
  id TEXT PRIMARY KEY,
  name TEXT NOT NULL UNIQUE,
  role TEXT NOT NULL,
  credential_hash TEXT NOT NULL UNIQUE
);
CREATE TABLE IF NOT EXISTS projects (
  id TEXT PRIMARY KEY,
  name TEXT NOT NULL UNIQUE,
  ontology_version TEXT NOT NULL,
  ontology_document TEXT NOT NULL,
  members TEXT NOT NULL
);
CREATE TABLE IF NOT EXISTS documents (
  id TEXT PRIMARY KEY,
  project_id TEXT NOT NULL REFERENCES projects(id),
  annotation TEXT NOT NULL,
  version INTEGER NOT NULL,
  state TEXT NOT NULL,
  assignee TEXT NOT NULL
);
CREATE INDEX IF NOT EXISTS documents_by_project ON documents(project_id, id);
CREATE TABLE IF NOT EXISTS audit (
  doc_id TEXT NOT NULL REFERENCES documents(id),
  version INTEGER NOT NULL,
  user_id TEXT NOT NULL,
  timestamp_ms INTEGER NOT NULL,
  PRIMARY KEY (doc_id, version)
);
)sql";

[[noreturn]] void fail(sqlite3* db, const std::string& what) {
  int code = sqlite3_extended_errcode(db);
  std::string msg = what + ": " + sqlite3_errmsg(db);
  if ((code & 0xff) == SQLITE_CONSTRAINT) throw DuplicateError(msg);
  throw Error(msg);
}

void exec(sqlite3* db, const char* sql) {
  char* err = nullptr;
  if (sqlite3_exec(db, sql, nullptr, nullptr, &err) != SQLITE_OK) {
    std::string msg = err ? err : "unknown error";
    sqlite3_free(err);
    fail(db, msg);
  }
}

class Statement {
 public:
  Statement(sqlite3* db, const char* sql) : db_(db) {
    if (sqlite3_prepare_v2(db, sql, -1, &stmt_, nullptr) != SQLITE_OK) fail(db, "prepare");
  }
  ~Statement() { sqlite3_finalize(stmt_); }
  Statement(const Statement&) = delete;
  Statement& operator=(const Statement&) = delete;

  Statement& bind(int index, std::string_view text) {
    if (sqlite3_bind_text(stmt_, index, text.data(), static_cast<int>(text.size()),
                          SQLITE_TRANSIENT) != SQLITE_OK) {
      fail(db_, "bind");
    }
    return *this;
  }
  Statement& bind(int index, std::int64_t value) {
    if (sqlite3_bind_int64(stmt_, index, value) != SQLITE_OK) fail(db_, "bind");
    return *this;
  }

  // True while rows remain.
  bool step() {
    int rc = sqlite3_step(stmt_);
    if (rc == SQLITE_ROW) return true;
    if (rc == SQLITE_DONE) return false;
    fail(db_, "step");
  }
  void run() {
    while (step()) {
    }
  }
  void reset() {
    sqlite3_reset(stmt_);
    sqlite3_clear_bindings(stmt_);
  }

  std::string text(int col) const {
    const auto* p = sqlite3_column_text(stmt_, col);
    int n = sqlite3_column_bytes(stmt_, col);
    return p ? std::string(reinterpret_cast<const char*>(p), n) : std::string();
  }
  std::int64_t integer(int col) const { return sqlite3_column_int64(stmt_, col); }

 private:
  sqlite3* db_;
  sqlite3_stmt* stmt_ = nullptr;
};

class Transaction {
 public:
  Transaction(sqlite3* db, const char* begin) : db_(db) { exec(db_, begin); }
  ~Transaction() {
    if (!done_) sqlite3_exec(db_, "ROLLBACK", nullptr, nullptr, nullptr);
  }
  void commit() {
    exec(db_, "COMMIT");
    done_ = true;
  }

 private:
  sqlite3* db_;
  bool done_ = false;
};

sqlite3* open(const std::string& path, bool read_only) {
  sqlite3* db = nullptr;
  int flags = (read_only ? SQLITE_OPEN_READONLY : SQLITE_OPEN_READWRITE | SQLITE_OPEN_CREATE) |
              SQLITE_OPEN_NOMUTEX;
  if (sqlite3_open_v2(path.c_str(), &db, flags, nullptr) != SQLITE_OK) {
    std::string msg = db ? sqlite3_errmsg(db) : "out of memory";
    sqlite3_close(db);
    throw Error("cannot open database " + path + ": " + msg);
  }
  sqlite3_busy_timeout(db, 10000);
  return db;
}

User read_user(const Statement& s) {
  return {s.text(0), s.text(1), parse_user_role(s.text(2)).value_or(UserRole::kAnnotator),
          s.text(3)};
}

constexpr const char* kUserColumns = "SELECT id, name, role, credential_hash FROM users ";

Project read_project(const Statement& s) {
  Project p{s.text(0), s.text(1), s.text(2), s.text(3), {}};
  p.members = nlohmann::json::parse(s.text(4)).get<std::vector<std::string>>();
  return p;
}

constexpr const char* kProjectColumns =
    "SELECT id, name, ontology_version, ontology_document, members FROM projects ";

DocumentRecord read_document(const Statement& s) {
  DocumentRecord d;
  d.id = s.text(0);
  d.project_id = s.text(1);
  d.annotation = sentence_from_json(nlohmann::json::parse(s.text(2)));
  d.version = s.integer(3);
  d.state = parse_document_state(s.text(4)).value_or(DocumentState::kUnassigned);
  d.assignee = s.text(5);
  return d;
}

constexpr const char* kDocumentColumns =
    "SELECT id, project_id, annotation, version, state, assignee FROM documents ";

std::string members_json(const Project& p) { return nlohmann::json(p.members).dump(); }

}  // namespace

SqliteStore::SqliteStore(const std::string& path) {
  writer_ = open(path, false);
  try {
    exec(writer_, "PRAGMA foreign_keys = ON");
    bool in_memory = path == ":memory:" || path.empty() || path.rfind("file::memory:", 0) == 0;
    if (!in_memory) {
      exec(writer_, "PRAGMA journal_mode = WAL");
      exec(writer_, "PRAGMA synchronous = NORMAL");
    }
    exec(writer_, kSchema);
    if (!in_memory) reader_ = open(path, true);
  } catch (...) {
    sqlite3_close(writer_);
    throw;
  }
}

SqliteStore::~SqliteStore() {
  sqlite3_close(reader_);
  sqlite3_close(writer_);
}

template <typename F>
auto SqliteStore::read(F&& f) const {
  if (reader_) {
    std::lock_guard lock(read_mutex_);
    Transaction snapshot(reader_, "BEGIN");
    auto result = f(reader_);
    snapshot.commit();
    return result;
  }
  std::lock_guard lock(write_mutex_);
  return f(writer_);
}

void SqliteStore::insert_user(const User& user) {
  std::lock_guard lock(write_mutex_);
  Statement s(writer_, "INSERT INTO users (id, name, role, credential_hash) VALUES (?, ?, ?, ?)");
  s.bind(1, user.id).bind(2, user.name).bind(3, to_string(user.role)).bind(4, user.credential_hash);
  s.run();
}

std::optional<User> SqliteStore::user_by_id(std::string_view id) const {
  return read([&](sqlite3* db) -> std::optional<User> {
    Statement s(db, (std::string(kUserColumns) + "WHERE id = ?").c_str());
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    return read_user(s);
  });
}

std::optional<User> SqliteStore::user_by_credential(std::string_view credential_hash) const {
  return read([&](sqlite3* db) -> std::optional<User> {
    Statement s(db, (std::string(kUserColumns) + "WHERE credential_hash = ?").c_str());
    s.bind(1, credential_hash);
    if (!s.step()) return std::nullopt;
    return read_user(s);
  });
}

std::vector<User> SqliteStore::users() const {
  return read([&](sqlite3* db) {
    std::vector<User> out;
    Statement s(db, (std::string(kUserColumns) + "ORDER BY id").c_str());
    while (s.step()) out.push_back(read_user(s));
    return out;
  });
}

void SqliteStore::insert_project(const Project& project) {
  std::lock_guard lock(write_mutex_);
  Statement s(writer_,
              "INSERT INTO projects (id, name, ontology_version, ontology_document, members) "
              "VALUES (?, ?, ?, ?, ?)");
  s.bind(1, project.id)
      .bind(2, project.name)
      .bind(3, project.ontology_version)
      .bind(4, project.ontology_document)
      .bind(5, members_json(project));
  s.run();
}

void SqliteStore::update_project(const Project& project) {
  std::lock_guard lock(write_mutex_);
  Statement s(writer_,
              "UPDATE projects SET name = ?, ontology_version = ?, ontology_document = ?, "
              "members = ? WHERE id = ?");
  s.bind(1, project.name)
      .bind(2, project.ontology_version)
      .bind(3, project.ontology_document)
      .bind(4, members_json(project))
      .bind(5, project.id);
  s.run();
  if (sqlite3_changes(writer_) == 0) throw MissingRecordError("no project " + project.id);
}

std::optional<Project> SqliteStore::project(std::string_view id) const {
  return read([&](sqlite3* db) -> std::optional<Project> {
    Statement s(db, (std::string(kProjectColumns) + "WHERE id = ?").c_str());
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    return read_project(s);
  });
}

std::vector<Project> SqliteStore::projects() const {
  return read([&](sqlite3* db) {
    std::vector<Project> out;
    Statement s(db, (std::string(kProjectColumns) + "ORDER BY id").c_str());
    while (s.step()) out.push_back(read_project(s));
    return out;
  });
}

void SqliteStore::insert_documents(const std::vector<DocumentRecord>& docs) {
  std::lock_guard lock(write_mutex_);
  Transaction tx(writer_, "BEGIN IMMEDIATE");
  Statement doc(writer_,
                "INSERT INTO documents (id, project_id, annotation, version, state, assignee) "
                "VALUES (?, ?, ?, ?, ?, ?)");
  Statement audit(writer_,
                  "INSERT INTO audit (doc_id, version, user_id, timestamp_ms) VALUES (?, ?, ?, ?)");
  for (const auto& d : docs) {
    doc.reset();
    doc.bind(1, d.id)
        .bind(2, d.project_id)
        .bind(3, cofee::to_json(d.annotation).dump())
        .bind(4, d.version)
        .bind(5, to_string(d.state))
        .bind(6, d.assignee);
    doc.run();
    for (const auto& a : d.audit) {
      audit.reset();
      audit.bind(1, d.id).bind(2, a.version).bind(3, a.user_id).bind(4, a.timestamp_ms);
      audit.run();
    }
  }
  tx.commit();
}

std::optional<DocumentRecord> SqliteStore::document(std::string_view id) const {
  return read([&](sqlite3* db) -> std::optional<DocumentRecord> {
    Statement s(db, (std::string(kDocumentColumns) + "WHERE id = ?").c_str());
    s.bind(1, id);
    if (!s.step()) return std::nullopt;
    DocumentRecord d = read_document(s);
    Statement a(db,
                "SELECT user_id, timestamp_ms, version FROM audit WHERE doc_id = ? "
                "ORDER BY version");
    a.bind(1, id);
    while (a.step()) d.audit.push_back({a.text(0), a.integer(1), a.integer(2)});
    return d;
  });
}

std::vector<DocumentRecord> SqliteStore::documents(std::string_view project_id) const {
  return read([&](sqlite3* db) {
    std::vector<DocumentRecord> out;
    Statement s(db, (std::string(kDocumentColumns) + "WHERE project_id = ? ORDER BY id").c_str());
    s.bind(1, project_id);
    while (s.step()) out.push_back(read_document(s));
    Statement a(db,
                "SELECT a.doc_id, a.user_id, a.timestamp_ms, a.version FROM audit a "
                "JOIN documents d ON d.id = a.doc_id WHERE d.project_id = ? "
                "ORDER BY a.doc_id, a.version");
    a.bind(1, project_id);
    std::size_t i = 0;
    while (a.step()) {
      std::string doc_id = a.text(0);
      while (i < out.size() && out[i].id < doc_id) ++i;
      if (i < out.size() && out[i].id == doc_id) {
        out[i].audit.push_back({a.text(1), a.integer(2), a.integer(3)});
      }
    }
    return out;
  });
}

CasResult SqliteStore::compare_and_set(std::string_view doc_id, std::int64_t expected_version,
                                       const SentenceAnnotation& annotation, DocumentState state,
                                       const AuditEntry& audit) {
  std::string body = cofee::to_json(annotation).dump();
  std::lock_guard lock(write_mutex_);
  Transaction tx(writer_, "BEGIN IMMEDIATE");
  Statement update(writer_,
                   "UPDATE documents SET annotation = ?, state = ?, version = version + 1 "
                   "WHERE id = ? AND version = ?");
  update.bind(1, body).bind(2, to_string(state)).bind(3, doc_id).bind(4, expected_version);
  update.run();
  if (sqlite3_changes(writer_) == 0) {
    Statement current(writer_, "SELECT version FROM documents WHERE id = ?");
    current.bind(1, doc_id);
    if (!current.step()) throw MissingRecordError("no document " + std::string(doc_id));
    return {false, current.integer(0)};
  }
  Statement log(writer_,
                "INSERT INTO audit (doc_id, version, user_id, timestamp_ms) VALUES (?, ?, ?, ?)");
  log.bind(1, doc_id).bind(2, expected_version + 1).bind(3, audit.user_id).bind(4, audit.timestamp_ms);
  log.run();
  tx.commit();
  return {true, expected_version + 1};
}

void SqliteStore::set_assignment(std::string_view doc_id, DocumentState state,
                                 std::string_view assignee) {
  std::lock_guard lock(write_mutex_);
  Statement s(writer_, "UPDATE documents SET state = ?, assignee = ? WHERE id = ?");
  s.bind(1, to_string(state)).bind(2, assignee).bind(3, doc_id);
  s.run();
  if (sqlite3_changes(writer_) == 0) throw MissingRecordError("no document " + std::string(doc_id));
}

}  // namespace cofee::service
