#pragma once

#include <memory>
#include <mutex>
#include <string>

#include "cofee/service/store.hpp"

struct sqlite3;

namespace cofee::service {

// Embedded relational store. A file-backed database runs in WAL mode with a
// dedicated read connection so reads do not wait for the writer; ":memory:"
// uses a single connection.
class SqliteStore : public Store {
 public:
  explicit SqliteStore(const std::string& path);
  ~SqliteStore() override;
  SqliteStore(const SqliteStore&) = delete;
  SqliteStore& operator=(const SqliteStore&) = delete;

  void insert_user(const User& user) override;
  std::optional<User> user_by_id(std::string_view id) const override;
  std::optional<User> user_by_credential(std::string_view credential_hash) const override;
  std::vector<User> users() const override;

  void insert_project(const Project& project) override;
  void update_project(const Project& project) override;
  std::optional<Project> project(std::string_view id) const override;
  std::vector<Project> projects() const override;

  void insert_documents(const std::vector<DocumentRecord>& docs) override;
  std::optional<DocumentRecord> document(std::string_view id) const override;
  std::vector<DocumentRecord> documents(std::string_view project_id) const override;

  CasResult compare_and_set(std::string_view doc_id, std::int64_t expected_version,
                            const SentenceAnnotation& annotation, DocumentState state,
                            const AuditEntry& audit) override;
  void set_assignment(std::string_view doc_id, DocumentState state,
                      std::string_view assignee) override;

 private:
  template <typename F>
  auto read(F&& f) const;

  sqlite3* writer_ = nullptr;
  sqlite3* reader_ = nullptr;  // null for in-memory databases
  mutable std::mutex write_mutex_;
  mutable std::mutex read_mutex_;
};

}  // namespace cofee::service
