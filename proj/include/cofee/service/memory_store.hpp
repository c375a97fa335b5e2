#pragma once

#include <map>
#include <shared_mutex>

#include "cofee/service/store.hpp"

namespace cofee::service {

// Process-local store for tests and throwaway sessions.
class MemoryStore : public Store {
 public:
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
  mutable std::shared_mutex mutex_;
  std::map<std::string, User, std::less<>> users_;
  std::map<std::string, Project, std::less<>> projects_;
  std::map<std::string, DocumentRecord, std::less<>> documents_;
};

}  // namespace cofee::service
