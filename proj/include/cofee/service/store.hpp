#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/error.hpp"
#include "cofee/service/records.hpp"

namespace cofee::service {

// Unique key (id, name or credential) already taken.
class DuplicateError : public Error {
 public:
  using Error::Error;
};

class MissingRecordError : public Error {
 public:
  using Error::Error;
};

struct CasResult {
  bool applied = false;
  std::int64_t current_version = 0;  // after the call
};

// Persistence boundary of the annotation service. Implementations must be
// safe for concurrent use; compare_and_set is the only write that can race
// on a document and must be atomic with its audit entry.
class Store {
 public:
  virtual ~Store() = default;

  virtual void insert_user(const User& user) = 0;
  virtual std::optional<User> user_by_id(std::string_view id) const = 0;
  virtual std::optional<User> user_by_credential(std::string_view credential_hash) const = 0;
  virtual std::vector<User> users() const = 0;  // by id

  virtual void insert_project(const Project& project) = 0;
  // Replaces name, members and ontology of an existing project.
  virtual void update_project(const Project& project) = 0;
  virtual std::optional<Project> project(std::string_view id) const = 0;
  virtual std::vector<Project> projects() const = 0;  // by id

  // All or nothing; DuplicateError when any id exists.
  virtual void insert_documents(const std::vector<DocumentRecord>& docs) = 0;
  virtual std::optional<DocumentRecord> document(std::string_view id) const = 0;
  virtual std::vector<DocumentRecord> documents(std::string_view project_id) const = 0;  // by id

  // Replaces the annotation and state iff the stored version equals
  // expected_version, then bumps the version by one and appends the audit
  // entry (whose version field is overwritten with the new version).
  virtual CasResult compare_and_set(std::string_view doc_id, std::int64_t expected_version,
                                    const SentenceAnnotation& annotation, DocumentState state,
                                    const AuditEntry& audit) = 0;

  // Assignment is not an annotation write and leaves the version alone.
  virtual void set_assignment(std::string_view doc_id, DocumentState state,
                              std::string_view assignee) = 0;
};

}  // namespace cofee::service
