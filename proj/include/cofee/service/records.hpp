#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/annotation.hpp"

namespace cofee::service {

enum class UserRole { kAdmin, kAnnotator };
std::string_view to_string(UserRole r);
std::optional<UserRole> parse_user_role(std::string_view s);

struct User {
  std::string id;
  std::string name;
  UserRole role = UserRole::kAnnotator;
  std::string credential_hash;  // hex SHA-256 of the bearer token

  bool operator==(const User&) const = default;
};

struct Project {
  std::string id;
  std::string name;
  std::string ontology_version;
  std::string ontology_document;  // serialized ontology for that version
  std::vector<std::string> members;  // user ids, sorted

  bool operator==(const Project&) const = default;
};

enum class DocumentState { kUnassigned, kAssigned, kDone };
std::string_view to_string(DocumentState s);
std::optional<DocumentState> parse_document_state(std::string_view s);

struct AuditEntry {
  std::string user_id;
  std::int64_t timestamp_ms = 0;
  std::int64_t version = 0;

  bool operator==(const AuditEntry&) const = default;
};

struct DocumentRecord {
  std::string id;
  std::string project_id;
  SentenceAnnotation annotation;  // doc_id == id
  std::int64_t version = 0;
  DocumentState state = DocumentState::kUnassigned;
  std::string assignee;  // empty when unassigned
  std::vector<AuditEntry> audit;  // versions 0..version in order

  bool operator==(const DocumentRecord&) const = default;
};

}  // namespace cofee::service
