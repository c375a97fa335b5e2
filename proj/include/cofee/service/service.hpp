#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/annotation.hpp"
#include "cofee/annotation_json.hpp"
#include "cofee/corpus.hpp"
#include "cofee/error.hpp"
#include "cofee/ontology.hpp"
#include "cofee/service/records.hpp"
#include "cofee/service/store.hpp"

namespace cofee::service {

// Failures carry the HTTP status they map to.
class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const { return status_; }

 private:
  int status_;
};

class BadRequestError : public ServiceError {
 public:
  explicit BadRequestError(const std::string& what) : ServiceError(400, what) {}
};

class AuthError : public ServiceError {
 public:
  explicit AuthError(const std::string& what) : ServiceError(401, what) {}
};

class ForbiddenError : public ServiceError {
 public:
  explicit ForbiddenError(const std::string& what) : ServiceError(403, what) {}
};

class NotFoundError : public ServiceError {
 public:
  explicit NotFoundError(const std::string& what) : ServiceError(404, what) {}
};

class ConflictError : public ServiceError {
 public:
  ConflictError(const std::string& what, std::int64_t current_version)
      : ServiceError(409, what), current_version_(current_version) {}
  // -1 when the conflict is not about a document version.
  std::int64_t current_version() const { return current_version_; }

 private:
  std::int64_t current_version_;
};

class ValidationError : public ServiceError {
 public:
  ValidationError(std::string doc_id, std::vector<Violation> violations);
  const std::string& doc_id() const { return doc_id_; }
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  std::string doc_id_;
  std::vector<Violation> violations_;
};

struct IssuedCredential {
  User user;
  std::string token;  // shown once; only its hash is stored
};

// What a client submits for a document: the mention lists only. Text and
// tokens always come from the stored document.
struct Submission {
  AnnotationPayload annotations;
  std::int64_t expected_version = 0;
  bool done = false;
};

// Workflow rules on top of a Store. Every method takes the authenticated
// caller and enforces roles: admins manage users, projects, imports,
// assignment and export; annotators read and write the documents assigned
// to them in projects they belong to.
class AnnotationService {
 public:
  using Clock = std::function<std::int64_t()>;  // milliseconds since epoch

  AnnotationService(std::shared_ptr<Store> store, Ontology base_ontology, Clock clock = {});

  Store& store() { return *store_; }
  const Ontology& base_ontology() const { return base_; }

  // Creates the named admin with the given token unless a user with that
  // name already exists. Returns the admin.
  User bootstrap_admin(std::string_view name, std::string_view token);

  // Throws AuthError for an empty or unknown token.
  User authenticate(std::string_view token) const;

  IssuedCredential create_user(const User& caller, std::string_view name, UserRole role);
  std::vector<User> list_users(const User& caller) const;

  Project create_project(const User& caller, std::string_view name,
                         std::vector<std::string> member_ids = {});
  Project add_members(const User& caller, std::string_view project_id,
                      const std::vector<std::string>& member_ids);
  // Admins see every project, annotators the ones they belong to.
  std::vector<Project> list_projects(const User& caller) const;
  Project get_project(const User& caller, std::string_view project_id) const;

  // Documents are created at version 0 with an audit entry for the importer.
  // Ids come from the id column or default to "<project>-<row>".
  std::size_t import_csv(const User& caller, std::string_view project_id, std::string_view csv,
                         ColumnMap columns);
  std::size_t import_documents(const User& caller, std::string_view project_id,
                               std::vector<SentenceAnnotation> docs);

  // Round-robin over the chosen documents (default: every unassigned
  // document, by id) and the given members. Returns documents per user.
  std::map<std::string, std::size_t> assign_documents(
      const User& caller, std::string_view project_id, const std::vector<std::string>& user_ids,
      std::vector<std::string> doc_ids = {});

  // Admins see all documents, annotators only their own.
  std::vector<DocumentRecord> list_documents(const User& caller,
                                             std::string_view project_id) const;
  DocumentRecord get_document(const User& caller, std::string_view doc_id) const;

  // Validates against the project's ontology, then replaces the annotation
  // iff expected_version is current. Returns the new version.
  std::int64_t submit_annotation(const User& caller, std::string_view doc_id,
                                 const Submission& submission);

  std::string export_project(const User& caller, std::string_view project_id,
                             ExportFormat format) const;

  std::string get_ontology(const User& caller, std::string_view project_id) const;
  std::shared_ptr<const Ontology> project_ontology(const User& caller,
                                                   std::string_view project_id) const;
  Project extend_ontology(const User& caller, std::string_view project_id,
                          const OntologyElement& element);

 private:
  void require_admin(const User& caller) const;
  Project require_project(std::string_view project_id) const;
  void require_member(const User& caller, const Project& project) const;
  std::shared_ptr<const Ontology> ontology_of(const Project& project) const;
  std::size_t store_imported(const User& caller, const Project& project,
                             std::vector<SentenceAnnotation> docs);

  std::shared_ptr<Store> store_;
  Ontology base_;
  Clock clock_;
  // Serializes admin-side read-modify-write of project records.
  std::mutex project_mutex_;
  // Parsed ontology per (project, version); each entry is immutable.
  mutable std::mutex cache_mutex_;
  mutable std::map<std::pair<std::string, std::string>, std::shared_ptr<const Ontology>> cache_;
};

// Lowercase ASCII letters and digits with single hyphens, e.g. "Persian News" -> "persian-news".
std::string slugify(std::string_view name);

}  // namespace cofee::service
