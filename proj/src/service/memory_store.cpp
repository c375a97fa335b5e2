#include "cofee/service/memory_store.hpp"

#include <mutex>
#include <set>

namespace cofee::service {

void MemoryStore::insert_user(const User& user) {
  std::unique_lock lock(mutex_);
  for (const auto& [id, u] : users_) {
    if (id == user.id || u.name == user.name || u.credential_hash == user.credential_hash) {
      throw DuplicateError("user " + user.name + " already exists");
    }
  }
  users_.emplace(user.id, user);
}

std::optional<User> MemoryStore::user_by_id(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = users_.find(id);
  if (it == users_.end()) return std::nullopt;
  return it->second;
}

std::optional<User> MemoryStore::user_by_credential(std::string_view credential_hash) const {
  std::shared_lock lock(mutex_);
  for (const auto& [id, u] : users_) {
    if (u.credential_hash == credential_hash) return u;
  }
  return std::nullopt;
}

std::vector<User> MemoryStore::users() const {
  std::shared_lock lock(mutex_);
  std::vector<User> out;
  for (const auto& [id, u] : users_) out.push_back(u);
  return out;
}

void MemoryStore::insert_project(const Project& project) {
  std::unique_lock lock(mutex_);
  for (const auto& [id, p] : projects_) {
    if (id == project.id || p.name == project.name) {
      throw DuplicateError("project " + project.name + " already exists");
    }
  }
  projects_.emplace(project.id, project);
}

void MemoryStore::update_project(const Project& project) {
  std::unique_lock lock(mutex_);
  auto it = projects_.find(project.id);
  if (it == projects_.end()) throw MissingRecordError("no project " + project.id);
  it->second = project;
}

std::optional<Project> MemoryStore::project(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = projects_.find(id);
  if (it == projects_.end()) return std::nullopt;
  return it->second;
}

std::vector<Project> MemoryStore::projects() const {
  std::shared_lock lock(mutex_);
  std::vector<Project> out;
  for (const auto& [id, p] : projects_) out.push_back(p);
  return out;
}

void MemoryStore::insert_documents(const std::vector<DocumentRecord>& docs) {
  std::unique_lock lock(mutex_);
  std::set<std::string_view> incoming;
  for (const auto& d : docs) {
    if (documents_.count(d.id) || !incoming.insert(d.id).second) {
      throw DuplicateError("document " + d.id + " already exists");
    }
  }
  for (const auto& d : docs) documents_.emplace(d.id, d);
}

std::optional<DocumentRecord> MemoryStore::document(std::string_view id) const {
  std::shared_lock lock(mutex_);
  auto it = documents_.find(id);
  if (it == documents_.end()) return std::nullopt;
  return it->second;
}

std::vector<DocumentRecord> MemoryStore::documents(std::string_view project_id) const {
  std::shared_lock lock(mutex_);
  std::vector<DocumentRecord> out;
  for (const auto& [id, d] : documents_) {
    if (d.project_id == project_id) out.push_back(d);
  }
  return out;
}

CasResult MemoryStore::compare_and_set(std::string_view doc_id, std::int64_t expected_version,
                                       const SentenceAnnotation& annotation, DocumentState state,
                                       const AuditEntry& audit) {
  std::unique_lock lock(mutex_);
  auto it = documents_.find(doc_id);
  if (it == documents_.end()) throw MissingRecordError("no document " + std::string(doc_id));
  DocumentRecord& d = it->second;
  if (d.version != expected_version) return {false, d.version};
  d.annotation = annotation;
  d.state = state;
  ++d.version;
  AuditEntry entry = audit;
  entry.version = d.version;
  d.audit.push_back(std::move(entry));
  return {true, d.version};
}

void MemoryStore::set_assignment(std::string_view doc_id, DocumentState state,
                                 std::string_view assignee) {
  std::unique_lock lock(mutex_);
  auto it = documents_.find(doc_id);
  if (it == documents_.end()) throw MissingRecordError("no document " + std::string(doc_id));
  it->second.state = state;
  it->second.assignee = std::string(assignee);
}

}  // namespace cofee::service
