#include "cofee/service/service.hpp"

#include <algorithm>
#include <chrono>
#include <set>

#include "cofee/service/credentials.hpp"

namespace cofee::service {
namespace {

std::int64_t system_now_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

std::string describe(const std::string& doc_id, const std::vector<Violation>& v) {
  std::string msg = "document " + doc_id + " has " + std::to_string(v.size()) + " violation";
  if (v.size() != 1) msg += "s";
  if (!v.empty()) msg += ": " + v.front().element_id + " " + v.front().rule + ": " + v.front().message;
  return msg;
}

std::string id_for(std::string_view name, std::string_view fallback_prefix) {
  std::string id = slugify(name);
  if (id.empty()) id = std::string(fallback_prefix) + random_id();
  return id;
}

}  // namespace

ValidationError::ValidationError(std::string doc_id, std::vector<Violation> violations)
    : ServiceError(422, describe(doc_id, violations)),
      doc_id_(std::move(doc_id)),
      violations_(std::move(violations)) {}

std::string slugify(std::string_view name) {
  std::string out;
  bool pending_hyphen = false;
  for (char c : name) {
    auto u = static_cast<unsigned char>(c);
    bool alnum = (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9');
    if (!alnum) {
      pending_hyphen = !out.empty();
      continue;
    }
    if (pending_hyphen) out += '-';
    pending_hyphen = false;
    out += static_cast<char>(u >= 'A' && u <= 'Z' ? u - 'A' + 'a' : u);
  }
  return out;
}

AnnotationService::AnnotationService(std::shared_ptr<Store> store, Ontology base_ontology,
                                     Clock clock)
    : store_(std::move(store)), base_(std::move(base_ontology)), clock_(std::move(clock)) {
  if (!store_) throw Error("AnnotationService: null store");
  if (!clock_) clock_ = system_now_ms;
}

User AnnotationService::bootstrap_admin(std::string_view name, std::string_view token) {
  if (token.empty()) throw BadRequestError("admin token must not be empty");
  User admin{id_for(name, "user-"), std::string(name), UserRole::kAdmin, hash_token(token)};
  if (auto existing = store_->user_by_id(admin.id)) return *existing;
  try {
    store_->insert_user(admin);
  } catch (const DuplicateError& e) {
    throw ConflictError(e.what(), -1);
  }
  return admin;
}

User AnnotationService::authenticate(std::string_view token) const {
  if (token.empty()) throw AuthError("missing bearer token");
  auto user = store_->user_by_credential(hash_token(token));
  if (!user) throw AuthError("invalid token");
  return *user;
}

void AnnotationService::require_admin(const User& caller) const {
  if (caller.role != UserRole::kAdmin) throw ForbiddenError("admin role required");
}

Project AnnotationService::require_project(std::string_view project_id) const {
  auto p = store_->project(project_id);
  if (!p) throw NotFoundError("no project " + std::string(project_id));
  return *p;
}

void AnnotationService::require_member(const User& caller, const Project& project) const {
  if (caller.role == UserRole::kAdmin) return;
  if (!std::binary_search(project.members.begin(), project.members.end(), caller.id)) {
    throw ForbiddenError("not a member of project " + project.id);
  }
}

std::shared_ptr<const Ontology> AnnotationService::ontology_of(const Project& project) const {
  std::lock_guard lock(cache_mutex_);
  auto key = std::make_pair(project.id, project.ontology_version);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto parsed = std::make_shared<const Ontology>(Ontology::parse(project.ontology_document));
  cache_.emplace(std::move(key), parsed);
  return parsed;
}

IssuedCredential AnnotationService::create_user(const User& caller, std::string_view name,
                                                UserRole role) {
  require_admin(caller);
  if (name.empty()) throw BadRequestError("user name must not be empty");
  std::string token = generate_token();
  User user{id_for(name, "user-"), std::string(name), role, hash_token(token)};
  try {
    store_->insert_user(user);
  } catch (const DuplicateError& e) {
    throw ConflictError(e.what(), -1);
  }
  return {std::move(user), std::move(token)};
}

std::vector<User> AnnotationService::list_users(const User& caller) const {
  require_admin(caller);
  return store_->users();
}

Project AnnotationService::create_project(const User& caller, std::string_view name,
                                          std::vector<std::string> member_ids) {
  require_admin(caller);
  if (name.empty()) throw BadRequestError("project name must not be empty");
  for (const auto& m : member_ids) {
    if (!store_->user_by_id(m)) throw NotFoundError("no user " + m);
  }
  std::sort(member_ids.begin(), member_ids.end());
  member_ids.erase(std::unique(member_ids.begin(), member_ids.end()), member_ids.end());
  Project p{id_for(name, "project-"), std::string(name), base_.version(), base_.serialize(),
            std::move(member_ids)};
  try {
    store_->insert_project(p);
  } catch (const DuplicateError& e) {
    throw ConflictError(e.what(), -1);
  }
  return p;
}

Project AnnotationService::add_members(const User& caller, std::string_view project_id,
                                       const std::vector<std::string>& member_ids) {
  require_admin(caller);
  for (const auto& m : member_ids) {
    if (!store_->user_by_id(m)) throw NotFoundError("no user " + m);
  }
  std::lock_guard lock(project_mutex_);
  Project p = require_project(project_id);
  std::set<std::string> members(p.members.begin(), p.members.end());
  members.insert(member_ids.begin(), member_ids.end());
  p.members.assign(members.begin(), members.end());
  store_->update_project(p);
  return p;
}

std::vector<Project> AnnotationService::list_projects(const User& caller) const {
  std::vector<Project> out;
  for (auto& p : store_->projects()) {
    if (caller.role == UserRole::kAdmin ||
        std::binary_search(p.members.begin(), p.members.end(), caller.id)) {
      out.push_back(std::move(p));
    }
  }
  return out;
}

Project AnnotationService::get_project(const User& caller, std::string_view project_id) const {
  Project p = require_project(project_id);
  require_member(caller, p);
  return p;
}

std::size_t AnnotationService::import_csv(const User& caller, std::string_view project_id,
                                          std::string_view csv, ColumnMap columns) {
  require_admin(caller);
  Project p = require_project(project_id);
  if (!columns.id_column) columns.id_prefix = p.id + "-";
  std::vector<SentenceAnnotation> docs;
  try {
    docs = import_table(csv, columns);
  } catch (const ParseError& e) {
    throw BadRequestError(e.what());
  }
  return store_imported(caller, p, std::move(docs));
}

std::size_t AnnotationService::import_documents(const User& caller, std::string_view project_id,
                                                std::vector<SentenceAnnotation> docs) {
  require_admin(caller);
  return store_imported(caller, require_project(project_id), std::move(docs));
}

std::size_t AnnotationService::store_imported(const User& caller, const Project& project,
                                              std::vector<SentenceAnnotation> docs) {
  auto ontology = ontology_of(project);
  std::int64_t now = clock_();
  std::vector<DocumentRecord> records;
  records.reserve(docs.size());
  for (auto& d : docs) {
    if (d.doc_id.empty()) throw BadRequestError("document without id");
    auto violations = validate_annotation(d, *ontology);
    if (!violations.empty()) throw ValidationError(d.doc_id, std::move(violations));
    DocumentRecord r;
    r.id = d.doc_id;
    r.project_id = project.id;
    r.annotation = std::move(d);
    r.audit.push_back({caller.id, now, 0});
    records.push_back(std::move(r));
  }
  try {
    store_->insert_documents(records);
  } catch (const DuplicateError& e) {
    throw ConflictError(e.what(), -1);
  }
  return records.size();
}

std::map<std::string, std::size_t> AnnotationService::assign_documents(
    const User& caller, std::string_view project_id, const std::vector<std::string>& user_ids,
    std::vector<std::string> doc_ids) {
  require_admin(caller);
  Project p = require_project(project_id);
  if (user_ids.empty()) throw BadRequestError("no users to assign to");
  for (const auto& u : user_ids) {
    if (!std::binary_search(p.members.begin(), p.members.end(), u)) {
      throw BadRequestError("user " + u + " is not a member of project " + p.id);
    }
  }

  std::vector<DocumentRecord> chosen;
  if (doc_ids.empty()) {
    for (auto& d : store_->documents(p.id)) {
      if (d.state == DocumentState::kUnassigned) chosen.push_back(std::move(d));
    }
  } else {
    std::sort(doc_ids.begin(), doc_ids.end());
    doc_ids.erase(std::unique(doc_ids.begin(), doc_ids.end()), doc_ids.end());
    for (const auto& id : doc_ids) {
      auto d = store_->document(id);
      if (!d || d->project_id != p.id) {
        throw NotFoundError("no document " + id + " in project " + p.id);
      }
      chosen.push_back(std::move(*d));
    }
  }

  std::map<std::string, std::size_t> counts;
  for (const auto& u : user_ids) counts[u] = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    const std::string& user = user_ids[i % user_ids.size()];
    DocumentState state =
        chosen[i].state == DocumentState::kDone ? DocumentState::kDone : DocumentState::kAssigned;
    store_->set_assignment(chosen[i].id, state, user);
    ++counts[user];
  }
  return counts;
}

std::vector<DocumentRecord> AnnotationService::list_documents(const User& caller,
                                                              std::string_view project_id) const {
  Project p = require_project(project_id);
  require_member(caller, p);
  auto docs = store_->documents(p.id);
  if (caller.role != UserRole::kAdmin) {
    std::erase_if(docs, [&](const DocumentRecord& d) { return d.assignee != caller.id; });
  }
  return docs;
}

DocumentRecord AnnotationService::get_document(const User& caller, std::string_view doc_id) const {
  auto d = store_->document(doc_id);
  if (!d) throw NotFoundError("no document " + std::string(doc_id));
  if (caller.role != UserRole::kAdmin) {
    require_member(caller, require_project(d->project_id));
    if (d->assignee != caller.id) throw ForbiddenError("document " + d->id + " is not assigned to you");
  }
  return *d;
}

std::int64_t AnnotationService::submit_annotation(const User& caller, std::string_view doc_id,
                                                  const Submission& submission) {
  DocumentRecord current = get_document(caller, doc_id);
  if (submission.expected_version != current.version) {
    throw ConflictError("stale version " + std::to_string(submission.expected_version) +
                            " of document " + current.id,
                        current.version);
  }
  Project p = require_project(current.project_id);

  SentenceAnnotation next = current.annotation;
  next.entities = submission.annotations.entities;
  next.triggers = submission.annotations.triggers;
  next.arguments = submission.annotations.arguments;
  const int n_tokens = static_cast<int>(next.tokens.size());
  for (auto& e : next.entities) {
    if (e.surface.empty() && e.span.start >= 0 && e.span.start <= e.span.end &&
        e.span.end < n_tokens) {
      e.surface = span_surface(next, e.span);
    }
  }
  auto violations = validate_annotation(next, *ontology_of(p));
  if (!violations.empty()) throw ValidationError(current.id, std::move(violations));

  DocumentState state = DocumentState::kDone;
  if (!submission.done) {
    state = current.assignee.empty() ? DocumentState::kUnassigned : DocumentState::kAssigned;
  }
  CasResult r = store_->compare_and_set(current.id, submission.expected_version, next, state,
                                        {caller.id, clock_(), 0});
  if (!r.applied) {
    throw ConflictError("stale version " + std::to_string(submission.expected_version) +
                            " of document " + current.id,
                        r.current_version);
  }
  return r.current_version;
}

std::string AnnotationService::export_project(const User& caller, std::string_view project_id,
                                              ExportFormat format) const {
  require_admin(caller);
  Project p = require_project(project_id);
  std::vector<SentenceAnnotation> docs;
  for (auto& d : store_->documents(p.id)) docs.push_back(std::move(d.annotation));
  return export_annotations(docs, format, *ontology_of(p));
}

std::string AnnotationService::get_ontology(const User& caller,
                                            std::string_view project_id) const {
  return get_project(caller, project_id).ontology_document;
}

std::shared_ptr<const Ontology> AnnotationService::project_ontology(
    const User& caller, std::string_view project_id) const {
  return ontology_of(get_project(caller, project_id));
}

Project AnnotationService::extend_ontology(const User& caller, std::string_view project_id,
                                           const OntologyElement& element) {
  require_admin(caller);
  std::lock_guard lock(project_mutex_);
  Project p = require_project(project_id);
  Ontology extended = [&] {
    try {
      return ontology_of(p)->extend(element);
    } catch (const Error& e) {
      throw BadRequestError(e.what());
    }
  }();
  p.ontology_version = extended.version();
  p.ontology_document = extended.serialize();
  store_->update_project(p);
  return p;
}

}  // namespace cofee::service
