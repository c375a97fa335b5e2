#include "cofee/service/record_json.hpp"

#include "cofee/annotation_json.hpp"
#include "cofee/error.hpp"

namespace cofee::service {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(std::string("ontology element needs string field '") + key + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  if (!it->is_string()) throw ParseError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

int optional_ordinal(const json& j) {
  auto it = j.find("ordinal");
  if (it == j.end()) return 0;
  if (!it->is_number_integer()) throw ParseError("field 'ordinal' must be an integer");
  return it->get<int>();
}

}  // namespace

std::string_view to_string(UserRole r) { return r == UserRole::kAdmin ? "admin" : "annotator"; }

std::optional<UserRole> parse_user_role(std::string_view s) {
  if (s == "admin") return UserRole::kAdmin;
  if (s == "annotator") return UserRole::kAnnotator;
  return std::nullopt;
}

std::string_view to_string(DocumentState s) {
  switch (s) {
    case DocumentState::kUnassigned: return "unassigned";
    case DocumentState::kAssigned: return "assigned";
    case DocumentState::kDone: return "done";
  }
  return "unassigned";
}

std::optional<DocumentState> parse_document_state(std::string_view s) {
  for (auto state : {DocumentState::kUnassigned, DocumentState::kAssigned, DocumentState::kDone}) {
    if (to_string(state) == s) return state;
  }
  return std::nullopt;
}

ordered_json to_json(const User& user) {
  ordered_json j;
  j["id"] = user.id;
  j["name"] = user.name;
  j["role"] = to_string(user.role);
  return j;
}

ordered_json to_json(const Project& project) {
  ordered_json j;
  j["id"] = project.id;
  j["name"] = project.name;
  j["ontology_version"] = project.ontology_version;
  j["members"] = project.members;
  return j;
}

ordered_json to_json(const AuditEntry& entry) {
  ordered_json j;
  j["version"] = entry.version;
  j["user"] = entry.user_id;
  j["timestamp_ms"] = entry.timestamp_ms;
  return j;
}

ordered_json summary_json(const DocumentRecord& doc) {
  ordered_json j;
  j["id"] = doc.id;
  j["project"] = doc.project_id;
  j["version"] = doc.version;
  j["status"] = to_string(doc.state);
  j["assignee"] = doc.assignee;
  return j;
}

ordered_json to_json(const DocumentRecord& doc) {
  ordered_json j = summary_json(doc);
  j["document"] = cofee::to_json(doc.annotation);
  auto& audit = j["audit"] = ordered_json::array();
  for (const auto& a : doc.audit) audit.push_back(to_json(a));
  return j;
}

ordered_json to_json(const RoleSlot& slot) {
  ordered_json j;
  j["subtype"] = slot.subtype;
  j["role"] = slot.role;
  j["allowed_entity_types"] = slot.allowed_entity_types;
  j["custom"] = slot.custom;
  return j;
}

OntologyElement ontology_element_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("ontology element must be an object");
  std::string kind = required_string(j, "kind");
  if (kind == "entity_type") {
    return EntityType{required_string(j, "id"), required_string(j, "display_name"),
                      optional_string(j, "description"), true};
  }
  if (kind == "event_type") {
    return EventType{required_string(j, "id"), required_string(j, "display_name"),
                     optional_ordinal(j), true};
  }
  if (kind == "subtype") {
    return EventSubtype{required_string(j, "id"), required_string(j, "display_name"),
                        required_string(j, "parent"), optional_string(j, "code"), true};
  }
  if (kind == "role") {
    return ArgumentRole{required_string(j, "id"), required_string(j, "display_name"),
                        optional_ordinal(j), true};
  }
  if (kind == "slot") {
    RoleSlot slot{required_string(j, "subtype"), required_string(j, "role"), {}, true};
    auto it = j.find("allowed_entity_types");
    if (it == j.end() || !it->is_array()) {
      throw ParseError("slot needs an 'allowed_entity_types' array");
    }
    for (const auto& t : *it) {
      if (!t.is_string()) throw ParseError("entity type ids must be strings");
      slot.allowed_entity_types.push_back(t.get<std::string>());
    }
    return slot;
  }
  throw ParseError("unknown ontology element kind '" + kind + "'");
}

}  // namespace cofee::service
