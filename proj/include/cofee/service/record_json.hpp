#pragma once

#include <json.hpp>

#include "cofee/ontology.hpp"
#include "cofee/service/records.hpp"

namespace cofee::service {

// API views. Credential hashes and ontology documents are never included.
nlohmann::ordered_json to_json(const User& user);
nlohmann::ordered_json to_json(const Project& project);
nlohmann::ordered_json to_json(const AuditEntry& entry);
// Summary without the annotation body.
nlohmann::ordered_json summary_json(const DocumentRecord& doc);
// Summary plus "document" (canonical form) and "audit".
nlohmann::ordered_json to_json(const DocumentRecord& doc);

nlohmann::ordered_json to_json(const RoleSlot& slot);

// Element definition for ontology extension:
//   {"kind": "entity_type", "id", "display_name", "description"}
//   {"kind": "event_type", "id", "display_name", "ordinal"?}
//   {"kind": "subtype", "id", "display_name", "parent", "code"?}
//   {"kind": "role", "id", "display_name", "ordinal"?}
//   {"kind": "slot", "subtype", "role", "allowed_entity_types": [...]}
// Throws ParseError.
OntologyElement ontology_element_from_json(const nlohmann::json& j);

}  // namespace cofee::service
