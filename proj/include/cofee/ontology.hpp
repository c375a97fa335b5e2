#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace cofee {

struct EntityType {
  std::string id;
  std::string display_name;
  std::string description;
  bool custom = false;

  bool operator==(const EntityType&) const = default;
};

struct EventType {
  std::string id;
  std::string display_name;
  int ordinal = 0;
  bool custom = false;

  bool operator==(const EventType&) const = default;
};

struct EventSubtype {
  std::string id;
  std::string display_name;
  std::string parent;
  std::string code;  // alias such as "E1-1"; may be empty for custom subtypes
  bool custom = false;

  bool operator==(const EventSubtype&) const = default;
};

struct ArgumentRole {
  std::string id;
  std::string display_name;
  int ordinal = 0;
  bool custom = false;

  bool operator==(const ArgumentRole&) const = default;
};

struct RoleSlot {
  std::string subtype;
  std::string role;
  // Kept in declaration order; membership checks go through Ontology.
  std::vector<std::string> allowed_entity_types;
  bool custom = false;

  bool operator==(const RoleSlot&) const = default;
};

using OntologyElement =
    std::variant<EntityType, EventType, EventSubtype, ArgumentRole, RoleSlot>;

// Immutable, cross-validated schema. Copies are cheap enough for the sizes
// involved and every mutation-like operation returns a new value.
class Ontology {
 public:
  // Parses and validates an ontology document. Throws ParseError for
  // malformed lines and IntegrityError for dangling or duplicate ids.
  static Ontology parse(std::string_view document);
  static Ontology load_file(const std::filesystem::path& path);

  const std::string& version() const { return version_; }
  const std::vector<EntityType>& entity_types() const { return entity_types_; }
  const std::vector<EventType>& event_types() const { return event_types_; }
  const std::vector<EventSubtype>& subtypes() const { return subtypes_; }
  const std::vector<ArgumentRole>& roles() const { return roles_; }
  const std::vector<RoleSlot>& role_slots() const { return role_slots_; }

  const EntityType* find_entity_type(std::string_view id) const;
  const EventType* find_event_type(std::string_view id) const;
  const EventSubtype* find_subtype(std::string_view id) const;
  const ArgumentRole* find_role(std::string_view id) const;
  const RoleSlot* find_slot(std::string_view subtype, std::string_view role) const;

  // Slots of a subtype ordered by role ordinal. Throws UnknownElementError.
  std::vector<RoleSlot> allowed_roles(std::string_view subtype) const;

  // Throws UnknownElementError naming the undefined (subtype, role) slot.
  std::set<std::string> allowed_entity_types(std::string_view subtype,
                                             std::string_view role) const;

  // Roles ordered by ordinal.
  std::vector<ArgumentRole> roles_by_ordinal() const;

  // Returns a new ontology with the element added and flagged custom.
  // Event types and roles with ordinal 0 get the next free ordinal.
  Ontology extend(OntologyElement addition) const;

  // Canonical text form; parse(serialize()) == *this.
  std::string serialize() const;

  bool operator==(const Ontology& other) const;

 private:
  Ontology() = default;
  void build_indexes();
  void validate() const;

  std::string version_ = "unversioned";
  std::vector<EntityType> entity_types_;
  std::vector<EventType> event_types_;
  std::vector<EventSubtype> subtypes_;
  std::vector<ArgumentRole> roles_;
  std::vector<RoleSlot> role_slots_;

  std::map<std::string, std::size_t, std::less<>> entity_index_;
  std::map<std::string, std::size_t, std::less<>> type_index_;
  std::map<std::string, std::size_t, std::less<>> subtype_index_;
  std::map<std::string, std::size_t, std::less<>> role_index_;
  // subtype id -> role id -> slot position
  std::map<std::string, std::map<std::string, std::size_t, std::less<>>, std::less<>>
      slot_index_;
  // subtype id -> slot positions sorted by role ordinal
  std::map<std::string, std::vector<std::size_t>, std::less<>> slots_by_subtype_;
};

// Directory holding the bundled data files: $COFEE_DATA_DIR when set,
// otherwise the directory configured at build time.
std::filesystem::path data_dir();

// Bundled cofee.ontology, loaded once.
const Ontology& bundled_ontology();

std::string read_file(const std::filesystem::path& path);

}  // namespace cofee
