#include "cofee/ontology.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {
namespace {

using internal::quote;
using internal::split;
using internal::trim;

enum class Section { kNone, kEntityTypes, kEventTypes, kSubtypes, kRoles, kSlots };

Section section_from_name(std::string_view name) {
  if (name == "entity_types") return Section::kEntityTypes;
  if (name == "event_types") return Section::kEventTypes;
  if (name == "subtypes") return Section::kSubtypes;
  if (name == "roles") return Section::kRoles;
  if (name == "slots") return Section::kSlots;
  return Section::kNone;
}

bool is_lower_alnum(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'); }

// lowercase words joined by single hyphens
bool is_hyphenated_id(std::string_view id) {
  if (id.empty() || id.front() == '-' || id.back() == '-') return false;
  char prev = 0;
  for (char c : id) {
    if (c == '-') {
      if (prev == '-') return false;
    } else if (!is_lower_alnum(c)) {
      return false;
    }
    prev = c;
  }
  return true;
}

bool is_subtype_id(std::string_view id) {
  auto dot = id.find('.');
  if (dot == std::string_view::npos || id.find('.', dot + 1) != std::string_view::npos) {
    return false;
  }
  return is_hyphenated_id(id.substr(0, dot)) && is_hyphenated_id(id.substr(dot + 1));
}

class LineError {
 public:
  explicit LineError(int line) : line_(line) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("ontology line " + std::to_string(line_) + ": " + what);
  }

 private:
  int line_;
};

int parse_ordinal(std::string_view field, const LineError& err) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    err.fail("bad ordinal " + quote(field));
  }
  return value;
}

// Splits a record into fields, peeling off an optional trailing "custom".
std::vector<std::string> record_fields(std::string_view line, std::size_t expected,
                                       bool& custom, const LineError& err) {
  std::vector<std::string> fields;
  for (auto part : split(line, '|')) fields.emplace_back(trim(part));
  custom = false;
  if (fields.size() == expected + 1 && fields.back() == "custom") {
    custom = true;
    fields.pop_back();
  }
  if (fields.size() != expected) {
    err.fail("expected " + std::to_string(expected) + " fields, got " +
             std::to_string(fields.size()));
  }
  return fields;
}

// Text fields must survive the one-record-per-line format.
void check_field_text(std::string_view owner, std::string_view text) {
  if (text.find_first_of("|\n\r") != std::string_view::npos) {
    throw IntegrityError(std::string(owner) + " has a field containing '|' or a line break");
  }
  if (trim(text) != text) {
    throw IntegrityError(std::string(owner) + " has a field with surrounding blanks");
  }
}

std::string custom_suffix(bool custom) { return custom ? " | custom" : ""; }

template <typename T>
std::map<std::string, std::size_t, std::less<>> index_by_id(const std::vector<T>& items) {
  std::map<std::string, std::size_t, std::less<>> index;
  for (std::size_t i = 0; i < items.size(); ++i) index.emplace(items[i].id, i);
  return index;
}

template <typename T, typename Pred>
void check_ids(const std::vector<T>& items, std::string_view kind, Pred well_formed) {
  std::set<std::string_view> seen;
  for (const auto& item : items) {
    if (!well_formed(item.id)) {
      throw IntegrityError("malformed " + std::string(kind) + " id " + quote(item.id));
    }
    if (!seen.insert(item.id).second) {
      throw IntegrityError("duplicate " + std::string(kind) + " id " + quote(item.id));
    }
  }
}

template <typename T>
void check_ordinals(const std::vector<T>& items, std::string_view kind) {
  std::set<int> seen;
  for (const auto& item : items) {
    if (item.ordinal <= 0) {
      throw IntegrityError(std::string(kind) + " " + quote(item.id) +
                           " has non-positive ordinal");
    }
    if (!seen.insert(item.ordinal).second) {
      throw IntegrityError(std::string(kind) + " " + quote(item.id) +
                           " reuses ordinal " + std::to_string(item.ordinal));
    }
  }
}

std::string next_version(const std::string& version) {
  auto plus = version.rfind('+');
  if (plus != std::string::npos) {
    std::string_view tail(version);
    tail.remove_prefix(plus + 1);
    int n = 0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), n);
    if (ec == std::errc() && ptr == tail.data() + tail.size() && !tail.empty()) {
      return version.substr(0, plus) + "+" + std::to_string(n + 1);
    }
  }
  return version + "+1";
}

}  // namespace

Ontology Ontology::parse(std::string_view document) {
  Ontology o;
  Section section = Section::kNone;
  int line_no = 0;
  bool saw_version = false;
  for (auto raw : split(document, '\n')) {
    ++line_no;
    LineError err(line_no);
    if (line_no == 1 && raw.substr(0, 3) == "\xEF\xBB\xBF") raw.remove_prefix(3);
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == '[') {
      if (line.back() != ']') err.fail("unterminated section header");
      section = section_from_name(trim(line.substr(1, line.size() - 2)));
      if (section == Section::kNone) err.fail("unknown section " + quote(line));
      continue;
    }
    if (section == Section::kNone) {
      auto eq = line.find('=');
      if (eq != std::string_view::npos && trim(line.substr(0, eq)) == "version") {
        if (saw_version) err.fail("duplicate version line");
        o.version_ = std::string(trim(line.substr(eq + 1)));
        if (o.version_.empty()) err.fail("empty version");
        saw_version = true;
        continue;
      }
      err.fail("record outside of a section");
    }

    bool custom = false;
    switch (section) {
      case Section::kEntityTypes: {
        auto f = record_fields(line, 3, custom, err);
        o.entity_types_.push_back({f[0], f[1], f[2], custom});
        break;
      }
      case Section::kEventTypes: {
        auto f = record_fields(line, 3, custom, err);
        o.event_types_.push_back({f[0], f[1], parse_ordinal(f[2], err), custom});
        break;
      }
      case Section::kSubtypes: {
        auto f = record_fields(line, 4, custom, err);
        o.subtypes_.push_back({f[0], f[1], f[2], f[3], custom});
        break;
      }
      case Section::kRoles: {
        auto f = record_fields(line, 3, custom, err);
        o.roles_.push_back({f[0], f[1], parse_ordinal(f[2], err), custom});
        break;
      }
      case Section::kSlots: {
        auto f = record_fields(line, 3, custom, err);
        RoleSlot slot{f[0], f[1], {}, custom};
        for (auto t : split(f[2], ',')) {
          auto id = trim(t);
          if (!id.empty()) slot.allowed_entity_types.emplace_back(id);
        }
        o.role_slots_.push_back(std::move(slot));
        break;
      }
      case Section::kNone:
        break;
    }
  }
  o.validate();
  o.build_indexes();
  return o;
}

Ontology Ontology::load_file(const std::filesystem::path& path) {
  return parse(read_file(path));
}

void Ontology::validate() const {
  if (event_types_.empty()) throw IntegrityError("no event types");

  check_ids(entity_types_, "entity type", is_hyphenated_id);
  check_ids(event_types_, "event type", is_hyphenated_id);
  check_ids(subtypes_, "subtype", is_subtype_id);
  check_ids(roles_, "role", is_hyphenated_id);
  check_ordinals(event_types_, "event type");
  check_ordinals(roles_, "role");

  for (const auto& e : entity_types_) {
    check_field_text(quote(e.id), e.display_name);
    check_field_text(quote(e.id), e.description);
  }
  for (const auto& t : event_types_) check_field_text(quote(t.id), t.display_name);
  for (const auto& s : subtypes_) {
    check_field_text(quote(s.id), s.display_name);
    check_field_text(quote(s.id), s.code);
  }
  for (const auto& r : roles_) check_field_text(quote(r.id), r.display_name);

  auto entities = index_by_id(entity_types_);
  auto types = index_by_id(event_types_);
  auto subtypes = index_by_id(subtypes_);
  auto roles = index_by_id(roles_);

  for (const auto& s : subtypes_) {
    if (!types.count(s.parent)) {
      throw IntegrityError("subtype " + quote(s.id) + " references unknown event type " +
                           quote(s.parent));
    }
  }

  std::set<std::pair<std::string_view, std::string_view>> seen_slots;
  std::set<std::string_view> subtypes_with_slots;
  for (const auto& slot : role_slots_) {
    std::string name = quote(slot.subtype + "/" + slot.role);
    if (!subtypes.count(slot.subtype)) {
      throw IntegrityError("slot " + name + " references unknown subtype " +
                           quote(slot.subtype));
    }
    if (!roles.count(slot.role)) {
      throw IntegrityError("slot " + name + " references unknown role " + quote(slot.role));
    }
    if (!seen_slots.emplace(slot.subtype, slot.role).second) {
      throw IntegrityError("duplicate slot " + name);
    }
    if (slot.allowed_entity_types.empty()) {
      throw IntegrityError("slot " + name + " allows no entity types");
    }
    std::set<std::string_view> seen_types;
    for (const auto& t : slot.allowed_entity_types) {
      if (!entities.count(t)) {
        throw IntegrityError("slot " + name + " references unknown entity type " + quote(t));
      }
      if (!seen_types.insert(t).second) {
        throw IntegrityError("slot " + name + " lists entity type " + quote(t) + " twice");
      }
    }
    subtypes_with_slots.insert(slot.subtype);
  }

  // Custom subtypes may be added before their slots.
  for (const auto& s : subtypes_) {
    if (!s.custom && !subtypes_with_slots.count(s.id)) {
      throw IntegrityError("subtype " + quote(s.id) + " has no role slots");
    }
  }
}

void Ontology::build_indexes() {
  entity_index_ = index_by_id(entity_types_);
  type_index_ = index_by_id(event_types_);
  subtype_index_ = index_by_id(subtypes_);
  role_index_ = index_by_id(roles_);
  slot_index_.clear();
  slots_by_subtype_.clear();
  for (std::size_t i = 0; i < role_slots_.size(); ++i) {
    const auto& slot = role_slots_[i];
    slot_index_[slot.subtype].emplace(slot.role, i);
    slots_by_subtype_[slot.subtype].push_back(i);
  }
  for (auto& [subtype, positions] : slots_by_subtype_) {
    std::sort(positions.begin(), positions.end(), [this](std::size_t a, std::size_t b) {
      return roles_[role_index_.find(role_slots_[a].role)->second].ordinal <
             roles_[role_index_.find(role_slots_[b].role)->second].ordinal;
    });
  }
}

const EntityType* Ontology::find_entity_type(std::string_view id) const {
  auto it = entity_index_.find(id);
  return it == entity_index_.end() ? nullptr : &entity_types_[it->second];
}

const EventType* Ontology::find_event_type(std::string_view id) const {
  auto it = type_index_.find(id);
  return it == type_index_.end() ? nullptr : &event_types_[it->second];
}

const EventSubtype* Ontology::find_subtype(std::string_view id) const {
  auto it = subtype_index_.find(id);
  return it == subtype_index_.end() ? nullptr : &subtypes_[it->second];
}

const ArgumentRole* Ontology::find_role(std::string_view id) const {
  auto it = role_index_.find(id);
  return it == role_index_.end() ? nullptr : &roles_[it->second];
}

const RoleSlot* Ontology::find_slot(std::string_view subtype, std::string_view role) const {
  auto it = slot_index_.find(subtype);
  if (it == slot_index_.end()) return nullptr;
  auto jt = it->second.find(role);
  return jt == it->second.end() ? nullptr : &role_slots_[jt->second];
}

std::vector<RoleSlot> Ontology::allowed_roles(std::string_view subtype) const {
  if (!find_subtype(subtype)) {
    throw UnknownElementError("unknown subtype " + quote(subtype));
  }
  std::vector<RoleSlot> out;
  auto it = slots_by_subtype_.find(subtype);
  if (it == slots_by_subtype_.end()) return out;
  out.reserve(it->second.size());
  for (auto i : it->second) out.push_back(role_slots_[i]);
  return out;
}

std::set<std::string> Ontology::allowed_entity_types(std::string_view subtype,
                                                     std::string_view role) const {
  const RoleSlot* slot = find_slot(subtype, role);
  if (!slot) {
    throw UnknownElementError("undefined slot " + quote(std::string(subtype) + "/" +
                                                         std::string(role)));
  }
  return {slot->allowed_entity_types.begin(), slot->allowed_entity_types.end()};
}

std::vector<ArgumentRole> Ontology::roles_by_ordinal() const {
  auto out = roles_;
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.ordinal < b.ordinal; });
  return out;
}

Ontology Ontology::extend(OntologyElement addition) const {
  Ontology o = *this;
  auto duplicate = [](std::string_view kind, std::string_view id) {
    return IntegrityError("duplicate " + std::string(kind) + " id " + quote(id));
  };
  auto next_ordinal = [](const auto& items) {
    int max = 0;
    for (const auto& item : items) max = std::max(max, item.ordinal);
    return max + 1;
  };
  std::visit(
      [&](auto& element) {
        using T = std::decay_t<decltype(element)>;
        element.custom = true;
        if constexpr (std::is_same_v<T, EntityType>) {
          if (find_entity_type(element.id)) throw duplicate("entity type", element.id);
          o.entity_types_.push_back(element);
        } else if constexpr (std::is_same_v<T, EventType>) {
          if (find_event_type(element.id)) throw duplicate("event type", element.id);
          if (element.ordinal == 0) element.ordinal = next_ordinal(event_types_);
          o.event_types_.push_back(element);
        } else if constexpr (std::is_same_v<T, EventSubtype>) {
          if (find_subtype(element.id)) throw duplicate("subtype", element.id);
          o.subtypes_.push_back(element);
        } else if constexpr (std::is_same_v<T, ArgumentRole>) {
          if (find_role(element.id)) throw duplicate("role", element.id);
          if (element.ordinal == 0) element.ordinal = next_ordinal(roles_);
          o.roles_.push_back(element);
        } else {
          if (find_slot(element.subtype, element.role)) {
            throw IntegrityError("duplicate slot " +
                                 quote(element.subtype + "/" + element.role));
          }
          o.role_slots_.push_back(element);
        }
      },
      addition);
  o.validate();
  o.version_ = next_version(version_);
  o.build_indexes();
  return o;
}

std::string Ontology::serialize() const {
  std::ostringstream out;
  out << "version = " << version_ << "\n\n[entity_types]\n";
  for (const auto& e : entity_types_) {
    out << e.id << " | " << e.display_name << " | " << e.description << custom_suffix(e.custom)
        << "\n";
  }
  out << "\n[event_types]\n";
  for (const auto& t : event_types_) {
    out << t.id << " | " << t.display_name << " | " << t.ordinal << custom_suffix(t.custom)
        << "\n";
  }
  out << "\n[subtypes]\n";
  for (const auto& s : subtypes_) {
    out << s.id << " | " << s.display_name << " | " << s.parent << " | " << s.code
        << custom_suffix(s.custom) << "\n";
  }
  out << "\n[roles]\n";
  for (const auto& r : roles_) {
    out << r.id << " | " << r.display_name << " | " << r.ordinal << custom_suffix(r.custom)
        << "\n";
  }
  out << "\n[slots]\n";
  for (const auto& slot : role_slots_) {
    out << slot.subtype << " | " << slot.role << " | "
        << internal::join(slot.allowed_entity_types, ", ") << custom_suffix(slot.custom)
        << "\n";
  }
  return out.str();
}

bool Ontology::operator==(const Ontology& other) const {
  return version_ == other.version_ && entity_types_ == other.entity_types_ &&
         event_types_ == other.event_types_ && subtypes_ == other.subtypes_ &&
         roles_ == other.roles_ && role_slots_ == other.role_slots_;
}

std::filesystem::path data_dir() {
  if (const char* env = std::getenv("COFEE_DATA_DIR"); env && *env) return env;
  return COFEE_DEFAULT_DATA_DIR;
}

const Ontology& bundled_ontology() {
  static const Ontology instance = Ontology::load_file(data_dir() / "cofee.ontology");
  return instance;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace cofee
