#include <doctest.h>

#include <map>
#include <string>
#include <vector>

#include "cofee/error.hpp"
#include "cofee/ontology.hpp"

using namespace cofee;

namespace {

std::vector<std::string> role_ids(const std::vector<RoleSlot>& slots) {
  std::vector<std::string> out;
  for (const auto& s : slots) out.push_back(s.role);
  return out;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

const char* kMinimal = R"(version = mini-1

[entity_types]
person | Person | people
time | Time | dates

[event_types]
life | Life | 1

[subtypes]
life.death | Death | life | E1-1

[roles]
participant | Participant | 1
time | Time | 4

[slots]
life.death | participant | person
life.death | time | time
)";

}  // namespace

TEST_CASE("bundled ontology has the published counts") {
  const Ontology& o = bundled_ontology();
  CHECK(o.event_types().size() == 12);
  CHECK(o.subtypes().size() == 119);
  CHECK(o.roles().size() == 21);
  CHECK(o.entity_types().size() == 11);
  CHECK(o.version() == "cofee-1.0");
}

TEST_CASE("subtypes per event type") {
  std::map<std::string, int> per_type;
  for (const auto& s : bundled_ontology().subtypes()) ++per_type[s.parent];
  const std::map<std::string, int> expected = {
      {"life", 11},    {"natural-disasters", 9}, {"environment", 7}, {"crime", 16},
      {"justice", 10}, {"business", 17},         {"politics", 31},   {"social", 4},
      {"cyberspace", 2}, {"election", 3},        {"accident", 7},    {"science", 2},
  };
  CHECK(per_type == expected);
}

TEST_CASE("event type and role ordinals are 1..n") {
  const Ontology& o = bundled_ontology();
  for (std::size_t i = 0; i < o.event_types().size(); ++i) {
    CHECK(o.event_types()[i].ordinal == static_cast<int>(i + 1));
  }
  auto roles = o.roles_by_ordinal();
  for (std::size_t i = 0; i < roles.size(); ++i) CHECK(roles[i].ordinal == static_cast<int>(i + 1));
  CHECK(roles.front().id == "participant");
  CHECK(roles.back().id == "price");
}

TEST_CASE("every slot resolves and every subtype has one") {
  const Ontology& o = bundled_ontology();
  for (const auto& slot : o.role_slots()) {
    CAPTURE(slot.subtype);
    CAPTURE(slot.role);
    CHECK(o.find_subtype(slot.subtype) != nullptr);
    CHECK(o.find_role(slot.role) != nullptr);
    REQUIRE_FALSE(slot.allowed_entity_types.empty());
    for (const auto& t : slot.allowed_entity_types) CHECK(o.find_entity_type(t) != nullptr);
  }
  for (const auto& s : o.subtypes()) {
    CAPTURE(s.id);
    CHECK_FALSE(o.allowed_roles(s.id).empty());
    CHECK(o.find_event_type(s.parent) != nullptr);
  }
}

TEST_CASE("allowed_roles follows role ordinals") {
  const Ontology& o = bundled_ontology();
  CHECK(role_ids(o.allowed_roles("life.suicide")) ==
        std::vector<std::string>{"source", "time", "place", "instrument", "number-of-sources"});
  CHECK(role_ids(o.allowed_roles("science.invention")) ==
        std::vector<std::string>{"source", "time", "place", "artifact"});
  CHECK(role_ids(o.allowed_roles("life.immigration")) ==
        std::vector<std::string>{"source", "target", "time", "place", "number-of-sources"});
  CHECK(o.allowed_roles("life.suicide") == o.allowed_roles("life.suicide"));
  CHECK_THROWS_AS(o.allowed_roles("nosuch"), UnknownElementError);
}

TEST_CASE("grouped subtypes share one slot set") {
  const Ontology& o = bundled_ontology();
  auto strip = [](std::vector<RoleSlot> slots) {
    for (auto& s : slots) s.subtype.clear();
    return slots;
  };
  auto death = strip(o.allowed_roles("life.death"));
  for (const char* id : {"life.injury", "life.birth", "life.drowning", "life.survival",
                         "life.marriage", "life.divorce", "life.hospitalization",
                         "life.missing"}) {
    CAPTURE(id);
    CHECK(strip(o.allowed_roles(id)) == death);
  }
}

TEST_CASE("allowed_entity_types") {
  const Ontology& o = bundled_ontology();
  CHECK(o.allowed_entity_types("life.death", "participant") ==
        std::set<std::string>{"person", "animal"});
  CHECK(o.allowed_entity_types("natural-disasters.earthquake", "scale") ==
        std::set<std::string>{"numeric"});
  CHECK(o.allowed_entity_types("environment.epidemics", "source") ==
        std::set<std::string>{"geo-political-entity", "person", "animal", "organization",
                              "facility", "disease"});
  CHECK_THROWS_AS(o.allowed_entity_types("life.death", "price"), UnknownElementError);
  CHECK(message_of([&] { o.allowed_entity_types("life.death", "price"); })
            .find("life.death/price") != std::string::npos);
}

TEST_CASE("lookups by id") {
  const Ontology& o = bundled_ontology();
  REQUIRE(o.find_subtype("natural-disasters.earthquake") != nullptr);
  CHECK(o.find_subtype("natural-disasters.earthquake")->code == "E2-3");
  CHECK(o.find_entity_type("geo-political-entity")->display_name == "Geo-Political Entity");
  CHECK(o.find_subtype("earthquake") == nullptr);
  CHECK(o.find_slot("life.death", "price") == nullptr);
}

TEST_CASE("parse errors name the problem") {
  CHECK_THROWS_AS(Ontology::parse(""), IntegrityError);
  CHECK(message_of([] { Ontology::parse(""); }).find("no event types") != std::string::npos);

  std::string dangling = kMinimal;
  dangling += "life.death | scale-xx | person\n";
  CHECK_THROWS_AS(Ontology::parse(dangling), IntegrityError);
  CHECK(message_of([&] { Ontology::parse(dangling); }).find("scale-xx") != std::string::npos);

  std::string dup = kMinimal;
  dup += "life.death | time | time\n";
  CHECK_THROWS_AS(Ontology::parse(dup), IntegrityError);

  CHECK_THROWS_AS(Ontology::parse("[nosuch]\n"), ParseError);
  CHECK_THROWS_AS(Ontology::parse("[roles]\nonly-one-field\n"), ParseError);
  CHECK_THROWS_AS(Ontology::parse(std::string(kMinimal) + "[roles]\nplace | Place | x\n"),
                  ParseError);
}

TEST_CASE("minimal document parses") {
  Ontology o = Ontology::parse(kMinimal);
  CHECK(o.version() == "mini-1");
  CHECK(o.subtypes().size() == 1);
  CHECK(role_ids(o.allowed_roles("life.death")) == std::vector<std::string>{"participant", "time"});
}

TEST_CASE("serialize round-trips") {
  const Ontology& o = bundled_ontology();
  std::string text = o.serialize();
  Ontology again = Ontology::parse(text);
  CHECK(again == o);
  CHECK(again.serialize() == text);
}

TEST_CASE("extend adds a custom element and leaves the original alone") {
  const Ontology& o = bundled_ontology();
  const std::string before = o.serialize();

  Ontology with_type = o.extend(EventType{"sports", "Sports", 0, false});
  REQUIRE(with_type.find_event_type("sports") != nullptr);
  CHECK(with_type.find_event_type("sports")->custom);
  CHECK(with_type.find_event_type("sports")->ordinal == 13);
  CHECK(with_type.version() == "cofee-1.0+1");

  Ontology with_sub =
      with_type.extend(EventSubtype{"sports.match-result", "Match Result", "sports", "", false});
  CHECK(with_sub.subtypes().size() == 120);
  CHECK(with_sub.version() == "cofee-1.0+2");

  Ontology with_slot = with_sub.extend(RoleSlot{"sports.match-result", "time", {"time"}, false});
  CHECK(with_slot.allowed_entity_types("sports.match-result", "time") ==
        std::set<std::string>{"time"});
  CHECK(with_slot.find_slot("sports.match-result", "time")->custom);

  CHECK(Ontology::parse(with_slot.serialize()) == with_slot);
  CHECK(o.serialize() == before);
  CHECK(o.subtypes().size() == 119);
}

TEST_CASE("extend rejects dangling and duplicate elements") {
  const Ontology& o = bundled_ontology();
  CHECK_THROWS_AS(o.extend(EventSubtype{"nosuch.thing", "Thing", "nosuch", "", false}),
                  IntegrityError);
  CHECK_THROWS_AS(o.extend(EntityType{"person", "Person again", "dup", false}), IntegrityError);
  CHECK_THROWS_AS(o.extend(RoleSlot{"life.death", "participant", {"person"}, false}),
                  IntegrityError);
  CHECK_THROWS_AS(o.extend(RoleSlot{"life.death", "price", {"no-such-type"}, false}),
                  IntegrityError);
}

TEST_CASE("data_dir honours the environment") {
  CHECK(std::filesystem::exists(data_dir() / "cofee.ontology"));
}
