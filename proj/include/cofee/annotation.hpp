#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/ontology.hpp"
#include "cofee/text.hpp"

namespace cofee {

// Token-index span, both ends inclusive.
struct Span {
  int start = 0;
  int end = 0;

  int length() const { return end - start + 1; }
  bool overlaps(const Span& o) const { return start <= o.end && o.start <= end; }
  auto operator<=>(const Span&) const = default;
};

enum class Tense { kPast, kPresent, kFuture, kUnspecified };
enum class Polarity { kPositive, kNegative };
enum class Modality { kAsserted, kOther };

std::string_view to_string(Tense t);
std::string_view to_string(Polarity p);
std::string_view to_string(Modality m);
std::optional<Tense> parse_tense(std::string_view s);
std::optional<Polarity> parse_polarity(std::string_view s);
std::optional<Modality> parse_modality(std::string_view s);

inline constexpr Tense kAllTenses[] = {Tense::kPast, Tense::kPresent, Tense::kFuture,
                                       Tense::kUnspecified};
inline constexpr Polarity kAllPolarities[] = {Polarity::kPositive, Polarity::kNegative};
inline constexpr Modality kAllModalities[] = {Modality::kAsserted, Modality::kOther};

struct EntityMention {
  std::string id;
  Span span;
  std::string entity_type;
  std::string surface;

  bool operator==(const EntityMention&) const = default;
};

struct TriggerMention {
  std::string id;
  Span span;
  std::string subtype;
  Tense tense = Tense::kUnspecified;
  Polarity polarity = Polarity::kPositive;
  Modality modality = Modality::kAsserted;

  bool operator==(const TriggerMention&) const = default;
};

struct ArgumentLink {
  std::string trigger_id;
  std::string entity_id;
  std::string role;

  bool operator==(const ArgumentLink&) const = default;
};

struct SentenceAnnotation {
  std::string doc_id;
  std::string text;
  std::string language = "en";
  std::vector<Token> tokens;
  std::vector<EntityMention> entities;
  std::vector<TriggerMention> triggers;
  std::vector<ArgumentLink> arguments;

  bool operator==(const SentenceAnnotation&) const = default;

  const EntityMention* find_entity(std::string_view id) const;
  const TriggerMention* find_trigger(std::string_view id) const;
};

// Text-only skeleton tokenized with the language's profile.
SentenceAnnotation make_sentence(std::string doc_id, std::string text,
                                 std::string language = "en");

// Text covered by a token span: from the first token's start to the last
// token's end, including inner whitespace. Spans must be in bounds.
std::string span_surface(const SentenceAnnotation& s, Span span);

struct Violation {
  std::string element_id;
  std::string rule;
  std::string message;

  bool operator==(const Violation&) const = default;
};

// Rule names shared with clients.
namespace rule {
inline constexpr std::string_view kDuplicateId = "duplicate-id";
inline constexpr std::string_view kEmptyId = "empty-id";
inline constexpr std::string_view kBadTokens = "bad-tokens";
inline constexpr std::string_view kSpanOutOfBounds = "span-out-of-bounds";
inline constexpr std::string_view kSurfaceMismatch = "surface-mismatch";
inline constexpr std::string_view kUnknownEntityType = "unknown-entity-type";
inline constexpr std::string_view kUnknownSubtype = "unknown-subtype";
inline constexpr std::string_view kDanglingTrigger = "dangling-trigger";
inline constexpr std::string_view kDanglingEntity = "dangling-entity";
inline constexpr std::string_view kUnknownRole = "unknown-role";
inline constexpr std::string_view kSlotUndefined = "slot-undefined";
inline constexpr std::string_view kEntityTypeNotAllowed = "entity-type-not-allowed";
inline constexpr std::string_view kDuplicateRole = "duplicate-role";
}  // namespace rule

// Empty iff the sentence satisfies every mention and link constraint.
// Sorted by (element_id, rule, message).
std::vector<Violation> validate_annotation(const SentenceAnnotation& s, const Ontology& o);

// Element id used in violations for an argument link.
std::string link_element_id(const ArgumentLink& link);

inline constexpr std::string_view kNoRole = "no-role";

// The 21 roles in ordinal order followed by "no-role".
std::vector<std::string> role_label_space(const Ontology& o);

// Role of the (trigger, entity) link, or "no-role". Throws UnknownElementError
// when either id does not exist in the sentence.
std::string role_label(const SentenceAnnotation& s, std::string_view trigger_id,
                       std::string_view entity_id);

}  // namespace cofee
