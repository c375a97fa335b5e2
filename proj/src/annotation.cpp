#include "cofee/annotation.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {
namespace {

using internal::quote;

std::string span_text(Span s) {
  return "[" + std::to_string(s.start) + ", " + std::to_string(s.end) + "]";
}

}  // namespace

std::string_view to_string(Tense t) {
  switch (t) {
    case Tense::kPast: return "past";
    case Tense::kPresent: return "present";
    case Tense::kFuture: return "future";
    case Tense::kUnspecified: return "unspecified";
  }
  return "unspecified";
}

std::string_view to_string(Polarity p) {
  return p == Polarity::kPositive ? "positive" : "negative";
}

std::string_view to_string(Modality m) {
  return m == Modality::kAsserted ? "asserted" : "other";
}

std::optional<Tense> parse_tense(std::string_view s) {
  for (Tense t : kAllTenses) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<Polarity> parse_polarity(std::string_view s) {
  for (Polarity p : kAllPolarities) {
    if (to_string(p) == s) return p;
  }
  return std::nullopt;
}

std::optional<Modality> parse_modality(std::string_view s) {
  for (Modality m : kAllModalities) {
    if (to_string(m) == s) return m;
  }
  return std::nullopt;
}

const EntityMention* SentenceAnnotation::find_entity(std::string_view id) const {
  for (const auto& e : entities) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const TriggerMention* SentenceAnnotation::find_trigger(std::string_view id) const {
  for (const auto& t : triggers) {
    if (t.id == id) return &t;
  }
  return nullptr;
}

SentenceAnnotation make_sentence(std::string doc_id, std::string text, std::string language) {
  SentenceAnnotation s;
  s.doc_id = std::move(doc_id);
  s.tokens = tokenize(text, TokenizerProfile::for_language(language));
  s.text = std::move(text);
  s.language = std::move(language);
  return s;
}

std::string span_surface(const SentenceAnnotation& s, Span span) {
  const int n = static_cast<int>(s.tokens.size());
  if (span.start < 0 || span.end < span.start || span.end >= n) {
    throw UnknownElementError("span " + span_text(span) + " outside sentence of " +
                              std::to_string(n) + " tokens");
  }
  return substring(s.text, s.tokens[span.start].char_start, s.tokens[span.end].char_end);
}

std::string link_element_id(const ArgumentLink& link) {
  return link.trigger_id + "->" + link.entity_id;
}

std::vector<Violation> validate_annotation(const SentenceAnnotation& s, const Ontology& o) {
  std::vector<Violation> out;
  auto report = [&out](std::string element, std::string_view rule, std::string message) {
    out.push_back({std::move(element), std::string(rule), std::move(message)});
  };

  const int n_chars = static_cast<int>(to_utf32(s.text).size());
  for (std::size_t i = 0; i < s.tokens.size(); ++i) {
    const Token& t = s.tokens[i];
    bool ordered = i == 0 || s.tokens[i - 1].char_end <= t.char_start;
    if (t.index != static_cast<int>(i) || t.char_start < 0 || t.char_start >= t.char_end ||
        t.char_end > n_chars || !ordered) {
      report("tokens", rule::kBadTokens,
             "token " + std::to_string(i) + " has invalid offsets or index");
    }
  }
  const bool tokens_ok = out.empty();
  const int n_tokens = static_cast<int>(s.tokens.size());
  auto in_bounds = [n_tokens](Span sp) {
    return sp.start >= 0 && sp.start <= sp.end && sp.end < n_tokens;
  };

  std::map<std::string_view, int> id_counts;
  for (const auto& e : s.entities) ++id_counts[e.id];
  for (const auto& t : s.triggers) ++id_counts[t.id];
  for (const auto& [id, count] : id_counts) {
    if (id.empty()) {
      report("", rule::kEmptyId, std::to_string(count) + " mentions without an id");
    } else if (count > 1) {
      report(std::string(id), rule::kDuplicateId,
             "id used by " + std::to_string(count) + " mentions");
    }
  }

  for (const auto& e : s.entities) {
    if (!o.find_entity_type(e.entity_type)) {
      report(e.id, rule::kUnknownEntityType, "unknown entity type " + quote(e.entity_type));
    }
    if (!in_bounds(e.span)) {
      report(e.id, rule::kSpanOutOfBounds,
             "span " + span_text(e.span) + " outside " + std::to_string(n_tokens) + " tokens");
    } else if (tokens_ok) {
      std::string expected = span_surface(s, e.span);
      if (expected != e.surface) {
        report(e.id, rule::kSurfaceMismatch,
               "surface " + quote(e.surface) + " but span covers " + quote(expected));
      }
    }
  }

  for (const auto& t : s.triggers) {
    if (!o.find_subtype(t.subtype)) {
      report(t.id, rule::kUnknownSubtype, "unknown subtype " + quote(t.subtype));
    }
    if (!in_bounds(t.span)) {
      report(t.id, rule::kSpanOutOfBounds,
             "span " + span_text(t.span) + " outside " + std::to_string(n_tokens) + " tokens");
    }
  }

  std::set<std::pair<std::string_view, std::string_view>> linked;
  std::set<std::string> reported_duplicates;
  for (const auto& link : s.arguments) {
    std::string element = link_element_id(link);
    const TriggerMention* trigger = s.find_trigger(link.trigger_id);
    const EntityMention* entity = s.find_entity(link.entity_id);
    const ArgumentRole* role = o.find_role(link.role);
    if (!trigger) report(element, rule::kDanglingTrigger, "no trigger " + quote(link.trigger_id));
    if (!entity) report(element, rule::kDanglingEntity, "no entity " + quote(link.entity_id));
    if (!role) report(element, rule::kUnknownRole, "unknown role " + quote(link.role));
    if (!linked.emplace(link.trigger_id, link.entity_id).second &&
        reported_duplicates.insert(element).second) {
      report(element, rule::kDuplicateRole, "entity has more than one role for this trigger");
    }
    if (!trigger || !role || !o.find_subtype(trigger->subtype)) continue;
    const RoleSlot* slot = o.find_slot(trigger->subtype, link.role);
    if (!slot) {
      report(element, rule::kSlotUndefined,
             "role " + quote(link.role) + " not defined for " + quote(trigger->subtype));
      continue;
    }
    if (entity && o.find_entity_type(entity->entity_type)) {
      const auto& allowed = slot->allowed_entity_types;
      if (std::find(allowed.begin(), allowed.end(), entity->entity_type) == allowed.end()) {
        report(element, rule::kEntityTypeNotAllowed,
               "entity type " + quote(entity->entity_type) + " not allowed for " +
                   quote(trigger->subtype + "/" + link.role));
      }
    }
  }

  std::sort(out.begin(), out.end(), [](const Violation& a, const Violation& b) {
    return std::tie(a.element_id, a.rule, a.message) < std::tie(b.element_id, b.rule, b.message);
  });
  return out;
}

std::vector<std::string> role_label_space(const Ontology& o) {
  std::vector<std::string> labels;
  for (const auto& r : o.roles_by_ordinal()) labels.push_back(r.id);
  labels.emplace_back(kNoRole);
  return labels;
}

std::string role_label(const SentenceAnnotation& s, std::string_view trigger_id,
                       std::string_view entity_id) {
  if (!s.find_trigger(trigger_id)) {
    throw UnknownElementError("unknown trigger " + quote(trigger_id));
  }
  if (!s.find_entity(entity_id)) {
    throw UnknownElementError("unknown entity " + quote(entity_id));
  }
  for (const auto& link : s.arguments) {
    if (link.trigger_id == trigger_id && link.entity_id == entity_id) return link.role;
  }
  return std::string(kNoRole);
}

}  // namespace cofee
