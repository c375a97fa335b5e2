#include "cofee/iob.hpp"

#include <algorithm>

#include "cofee/error.hpp"
#include "strings.hpp"

namespace cofee {

TriggerLabelSet::TriggerLabelSet(const Ontology& o) {
  for (const auto& s : o.subtypes()) {
    labels_.push_back("B-" + s.id);
    labels_.push_back("I-" + s.id);
  }
  labels_.emplace_back(kOutsideLabel);
  for (std::size_t i = 0; i < labels_.size(); ++i) index_.emplace(labels_[i], i);
}

std::optional<std::size_t> TriggerLabelSet::index_of(std::string_view label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> iob_encode_triggers(const SentenceAnnotation& s) {
  const int n = static_cast<int>(s.tokens.size());
  std::vector<const TriggerMention*> sorted;
  for (const auto& t : s.triggers) {
    if (t.span.start < 0 || t.span.end < t.span.start || t.span.end >= n) {
      throw EncodeError("trigger " + internal::quote(t.id) + " span out of bounds");
    }
    sorted.push_back(&t);
  }
  std::sort(sorted.begin(), sorted.end(),
            [](const auto* a, const auto* b) { return a->span < b->span; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i - 1]->span.overlaps(sorted[i]->span)) {
      throw EncodeError("overlapping triggers " + internal::quote(sorted[i - 1]->id) +
                        " and " + internal::quote(sorted[i]->id));
    }
  }

  std::vector<std::string> labels(n, std::string(kOutsideLabel));
  for (const auto* t : sorted) {
    labels[t->span.start] = "B-" + t->subtype;
    for (int i = t->span.start + 1; i <= t->span.end; ++i) labels[i] = "I-" + t->subtype;
  }
  return labels;
}

std::vector<TriggerMention> iob_decode_triggers(const std::vector<std::string>& labels,
                                                const TriggerLabelSet& alphabet) {
  std::vector<TriggerMention> out;
  bool open = false;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const std::string& label = labels[i];
    if (!alphabet.index_of(label)) {
      throw ParseError("unknown trigger label " + internal::quote(label) + " at token " +
                       std::to_string(i));
    }
    if (label == kOutsideLabel) {
      open = false;
      continue;
    }
    const bool begin = label[0] == 'B';
    std::string subtype = label.substr(2);
    const int pos = static_cast<int>(i);
    if (!begin && open && out.back().subtype == subtype) {
      out.back().span.end = pos;
      continue;
    }
    TriggerMention t;
    t.id = "T" + std::to_string(out.size() + 1);
    t.span = {pos, pos};
    t.subtype = std::move(subtype);
    out.push_back(std::move(t));
    open = true;
  }
  return out;
}

}  // namespace cofee
