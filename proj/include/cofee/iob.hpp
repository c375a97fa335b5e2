#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cofee/annotation.hpp"
#include "cofee/ontology.hpp"

namespace cofee {

inline constexpr std::string_view kOutsideLabel = "O";

// Trigger label alphabet. For the i-th subtype (ontology order) B-x sits at
// 2i and I-x at 2i+1; "O" is last. The bundled ontology gives 239 labels
// with O at index 238.
class TriggerLabelSet {
 public:
  explicit TriggerLabelSet(const Ontology& o);

  std::size_t size() const { return labels_.size(); }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<std::size_t> index_of(std::string_view label) const;
  std::size_t outside_index() const { return labels_.size() - 1; }

 private:
  std::vector<std::string> labels_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// One label per token. Throws EncodeError naming both triggers when two
// trigger spans overlap, or naming a trigger whose span is out of bounds.
std::vector<std::string> iob_encode_triggers(const SentenceAnnotation& s);

// Maximal B-x I-x* runs become mentions; an I-x that does not continue a
// run of x opens a new one. Only span and subtype are filled; ids are
// "T1", "T2", ... in order. Throws ParseError on a label outside the set.
std::vector<TriggerMention> iob_decode_triggers(const std::vector<std::string>& labels,
                                                const TriggerLabelSet& alphabet);

}  // namespace cofee
