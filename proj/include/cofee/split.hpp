#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cofee/annotation.hpp"

namespace cofee {

struct SplitOptions {
  double test_fraction = 0.15;
  double min_fraction = 0.10;
  double max_fraction = 0.20;
  // Subtypes found in fewer sentences stay entirely in train.
  std::size_t min_class_size = 5;
  std::uint64_t seed = 0;
};

struct SplitResult {
  std::vector<std::size_t> train;  // indices into the dataset, ascending
  std::vector<std::size_t> test;
  // Subtypes at or above min_class_size whose test count could not be
  // brought inside the bounds. Empty on every corpus seen so far.
  std::vector<std::string> unmet_subtypes;
};

// Inclusive bounds on the test count of a subtype found in n sentences:
// [ceil(min_fraction * n), floor(max_fraction * n)].
std::pair<std::size_t, std::size_t> test_count_bounds(std::size_t n, const SplitOptions& o);

// Whole-sentence split. Subtypes are visited rarest first (ties by id); each
// takes round(test_fraction * n) of its sentences, clamped to the bounds,
// from those no earlier subtype has placed. Sentences without triggers form
// a final stratum. A repair pass then moves single sentences, or swaps
// pairs, while that reduces the total distance of subtype counts from their
// bounds. Deterministic for a given seed.
SplitResult stratified_split(const std::vector<SentenceAnnotation>& dataset,
                             const SplitOptions& options);

}  // namespace cofee
