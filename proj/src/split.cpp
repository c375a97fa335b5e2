#include "cofee/split.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "cofee/error.hpp"

namespace cofee {
namespace {

enum class Side { kNone, kTrain, kTest };

class Repair {
 public:
  Repair(const std::vector<std::vector<int>>& subtypes_of, std::vector<Side>& side,
         std::vector<long>& test_count, const std::vector<std::pair<long, long>>& bounds,
         const std::vector<bool>& stratified)
      : subtypes_of_(subtypes_of),
        side_(side),
        test_count_(test_count),
        bounds_(bounds),
        stratified_(stratified) {}

  long distance(int x, long c) const {
    if (!stratified_[x]) return 0;
    auto [lo, hi] = bounds_[x];
    return c < lo ? lo - c : (c > hi ? c - hi : 0);
  }

  long total_distance() const {
    long v = 0;
    for (std::size_t x = 0; x < test_count_.size(); ++x) {
      v += distance(static_cast<int>(x), test_count_[x]);
    }
    return v;
  }

  // Change in total distance when the given sentences flip sides.
  long delta(std::initializer_list<std::size_t> sentences) const {
    std::map<int, long> change;
    for (auto d : sentences) {
      long step = side_[d] == Side::kTest ? -1 : 1;
      for (int x : subtypes_of_[d]) change[x] += step;
    }
    long v = 0;
    for (auto [x, dc] : change) v += distance(x, test_count_[x] + dc) - distance(x, test_count_[x]);
    return v;
  }

  void flip(std::size_t d) {
    long step = side_[d] == Side::kTest ? -1 : 1;
    side_[d] = side_[d] == Side::kTest ? Side::kTrain : Side::kTest;
    for (int x : subtypes_of_[d]) test_count_[x] += step;
  }

  void run(const std::vector<std::size_t>& movable) {
    long v = total_distance();
    while (v > 0) {
      bool improved = false;
      for (auto d : movable) {
        long dv = delta({d});
        if (dv < 0) {
          flip(d);
          v += dv;
          improved = true;
        }
      }
      if (improved) continue;
      improved = try_swap(movable, v);
      if (!improved) break;
    }
  }

 private:
  bool try_swap(const std::vector<std::size_t>& movable, long& v) {
    for (auto d : movable) {
      if (side_[d] != Side::kTrain) continue;
      for (auto e : movable) {
        if (side_[e] != Side::kTest) continue;
        long dv = delta({d, e});
        if (dv < 0) {
          flip(d);
          flip(e);
          v += dv;
          return true;
        }
      }
    }
    return false;
  }

  const std::vector<std::vector<int>>& subtypes_of_;
  std::vector<Side>& side_;
  std::vector<long>& test_count_;
  const std::vector<std::pair<long, long>>& bounds_;
  const std::vector<bool>& stratified_;
};

}  // namespace

std::pair<std::size_t, std::size_t> test_count_bounds(std::size_t n, const SplitOptions& o) {
  // The epsilon keeps exact products such as 0.1 * 30 from drifting past an integer.
  constexpr double kEps = 1e-9;
  auto lo = static_cast<std::size_t>(std::ceil(o.min_fraction * static_cast<double>(n) - kEps));
  auto hi = static_cast<std::size_t>(std::floor(o.max_fraction * static_cast<double>(n) + kEps));
  return {lo, hi};
}

SplitResult stratified_split(const std::vector<SentenceAnnotation>& dataset,
                             const SplitOptions& options) {
  if (!(options.min_fraction >= 0 && options.min_fraction <= options.test_fraction &&
        options.test_fraction <= options.max_fraction && options.max_fraction <= 1)) {
    throw Error("split fractions must satisfy 0 <= min <= test <= max <= 1");
  }
  const std::size_t n = dataset.size();

  std::map<std::string, int> subtype_index;
  std::vector<std::string> subtype_names;
  std::vector<std::vector<int>> subtypes_of(n);
  for (std::size_t d = 0; d < n; ++d) {
    for (const auto& t : dataset[d].triggers) {
      auto [it, inserted] = subtype_index.emplace(t.subtype, static_cast<int>(subtype_names.size()));
      if (inserted) subtype_names.push_back(t.subtype);
      subtypes_of[d].push_back(it->second);
    }
    auto& s = subtypes_of[d];
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
  }
  const std::size_t n_subtypes = subtype_names.size();

  std::vector<std::vector<std::size_t>> members(n_subtypes);
  for (std::size_t d = 0; d < n; ++d) {
    for (int x : subtypes_of[d]) members[x].push_back(d);
  }
  std::vector<bool> stratified(n_subtypes);
  std::vector<std::pair<long, long>> bounds(n_subtypes);
  for (std::size_t x = 0; x < n_subtypes; ++x) {
    stratified[x] = members[x].size() >= options.min_class_size;
    auto [lo, hi] = test_count_bounds(members[x].size(), options);
    bounds[x] = {static_cast<long>(lo), static_cast<long>(hi)};
  }

  std::vector<int> order(n_subtypes);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (members[a].size() != members[b].size()) return members[a].size() < members[b].size();
    return subtype_names[a] < subtype_names[b];
  });

  std::mt19937_64 rng(options.seed);
  std::vector<Side> side(n, Side::kNone);
  std::vector<long> test_count(n_subtypes, 0);
  auto assign = [&](std::size_t d, Side s) {
    side[d] = s;
    if (s == Side::kTest) {
      for (int x : subtypes_of[d]) ++test_count[x];
    }
  };

  for (int x : order) {
    std::vector<std::size_t> pool;
    for (auto d : members[x]) {
      if (side[d] == Side::kNone) pool.push_back(d);
    }
    std::shuffle(pool.begin(), pool.end(), rng);
    std::size_t take = 0;
    if (stratified[x]) {
      auto [lo, hi] = bounds[x];
      long target = std::clamp(
          static_cast<long>(std::llround(options.test_fraction * members[x].size())), lo, hi);
      long missing = target - test_count[x];
      take = missing > 0 ? std::min(static_cast<std::size_t>(missing), pool.size()) : 0;
    }
    for (std::size_t i = 0; i < pool.size(); ++i) assign(pool[i], i < take ? Side::kTest : Side::kTrain);
  }

  std::vector<std::size_t> eventless;
  for (std::size_t d = 0; d < n; ++d) {
    if (subtypes_of[d].empty()) eventless.push_back(d);
  }
  std::shuffle(eventless.begin(), eventless.end(), rng);
  auto eventless_test =
      static_cast<std::size_t>(std::llround(options.test_fraction * eventless.size()));
  for (std::size_t i = 0; i < eventless.size(); ++i) {
    assign(eventless[i], i < eventless_test ? Side::kTest : Side::kTrain);
  }

  // Sentences holding a below-threshold subtype stay in train.
  std::vector<std::size_t> movable;
  for (std::size_t d = 0; d < n; ++d) {
    if (subtypes_of[d].empty()) continue;
    bool all_stratified = std::all_of(subtypes_of[d].begin(), subtypes_of[d].end(),
                                      [&](int x) { return stratified[x]; });
    if (all_stratified) movable.push_back(d);
  }
  std::shuffle(movable.begin(), movable.end(), rng);
  Repair repair(subtypes_of, side, test_count, bounds, stratified);
  repair.run(movable);

  SplitResult result;
  for (std::size_t d = 0; d < n; ++d) {
    (side[d] == Side::kTest ? result.test : result.train).push_back(d);
  }
  for (std::size_t x = 0; x < n_subtypes; ++x) {
    if (repair.distance(static_cast<int>(x), test_count[x]) > 0) {
      result.unmet_subtypes.push_back(subtype_names[x]);
    }
  }
  std::sort(result.unmet_subtypes.begin(), result.unmet_subtypes.end());
  return result;
}

}  // namespace cofee
