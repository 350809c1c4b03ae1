#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evofss/classifier.hpp"
#include "evofss/mask.hpp"
#include "evofss/random.hpp"

namespace evofss {

// One candidate solution: stable key, binary vector, the names of the
// selected features, and the fitness once evaluated.
struct Individual {
  std::uint64_t id = 0;
  FeatureMask mask;
  std::vector<std::string> selected_ids;
  std::optional<FitnessScore> auc;
};

struct Population {
  std::vector<Individual> members;
  std::vector<int> island_of;  // aligned with members

  std::size_t size() const { return members.size(); }
};

// Biased-sampling initialization: bit is 1 iff a uniform draw exceeds
// `bias`; all-zero masks are repaired from the same per-individual stream.
// `names` must have length nfeat and feeds selected_ids.
Population init_population(std::size_t n, std::size_t nfeat, double bias,
                           RandomStream& stream,
                           std::span<const std::string> names);

// Rebuild selected_ids from the current mask; call after any mask change.
void sync_selected_ids(Individual& ind, std::span<const std::string> names);

// Highest AUC; ties broken by smaller cardinality, then smaller id.
// Throws if any member is unevaluated.
const Individual& best_of(const Population& pop);

// Ordering used for bests and archives: AUC desc, cardinality asc, id asc.
bool better_than(const Individual& a, const Individual& b);

}  // namespace evofss
