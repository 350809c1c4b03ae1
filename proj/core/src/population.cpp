#include "evofss/population.hpp"

#include <stdexcept>

namespace evofss {

Population init_population(std::size_t n, std::size_t nfeat, double bias,
                           RandomStream& stream,
                           std::span<const std::string> names) {
  if (n < 2) throw std::invalid_argument("population size must be >= 2");
  if (nfeat < 1) throw std::invalid_argument("nfeat must be >= 1");
  if (bias < 0.0 || bias >= 1.0)
    throw std::invalid_argument("bias must lie in [0,1)");
  if (!names.empty() && names.size() != nfeat)
    throw std::invalid_argument("names length does not match nfeat");

  Population pop;
  pop.members.reserve(n);
  // Per-member streams keyed by id keep initialization schedule independent.
  const std::uint64_t root = stream.next_u64();
  for (std::size_t i = 0; i < n; ++i) {
    Individual ind;
    ind.id = i;
    ind.mask = FeatureMask(nfeat);
    auto member_stream = RandomStream::derive(root, StreamPurpose::Init, i);
    for (std::size_t j = 0; j < nfeat; ++j)
      ind.mask.bits[j] = member_stream.next_double() > bias ? 1 : 0;
    repair_empty_mask(ind.mask, member_stream);
    sync_selected_ids(ind, names);
    pop.members.push_back(std::move(ind));
  }
  pop.island_of.assign(n, 0);
  return pop;
}

void sync_selected_ids(Individual& ind, std::span<const std::string> names) {
  if (!names.empty() && names.size() != ind.mask.size())
    throw std::invalid_argument("names length does not match mask");
  ind.selected_ids.clear();
  for (std::size_t j = 0; j < ind.mask.size(); ++j) {
    if (!ind.mask.bits[j]) continue;
    ind.selected_ids.push_back(names.empty() ? std::to_string(j)
                                             : names[j]);
  }
}

bool better_than(const Individual& a, const Individual& b) {
  if (!a.auc || !b.auc) throw std::invalid_argument("unevaluated individual");
  if (a.auc->auc != b.auc->auc) return a.auc->auc > b.auc->auc;
  const std::size_t ca = a.mask.cardinality();
  const std::size_t cb = b.mask.cardinality();
  if (ca != cb) return ca < cb;
  return a.id < b.id;
}

const Individual& best_of(const Population& pop) {
  if (pop.members.empty()) throw std::invalid_argument("empty population");
  const Individual* best = &pop.members.front();
  for (const auto& ind : pop.members) {
    if (!ind.auc) throw std::invalid_argument("unevaluated individual");
    if (&ind != best && better_than(ind, *best)) best = &ind;
  }
  return *best;
}

}  // namespace evofss
