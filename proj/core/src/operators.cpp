#include "evofss/operators.hpp"

#include <algorithm>
#include <stdexcept>

namespace evofss {

FeatureMask de_mutate(const FeatureMask& r1, const FeatureMask& r2,
                      const FeatureMask& r3, double mf) {
  if (r1.size() != r2.size() || r1.size() != r3.size())
    throw std::invalid_argument("mask length mismatch");
  if (!(mf > 0.0)) throw std::invalid_argument("mf must be positive");

  FeatureMask mutant(r1.size());
  for (std::size_t j = 0; j < r1.size(); ++j) {
    const double v = static_cast<double>(r1.bits[j]) +
                     mf * (static_cast<double>(r2.bits[j]) -
                           static_cast<double>(r3.bits[j]));
    mutant.bits[j] = v >= 0.5 ? 1 : 0;
  }
  return mutant;
}

FeatureMask de_crossover(const FeatureMask& target, const FeatureMask& mutant,
                         double cr, RandomStream& stream) {
  if (target.size() != mutant.size())
    throw std::invalid_argument("mask length mismatch");
  const std::size_t nfeat = target.size();
  const std::size_t jrand = static_cast<std::size_t>(stream.next_below(nfeat));

  FeatureMask trial(nfeat);
  for (std::size_t j = 0; j < nfeat; ++j) {
    const bool from_mutant = stream.next_double() < cr || j == jrand;
    trial.bits[j] = from_mutant ? mutant.bits[j] : target.bits[j];
  }
  repair_empty_mask(trial, stream);
  return trial;
}

std::vector<Individual> elitist_replacement(
    const std::vector<Individual>& parents,
    const std::vector<Individual>& children) {
  if (parents.size() != children.size())
    throw std::invalid_argument("parent/children count mismatch");

  struct Ranked {
    const Individual* ind;
    std::size_t cardinality;
    bool is_child;
  };
  std::vector<Ranked> pool;
  pool.reserve(parents.size() + children.size());
  for (const auto& p : parents) {
    if (!p.auc) throw std::invalid_argument("unevaluated parent");
    pool.push_back({&p, p.mask.cardinality(), false});
  }
  for (const auto& c : children) {
    if (!c.auc) throw std::invalid_argument("unevaluated child");
    pool.push_back({&c, c.mask.cardinality(), true});
  }

  std::sort(pool.begin(), pool.end(), [](const Ranked& a, const Ranked& b) {
    if (a.ind->auc->auc != b.ind->auc->auc)
      return a.ind->auc->auc > b.ind->auc->auc;
    if (a.cardinality != b.cardinality) return a.cardinality < b.cardinality;
    if (a.is_child != b.is_child) return !a.is_child;  // parent before child
    return a.ind->id < b.ind->id;
  });

  std::vector<Individual> kept;
  kept.reserve(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i)
    kept.push_back(*pool[i].ind);
  return kept;
}

FeatureMask ta_neighbor(const FeatureMask& current, ThresholdState& state,
                        std::size_t tmf, RandomStream& stream) {
  if (tmf < 1) throw std::invalid_argument("tmf must be >= 1");
  const std::size_t nfeat = current.size();

  FeatureMask candidate = current;
  for (std::size_t k = 0; k < tmf; ++k) {
    const std::size_t pos = (state.cursor + k) % nfeat;
    candidate.bits[pos] ^= 1;
  }
  state.cursor = (state.cursor + tmf) % nfeat;
  repair_empty_mask(candidate, stream);
  return candidate;
}

bool ta_accept(double old_auc, double new_auc, double t) {
  if (!(t > 0.0)) throw std::invalid_argument("threshold must be positive");
  return (old_auc - new_auc) < t;
}

void threshold_update(ThresholdState& state, double cool) {
  if (!(cool > 0.0 && cool < 1.0))
    throw std::invalid_argument("cooling factor must lie in (0,1)");
  state.t *= cool;
}

}  // namespace evofss
