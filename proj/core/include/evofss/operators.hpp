#pragma once

#include <cstddef>
#include <vector>

#include "evofss/mask.hpp"
#include "evofss/population.hpp"
#include "evofss/random.hpp"

namespace evofss {

struct DEParams {
  double mf = 0.8;  // mutation factor
  double cr = 0.9;  // crossover rate
};

struct TAParams {
  std::size_t tmf = 1;       // bits flipped per candidate
  double t0 = 0.05;          // initial threshold
  double cool = 0.95;        // multiplicative cooling per inner iteration
  std::size_t neighbors_per_iter = 1;
};

struct ThresholdState {
  double t = 0.05;
  std::size_t cursor = 0;  // next flip position for this individual
};

// rand/1 mutation relaxed over {0,1}: v = r1 + mf*(r2 - r3), bit = v >= 0.5.
FeatureMask de_mutate(const FeatureMask& r1, const FeatureMask& r2,
                      const FeatureMask& r3, double mf);

// Binomial crossover with the jrand guarantee. Draw order: jrand first,
// then one uniform per bit left to right; a repair draw follows if the
// trial came out empty.
FeatureMask de_crossover(const FeatureMask& target, const FeatureMask& mutant,
                         double cr, RandomStream& stream);

// Pool parents and children, keep the parent count best by
// (AUC desc, cardinality asc, parent before child, id asc).
std::vector<Individual> elitist_replacement(
    const std::vector<Individual>& parents,
    const std::vector<Individual>& children);

// Flip tmf consecutive bits starting at the cursor (wrapping); advances the
// cursor by tmf mod nfeat. The stream is consumed only for empty-mask repair.
FeatureMask ta_neighbor(const FeatureMask& current, ThresholdState& state,
                        std::size_t tmf, RandomStream& stream);

// Accept iff the deterioration old_auc - new_auc is below the threshold.
bool ta_accept(double old_auc, double new_auc, double t);

// Geometric cooling, applied once per inner TA iteration.
void threshold_update(ThresholdState& state, double cool);

}  // namespace evofss
