#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evofss/dataset.hpp"
#include "evofss/mask.hpp"

namespace evofss {

// Logistic regression trained by full-batch gradient ascent on the mean
// log-likelihood, fixed step 0.1, zero-initialized weights. Features are
// z-scored on training statistics; constant features keep weight 0.
struct LogisticModel {
  std::vector<double> weights;
  double intercept = 0.0;
  std::vector<double> mean;
  std::vector<double> stddev;
  std::vector<std::uint8_t> constant;  // 1 where the training column was constant
  std::size_t nfeat() const { return weights.size(); }
};

struct ConfusionMatrix {
  std::size_t tp = 0;
  std::size_t fn = 0;
  std::size_t tn = 0;
  std::size_t fp = 0;
};

// The fitness used throughout: (sensitivity + specificity) / 2 at the 0.5
// probability cutoff.
struct FitnessScore {
  double auc = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

LogisticModel train_logistic(const Dataset& train, std::size_t max_epochs = 100,
                             double tol = 1e-6);

double predict_probability(const LogisticModel& model,
                           std::span<const double> row);

// Class 1 iff probability >= 0.5.
ConfusionMatrix evaluate_confusion(const LogisticModel& model,
                                   const Dataset& eval);

FitnessScore auc_score(const ConfusionMatrix& cm);

// Project both partitions by the mask, train on train, score on eval.
// An empty mask yields the 0.0 sentinel instead of an error so that the
// search stays total.
FitnessScore evaluate_fitness(const FeatureMask& mask, const Dataset& train,
                              const Dataset& eval);

}  // namespace evofss
