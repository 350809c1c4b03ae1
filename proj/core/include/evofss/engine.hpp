#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "evofss/classifier.hpp"
#include "evofss/dataset.hpp"
#include "evofss/operators.hpp"
#include "evofss/population.hpp"

namespace evofss {

enum class Algorithm { PBDE, PBDETA, PBTADE };

std::string_view to_string(Algorithm alg);
std::optional<Algorithm> algorithm_from_string(std::string_view name);

struct EngineConfig {
  Algorithm algorithm = Algorithm::PBDE;
  DEParams de;
  TAParams ta;
  std::size_t n = 10;      // population size
  double bias = 0.99;      // biased-sampling init probability
  std::size_t max_iter1 = 10;  // outer iterations
  std::size_t max_iter2 = 10;  // inner TA iterations per outer iteration
  std::size_t islands = 1;
  std::size_t parallelism = 1;  // concurrent fitness evaluations
  std::uint64_t master_seed = 0;
  std::size_t patience = 0;  // outer iterations without improvement; 0 = off

  void validate() const;  // throws std::invalid_argument
};

struct RunResult {
  Population final_population;  // members carry test-set AUCs
  Individual best;              // best_of(final_population) under test AUC
  std::vector<double> train_best_trace;  // archived best per outer iteration
  std::size_t evaluations = 0;           // training-fitness evaluations
  double wall_time = 0.0;                // seconds
};

// Seam between the search drivers and the classifier. The default
// implementation trains on the training partition and scores either
// partition; tests and benchmarks may substitute synthetic workloads.
class FitnessEvaluator {
 public:
  virtual ~FitnessEvaluator() = default;
  // Fitness used during evolution: trained and scored on the train split.
  virtual FitnessScore train_fitness(const FeatureMask& mask) const = 0;
  // Final scoring: trained on train, scored on test.
  virtual FitnessScore test_score(const FeatureMask& mask) const = 0;
};

class LogisticFitness final : public FitnessEvaluator {
 public:
  explicit LogisticFitness(const SplitPair& split) : split_(&split) {}
  FitnessScore train_fitness(const FeatureMask& mask) const override;
  FitnessScore test_score(const FeatureMask& mask) const override;

 private:
  const SplitPair* split_;
};

// Compute train fitness for every unevaluated member, up to `parallelism`
// evaluations in flight. Returns the number of evaluations performed.
// Results are identical to a sequential pass regardless of schedule.
std::size_t evaluate_population_concurrent(Population& pop,
                                           const FitnessEvaluator& fitness,
                                           std::size_t parallelism);

// Round-robin island assignment by member id rank. k in [1, pop size].
void partition_islands(Population& pop, std::size_t k);

RunResult run_pbde(const EngineConfig& cfg, const SplitPair& split);
RunResult run_pbdeta(const EngineConfig& cfg, const SplitPair& split);
RunResult run_pbtade(const EngineConfig& cfg, const SplitPair& split);

// Dispatch on cfg.algorithm with the stock logistic fitness.
RunResult run_search(const EngineConfig& cfg, const SplitPair& split);
// Same driver with an injected fitness; feature names still come from split.
RunResult run_search(const EngineConfig& cfg, const SplitPair& split,
                     const FitnessEvaluator& fitness);

// Closed-form training-fitness evaluation count for a config.
std::size_t expected_evaluations(const EngineConfig& cfg);

}  // namespace evofss
