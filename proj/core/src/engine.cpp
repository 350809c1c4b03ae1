#include "evofss/engine.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <functional>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace evofss {

namespace {

// Parallel index loop with a shared work counter. Lane count never changes
// results: each index writes only its own slot. The lowest-index exception
// wins so failures are reported deterministically.
void parallel_for_indexed(std::size_t count, std::size_t lanes,
                          const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (lanes <= 1 || count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::size_t error_index = count;
  std::exception_ptr error;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> pool;
  const std::size_t spawn = std::min(lanes, count);
  pool.reserve(spawn);
  for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

std::string_view to_string(Algorithm alg) {
  switch (alg) {
    case Algorithm::PBDE:
      return "pbde";
    case Algorithm::PBDETA:
      return "pbdeta";
    case Algorithm::PBTADE:
      return "pbtade";
  }
  return "unknown";
}

std::optional<Algorithm> algorithm_from_string(std::string_view name) {
  if (name == "pbde") return Algorithm::PBDE;
  if (name == "pbdeta") return Algorithm::PBDETA;
  if (name == "pbtade") return Algorithm::PBTADE;
  return std::nullopt;
}

void EngineConfig::validate() const {
  if (n < 4)
    throw std::invalid_argument(
        "population size must be >= 4 (DE draws three distinct parents)");
  if (islands < 1 || islands > n)
    throw std::invalid_argument("islands must lie in [1, population size]");
  if (parallelism < 1) throw std::invalid_argument("parallelism must be >= 1");
  if (bias < 0.0 || bias >= 1.0)
    throw std::invalid_argument("bias must lie in [0,1)");
  if (!(de.mf > 0.0)) throw std::invalid_argument("mf must be positive");
  if (de.cr < 0.0 || de.cr > 1.0)
    throw std::invalid_argument("cr must lie in [0,1]");
  if (ta.tmf < 1) throw std::invalid_argument("tmf must be >= 1");
  if (!(ta.t0 > 0.0)) throw std::invalid_argument("t0 must be positive");
  if (!(ta.cool > 0.0 && ta.cool < 1.0))
    throw std::invalid_argument("cooling factor must lie in (0,1)");
  if (ta.neighbors_per_iter < 1)
    throw std::invalid_argument("neighbors_per_iter must be >= 1");
}

FitnessScore LogisticFitness::train_fitness(const FeatureMask& mask) const {
  return evaluate_fitness(mask, split_->train, split_->train);
}

FitnessScore LogisticFitness::test_score(const FeatureMask& mask) const {
  return evaluate_fitness(mask, split_->train, split_->test);
}

std::size_t evaluate_population_concurrent(Population& pop,
                                           const FitnessEvaluator& fitness,
                                           std::size_t parallelism) {
  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < pop.members.size(); ++i)
    if (!pop.members[i].auc) pending.push_back(i);
  if (pending.empty()) return 0;

  parallel_for_indexed(pending.size(), parallelism, [&](std::size_t k) {
    Individual& ind = pop.members[pending[k]];
    try {
      ind.auc = fitness.train_fitness(ind.mask);
    } catch (const std::exception& e) {
      throw std::runtime_error("fitness evaluation failed for member " +
                               std::to_string(ind.id) + ": " + e.what());
    }
  });
  return pending.size();
}

void partition_islands(Population& pop, std::size_t k) {
  if (k < 1 || k > pop.size())
    throw std::invalid_argument("island count must lie in [1, population size]");
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop.members[a].id < pop.members[b].id;
  });
  pop.island_of.assign(pop.size(), 0);
  for (std::size_t rank = 0; rank < order.size(); ++rank)
    pop.island_of[order[rank]] = static_cast<int>(rank % k);
}

std::size_t expected_evaluations(const EngineConfig& cfg) {
  if (cfg.algorithm == Algorithm::PBDE) return cfg.n * (1 + cfg.max_iter1);
  return cfg.n *
         (1 + cfg.max_iter1 * (1 + cfg.max_iter2 * cfg.ta.neighbors_per_iter));
}

namespace {

class SearchDriver {
 public:
  SearchDriver(const EngineConfig& cfg, const SplitPair& split,
               const FitnessEvaluator& fitness)
      : cfg_(cfg),
        split_(split),
        fitness_(fitness),
        names_(split.train.feature_names) {}

  RunResult run() {
    cfg_.validate();
    if (split_.train.nfeat == 0)
      throw std::invalid_argument("training set has no features");

    const auto start = std::chrono::steady_clock::now();

    RandomStream init_stream(cfg_.master_seed);
    pop_ = init_population(cfg_.n, split_.train.nfeat, cfg_.bias, init_stream,
                           names_);
    next_id_ = cfg_.n;
    evaluations_ += evaluate_population_concurrent(pop_, fitness_,
                                                   cfg_.parallelism);
    archive_ = best_of(pop_);
    trace_.push_back(archive_.auc->auc);

    ta_states_.assign(cfg_.n, ThresholdState{cfg_.ta.t0, 0});

    std::size_t stale = 0;
    for (std::size_t iter = 0; iter < cfg_.max_iter1; ++iter) {
      const double before = archive_.auc->auc;
      switch (cfg_.algorithm) {
        case Algorithm::PBDE:
          de_generation(iter);
          break;
        case Algorithm::PBDETA:
          de_generation(iter);
          ta_phase(iter);
          break;
        case Algorithm::PBTADE:
          ta_phase(iter);
          de_generation(iter);
          break;
      }
      trace_.push_back(archive_.auc->auc);
      if (cfg_.patience > 0) {
        stale = archive_.auc->auc > before ? 0 : stale + 1;
        if (stale >= cfg_.patience) break;
      }
    }

    // Score the evolved population on the test partition.
    parallel_for_indexed(pop_.members.size(), cfg_.parallelism,
                         [&](std::size_t i) {
                           Individual& ind = pop_.members[i];
                           ind.auc = fitness_.test_score(ind.mask);
                         });

    RunResult result;
    result.best = best_of(pop_);
    result.final_population = std::move(pop_);
    result.train_best_trace = std::move(trace_);
    result.evaluations = evaluations_.load();
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return result;
  }

 private:
  void update_archive_from_population() {
    const Individual& candidate = best_of(pop_);
    if (better_than(candidate, archive_)) archive_ = candidate;
  }

  void de_generation(std::size_t iter) {
    partition_islands(pop_, cfg_.islands);
    const std::size_t n = pop_.size();

    std::vector<std::vector<std::size_t>> island_members(cfg_.islands);
    for (std::size_t i = 0; i < n; ++i)
      island_members[static_cast<std::size_t>(pop_.island_of[i])].push_back(i);

    std::vector<Individual> children;
    std::vector<int> child_island;
    children.reserve(n);
    child_island.reserve(n);

    for (std::size_t k = 0; k < cfg_.islands; ++k) {
      const auto& locals = island_members[k];
      for (std::size_t i : locals) {
        const Individual& target = pop_.members[i];
        auto stream = RandomStream::derive(
            cfg_.master_seed, StreamPurpose::DeVariation, iter, target.id);

        // Parent pool: the island when it can supply three distinct
        // parents, otherwise the whole population.
        std::vector<std::size_t> pool;
        if (locals.size() >= 4) {
          for (std::size_t m : locals)
            if (m != i) pool.push_back(m);
        } else {
          for (std::size_t m = 0; m < n; ++m)
            if (m != i) pool.push_back(m);
        }
        if (pool.size() < 3)
          throw std::invalid_argument(
              "population too small for distinct DE parents");

        std::size_t picks[3];
        for (int p = 0; p < 3; ++p) {
          const std::size_t at =
              static_cast<std::size_t>(stream.next_below(pool.size()));
          picks[p] = pool[at];
          pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(at));
        }

        FeatureMask mutant =
            de_mutate(pop_.members[picks[0]].mask, pop_.members[picks[1]].mask,
                      pop_.members[picks[2]].mask, cfg_.de.mf);
        FeatureMask trial =
            de_crossover(target.mask, mutant, cfg_.de.cr, stream);

        Individual child;
        child.id = next_id_++;
        child.mask = std::move(trial);
        sync_selected_ids(child, names_);
        children.push_back(std::move(child));
        child_island.push_back(static_cast<int>(k));
      }
    }

    Population child_pop;
    child_pop.members = std::move(children);
    child_pop.island_of = child_island;
    evaluations_ += evaluate_population_concurrent(child_pop, fitness_,
                                                   cfg_.parallelism);

    std::vector<Individual> next;
    next.reserve(n);
    for (std::size_t k = 0; k < cfg_.islands; ++k) {
      std::vector<Individual> parents, kids;
      for (std::size_t i : island_members[k]) parents.push_back(pop_.members[i]);
      for (std::size_t c = 0; c < child_pop.members.size(); ++c)
        if (child_pop.island_of[c] == static_cast<int>(k))
          kids.push_back(child_pop.members[c]);
      auto kept = elitist_replacement(parents, kids);
      for (auto& ind : kept) next.push_back(std::move(ind));
    }
    std::sort(next.begin(), next.end(),
              [](const Individual& a, const Individual& b) {
                return a.id < b.id;
              });
    pop_.members = std::move(next);
    pop_.island_of.assign(pop_.size(), 0);
    update_archive_from_population();
  }

  void ta_phase(std::size_t iter) {
    if (cfg_.max_iter2 == 0) return;
    for (auto& state : ta_states_) state.t = cfg_.ta.t0;  // cursors persist

    const std::size_t n = pop_.size();
    std::vector<std::optional<Individual>> lane_peaks(n);

    for (std::size_t j = 0; j < cfg_.max_iter2; ++j) {
      for (auto& peak : lane_peaks) peak.reset();

      parallel_for_indexed(n, cfg_.parallelism, [&](std::size_t i) {
        Individual& member = pop_.members[i];
        auto stream = RandomStream::derive(
            cfg_.master_seed, StreamPurpose::TaVariation, iter, j, member.id);
        for (std::size_t q = 0; q < cfg_.ta.neighbors_per_iter; ++q) {
          FeatureMask candidate =
              ta_neighbor(member.mask, ta_states_[i], cfg_.ta.tmf, stream);
          FitnessScore fit;
          try {
            fit = fitness_.train_fitness(candidate);
          } catch (const std::exception& e) {
            throw std::runtime_error("fitness evaluation failed for member " +
                                     std::to_string(member.id) + ": " +
                                     e.what());
          }
          evaluations_.fetch_add(1, std::memory_order_relaxed);
          if (ta_accept(member.auc->auc, fit.auc, ta_states_[i].t)) {
            member.mask = std::move(candidate);
            sync_selected_ids(member, names_);
            member.auc = fit;
            if (!lane_peaks[i] || better_than(member, *lane_peaks[i]))
              lane_peaks[i] = member;
          }
        }
      });

      for (auto& state : ta_states_) threshold_update(state, cfg_.ta.cool);
      for (const auto& peak : lane_peaks)
        if (peak && better_than(*peak, archive_)) archive_ = *peak;
      update_archive_from_population();
    }
  }

  EngineConfig cfg_;
  const SplitPair& split_;
  const FitnessEvaluator& fitness_;
  std::vector<std::string> names_;

  Population pop_;
  Individual archive_;
  std::vector<double> trace_;
  std::vector<ThresholdState> ta_states_;
  std::uint64_t next_id_ = 0;
  std::atomic<std::size_t> evaluations_{0};
};

}  // namespace

RunResult run_search(const EngineConfig& cfg, const SplitPair& split,
                     const FitnessEvaluator& fitness) {
  SearchDriver driver(cfg, split, fitness);
  return driver.run();
}

RunResult run_search(const EngineConfig& cfg, const SplitPair& split) {
  LogisticFitness fitness(split);
  return run_search(cfg, split, fitness);
}

RunResult run_pbde(const EngineConfig& cfg, const SplitPair& split) {
  if (cfg.algorithm != Algorithm::PBDE)
    throw std::invalid_argument("config algorithm is not pbde");
  return run_search(cfg, split);
}

RunResult run_pbdeta(const EngineConfig& cfg, const SplitPair& split) {
  if (cfg.algorithm != Algorithm::PBDETA)
    throw std::invalid_argument("config algorithm is not pbdeta");
  return run_search(cfg, split);
}

RunResult run_pbtade(const EngineConfig& cfg, const SplitPair& split) {
  if (cfg.algorithm != Algorithm::PBTADE)
    throw std::invalid_argument("config algorithm is not pbtade");
  return run_search(cfg, split);
}

}  // namespace evofss
