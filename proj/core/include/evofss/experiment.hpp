#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "evofss/dataset.hpp"
#include "evofss/engine.hpp"
#include "evofss/stats.hpp"

namespace evofss {

enum class DataFormat { Csv, LibSvm };

// Campaign description. One shared stratified split is used across all
// runs and algorithms so the per-run bests form paired samples.
struct ExperimentConfig {
  EngineConfig engine;  // template; algorithm is taken from `algorithms`
  std::size_t runs = 20;
  std::string data_path;
  DataFormat format = DataFormat::Csv;
  std::string label_column;
  bool header = true;  // csv only
  double split_ratio = 0.8;
  std::uint64_t split_seed = 0;
  std::vector<Algorithm> algorithms;
  std::string output_dir;

  void validate() const;  // throws UsageError
};

// Flat `key = value` config file; '#' starts a comment; unknown keys are
// rejected.
ExperimentConfig load_experiment_config(const std::string& path);

// csv: load, one-hot encode; libsvm: load densified.
Dataset load_dataset(const std::string& path, DataFormat format,
                     const std::string& label_column = "", bool header = true,
                     std::vector<std::string>* warnings = nullptr);

std::uint64_t derive_run_seed(std::uint64_t master_seed, std::size_t run_index);

struct AlgorithmResults {
  Algorithm algorithm = Algorithm::PBDE;
  std::vector<std::uint64_t> seeds;  // one per run
  std::vector<RunResult> runs;
};

struct ExperimentResults {
  std::vector<std::string> feature_names;
  std::vector<AlgorithmResults> per_algorithm;
};

// R runs per algorithm over one shared split, seeds derived per run index.
// Persists reports into cfg.output_dir when it is set.
ExperimentResults run_experiment(const ExperimentConfig& cfg);

// ---- Repeatability over the per-run best individuals ----

struct SubsetGroup {
  std::size_t count = 0;
  std::size_t cardinality = 0;
  double auc = 0.0;
  std::vector<std::string> features;
};

// Features appearing in strictly more than R/2 of the bests, top-5 by
// (count desc, name asc).
std::vector<std::pair<std::string, std::size_t>> feature_repeatability(
    const std::vector<Individual>& bests, std::span<const std::string> names,
    std::size_t total_runs);

// Identical-mask groups, top-2 by (count desc, AUC desc, cardinality asc).
std::vector<SubsetGroup> subset_repeatability(
    const std::vector<Individual>& bests);

// Among the most repeated masks, the least cardinal one (ties: higher AUC).
SubsetGroup least_cardinal_best(const std::vector<Individual>& bests);

// ---- Speedup ----

struct SpeedupReport {
  double sequential_seconds = 0.0;
  double parallel_seconds = 0.0;
  double speedup = 0.0;  // rounded to 2 decimals
};

double speedup_ratio(double sequential_seconds, double parallel_seconds);

// One seed-matched run at parallelism 1 and at the configured degree.
SpeedupReport measure_speedup(const ExperimentConfig& cfg, Algorithm alg);

// ---- Reporting ----

// Slim per-run record: everything the report tables need.
struct RunRecord {
  std::uint64_t seed = 0;
  FeatureMask mask;
  std::vector<std::string> features;
  double test_auc = 0.0;
  double train_best = 0.0;
  std::size_t evaluations = 0;
  double wall_time = 0.0;
};

struct AlgorithmRecords {
  Algorithm algorithm = Algorithm::PBDE;
  std::vector<RunRecord> runs;
};

struct CampaignRecord {
  std::vector<std::string> feature_names;
  std::vector<AlgorithmRecords> algorithms;
};

CampaignRecord to_records(const ExperimentResults& results);

// Writes runs.json, summary.{json,csv}, repeatability.{json,csv},
// ttests.{json,csv} and best_subsets.csv into `dir`. Deterministic bytes
// for identical inputs.
void emit_reports(const CampaignRecord& campaign, const std::string& dir);

// Writes speedup.{json,csv}.
void emit_speedup_report(
    const std::vector<std::pair<Algorithm, SpeedupReport>>& rows,
    const std::string& dir);

// Reload a persisted campaign (runs.json) for `evofss report`.
CampaignRecord load_campaign(const std::string& dir);

// Human-readable tables to a stream.
void print_tables(std::ostream& out, const CampaignRecord& campaign);

}  // namespace evofss
