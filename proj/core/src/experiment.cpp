#include "evofss/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "evofss/errors.hpp"

namespace evofss {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw UsageError("config key '" + key + "': expected an integer, got '" +
                     value + "'");
  return out;
}

double parse_f64(const std::string& key, const std::string& value) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc{} || p != value.data() + value.size())
    throw UsageError("config key '" + key + "': expected a number, got '" +
                     value + "'");
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw UsageError("config key '" + key + "': expected true/false, got '" +
                   value + "'");
}

}  // namespace

void ExperimentConfig::validate() const {
  if (data_path.empty()) throw UsageError("no dataset path configured");
  if (algorithms.empty()) throw UsageError("no algorithms configured");
  if (runs < 1) throw UsageError("runs must be >= 1");
  if (algorithms.size() >= 2 && runs < 2)
    throw UsageError("runs < 2: the pairwise t-test needs at least two runs");
  if (!(split_ratio > 0.0 && split_ratio < 1.0))
    throw UsageError("split ratio must lie in (0,1)");
  if (format == DataFormat::Csv && label_column.empty())
    throw UsageError("csv datasets need a label column");
  try {
    engine.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path);

  ExperimentConfig cfg;
  cfg.algorithms.clear();

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError("config line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "data") {
      cfg.data_path = value;
    } else if (key == "format") {
      if (value == "csv")
        cfg.format = DataFormat::Csv;
      else if (value == "libsvm")
        cfg.format = DataFormat::LibSvm;
      else
        throw UsageError("config key 'format': expected csv or libsvm");
    } else if (key == "label") {
      cfg.label_column = value;
    } else if (key == "header") {
      cfg.header = parse_bool(key, value);
    } else if (key == "ratio") {
      cfg.split_ratio = parse_f64(key, value);
    } else if (key == "split_seed") {
      cfg.split_seed = parse_u64(key, value);
    } else if (key == "runs") {
      cfg.runs = parse_u64(key, value);
    } else if (key == "algorithms") {
      std::stringstream ss(value);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        auto alg = algorithm_from_string(tok);
        if (!alg) throw UsageError("unknown algorithm: " + tok);
        cfg.algorithms.push_back(*alg);
      }
    } else if (key == "output") {
      cfg.output_dir = value;
    } else if (key == "pop") {
      cfg.engine.n = parse_u64(key, value);
    } else if (key == "bias") {
      cfg.engine.bias = parse_f64(key, value);
    } else if (key == "mf") {
      cfg.engine.de.mf = parse_f64(key, value);
    } else if (key == "cr") {
      cfg.engine.de.cr = parse_f64(key, value);
    } else if (key == "tmf") {
      cfg.engine.ta.tmf = parse_u64(key, value);
    } else if (key == "t0") {
      cfg.engine.ta.t0 = parse_f64(key, value);
    } else if (key == "cool") {
      cfg.engine.ta.cool = parse_f64(key, value);
    } else if (key == "neighbors") {
      cfg.engine.ta.neighbors_per_iter = parse_u64(key, value);
    } else if (key == "iters") {
      cfg.engine.max_iter1 = parse_u64(key, value);
    } else if (key == "ta_iters") {
      cfg.engine.max_iter2 = parse_u64(key, value);
    } else if (key == "islands") {
      cfg.engine.islands = parse_u64(key, value);
    } else if (key == "parallelism") {
      cfg.engine.parallelism = parse_u64(key, value);
    } else if (key == "seed") {
      cfg.engine.master_seed = parse_u64(key, value);
    } else if (key == "patience") {
      cfg.engine.patience = parse_u64(key, value);
    } else {
      throw UsageError("unknown config key: " + key);
    }
  }
  return cfg;
}

std::uint64_t derive_run_seed(std::uint64_t master_seed,
                              std::size_t run_index) {
  RandomStream hash(static_cast<std::uint64_t>(run_index));
  return master_seed ^ hash.next_u64();
}

Dataset load_dataset(const std::string& path, DataFormat format,
                     const std::string& label_column, bool header,
                     std::vector<std::string>* warnings) {
  if (format == DataFormat::LibSvm) return load_libsvm(path);
  return one_hot_encode(load_csv(path, label_column, header), warnings);
}

ExperimentResults run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const Dataset ds =
      load_dataset(cfg.data_path, cfg.format, cfg.label_column, cfg.header);
  const SplitPair split = stratified_split(ds, cfg.split_ratio, cfg.split_seed);

  ExperimentResults results;
  results.feature_names = ds.feature_names;
  for (Algorithm alg : cfg.algorithms) {
    AlgorithmResults ar;
    ar.algorithm = alg;
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      EngineConfig ec = cfg.engine;
      ec.algorithm = alg;
      ec.master_seed = derive_run_seed(cfg.engine.master_seed, r);
      ar.seeds.push_back(ec.master_seed);
      ar.runs.push_back(run_search(ec, split));
    }
    results.per_algorithm.push_back(std::move(ar));
  }

  if (!cfg.output_dir.empty())
    emit_reports(to_records(results), cfg.output_dir);
  return results;
}

std::vector<std::pair<std::string, std::size_t>> feature_repeatability(
    const std::vector<Individual>& bests, std::span<const std::string> names,
    std::size_t total_runs) {
  if (bests.size() != total_runs)
    throw std::invalid_argument("bests count does not match total_runs");

  std::vector<std::size_t> counts(names.size(), 0);
  for (const auto& ind : bests)
    for (std::size_t j = 0; j < ind.mask.size() && j < counts.size(); ++j)
      if (ind.mask.bits[j]) ++counts[j];

  std::vector<std::pair<std::string, std::size_t>> frequent;
  for (std::size_t j = 0; j < counts.size(); ++j)
    if (counts[j] * 2 > total_runs) frequent.emplace_back(names[j], counts[j]);

  std::sort(frequent.begin(), frequent.end(),
            [](const auto& a, const auto& b) {
              if (a.second != b.second) return a.second > b.second;
              return a.first < b.first;
            });
  if (frequent.size() > 5) frequent.resize(5);
  return frequent;
}

namespace {

std::vector<SubsetGroup> group_subsets(const std::vector<Individual>& bests) {
  std::map<std::vector<std::uint8_t>, SubsetGroup> groups;
  for (const auto& ind : bests) {
    auto& g = groups[ind.mask.bits];
    if (g.count == 0) {
      g.cardinality = ind.mask.cardinality();
      g.features = ind.selected_ids;
      g.auc = ind.auc ? ind.auc->auc : 0.0;
    }
    ++g.count;
  }
  std::vector<SubsetGroup> out;
  out.reserve(groups.size());
  for (auto& [mask, g] : groups) out.push_back(std::move(g));
  return out;
}

}  // namespace

std::vector<SubsetGroup> subset_repeatability(
    const std::vector<Individual>& bests) {
  if (bests.empty()) throw std::invalid_argument("no bests to analyse");
  auto groups = group_subsets(bests);
  std::sort(groups.begin(), groups.end(),
            [](const SubsetGroup& a, const SubsetGroup& b) {
              if (a.count != b.count) return a.count > b.count;
              if (a.auc != b.auc) return a.auc > b.auc;
              return a.cardinality < b.cardinality;
            });
  if (groups.size() > 2) groups.resize(2);
  return groups;
}

SubsetGroup least_cardinal_best(const std::vector<Individual>& bests) {
  if (bests.empty()) throw std::invalid_argument("no bests to analyse");
  auto groups = group_subsets(bests);
  std::size_t max_count = 0;
  for (const auto& g : groups) max_count = std::max(max_count, g.count);

  const SubsetGroup* pick = nullptr;
  for (const auto& g : groups) {
    if (g.count != max_count) continue;
    if (!pick || g.cardinality < pick->cardinality ||
        (g.cardinality == pick->cardinality && g.auc > pick->auc))
      pick = &g;
  }
  return *pick;
}

double speedup_ratio(double sequential_seconds, double parallel_seconds) {
  return std::round(sequential_seconds / parallel_seconds * 100.0) / 100.0;
}

SpeedupReport measure_speedup(const ExperimentConfig& cfg, Algorithm alg) {
  const Dataset ds =
      load_dataset(cfg.data_path, cfg.format, cfg.label_column, cfg.header);
  const SplitPair split = stratified_split(ds, cfg.split_ratio, cfg.split_seed);

  EngineConfig ec = cfg.engine;
  ec.algorithm = alg;
  ec.master_seed = derive_run_seed(cfg.engine.master_seed, 0);

  ec.parallelism = 1;
  const RunResult sequential = run_search(ec, split);
  ec.parallelism = cfg.engine.parallelism;
  const RunResult parallel = run_search(ec, split);

  SpeedupReport report;
  report.sequential_seconds = sequential.wall_time;
  report.parallel_seconds = parallel.wall_time;
  report.speedup = speedup_ratio(sequential.wall_time, parallel.wall_time);
  return report;
}

CampaignRecord to_records(const ExperimentResults& results) {
  CampaignRecord campaign;
  campaign.feature_names = results.feature_names;
  for (const auto& ar : results.per_algorithm) {
    AlgorithmRecords records;
    records.algorithm = ar.algorithm;
    for (std::size_t r = 0; r < ar.runs.size(); ++r) {
      const RunResult& run = ar.runs[r];
      RunRecord rec;
      rec.seed = ar.seeds[r];
      rec.mask = run.best.mask;
      rec.features = run.best.selected_ids;
      rec.test_auc = run.best.auc ? run.best.auc->auc : 0.0;
      rec.train_best = run.train_best_trace.empty()
                           ? 0.0
                           : run.train_best_trace.back();
      rec.evaluations = run.evaluations;
      rec.wall_time = run.wall_time;
      records.runs.push_back(std::move(rec));
    }
    campaign.algorithms.push_back(std::move(records));
  }
  return campaign;
}

}  // namespace evofss
