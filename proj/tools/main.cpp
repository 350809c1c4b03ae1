// evofss: feature subset selection with parallel BDE / TA hybrids.
//
// Subcommands:
//   run      full experiment campaign from a config file
//   select   single search run on one dataset
//   speedup  sequential vs parallel timing of seed-matched runs
//   report   reprint the tables for a persisted campaign

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evofss/errors.hpp"
#include "evofss/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitRuntime = 3;

void print_run_summary(std::ostream& out, const evofss::EngineConfig& cfg,
                       const evofss::RunResult& result) {
  out << "algorithm:    " << evofss::to_string(cfg.algorithm) << "\n";
  out << "seed:         " << cfg.master_seed << "\n";
  out << "evaluations:  " << result.evaluations << "\n";
  out << "wall time:    " << result.wall_time << " s\n";
  out << "train best:   "
      << (result.train_best_trace.empty() ? 0.0
                                          : result.train_best_trace.back())
      << "\n";
  out << "test auc:     " << result.best.auc->auc << "\n";
  out << "sensitivity:  " << result.best.auc->sensitivity << "\n";
  out << "specificity:  " << result.best.auc->specificity << "\n";
  out << "cardinality:  " << result.best.mask.cardinality() << "\n";
  out << "features:    ";
  for (const auto& name : result.best.selected_ids) out << " " << name;
  out << "\n";
}

int run_command(const std::string& config_path) {
  auto cfg = evofss::load_experiment_config(config_path);
  cfg.validate();
  auto results = evofss::run_experiment(cfg);
  const auto campaign = evofss::to_records(results);
  evofss::print_tables(std::cout, campaign);
  if (!cfg.output_dir.empty())
    std::cout << "\nreports written to " << cfg.output_dir << "\n";
  return kExitOk;
}

int speedup_command(const std::string& config_path) {
  auto cfg = evofss::load_experiment_config(config_path);
  cfg.validate();
  std::vector<std::pair<evofss::Algorithm, evofss::SpeedupReport>> rows;
  for (auto alg : cfg.algorithms) {
    auto report = evofss::measure_speedup(cfg, alg);
    std::cout << evofss::to_string(alg) << ": sequential "
              << report.sequential_seconds << " s, parallel "
              << report.parallel_seconds << " s, speedup " << report.speedup
              << "\n";
    rows.emplace_back(alg, report);
  }
  if (!cfg.output_dir.empty()) {
    evofss::emit_speedup_report(rows, cfg.output_dir);
    std::cout << "speedup report written to " << cfg.output_dir << "\n";
  }
  return kExitOk;
}

int report_command(const std::string& dir) {
  const auto campaign = evofss::load_campaign(dir);
  evofss::print_tables(std::cout, campaign);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wrapper feature subset selection with parallel binary "
               "differential evolution and threshold accepting hybrids"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run a full experiment campaign");
  run->add_option("--config", config_path, "Campaign config file")->required();

  auto* speedup =
      app.add_subcommand("speedup", "Time sequential vs parallel runs");
  std::string speedup_config;
  speedup->add_option("--config", speedup_config, "Campaign config file")
      ->required();

  auto* report = app.add_subcommand("report", "Reprint a persisted campaign");
  std::string report_dir;
  report->add_option("--in", report_dir, "Campaign output directory")
      ->required();

  auto* select = app.add_subcommand("select", "Single feature-selection run");
  std::string data_path, format_name = "csv", label, algorithm_name = "pbde";
  bool header = true;
  double ratio = 0.8, mf = 0.8, cr = 0.9, t0 = 0.05, cool = 0.95, bias = 0.99;
  std::size_t tmf = 1, pop = 10, iters = 10, ta_iters = 10, islands = 1,
              parallelism = 1;
  std::uint64_t seed = 0;
  select->add_option("--data", data_path, "Dataset path")->required();
  select->add_option("--format", format_name, "csv or libsvm")
      ->check(CLI::IsMember({"csv", "libsvm"}));
  select->add_option("--label", label, "Label column (csv)");
  select->add_option("--algorithm", algorithm_name, "pbde, pbdeta or pbtade")
      ->check(CLI::IsMember({"pbde", "pbdeta", "pbtade"}));
  select->add_flag("--header,!--no-header", header,
                   "First csv row is a header (default on)");
  select->add_option("--ratio", ratio, "Train fraction for the split");
  select->add_option("--mf", mf, "DE mutation factor");
  select->add_option("--cr", cr, "DE crossover rate");
  select->add_option("--tmf", tmf, "TA bits flipped per candidate");
  select->add_option("--t0", t0, "TA initial threshold");
  select->add_option("--cool", cool, "TA cooling factor");
  select->add_option("--pop", pop, "Population size");
  select->add_option("--iters", iters, "Outer iterations");
  select->add_option("--ta-iters", ta_iters, "Inner TA iterations");
  select->add_option("--islands", islands, "Island count");
  select->add_option("--parallelism", parallelism,
                     "Concurrent fitness evaluations");
  select->add_option("--seed", seed, "Master seed");
  select->add_option("--bias", bias, "Biased-init probability");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (run->parsed()) return run_command(config_path);
    if (speedup->parsed()) return speedup_command(speedup_config);
    if (report->parsed()) return report_command(report_dir);

    // select
    const auto format = format_name == "libsvm" ? evofss::DataFormat::LibSvm
                                                : evofss::DataFormat::Csv;
    if (format == evofss::DataFormat::Csv && label.empty())
      throw evofss::UsageError("csv datasets need --label");

    std::vector<std::string> warnings;
    const auto ds =
        evofss::load_dataset(data_path, format, label, header, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
    const auto split = evofss::stratified_split(ds, ratio, seed);

    evofss::EngineConfig cfg;
    cfg.algorithm = *evofss::algorithm_from_string(algorithm_name);
    cfg.de = {mf, cr};
    cfg.ta.tmf = tmf;
    cfg.ta.t0 = t0;
    cfg.ta.cool = cool;
    cfg.n = pop;
    cfg.bias = bias;
    cfg.max_iter1 = iters;
    cfg.max_iter2 = ta_iters;
    cfg.islands = islands;
    cfg.parallelism = parallelism;
    cfg.master_seed = seed;
    try {
      cfg.validate();
    } catch (const std::invalid_argument& e) {
      throw evofss::UsageError(e.what());
    }

    const auto result = evofss::run_search(cfg, split);
    print_run_summary(std::cout, cfg, result);
    return kExitOk;
  } catch (const evofss::UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const evofss::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}
