#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "evofss/errors.hpp"
#include "evofss/experiment.hpp"

namespace evofss {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string general(double v) {
  std::ostringstream os;
  os << std::setprecision(6) << v;
  return os.str();
}

std::string join(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out.push_back(sep);
    out += parts[i];
  }
  return out;
}

std::string mask_to_string(const FeatureMask& mask) {
  std::string s(mask.size(), '0');
  for (std::size_t j = 0; j < mask.size(); ++j)
    if (mask.bits[j]) s[j] = '1';
  return s;
}

FeatureMask mask_from_string(const std::string& s) {
  FeatureMask mask(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    mask.bits[j] = s[j] == '1' ? 1 : 0;
  return mask;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << body;
}

std::vector<Individual> bests_of(const AlgorithmRecords& records) {
  std::vector<Individual> bests;
  bests.reserve(records.runs.size());
  for (std::size_t r = 0; r < records.runs.size(); ++r) {
    Individual ind;
    ind.id = r;
    ind.mask = records.runs[r].mask;
    ind.selected_ids = records.runs[r].features;
    ind.auc = FitnessScore{records.runs[r].test_auc, 0.0, 0.0};
    bests.push_back(std::move(ind));
  }
  return bests;
}

struct SummaryRow {
  Algorithm algorithm;
  double avg_cardinality;
  double mean_auc;
};

std::vector<SummaryRow> summarize(const CampaignRecord& campaign) {
  std::vector<SummaryRow> rows;
  for (const auto& records : campaign.algorithms) {
    double card = 0.0, auc = 0.0;
    for (const auto& run : records.runs) {
      card += static_cast<double>(run.mask.cardinality());
      auc += run.test_auc;
    }
    const double n = static_cast<double>(records.runs.size());
    rows.push_back({records.algorithm, card / n, auc / n});
  }
  return rows;
}

struct TTestRow {
  Algorithm a;
  Algorithm b;
  TTestResult result;
};

std::vector<TTestRow> pairwise_tests(const CampaignRecord& campaign) {
  std::vector<TTestRow> rows;
  for (std::size_t i = 0; i < campaign.algorithms.size(); ++i) {
    for (std::size_t j = i + 1; j < campaign.algorithms.size(); ++j) {
      const auto& ra = campaign.algorithms[i];
      const auto& rb = campaign.algorithms[j];
      std::vector<double> a, b;
      for (const auto& run : ra.runs) a.push_back(run.test_auc);
      for (const auto& run : rb.runs) b.push_back(run.test_auc);
      rows.push_back({ra.algorithm, rb.algorithm, paired_t_test(a, b)});
    }
  }
  return rows;
}

}  // namespace

void emit_reports(const CampaignRecord& campaign, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    throw DataError("cannot create output directory: " + dir);
  const fs::path base(dir);

  // runs.json: the persisted campaign every other table derives from.
  {
    ordered_json doc;
    doc["feature_names"] = campaign.feature_names;
    doc["algorithms"] = ordered_json::array();
    for (const auto& records : campaign.algorithms) {
      ordered_json alg;
      alg["algorithm"] = std::string(to_string(records.algorithm));
      alg["runs"] = ordered_json::array();
      for (const auto& run : records.runs) {
        ordered_json row;
        row["seed"] = run.seed;
        row["mask"] = mask_to_string(run.mask);
        row["features"] = run.features;
        row["cardinality"] = run.mask.cardinality();
        row["test_auc"] = run.test_auc;
        row["train_best"] = run.train_best;
        row["evaluations"] = run.evaluations;
        row["wall_time"] = run.wall_time;
        alg["runs"].push_back(std::move(row));
      }
      doc["algorithms"].push_back(std::move(alg));
    }
    write_file(base / "runs.json", doc.dump(2) + "\n");
  }

  // Summary (average cardinality + mean AUC per algorithm).
  const auto summary = summarize(campaign);
  {
    ordered_json doc = ordered_json::array();
    std::string csv = "algorithm,avg_cardinality,mean_auc\n";
    for (const auto& row : summary) {
      ordered_json r;
      r["algorithm"] = std::string(to_string(row.algorithm));
      r["avg_cardinality"] = row.avg_cardinality;
      r["mean_auc"] = row.mean_auc;
      doc.push_back(std::move(r));
      csv += std::string(to_string(row.algorithm)) + "," +
             fixed(row.avg_cardinality, 2) + "," + fixed(row.mean_auc, 4) +
             "\n";
    }
    write_file(base / "summary.json", doc.dump(2) + "\n");
    write_file(base / "summary.csv", csv);
  }

  // Repeatability tables.
  {
    ordered_json doc = ordered_json::array();
    std::string csv =
        "algorithm,frequent_features,s1_count,s1_cardinality,s1_auc,"
        "s2_count,s2_cardinality,s2_auc,least_cardinality,least_auc\n";
    for (const auto& records : campaign.algorithms) {
      const auto bests = bests_of(records);
      const auto frequent = feature_repeatability(
          bests, campaign.feature_names, records.runs.size());
      const auto top2 = subset_repeatability(bests);
      const auto least = least_cardinal_best(bests);

      ordered_json r;
      r["algorithm"] = std::string(to_string(records.algorithm));
      r["frequent_features"] = ordered_json::array();
      for (const auto& [name, count] : frequent)
        r["frequent_features"].push_back({{"feature", name}, {"count", count}});
      r["top_subsets"] = ordered_json::array();
      for (const auto& g : top2)
        r["top_subsets"].push_back({{"count", g.count},
                                    {"cardinality", g.cardinality},
                                    {"auc", g.auc},
                                    {"features", g.features}});
      r["least_cardinal"] = {{"count", least.count},
                             {"cardinality", least.cardinality},
                             {"auc", least.auc},
                             {"features", least.features}};
      doc.push_back(std::move(r));

      std::vector<std::string> names;
      for (const auto& [name, count] : frequent) names.push_back(name);
      csv += std::string(to_string(records.algorithm)) + ",\"" +
             join(names, ';') + "\"";
      for (std::size_t k = 0; k < 2; ++k) {
        if (k < top2.size())
          csv += "," + std::to_string(top2[k].count) + "," +
                 std::to_string(top2[k].cardinality) + "," +
                 fixed(top2[k].auc, 4);
        else
          csv += ",,,";
      }
      csv += "," + std::to_string(least.cardinality) + "," +
             fixed(least.auc, 4) + "\n";
    }
    write_file(base / "repeatability.json", doc.dump(2) + "\n");
    write_file(base / "repeatability.csv", csv);
  }

  // Pairwise paired t-tests on per-run best test AUCs.
  if (campaign.algorithms.size() >= 2) {
    const auto tests = pairwise_tests(campaign);
    ordered_json doc = ordered_json::array();
    std::string csv = "pair,t_statistic,p_value,df,significant\n";
    for (const auto& row : tests) {
      ordered_json r;
      r["a"] = std::string(to_string(row.a));
      r["b"] = std::string(to_string(row.b));
      r["t_statistic"] = row.result.t_statistic;
      r["p_value"] = row.result.p_value;
      r["df"] = row.result.df;
      r["significant"] = row.result.significant;
      doc.push_back(std::move(r));
      csv += std::string(to_string(row.a)) + " vs " +
             std::string(to_string(row.b)) + "," +
             fixed(row.result.t_statistic, 4) + "," +
             general(row.result.p_value) + "," +
             std::to_string(row.result.df) + "," +
             (row.result.significant ? "yes" : "no") + "\n";
    }
    write_file(base / "ttests.json", doc.dump(2) + "\n");
    write_file(base / "ttests.csv", csv);
  }

  // Per-run best-subset listings.
  {
    std::string csv = "algorithm,run,seed,cardinality,test_auc,features\n";
    for (const auto& records : campaign.algorithms) {
      for (std::size_t r = 0; r < records.runs.size(); ++r) {
        const auto& run = records.runs[r];
        csv += std::string(to_string(records.algorithm)) + "," +
               std::to_string(r) + "," + std::to_string(run.seed) + "," +
               std::to_string(run.mask.cardinality()) + "," +
               fixed(run.test_auc, 4) + ",\"" + join(run.features, ';') +
               "\"\n";
      }
    }
    write_file(base / "best_subsets.csv", csv);
  }
}

void emit_speedup_report(
    const std::vector<std::pair<Algorithm, SpeedupReport>>& rows,
    const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    throw DataError("cannot create output directory: " + dir);

  ordered_json doc = ordered_json::array();
  std::string csv = "algorithm,sequential_seconds,parallel_seconds,speedup\n";
  for (const auto& [alg, report] : rows) {
    ordered_json r;
    r["algorithm"] = std::string(to_string(alg));
    r["sequential_seconds"] = report.sequential_seconds;
    r["parallel_seconds"] = report.parallel_seconds;
    r["speedup"] = report.speedup;
    doc.push_back(std::move(r));
    csv += std::string(to_string(alg)) + "," +
           fixed(report.sequential_seconds, 3) + "," +
           fixed(report.parallel_seconds, 3) + "," + fixed(report.speedup, 2) +
           "\n";
  }
  write_file(std::filesystem::path(dir) / "speedup.json", doc.dump(2) + "\n");
  write_file(std::filesystem::path(dir) / "speedup.csv", csv);
}

CampaignRecord load_campaign(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "runs.json";
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  ordered_json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw DataError("malformed runs.json: " + std::string(e.what()));
  }

  CampaignRecord campaign;
  campaign.feature_names =
      doc.at("feature_names").get<std::vector<std::string>>();
  for (const auto& alg : doc.at("algorithms")) {
    AlgorithmRecords records;
    auto parsed = algorithm_from_string(alg.at("algorithm").get<std::string>());
    if (!parsed) throw DataError("unknown algorithm in runs.json");
    records.algorithm = *parsed;
    for (const auto& row : alg.at("runs")) {
      RunRecord rec;
      rec.seed = row.at("seed").get<std::uint64_t>();
      rec.mask = mask_from_string(row.at("mask").get<std::string>());
      rec.features = row.at("features").get<std::vector<std::string>>();
      rec.test_auc = row.at("test_auc").get<double>();
      rec.train_best = row.at("train_best").get<double>();
      rec.evaluations = row.at("evaluations").get<std::size_t>();
      rec.wall_time = row.at("wall_time").get<double>();
      records.runs.push_back(std::move(rec));
    }
    campaign.algorithms.push_back(std::move(records));
  }
  return campaign;
}

void print_tables(std::ostream& out, const CampaignRecord& campaign) {
  out << "== Summary (test AUC over per-run bests) ==\n";
  out << "algorithm   avg_cardinality   mean_auc\n";
  for (const auto& row : summarize(campaign)) {
    out << std::left << std::setw(12) << to_string(row.algorithm)
        << std::setw(18) << fixed(row.avg_cardinality, 2)
        << fixed(row.mean_auc, 4) << "\n";
  }

  out << "\n== Repeatability ==\n";
  for (const auto& records : campaign.algorithms) {
    const auto bests = bests_of(records);
    const auto frequent = feature_repeatability(bests, campaign.feature_names,
                                                records.runs.size());
    const auto top2 = subset_repeatability(bests);
    const auto least = least_cardinal_best(bests);
    out << to_string(records.algorithm) << ":\n";
    out << "  frequent features:";
    if (frequent.empty()) out << " (none above half the runs)";
    for (const auto& [name, count] : frequent)
      out << " " << name << "(" << count << ")";
    out << "\n";
    for (std::size_t k = 0; k < top2.size(); ++k) {
      out << "  subset " << k + 1 << ": repeated " << top2[k].count
          << "x, cardinality " << top2[k].cardinality << ", auc "
          << fixed(top2[k].auc, 4) << "\n";
    }
    out << "  least cardinal most-repeated: cardinality " << least.cardinality
        << ", auc " << fixed(least.auc, 4) << "\n";
  }

  if (campaign.algorithms.size() >= 2) {
    out << "\n== Pairwise paired t-tests ==\n";
    out << "pair                  t          p          significant\n";
    for (const auto& row : pairwise_tests(campaign)) {
      const std::string pair = std::string(to_string(row.a)) + " vs " +
                               std::string(to_string(row.b));
      out << std::left << std::setw(22) << pair << std::setw(11)
          << fixed(row.result.t_statistic, 4) << std::setw(11)
          << general(row.result.p_value)
          << (row.result.significant ? "yes" : "no") << "\n";
    }
  }
}

}  // namespace evofss
