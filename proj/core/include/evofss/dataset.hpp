#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "evofss/mask.hpp"

namespace evofss {

// Dense numeric design matrix with binary labels.
struct Dataset {
  std::vector<std::string> feature_names;
  std::vector<double> matrix;  // row-major, nrows x nfeat
  std::vector<int> labels;     // 0 or 1 per row
  std::size_t nrows = 0;
  std::size_t nfeat = 0;

  double at(std::size_t row, std::size_t col) const {
    return matrix[row * nfeat + col];
  }
  std::span<const double> row(std::size_t r) const {
    return {matrix.data() + r * nfeat, nfeat};
  }
};

struct RawColumn {
  enum class Kind { Numeric, Categorical };
  std::string name;
  Kind kind = Kind::Categorical;
  std::vector<std::string> values;
};

// load_csv output: typed columns plus the already-mapped binary labels.
// The lexicographically larger raw label maps to class 1.
struct CsvTable {
  std::vector<RawColumn> columns;
  std::vector<int> labels;
  std::string negative_label;
  std::string positive_label;
};

struct SplitPair {
  Dataset train;
  Dataset test;
  double ratio = 0.0;
};

// RFC-4180 CSV. Columns are sniffed numeric iff every cell parses as a
// decimal number; empty cells are rejected as missing values.
// When header is false, columns are named c0..c{k-1}.
CsvTable load_csv(const std::string& path, const std::string& label_column,
                  bool header = true);

// Sparse `label idx:val` lines, 1-based strictly increasing indices,
// densified with zeros. Labels {-1,+1} or {0,1} map onto {0,1}.
// Features are named by their 1-based index.
Dataset load_libsvm(const std::string& path,
                    std::optional<std::size_t> nfeat_hint = std::nullopt);

// Expand categoricals into `col=level` indicators (first-appearance level
// order); numeric columns pass through. Single-level categoricals produce
// one indicator and a warning.
Dataset one_hot_encode(const std::vector<RawColumn>& columns,
                       const std::vector<int>& labels,
                       std::vector<std::string>* warnings = nullptr);

inline Dataset one_hot_encode(const CsvTable& table,
                              std::vector<std::string>* warnings = nullptr) {
  return one_hot_encode(table.columns, table.labels, warnings);
}

// Per class, floor(ratio * class_count) rows go to train with
// largest-remainder rounding toward round(ratio * nrows) total.
// Row order within each partition is shuffled; deterministic per seed.
SplitPair stratified_split(const Dataset& ds, double ratio,
                           std::uint64_t seed);

// Keep exactly the 1-bit columns, in original order. Throws on empty masks.
Dataset project_columns(const Dataset& ds, const FeatureMask& mask);

}  // namespace evofss
