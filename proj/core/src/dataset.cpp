#include "evofss/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "evofss/errors.hpp"
#include "evofss/random.hpp"

namespace evofss {

namespace {

bool parse_number(const std::string& cell, double& out) {
  const char* first = cell.data();
  const char* last = first + cell.size();
  if (first == last) return false;
  if (*first == '+') ++first;  // from_chars does not take a leading '+'
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last && std::isfinite(out);
}

// RFC-4180 field splitter over the whole file, so quoted fields may span
// lines. Returns rows of raw cells.
std::vector<std::vector<std::string>> read_csv_rows(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  bool row_started = false;

  auto end_field = [&] {
    row.push_back(std::move(field));
    field.clear();
    field_started = false;
  };
  auto end_row = [&] {
    end_field();
    rows.push_back(std::move(row));
    row.clear();
    row_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
        }
      } else {
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case '"':
        in_quotes = true;
        field_started = true;
        row_started = true;
        break;
      case ',':
        end_field();
        row_started = true;
        break;
      case '\r':
        break;
      case '\n':
        if (row_started || field_started || !field.empty()) end_row();
        break;
      default:
        field.push_back(c);
        field_started = true;
        row_started = true;
        break;
    }
  }
  if (in_quotes) throw DataError("unterminated quoted field");
  if (row_started || field_started || !field.empty()) end_row();
  return rows;
}

}  // namespace

CsvTable load_csv(const std::string& path, const std::string& label_column,
                  bool header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path);

  auto rows = read_csv_rows(in);
  if (rows.empty()) throw DataError("empty csv file: " + path);

  std::vector<std::string> names;
  std::size_t first_data_row = 0;
  const std::size_t width = rows[0].size();
  if (header) {
    names = rows[0];
    first_data_row = 1;
  } else {
    names.reserve(width);
    for (std::size_t i = 0; i < width; ++i) names.push_back("c" + std::to_string(i));
  }
  if (first_data_row >= rows.size())
    throw DataError("csv has a header but no data rows: " + path);

  auto label_it = std::find(names.begin(), names.end(), label_column);
  if (label_it == names.end())
    throw DataError("label column not found: " + label_column);
  const std::size_t label_idx =
      static_cast<std::size_t>(label_it - names.begin());

  const std::size_t nrows = rows.size() - first_data_row;
  CsvTable table;
  table.columns.reserve(width - 1);
  for (std::size_t c = 0; c < width; ++c) {
    if (c == label_idx) continue;
    RawColumn col;
    col.name = names[c];
    col.values.reserve(nrows);
    table.columns.push_back(std::move(col));
  }

  std::vector<std::string> raw_labels;
  raw_labels.reserve(nrows);
  for (std::size_t r = first_data_row; r < rows.size(); ++r) {
    const auto& cells = rows[r];
    if (cells.size() != width) {
      throw DataError("ragged row " + std::to_string(r + 1) + ": expected " +
                      std::to_string(width) + " cells, got " +
                      std::to_string(cells.size()));
    }
    std::size_t out_c = 0;
    for (std::size_t c = 0; c < width; ++c) {
      if (cells[c].empty()) {
        throw DataError("missing value at row " + std::to_string(r + 1) +
                        ", column " + names[c]);
      }
      if (c == label_idx) {
        raw_labels.push_back(cells[c]);
      } else {
        table.columns[out_c++].values.push_back(cells[c]);
      }
    }
  }

  std::set<std::string> distinct(raw_labels.begin(), raw_labels.end());
  if (distinct.size() != 2) {
    throw DataError("non-binary labels: column '" + label_column + "' has " +
                    std::to_string(distinct.size()) + " distinct values");
  }
  table.negative_label = *distinct.begin();
  table.positive_label = *std::next(distinct.begin());
  table.labels.reserve(nrows);
  for (const auto& l : raw_labels)
    table.labels.push_back(l == table.positive_label ? 1 : 0);

  // Sniff column kinds: numeric iff every cell parses as a decimal number.
  for (auto& col : table.columns) {
    double v;
    bool numeric = !col.values.empty();
    for (const auto& cell : col.values) {
      if (!parse_number(cell, v)) {
        numeric = false;
        break;
      }
    }
    col.kind = numeric ? RawColumn::Kind::Numeric : RawColumn::Kind::Categorical;
  }
  return table;
}

Dataset load_libsvm(const std::string& path,
                    std::optional<std::size_t> nfeat_hint) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path);

  std::vector<int> labels;
  std::vector<std::vector<std::pair<std::size_t, double>>> sparse_rows;
  std::size_t max_index = 0;

  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;  // blank line

    int label;
    if (tok == "+1" || tok == "1")
      label = 1;
    else if (tok == "-1" || tok == "0")
      label = 0;
    else
      throw DataError("line " + std::to_string(lineno) +
                      ": unsupported label '" + tok + "'");
    labels.push_back(label);

    std::vector<std::pair<std::size_t, double>> entries;
    std::size_t prev_index = 0;
    while (ls >> tok) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        throw DataError("line " + std::to_string(lineno) +
                        ": malformed entry '" + tok + "'");
      std::size_t index = 0;
      auto [p1, e1] =
          std::from_chars(tok.data(), tok.data() + colon, index);
      double value = 0.0;
      const char* vbeg = tok.data() + colon + 1;
      const char* vend = tok.data() + tok.size();
      if (vbeg < vend && *vbeg == '+') ++vbeg;
      auto [p2, e2] = std::from_chars(vbeg, vend, value);
      if (e1 != std::errc{} || p1 != tok.data() + colon || e2 != std::errc{} ||
          p2 != vend || index == 0)
        throw DataError("line " + std::to_string(lineno) +
                        ": malformed entry '" + tok + "'");
      if (index <= prev_index)
        throw DataError("line " + std::to_string(lineno) +
                        ": indices not increasing");
      if (nfeat_hint && index > *nfeat_hint)
        throw DataError("line " + std::to_string(lineno) + ": index " +
                        std::to_string(index) + " exceeds nfeat hint " +
                        std::to_string(*nfeat_hint));
      prev_index = index;
      max_index = std::max(max_index, index);
      entries.emplace_back(index, value);
    }
    sparse_rows.push_back(std::move(entries));
  }

  Dataset ds;
  ds.nfeat = nfeat_hint.value_or(max_index);
  ds.nrows = sparse_rows.size();
  if (ds.nrows == 0) throw DataError("no rows in libsvm file: " + path);
  ds.labels = std::move(labels);
  ds.feature_names.reserve(ds.nfeat);
  for (std::size_t j = 1; j <= ds.nfeat; ++j)
    ds.feature_names.push_back(std::to_string(j));
  ds.matrix.assign(ds.nrows * ds.nfeat, 0.0);
  for (std::size_t r = 0; r < ds.nrows; ++r)
    for (const auto& [index, value] : sparse_rows[r])
      ds.matrix[r * ds.nfeat + (index - 1)] = value;
  return ds;
}

Dataset one_hot_encode(const std::vector<RawColumn>& columns,
                       const std::vector<int>& labels,
                       std::vector<std::string>* warnings) {
  if (columns.empty()) throw DataError("no feature columns to encode");
  const std::size_t nrows = columns.front().values.size();
  for (const auto& col : columns) {
    if (col.values.size() != nrows)
      throw DataError("column row-count mismatch in '" + col.name + "'");
  }

  Dataset ds;
  ds.nrows = nrows;
  ds.labels = labels;

  struct Encoded {
    std::vector<std::string> names;
    std::vector<double> cells;  // column-major block, nrows x names.size()
  };
  std::vector<Encoded> blocks;
  blocks.reserve(columns.size());

  for (const auto& col : columns) {
    Encoded block;
    if (col.kind == RawColumn::Kind::Numeric) {
      block.names.push_back(col.name);
      block.cells.resize(nrows);
      for (std::size_t r = 0; r < nrows; ++r) {
        double v;
        if (!parse_number(col.values[r], v))
          throw DataError("non-numeric cell in numeric column '" + col.name +
                          "'");
        block.cells[r] = v;
      }
    } else {
      std::vector<std::string> levels;  // first-appearance order
      std::map<std::string, std::size_t> level_index;
      for (const auto& v : col.values) {
        if (level_index.emplace(v, levels.size()).second) levels.push_back(v);
      }
      if (levels.size() == 1 && warnings) {
        warnings->push_back("column '" + col.name +
                            "' has a single categorical level");
      }
      for (const auto& level : levels)
        block.names.push_back(col.name + "=" + level);
      block.cells.assign(nrows * levels.size(), 0.0);
      for (std::size_t r = 0; r < nrows; ++r) {
        const std::size_t k = level_index[col.values[r]];
        block.cells[k * nrows + r] = 1.0;
      }
    }
    blocks.push_back(std::move(block));
  }

  for (const auto& block : blocks)
    for (const auto& name : block.names) ds.feature_names.push_back(name);
  ds.nfeat = ds.feature_names.size();
  ds.matrix.resize(ds.nrows * ds.nfeat);
  std::size_t base = 0;
  for (const auto& block : blocks) {
    const std::size_t k = block.names.size();
    for (std::size_t j = 0; j < k; ++j)
      for (std::size_t r = 0; r < nrows; ++r)
        ds.matrix[r * ds.nfeat + base + j] = block.cells[j * nrows + r];
    base += k;
  }
  return ds;
}

SplitPair stratified_split(const Dataset& ds, double ratio,
                           std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0))
    throw std::invalid_argument("split ratio must lie in (0,1)");

  std::vector<std::size_t> class_rows[2];
  for (std::size_t r = 0; r < ds.nrows; ++r)
    class_rows[ds.labels[r] ? 1 : 0].push_back(r);
  for (int c = 0; c < 2; ++c) {
    if (class_rows[c].size() < 2)
      throw DataError("class " + std::to_string(c) +
                      " has fewer than 2 rows; cannot split");
  }

  // Largest-remainder rounding toward round(ratio * nrows) train rows.
  std::size_t floors[2];
  double remainders[2];
  for (int c = 0; c < 2; ++c) {
    const double exact = ratio * static_cast<double>(class_rows[c].size());
    floors[c] = static_cast<std::size_t>(std::floor(exact + 1e-9));
    remainders[c] = exact - static_cast<double>(floors[c]);
  }
  const auto target = static_cast<std::size_t>(
      std::llround(ratio * static_cast<double>(ds.nrows)));
  std::size_t leftover = target > floors[0] + floors[1]
                             ? target - (floors[0] + floors[1])
                             : 0;
  int order[2] = {0, 1};
  if (remainders[1] > remainders[0]) std::swap(order[0], order[1]);
  for (int k = 0; k < 2 && leftover > 0; ++k) {
    const int c = order[k];
    if (floors[c] < class_rows[c].size()) {
      ++floors[c];
      --leftover;
    }
  }

  auto shuffle = [](std::vector<std::size_t>& v, RandomStream& s) {
    for (std::size_t i = v.size(); i > 1; --i)
      std::swap(v[i - 1], v[s.next_below(i)]);
  };

  std::vector<std::size_t> train_rows, test_rows;
  for (int c = 0; c < 2; ++c) {
    auto stream = RandomStream::derive(seed, StreamPurpose::Split,
                                       static_cast<std::uint64_t>(c));
    auto rows = class_rows[c];
    shuffle(rows, stream);
    for (std::size_t i = 0; i < rows.size(); ++i)
      (i < floors[c] ? train_rows : test_rows).push_back(rows[i]);
  }
  auto train_stream = RandomStream::derive(seed, StreamPurpose::Split, 2);
  auto test_stream = RandomStream::derive(seed, StreamPurpose::Split, 3);
  shuffle(train_rows, train_stream);
  shuffle(test_rows, test_stream);

  auto take = [&](const std::vector<std::size_t>& rows) {
    Dataset out;
    out.feature_names = ds.feature_names;
    out.nfeat = ds.nfeat;
    out.nrows = rows.size();
    out.matrix.reserve(rows.size() * ds.nfeat);
    out.labels.reserve(rows.size());
    for (std::size_t r : rows) {
      auto row = ds.row(r);
      out.matrix.insert(out.matrix.end(), row.begin(), row.end());
      out.labels.push_back(ds.labels[r]);
    }
    return out;
  };

  SplitPair pair;
  pair.train = take(train_rows);
  pair.test = take(test_rows);
  pair.ratio = ratio;
  return pair;
}

Dataset project_columns(const Dataset& ds, const FeatureMask& mask) {
  if (mask.size() != ds.nfeat)
    throw std::invalid_argument("mask length does not match feature count");
  if (mask.empty_subset()) throw std::invalid_argument("empty subset");

  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < ds.nfeat; ++j)
    if (mask.bits[j]) keep.push_back(j);

  Dataset out;
  out.nrows = ds.nrows;
  out.nfeat = keep.size();
  out.labels = ds.labels;
  out.feature_names.reserve(keep.size());
  for (std::size_t j : keep) out.feature_names.push_back(ds.feature_names[j]);
  out.matrix.resize(out.nrows * out.nfeat);
  for (std::size_t r = 0; r < ds.nrows; ++r) {
    const double* src = ds.matrix.data() + r * ds.nfeat;
    double* dst = out.matrix.data() + r * out.nfeat;
    for (std::size_t k = 0; k < keep.size(); ++k) dst[k] = src[keep[k]];
  }
  return out;
}

}  // namespace evofss
