#pragma once

// Tabular data: named real-valued feature columns plus an optional binary
// label vector, CSV ingestion with per-column transforms, the
// direction-of-change target and deterministic k-fold plans.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "concept_tree/errors.hpp"
#include "concept_tree/random.hpp"

namespace ctree {

using Label = int;

/// Feature matrix stored row-major with unique, non-empty column names.
/// All values are finite; labels, when present, are 0 or 1.
class Dataset {
 public:
  Dataset() = default;

  explicit Dataset(std::vector<std::string> names) : names_(std::move(names)) { check_names(); }

  static Dataset from_columns(std::vector<std::string> names,
                              const std::vector<std::vector<double>>& columns,
                              std::optional<std::vector<Label>> labels = std::nullopt) {
    if (names.size() != columns.size())
      throw Error(ErrorCode::length_mismatch, "got " + std::to_string(names.size()) +
                                                  " names for " + std::to_string(columns.size()) +
                                                  " columns");
    Dataset d(std::move(names));
    const std::size_t rows = columns.empty() ? 0 : columns.front().size();
    for (std::size_t j = 0; j < columns.size(); ++j) {
      if (columns[j].size() != rows)
        throw Error(ErrorCode::length_mismatch, "column '" + d.names_[j] + "' has " +
                                                    std::to_string(columns[j].size()) +
                                                    " values, expected " + std::to_string(rows));
    }
    d.values_.reserve(rows * columns.size());
    std::vector<double> row(columns.size());
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < columns.size(); ++j) row[j] = columns[j][i];
      d.add_row(row);
    }
    d.rows_ = rows;
    if (labels) d.set_labels(std::move(*labels));
    return d;
  }

  std::size_t n_rows() const noexcept { return rows_; }
  std::size_t n_features() const noexcept { return names_.size(); }
  bool empty() const noexcept { return rows_ == 0; }

  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t j) const { return names_.at(j); }

  std::optional<std::size_t> find(std::string_view name) const {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names_.begin());
  }

  std::size_t index_of(std::string_view name) const {
    if (auto j = find(name)) return *j;
    throw Error(ErrorCode::unknown_column, "no column named '" + std::string(name) + "'");
  }

  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * names_.size(), names_.size()};
  }
  double at(std::size_t i, std::size_t j) const { return values_[i * names_.size() + j]; }
  const std::vector<double>& values() const noexcept { return values_; }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  bool has_labels() const noexcept { return labels_.has_value(); }
  std::span<const Label> labels() const {
    if (!labels_) throw Error(ErrorCode::unlabeled_dataset, "dataset has no labels");
    return *labels_;
  }
  Label label(std::size_t i) const { return labels()[i]; }

  void set_labels(std::vector<Label> labels) {
    if (labels.size() != rows_)
      throw Error(ErrorCode::length_mismatch, "got " + std::to_string(labels.size()) +
                                                  " labels for " + std::to_string(rows_) + " rows");
    for (Label y : labels)
      if (y != 0 && y != 1)
        throw Error(ErrorCode::invalid_argument, "labels must be 0 or 1, got " + std::to_string(y));
    labels_ = std::move(labels);
  }
  void clear_labels() { labels_.reset(); }

  /// Appends a row; labelled datasets require a label and unlabelled ones forbid it.
  void add_row(std::span<const double> row, std::optional<Label> label = std::nullopt) {
    if (row.size() != names_.size())
      throw Error(ErrorCode::schema_mismatch, "row has " + std::to_string(row.size()) +
                                                  " values, expected " +
                                                  std::to_string(names_.size()));
    for (std::size_t j = 0; j < row.size(); ++j)
      if (!std::isfinite(row[j]))
        throw Error(ErrorCode::non_finite,
                    "non-finite value in column '" + names_[j] + "' at row " + std::to_string(rows_));
    if (label && *label != 0 && *label != 1)
      throw Error(ErrorCode::invalid_argument, "labels must be 0 or 1");
    if (rows_ > 0 && label.has_value() != labels_.has_value())
      throw Error(ErrorCode::invalid_argument, "mixing labelled and unlabelled rows");
    values_.insert(values_.end(), row.begin(), row.end());
    if (label) {
      if (!labels_) labels_.emplace();
      labels_->push_back(*label);
    }
    ++rows_;
  }

  Dataset select_rows(std::span<const std::size_t> rows) const {
    Dataset out(names_);
    out.values_.reserve(rows.size() * names_.size());
    for (std::size_t i : rows) {
      if (i >= rows_) throw Error(ErrorCode::invalid_argument, "row index out of range");
      const auto r = row(i);
      out.values_.insert(out.values_.end(), r.begin(), r.end());
    }
    out.rows_ = rows.size();
    if (labels_) {
      std::vector<Label> ls;
      ls.reserve(rows.size());
      for (std::size_t i : rows) ls.push_back((*labels_)[i]);
      out.labels_ = std::move(ls);
    }
    return out;
  }

  Dataset without_column(std::size_t drop) const {
    if (names_.size() < 2) throw Error(ErrorCode::invalid_argument, "cannot drop the only column");
    std::vector<std::string> names;
    std::vector<std::vector<double>> columns;
    for (std::size_t j = 0; j < names_.size(); ++j) {
      if (j == drop) continue;
      names.push_back(names_[j]);
      columns.push_back(column(j));
    }
    Dataset out = from_columns(std::move(names), columns);
    if (labels_) out.labels_ = labels_;
    return out;
  }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  void check_names() const {
    std::unordered_set<std::string> seen;
    for (const auto& n : names_) {
      if (n.empty()) throw Error(ErrorCode::invalid_argument, "empty column name");
      if (!seen.insert(n).second)
        throw Error(ErrorCode::duplicate_column, "duplicate column '" + n + "'");
    }
  }

  std::vector<std::string> names_;
  std::size_t rows_ = 0;
  std::vector<double> values_;
  std::optional<std::vector<Label>> labels_;
};

// ---------------------------------------------------------------------------
// Column transforms

enum class TransformKind { none, first_difference, percent_change, log_difference };

inline const char* to_string(TransformKind k) {
  switch (k) {
    case TransformKind::none: return "none";
    case TransformKind::first_difference: return "first_difference";
    case TransformKind::percent_change: return "percent_change";
    case TransformKind::log_difference: return "log_difference";
  }
  return "none";
}

inline TransformKind parse_transform_kind(std::string_view s) {
  if (s == "none") return TransformKind::none;
  if (s == "first_difference") return TransformKind::first_difference;
  if (s == "percent_change") return TransformKind::percent_change;
  if (s == "log_difference") return TransformKind::log_difference;
  throw Error(ErrorCode::invalid_argument, "unknown transform '" + std::string(s) + "'");
}

using TransformSchema = std::map<std::string, TransformKind>;

/// Applies `kind` to an ordered series. The output is one element shorter
/// than the input, except for `none`, which returns the series minus its
/// first element so that every transformed column lines up. NaN inputs
/// (missing cells) propagate as NaN; a zero base gives inf for
/// `percent_change` and a non-positive value gives NaN for `log_difference`,
/// so the CSV non-finite policy decides what happens to those rows.
inline std::vector<double> apply_transform(TransformKind kind, std::span<const double> series) {
  if (series.empty()) return {};
  std::vector<double> out;
  out.reserve(series.size() - 1);
  for (std::size_t t = 1; t < series.size(); ++t) {
    const double prev = series[t - 1];
    const double cur = series[t];
    if (std::isnan(prev) || std::isnan(cur)) {
      out.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    switch (kind) {
      case TransformKind::none:
        out.push_back(cur);
        break;
      case TransformKind::first_difference:
        out.push_back(cur - prev);
        break;
      case TransformKind::percent_change:
        out.push_back(cur / prev - 1.0);
        break;
      case TransformKind::log_difference:
        if (!(prev > 0.0) || !(cur > 0.0)) {
          out.push_back(std::numeric_limits<double>::quiet_NaN());
          break;
        }
        out.push_back(std::log(cur) - std::log(prev));
        break;
    }
  }
  return out;
}

inline TransformSchema parse_transform_schema(const nlohmann::json& j) {
  if (!j.is_object()) throw Error(ErrorCode::parse, "transform schema must be a JSON object");
  TransformSchema schema;
  for (const auto& [name, kind] : j.items()) {
    if (!kind.is_string())
      throw Error(ErrorCode::parse, "transform for '" + name + "' must be a string");
    schema[name] = parse_transform_kind(kind.get<std::string>());
  }
  return schema;
}

inline TransformSchema load_transform_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open transform schema '" + path + "'");
  try {
    return parse_transform_schema(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, "transform schema '" + path + "': " + e.what());
  }
}

// ---------------------------------------------------------------------------
// CSV

enum class NonFinitePolicy { error, drop_rows };

inline NonFinitePolicy parse_non_finite_policy(std::string_view s) {
  if (s == "error") return NonFinitePolicy::error;
  if (s == "drop-rows" || s == "drop_rows") return NonFinitePolicy::drop_rows;
  throw Error(ErrorCode::invalid_argument, "unknown non-finite policy '" + std::string(s) + "'");
}

struct CsvOptions {
  char delimiter = ',';
  TransformSchema transforms;
  NonFinitePolicy non_finite = NonFinitePolicy::error;
  /// Column holding 0/1 labels; it is removed from the features.
  std::optional<std::string> label_column;
};

namespace detail {

// RFC-4180 records: quoted fields may hold delimiters, newlines and "" escapes.
inline std::vector<std::vector<std::string>> split_csv(std::string_view text, char delim) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool quoted = false;
  bool field_started = false;
  std::size_t i = 0;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    const bool blank = record.size() == 1 && record.front().empty() && !field_started;
    if (!blank) records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };
  while (i < text.size()) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
      field_started = true;
    } else if (c == delim) {
      record.push_back(std::move(field));
      field.clear();
      field_started = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
      end_record();
    } else {
      field.push_back(c);
      field_started = true;
    }
    ++i;
  }
  if (quoted) throw Error(ErrorCode::parse, "unterminated quoted field");
  if (field_started || !field.empty() || !record.empty()) end_record();
  return records;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

// Empty cells are read as NaN (missing); the non-finite policy decides their fate.
inline std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (s.empty()) return std::numeric_limits<double>::quiet_NaN();
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

inline std::string quote_field(const std::string& s, char delim) {
  if (s.find_first_of(std::string{delim, '"', '\n', '\r'}) == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

inline std::string format_double(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

}  // namespace detail

inline Dataset parse_csv(std::string_view text, const CsvOptions& opts = {}) {
  auto records = detail::split_csv(text, opts.delimiter);
  if (records.empty()) throw Error(ErrorCode::empty_input, "CSV has no header row");
  std::vector<std::string> header;
  for (auto& h : records.front()) header.emplace_back(detail::trim(h));
  {
    std::unordered_set<std::string> seen;
    for (const auto& h : header) {
      if (h.empty()) throw Error(ErrorCode::parse, "empty column name in header");
      if (!seen.insert(h).second) throw Error(ErrorCode::duplicate_column, "duplicate column '" + h + "'");
    }
  }
  const std::size_t n_rows = records.size() - 1;
  if (n_rows == 0) throw Error(ErrorCode::empty_input, "CSV has no data rows");

  std::vector<std::vector<double>> columns(header.size(), std::vector<double>(n_rows));
  for (std::size_t r = 0; r < n_rows; ++r) {
    const auto& rec = records[r + 1];
    if (rec.size() != header.size())
      throw Error(ErrorCode::parse, "data row " + std::to_string(r + 1) + " has " +
                                        std::to_string(rec.size()) + " fields, expected " +
                                        std::to_string(header.size()));
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto v = detail::parse_number(rec[c]);
      if (!v)
        throw Error(ErrorCode::parse, "non-numeric cell '" + rec[c] + "' at data row " +
                                          std::to_string(r + 1) + ", column '" + header[c] + "'");
      columns[c][r] = *v;
    }
  }

  std::optional<std::size_t> label_idx;
  if (opts.label_column) {
    const auto it = std::find(header.begin(), header.end(), *opts.label_column);
    if (it == header.end())
      throw Error(ErrorCode::unknown_column, "label column '" + *opts.label_column + "' not found");
    label_idx = static_cast<std::size_t>(it - header.begin());
  }

  for (const auto& [name, kind] : opts.transforms)
    if (std::find(header.begin(), header.end(), name) == header.end())
      throw Error(ErrorCode::unknown_column, "transform schema names unknown column '" + name + "'");

  const bool shorten = std::any_of(opts.transforms.begin(), opts.transforms.end(),
                                   [](const auto& kv) { return kv.second != TransformKind::none; });
  if (shorten) {
    if (n_rows < 2) throw Error(ErrorCode::empty_input, "transforms need at least 2 rows");
    for (std::size_t c = 0; c < header.size(); ++c) {
      const auto it = opts.transforms.find(header[c]);
      const TransformKind kind = it == opts.transforms.end() ? TransformKind::none : it->second;
      columns[c] = apply_transform(kind, columns[c]);
    }
  }

  const std::size_t rows_after = columns.front().size();
  std::vector<std::size_t> keep;
  keep.reserve(rows_after);
  for (std::size_t r = 0; r < rows_after; ++r) {
    bool ok = true;
    for (std::size_t c = 0; c < header.size() && ok; ++c) {
      if (!std::isfinite(columns[c][r])) {
        if (opts.non_finite == NonFinitePolicy::error)
          throw Error(ErrorCode::non_finite, "non-finite value at data row " +
                                                 std::to_string(r + 1 + (shorten ? 1 : 0)) +
                                                 ", column '" + header[c] + "'");
        ok = false;
      }
    }
    if (ok) keep.push_back(r);
  }

  std::vector<std::string> names;
  std::vector<std::vector<double>> kept;
  std::optional<std::vector<Label>> labels;
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::vector<double> col;
    col.reserve(keep.size());
    for (std::size_t r : keep) col.push_back(columns[c][r]);
    if (label_idx && c == *label_idx) {
      std::vector<Label> ls;
      for (double v : col) {
        if (v != 0.0 && v != 1.0)
          throw Error(ErrorCode::parse, "label column '" + header[c] + "' must hold 0 or 1");
        ls.push_back(static_cast<Label>(v));
      }
      labels = std::move(ls);
      continue;
    }
    names.push_back(header[c]);
    kept.push_back(std::move(col));
  }
  if (names.empty()) throw Error(ErrorCode::empty_input, "CSV has no feature columns");
  return Dataset::from_columns(std::move(names), kept, std::move(labels));
}

inline Dataset load_csv(const std::string& path, const CsvOptions& opts = {}) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), opts);
}

/// Writes features (and labels under `label_name`, when present) with
/// shortest round-trip formatting, so reloading reproduces values bit-exactly.
inline void write_csv(std::ostream& out, const Dataset& d, char delim = ',',
                      const std::string& label_name = "label") {
  for (std::size_t j = 0; j < d.n_features(); ++j) {
    if (j) out << delim;
    out << detail::quote_field(d.name(j), delim);
  }
  if (d.has_labels()) out << delim << detail::quote_field(label_name, delim);
  out << '\n';
  for (std::size_t i = 0; i < d.n_rows(); ++i) {
    const auto r = d.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (j) out << delim;
      out << detail::format_double(r[j]);
    }
    if (d.has_labels()) out << delim << d.label(i);
    out << '\n';
  }
}

inline void save_csv(const std::string& path, const Dataset& d, char delim = ',') {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  write_csv(out, d, delim);
}

// ---------------------------------------------------------------------------
// Direction-of-change target

/// Drops the first row and labels row t with 0 when column(t) < column(t-1),
/// 1 otherwise (ties are 1). The target column is removed from the features.
inline Dataset build_direction_target(const Dataset& d, std::string_view column) {
  const std::size_t target = d.index_of(column);
  if (d.n_rows() < 2)
    throw Error(ErrorCode::invalid_argument, "direction target needs at least 2 rows");
  std::vector<Label> labels;
  labels.reserve(d.n_rows() - 1);
  for (std::size_t t = 1; t < d.n_rows(); ++t)
    labels.push_back(d.at(t, target) < d.at(t - 1, target) ? 0 : 1);

  std::vector<std::string> names;
  std::vector<std::vector<double>> columns;
  for (std::size_t j = 0; j < d.n_features(); ++j) {
    if (j == target) continue;
    names.push_back(d.name(j));
    auto col = d.column(j);
    col.erase(col.begin());
    columns.push_back(std::move(col));
  }
  if (names.empty())
    throw Error(ErrorCode::invalid_argument, "no feature columns remain besides the target");
  return Dataset::from_columns(std::move(names), columns, std::move(labels));
}

// ---------------------------------------------------------------------------
// Cross-validation folds

struct FoldPlan {
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;

  std::vector<std::size_t> test_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] == fold) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> train_rows(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < assignments.size(); ++i)
      if (assignments[i] != fold) out.push_back(i);
    return out;
  }

  std::vector<std::size_t> fold_sizes() const {
    std::vector<std::size_t> sizes(n_folds, 0);
    for (std::size_t f : assignments) ++sizes[f];
    return sizes;
  }
};

/// Shuffles row indices with a Fisher-Yates pass driven by Rng(seed) (see
/// random.hpp) and deals them round-robin, so the first row_count % n_folds
/// folds get one extra row. With `time_ordered` the rows are not shuffled
/// and each fold is a contiguous block.
inline FoldPlan make_folds(std::size_t row_count, std::size_t n_folds, std::uint64_t seed,
                           bool time_ordered = false) {
  if (n_folds < 2 || n_folds > row_count)
    throw Error(ErrorCode::invalid_argument, "n_folds must be in [2, " +
                                                 std::to_string(row_count) + "], got " +
                                                 std::to_string(n_folds));
  FoldPlan plan{n_folds, seed, std::vector<std::size_t>(row_count)};
  if (time_ordered) {
    const std::size_t base = row_count / n_folds;
    const std::size_t extra = row_count % n_folds;
    std::size_t row = 0;
    for (std::size_t f = 0; f < n_folds; ++f)
      for (std::size_t k = 0; k < base + (f < extra ? 1 : 0); ++k) plan.assignments[row++] = f;
    return plan;
  }
  std::vector<std::size_t> order(row_count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = row_count; i > 1; --i) std::swap(order[i - 1], order[rng.uniform_index(i)]);
  for (std::size_t pos = 0; pos < row_count; ++pos) plan.assignments[order[pos]] = pos % n_folds;
  return plan;
}

inline FoldPlan make_folds(const Dataset& d, std::size_t n_folds, std::uint64_t seed,
                           bool time_ordered = false) {
  return make_folds(d.n_rows(), n_folds, seed, time_ordered);
}

}  // namespace ctree
