#pragma once

// Black-box access. An Oracle labels batches of rows with 0/1 predictions and
// is bound to the feature schema it was built for.
//
// Three kinds are provided:
//   FixedLabelsOracle    replays the labels of a known set of rows.
//   BaggedTreesOracle    built-in bootstrap ensemble of fully grown trees.
//   ExternalProcessOracle
//       runs a shell command per batch. The batch is written as a CSV with a
//       header row to the command's standard input; the command prints one
//       label (0 or 1) per line, in row order, and exits with status 0.
//       Answers are cached by exact row content so repeated queries agree.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"
#include "concept_tree/random.hpp"
#include "concept_tree/rules.hpp"

namespace ctree {

class Oracle {
 public:
  explicit Oracle(std::vector<std::string> feature_names) : names_(std::move(feature_names)) {}
  virtual ~Oracle() = default;

  Oracle(const Oracle&) = delete;
  Oracle& operator=(const Oracle&) = delete;

  const std::vector<std::string>& feature_names() const noexcept { return names_; }

  /// One label per row, in row order.
  std::vector<Label> predict_batch(const Dataset& rows) const {
    if (rows.names() != names_)
      throw Error(ErrorCode::schema_mismatch, "batch columns do not match the oracle's feature schema");
    if (rows.empty()) return {};
    auto out = predict_rows(rows);
    if (out.size() != rows.n_rows())
      throw Error(ErrorCode::process_failure, "oracle returned " + std::to_string(out.size()) +
                                                  " labels for " + std::to_string(rows.n_rows()) + " rows");
    return out;
  }

  virtual std::string describe() const = 0;

 protected:
  virtual std::vector<Label> predict_rows(const Dataset& rows) const = 0;

 private:
  std::vector<std::string> names_;
};

namespace detail {

inline std::string row_key(std::span<const double> row) {
  std::string key(row.size() * sizeof(double), '\0');
  for (std::size_t j = 0; j < row.size(); ++j) {
    const double v = row[j] == 0.0 ? 0.0 : row[j];  // fold -0.0 into 0.0
    std::memcpy(key.data() + j * sizeof(double), &v, sizeof(double));
  }
  return key;
}

}  // namespace detail

// ---------------------------------------------------------------------------

class FixedLabelsOracle final : public Oracle {
 public:
  explicit FixedLabelsOracle(const Dataset& labelled) : Oracle(labelled.names()) {
    const auto labels = labelled.labels();
    for (std::size_t i = 0; i < labelled.n_rows(); ++i) {
      const auto [it, fresh] = table_.emplace(detail::row_key(labelled.row(i)), labels[i]);
      if (!fresh && it->second != labels[i])
        throw Error(ErrorCode::invalid_argument, "identical rows carry different labels");
    }
  }

  std::string describe() const override { return "fixed_labels"; }

 protected:
  std::vector<Label> predict_rows(const Dataset& rows) const override {
    std::vector<Label> out;
    out.reserve(rows.n_rows());
    for (std::size_t i = 0; i < rows.n_rows(); ++i) {
      const auto it = table_.find(detail::row_key(rows.row(i)));
      if (it == table_.end())
        throw Error(ErrorCode::schema_mismatch, "row " + std::to_string(i) + " is not among the bound rows");
      out.push_back(it->second);
    }
    return out;
  }

 private:
  std::unordered_map<std::string, Label> table_;
};

// ---------------------------------------------------------------------------
// Built-in ensemble

/// Fully grown axis-aligned binary tree split by information gain.
/// Leaves use the majority label, ties going to 1.
class FullTree {
 public:
  static FullTree fit(const Dataset& d, std::vector<std::size_t> rows) {
    FullTree t;
    const auto labels = d.labels();
    struct Task {
      std::size_t node;
      std::vector<std::size_t> rows;
    };
    std::vector<Task> stack;
    t.nodes_.push_back({});
    stack.push_back({0, std::move(rows)});
    std::vector<std::pair<double, Label>> sorted;
    while (!stack.empty()) {
      Task task = std::move(stack.back());
      stack.pop_back();
      std::size_t pos = 0;
      for (std::size_t i : task.rows) pos += labels[i] == 1;
      const std::size_t n = task.rows.size();
      t.nodes_[task.node].label = 2 * pos >= n ? 1 : 0;
      if (pos == 0 || pos == n) continue;

      double best_gain = -1.0;
      std::size_t best_feature = 0;
      double best_threshold = 0.0;
      for (std::size_t f = 0; f < d.n_features(); ++f) {
        sorted.clear();
        for (std::size_t i : task.rows) sorted.emplace_back(d.at(i, f), labels[i]);
        std::sort(sorted.begin(), sorted.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        SplitCounts c{n, pos, 0, 0};  // "true" side = value <= threshold
        for (std::size_t k = 0; k + 1 < n; ++k) {
          ++c.in_true;
          c.positives_in_true += sorted[k].second == 1;
          if (sorted[k].first == sorted[k + 1].first) continue;
          const double g = information_gain(c);
          if (g > best_gain) {
            best_gain = g;
            best_feature = f;
            best_threshold = sorted[k].first + (sorted[k + 1].first - sorted[k].first) / 2.0;
          }
        }
      }
      if (best_gain < 0.0) continue;  // every feature constant here

      std::vector<std::size_t> left, right;
      for (std::size_t i : task.rows) (d.at(i, best_feature) <= best_threshold ? left : right).push_back(i);
      if (left.empty() || right.empty()) continue;  // midpoint rounded onto a data value
      auto& node = t.nodes_[task.node];
      node.feature = best_feature;
      node.threshold = best_threshold;
      node.left = t.nodes_.size();
      node.right = t.nodes_.size() + 1;
      node.leaf = false;
      t.nodes_.push_back({});
      t.nodes_.push_back({});
      stack.push_back({t.nodes_[task.node].right, std::move(right)});
      stack.push_back({t.nodes_[task.node].left, std::move(left)});
    }
    return t;
  }

  Label predict(std::span<const double> row) const {
    std::size_t k = 0;
    while (!nodes_[k].leaf) k = row[nodes_[k].feature] <= nodes_[k].threshold ? nodes_[k].left : nodes_[k].right;
    return nodes_[k].label;
  }

  std::size_t size() const noexcept { return nodes_.size(); }

 private:
  struct Node {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;
    std::size_t left = 0;
    std::size_t right = 0;
    Label label = 1;
  };
  std::vector<Node> nodes_;
};

struct EnsembleParams {
  std::size_t n_estimators = 200;
  bool bootstrap = true;
};

/// Bootstrap aggregate of fully grown trees; strict majority vote with ties
/// going to 1. Tree t resamples rows with Rng(derive_seed(seed, t)).
class BaggedTreesOracle final : public Oracle {
 public:
  BaggedTreesOracle(const Dataset& d, const EnsembleParams& params, std::uint64_t seed)
      : Oracle(d.names()), params_(params) {
    if (!d.has_labels()) throw Error(ErrorCode::unlabeled_dataset, "builtin black-box needs labels");
    if (d.empty()) throw Error(ErrorCode::empty_input, "builtin black-box needs rows");
    if (params.n_estimators < 1) throw Error(ErrorCode::invalid_argument, "n_estimators must be >= 1");
    trees_.reserve(params.n_estimators);
    const std::size_t n = d.n_rows();
    for (std::size_t t = 0; t < params.n_estimators; ++t) {
      std::vector<std::size_t> rows(n);
      if (params.bootstrap) {
        Rng rng(derive_seed(seed, t));
        for (auto& r : rows) r = rng.uniform_index(n);
      } else {
        for (std::size_t i = 0; i < n; ++i) rows[i] = i;
      }
      trees_.push_back(FullTree::fit(d, std::move(rows)));
    }
  }

  std::string describe() const override {
    return "builtin_bagged_trees(n_estimators=" + std::to_string(params_.n_estimators) +
           ", bootstrap=" + (params_.bootstrap ? "true" : "false") + ")";
  }

  Label predict_one(std::span<const double> row) const {
    std::size_t ones = 0;
    for (const auto& t : trees_) ones += t.predict(row) == 1;
    return 2 * ones >= trees_.size() ? 1 : 0;
  }

 protected:
  std::vector<Label> predict_rows(const Dataset& rows) const override {
    std::vector<Label> out(rows.n_rows());
    for (std::size_t i = 0; i < rows.n_rows(); ++i) out[i] = predict_one(rows.row(i));
    return out;
  }

 private:
  EnsembleParams params_;
  std::vector<FullTree> trees_;
};

inline std::unique_ptr<BaggedTreesOracle> train_builtin(const Dataset& d, const EnsembleParams& params,
                                                        std::uint64_t seed) {
  return std::make_unique<BaggedTreesOracle>(d, params, seed);
}

// ---------------------------------------------------------------------------
// External process

class ExternalProcessOracle final : public Oracle {
 public:
  ExternalProcessOracle(std::string command, std::vector<std::string> feature_names)
      : Oracle(std::move(feature_names)), command_(std::move(command)) {
    if (command_.empty()) throw Error(ErrorCode::invalid_argument, "empty oracle command");
  }

  std::string describe() const override { return "external_process(" + command_ + ")"; }

  std::size_t cache_size() const {
    std::lock_guard lock(mutex_);
    return cache_.size();
  }
  std::size_t process_calls() const {
    std::lock_guard lock(mutex_);
    return calls_;
  }

  /// Persists cached answers as CSV (features plus a trailing label column).
  void save_cache(const std::string& path) const {
    std::lock_guard lock(mutex_);
    Dataset d(feature_names());
    for (const auto& [key, label] : cache_) {
      std::vector<double> row(feature_names().size());
      std::memcpy(row.data(), key.data(), key.size());
      d.add_row(row, label);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::io, "cannot write oracle cache '" + path + "'");
    write_csv(out, d, ',', kCacheLabel);
  }

  void load_cache(const std::string& path) {
    CsvOptions opts;
    opts.label_column = kCacheLabel;
    const Dataset d = load_csv(path, opts);
    if (d.names() != feature_names())
      throw Error(ErrorCode::schema_mismatch, "oracle cache columns do not match the feature schema");
    std::lock_guard lock(mutex_);
    for (std::size_t i = 0; i < d.n_rows(); ++i) cache_[detail::row_key(d.row(i))] = d.label(i);
  }

 protected:
  std::vector<Label> predict_rows(const Dataset& rows) const override {
    std::lock_guard lock(mutex_);
    std::vector<std::size_t> missing;
    std::unordered_map<std::string, std::size_t> pending;
    for (std::size_t i = 0; i < rows.n_rows(); ++i) {
      auto key = detail::row_key(rows.row(i));
      if (!cache_.contains(key) && !pending.contains(key)) {
        pending.emplace(std::move(key), missing.size());
        missing.push_back(i);
      }
    }
    if (!missing.empty()) {
      const auto labels = run_process(rows.select_rows(missing));
      for (std::size_t k = 0; k < missing.size(); ++k) cache_[detail::row_key(rows.row(missing[k]))] = labels[k];
    }
    std::vector<Label> out(rows.n_rows());
    for (std::size_t i = 0; i < rows.n_rows(); ++i) out[i] = cache_.at(detail::row_key(rows.row(i)));
    return out;
  }

 private:
  static constexpr const char* kCacheLabel = "__oracle_label__";

  struct TempFile {
    std::string path;
    explicit TempFile(const char* stem) {
      auto tmpl = (std::filesystem::temp_directory_path() / (std::string(stem) + "XXXXXX")).string();
      const int fd = ::mkstemp(tmpl.data());
      if (fd < 0) throw Error(ErrorCode::io, "cannot create temporary file");
      ::close(fd);
      path = tmpl;
    }
    ~TempFile() { std::remove(path.c_str()); }
    TempFile(const TempFile&) = delete;
    TempFile& operator=(const TempFile&) = delete;
  };

  static std::string slurp(const std::string& path, std::size_t limit) {
    std::ifstream in(path, std::ios::binary);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (s.size() > limit) s.resize(limit);
    return s;
  }

  std::vector<Label> run_process(const Dataset& batch) const {
    ++calls_;
    TempFile input("ctree_batch_");
    TempFile errors("ctree_stderr_");
    {
      Dataset features = batch;
      features.clear_labels();
      std::ofstream out(input.path, std::ios::binary);
      write_csv(out, features);
      if (!out) throw Error(ErrorCode::io, "cannot write oracle batch");
    }
    const std::string cmd = "( " + command_ + " ) < '" + input.path + "' 2> '" + errors.path + "'";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw Error(ErrorCode::process_failure, "cannot start '" + command_ + "'");
    std::string output;
    char buf[4096];
    std::size_t got = 0;
    while ((got = std::fread(buf, 1, sizeof buf, pipe)) > 0) output.append(buf, got);
    const int status = ::pclose(pipe);
    const std::string diag = slurp(errors.path, 2000);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      const int code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
      throw Error(ErrorCode::process_failure,
                  "'" + command_ + "' exited with status " + std::to_string(code) +
                      (diag.empty() ? std::string() : "; stderr: " + diag));
    }
    std::vector<Label> labels;
    std::istringstream lines(output);
    std::string line;
    while (std::getline(lines, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      const auto v = detail::trim(line);
      if (v.empty()) continue;
      if (v != "0" && v != "1")
        throw Error(ErrorCode::process_failure, "malformed label '" + std::string(v) + "' from '" + command_ + "'");
      labels.push_back(v == "1" ? 1 : 0);
    }
    if (labels.size() != batch.n_rows())
      throw Error(ErrorCode::process_failure, "'" + command_ + "' printed " + std::to_string(labels.size()) +
                                                  " labels for " + std::to_string(batch.n_rows()) + " rows" +
                                                  (diag.empty() ? std::string() : "; stderr: " + diag));
    return labels;
  }

  std::string command_;
  mutable std::mutex mutex_;
  mutable std::unordered_map<std::string, Label> cache_;
  mutable std::size_t calls_ = 0;
};

}  // namespace ctree
