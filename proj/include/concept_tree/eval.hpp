#pragma once

// Fidelity / accuracy metrics and the cross-validated comparison protocol:
// per fold, train the black-box on the train split, grow every surrogate on
// the train rows against the black-box, then score the surrogate on the test
// split against the black-box (fidelity) and the true labels (accuracy).

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "concept_tree/concepts.hpp"
#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"
#include "concept_tree/oracle.hpp"
#include "concept_tree/random.hpp"
#include "concept_tree/tree.hpp"

namespace ctree {

inline double agreement_rate(std::span<const Label> a, std::span<const Label> b) {
  if (a.size() != b.size()) throw Error(ErrorCode::length_mismatch, "prediction vectors differ in length");
  if (a.empty()) throw Error(ErrorCode::invalid_argument, "cannot score an empty prediction vector");
  std::size_t same = 0;
  for (std::size_t i = 0; i < a.size(); ++i) same += a[i] == b[i];
  return static_cast<double>(same) / static_cast<double>(a.size());
}

/// Fraction of rows where the surrogate agrees with the black-box.
inline double fidelity(std::span<const Label> surrogate, std::span<const Label> blackbox) {
  return agreement_rate(surrogate, blackbox);
}

/// Fraction of rows where the predictions match the true labels.
inline double accuracy(std::span<const Label> preds, std::span<const Label> truth) {
  return agreement_rate(preds, truth);
}

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  // sample (n - 1) standard deviation
};

inline MeanStd mean_std(std::span<const double> xs) {
  MeanStd r;
  if (xs.empty()) return r;
  r.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  if (xs.size() < 2) return r;
  double ss = 0.0;
  for (double x : xs) ss += (x - r.mean) * (x - r.mean);
  r.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  return r;
}

// ---------------------------------------------------------------------------
// Protocol

enum class Algorithm { trepan, concept_tree, blackbox };
enum class ConceptType { none, expert, correlation };

struct SurrogateSpec {
  Algorithm algorithm = Algorithm::trepan;
  ConceptType concept_type = ConceptType::none;
  std::size_t m_max = 1;
  std::size_t n_max = 1;

  std::string algorithm_name() const {
    switch (algorithm) {
      case Algorithm::trepan: return "TREPAN";
      case Algorithm::concept_tree: return "Concept Tree";
      case Algorithm::blackbox: return "Black-box";
    }
    return "";
  }
  std::string concept_type_name() const {
    switch (concept_type) {
      case ConceptType::none: return "/";
      case ConceptType::expert: return "Expert";
      case ConceptType::correlation: return "Correlation";
    }
    return "";
  }
  std::string split_rule_name() const {
    if (algorithm == Algorithm::blackbox) return "/";
    return std::to_string(m_max) + "-of-" + std::to_string(n_max);
  }
};

/// (trepan, concept-expert, concept-correlation) x split rules, grouped by
/// split rule with the concept variants first.
inline std::vector<SurrogateSpec> standard_grid(std::span<const std::size_t> rule_sizes, bool with_expert = true,
                                                bool with_correlation = true, bool with_trepan = true) {
  std::vector<SurrogateSpec> grid;
  for (std::size_t k : rule_sizes) {
    if (with_expert) grid.push_back({Algorithm::concept_tree, ConceptType::expert, k, k});
    if (with_correlation) grid.push_back({Algorithm::concept_tree, ConceptType::correlation, k, k});
    if (with_trepan) grid.push_back({Algorithm::trepan, ConceptType::none, k, k});
  }
  return grid;
}

/// Trains a black-box on a labelled train split.
using BlackBoxTrainer = std::function<std::unique_ptr<Oracle>(const Dataset& train, std::uint64_t seed)>;

inline BlackBoxTrainer builtin_trainer(EnsembleParams params = {}) {
  return [params](const Dataset& train, std::uint64_t seed) -> std::unique_ptr<Oracle> {
    return train_builtin(train, params, seed);
  };
}

struct ProtocolConfig {
  TreeConfig tree;  // m_max / n_max are taken from each SurrogateSpec
  DependenceConfig dependence;
  std::optional<ConceptPartition> expert;
  std::uint64_t seed = 0;
};

struct FoldScore {
  double accuracy = 0.0;
  double fidelity = 0.0;
  std::size_t internal_nodes = 0;
};

struct CellResult {
  SurrogateSpec spec;
  std::vector<FoldScore> folds;
  MeanStd accuracy;
  MeanStd fidelity;
};

struct EvalReport {
  std::size_t n_folds = 0;
  std::uint64_t seed = 0;
  std::vector<double> blackbox_accuracy;
  MeanStd blackbox;
  std::vector<CellResult> cells;
};

/// Runs every surrogate of `grid` on every fold of `folds`. Fold f uses
/// seed derive_seed(cfg.seed, f) for the black-box and
/// derive_seed(that, 1) for tree growth. Correlation concepts are clustered
/// on each train split.
inline EvalReport run_protocol(const Dataset& d, std::span<const SurrogateSpec> grid,
                               const BlackBoxTrainer& trainer, const FoldPlan& folds,
                               const ProtocolConfig& cfg) {
  if (!d.has_labels()) throw Error(ErrorCode::unlabeled_dataset, "protocol needs true labels");
  if (folds.assignments.size() != d.n_rows())
    throw Error(ErrorCode::length_mismatch, "fold plan does not match the dataset");
  for (const auto& s : grid)
    if (s.algorithm == Algorithm::concept_tree && s.concept_type == ConceptType::expert && !cfg.expert)
      throw Error(ErrorCode::invalid_argument, "expert concepts requested but none supplied");

  EvalReport report;
  report.n_folds = folds.n_folds;
  report.seed = cfg.seed;
  report.cells.resize(grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) report.cells[c].spec = grid[c];

  for (std::size_t f = 0; f < folds.n_folds; ++f) {
    const auto train_idx = folds.train_rows(f);
    const auto test_idx = folds.test_rows(f);
    const Dataset train = d.select_rows(train_idx);
    const Dataset test = d.select_rows(test_idx);
    Dataset train_x = train;
    train_x.clear_labels();
    Dataset test_x = test;
    test_x.clear_labels();

    const std::uint64_t fold_seed = derive_seed(cfg.seed, f);
    const auto blackbox = trainer(train, fold_seed);
    const auto bb_test = blackbox->predict_batch(test_x);
    report.blackbox_accuracy.push_back(accuracy(bb_test, test.labels()));

    std::optional<ConceptPartition> correlated;
    for (std::size_t c = 0; c < grid.size(); ++c) {
      const auto& spec = grid[c];
      FoldScore score;
      std::vector<Label> preds;
      if (spec.algorithm == Algorithm::blackbox) {
        preds = bb_test;
      } else {
        TreeConfig tc = cfg.tree;
        tc.rules.m_max = spec.m_max;
        tc.rules.n_max = spec.n_max;
        tc.seed = derive_seed(fold_seed, 1);
        const ConceptPartition* part = nullptr;
        TreeMode mode = TreeMode::trepan;
        if (spec.algorithm == Algorithm::concept_tree) {
          mode = TreeMode::concept_tree;
          if (spec.concept_type == ConceptType::correlation) {
            if (!correlated) correlated = cluster_by_dependence(train_x, cfg.dependence);
            part = &*correlated;
          } else {
            part = &*cfg.expert;
          }
        }
        const auto tree = grow(train_x, *blackbox, mode, part, tc);
        preds = predict_all(tree, test_x);
        score.internal_nodes = tree.internal_count();
      }
      score.fidelity = fidelity(preds, bb_test);
      score.accuracy = accuracy(preds, test.labels());
      report.cells[c].folds.push_back(score);
    }
  }

  report.blackbox = mean_std(report.blackbox_accuracy);
  for (auto& cell : report.cells) {
    std::vector<double> acc, fid;
    for (const auto& s : cell.folds) {
      acc.push_back(s.accuracy);
      fid.push_back(s.fidelity);
    }
    cell.accuracy = mean_std(acc);
    cell.fidelity = mean_std(fid);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Report output

inline nlohmann::ordered_json report_to_json(const EvalReport& r,
                                             const nlohmann::ordered_json& run_config = nullptr) {
  auto ms = [](const MeanStd& m) { return nlohmann::ordered_json{{"mean", m.mean}, {"std", m.std}}; };
  nlohmann::ordered_json j;
  j["format"] = "concept-tree-report";
  j["version"] = 1;
  j["n_folds"] = r.n_folds;
  j["seed"] = r.seed;
  j["blackbox_accuracy"] = {{"folds", r.blackbox_accuracy}, {"mean", r.blackbox.mean}, {"std", r.blackbox.std}};
  auto& rows = j["rows"] = nlohmann::ordered_json::array();
  for (const auto& c : r.cells) {
    nlohmann::ordered_json row;
    row["algorithm"] = c.spec.algorithm_name();
    row["concept_type"] = c.spec.concept_type_name();
    row["split_rule"] = c.spec.split_rule_name();
    auto& folds = row["folds"] = nlohmann::ordered_json::array();
    for (const auto& s : c.folds)
      folds.push_back({{"accuracy", s.accuracy}, {"fidelity", s.fidelity}, {"internal_nodes", s.internal_nodes}});
    row["surrogate_accuracy"] = ms(c.accuracy);
    row["surrogate_fidelity"] = ms(c.fidelity);
    rows.push_back(std::move(row));
  }
  if (!run_config.is_null()) j["run_config"] = run_config;
  return j;
}

inline std::string report_to_csv(const EvalReport& r) {
  std::ostringstream out;
  out << "algorithm,concept_type,split_rule,accuracy_mean,accuracy_std,fidelity_mean,fidelity_std\n";
  for (const auto& c : r.cells)
    out << c.spec.algorithm_name() << ',' << c.spec.concept_type_name() << ',' << c.spec.split_rule_name() << ','
        << detail::format_double(c.accuracy.mean) << ',' << detail::format_double(c.accuracy.std) << ','
        << detail::format_double(c.fidelity.mean) << ',' << detail::format_double(c.fidelity.std) << '\n';
  return out.str();
}

inline std::string report_to_table(const EvalReport& r) {
  auto pct = [](const MeanStd& m) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%5.1f%% +/- %4.1f%%", 100.0 * m.mean, 100.0 * m.std);
    return std::string(buf);
  };
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "%-14s %-13s %-10s %-20s %-20s\n", "Algorithm", "Concept Type", "Split Rule",
                "Surr. Accuracy", "Surr. Fidelity");
  out << line;
  out << std::string(80, '-') << '\n';
  for (const auto& c : r.cells) {
    std::snprintf(line, sizeof line, "%-14s %-13s %-10s %-20s %-20s\n", c.spec.algorithm_name().c_str(),
                  c.spec.concept_type_name().c_str(), c.spec.split_rule_name().c_str(), pct(c.accuracy).c_str(),
                  pct(c.fidelity).c_str());
    out << line;
  }
  out << "Black-box accuracy over " << r.n_folds << " folds: " << pct(r.blackbox) << '\n';
  return out.str();
}

}  // namespace ctree
