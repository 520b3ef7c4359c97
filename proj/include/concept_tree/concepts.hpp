#pragma once

// Concepts: named, disjoint groups of dependent features that together cover
// every feature of a dataset. Built either from an expert grouping file or by
// greedy complete-linkage clustering on absolute Pearson correlation.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"

namespace ctree {

using ConceptId = std::size_t;

struct Concept {
  ConceptId id = 0;
  std::string name;
  std::vector<std::size_t> members;  // sorted feature indices

  friend bool operator==(const Concept&, const Concept&) = default;
};

class ConceptPartition {
 public:
  ConceptPartition() = default;

  /// Validates disjointness, exhaustiveness over `n_features` and non-empty
  /// concepts. Concept ids must equal their position in `concepts`.
  ConceptPartition(std::vector<Concept> concepts, std::size_t n_features)
      : concepts_(std::move(concepts)), feature_to_concept_(n_features, kUnassigned) {
    for (std::size_t k = 0; k < concepts_.size(); ++k) {
      auto& c = concepts_[k];
      if (c.id != k)
        throw Error(ErrorCode::invalid_argument, "concept ids must be 0..K-1 in order");
      if (c.members.empty())
        throw Error(ErrorCode::invalid_argument, "concept '" + c.name + "' is empty");
      std::sort(c.members.begin(), c.members.end());
      for (std::size_t j : c.members) {
        if (j >= n_features)
          throw Error(ErrorCode::unknown_feature, "feature index " + std::to_string(j) +
                                                      " out of range in concept '" + c.name + "'");
        if (feature_to_concept_[j] != kUnassigned)
          throw Error(ErrorCode::duplicate_assignment,
                      "feature " + std::to_string(j) + " assigned to more than one concept");
        feature_to_concept_[j] = k;
      }
    }
    for (std::size_t j = 0; j < n_features; ++j)
      if (feature_to_concept_[j] == kUnassigned)
        throw Error(ErrorCode::invalid_argument,
                    "feature " + std::to_string(j) + " belongs to no concept");
  }

  /// One concept per feature, concept id = feature index, named after the feature.
  static ConceptPartition singletons(const std::vector<std::string>& feature_names) {
    std::vector<Concept> cs;
    for (std::size_t j = 0; j < feature_names.size(); ++j) cs.push_back({j, feature_names[j], {j}});
    return {std::move(cs), feature_names.size()};
  }

  std::size_t size() const noexcept { return concepts_.size(); }
  std::size_t n_features() const noexcept { return feature_to_concept_.size(); }
  const std::vector<Concept>& concepts() const noexcept { return concepts_; }
  const Concept& concept_at(ConceptId k) const { return concepts_.at(k); }
  ConceptId concept_of(std::size_t feature) const { return feature_to_concept_.at(feature); }

  std::optional<ConceptId> find(std::string_view name) const {
    for (const auto& c : concepts_)
      if (c.name == name) return c.id;
    return std::nullopt;
  }

  friend bool operator==(const ConceptPartition&, const ConceptPartition&) = default;

 private:
  static constexpr std::size_t kUnassigned = static_cast<std::size_t>(-1);
  std::vector<Concept> concepts_;
  std::vector<ConceptId> feature_to_concept_;
};

// ---------------------------------------------------------------------------
// Dependence

/// Sample Pearson correlation, clamped to [-1, 1].
/// Throws DegenerateVariance when either input is constant.
inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error(ErrorCode::length_mismatch, "pearson inputs differ in length");
  if (x.size() < 2) throw Error(ErrorCode::invalid_argument, "pearson needs at least 2 values");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0)
    throw Error(ErrorCode::degenerate_variance, "zero-variance input to pearson");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

enum class DependenceMeasure { pearson };

struct DependenceConfig {
  DependenceMeasure measure = DependenceMeasure::pearson;
  double epsilon = 0.9;

  void validate() const {
    if (!(epsilon > 0.0 && epsilon <= 1.0))
      throw Error(ErrorCode::invalid_argument, "epsilon must be in (0, 1]");
  }
};

inline double dependence(DependenceMeasure m, std::span<const double> x, std::span<const double> y) {
  switch (m) {
    case DependenceMeasure::pearson: return pearson(x, y);
  }
  return 0.0;
}

/// Greedy complete-linkage clustering. Features are visited in column order;
/// a feature joins the earliest-created concept whose every member has
/// |rho| >= epsilon with it, otherwise it founds a new concept. Constant
/// features always become singletons and are reported in `warnings`.
/// Auto concepts are named "Cluster 1", "Cluster 2", ...
inline ConceptPartition cluster_by_dependence(const Dataset& d, const DependenceConfig& cfg,
                                              std::vector<std::string>* warnings = nullptr) {
  cfg.validate();
  if (d.n_features() == 0) throw Error(ErrorCode::invalid_argument, "dataset has no features");
  const std::size_t p = d.n_features();
  std::vector<std::vector<double>> cols(p);
  for (std::size_t j = 0; j < p; ++j) cols[j] = d.column(j);

  std::vector<bool> degenerate(p, false);
  for (std::size_t j = 0; j < p; ++j) {
    const auto [lo, hi] = std::minmax_element(cols[j].begin(), cols[j].end());
    degenerate[j] = d.n_rows() < 2 || *lo == *hi;
    if (degenerate[j] && warnings)
      warnings->push_back("feature '" + d.name(j) + "' has zero variance; kept as a singleton");
  }

  std::vector<std::vector<std::size_t>> groups;
  std::vector<bool> closed;  // groups founded by degenerate features accept no one
  for (std::size_t j = 0; j < p; ++j) {
    std::optional<std::size_t> target;
    if (!degenerate[j]) {
      for (std::size_t k = 0; k < groups.size() && !target; ++k) {
        if (closed[k]) continue;
        const bool all = std::all_of(groups[k].begin(), groups[k].end(), [&](std::size_t i) {
          return std::abs(dependence(cfg.measure, cols[i], cols[j])) >= cfg.epsilon;
        });
        if (all) target = k;
      }
    }
    if (target) {
      groups[*target].push_back(j);
    } else {
      groups.push_back({j});
      closed.push_back(degenerate[j]);
    }
  }

  std::vector<Concept> concepts;
  for (std::size_t k = 0; k < groups.size(); ++k)
    concepts.push_back({k, "Cluster " + std::to_string(k + 1), groups[k]});
  return {std::move(concepts), p};
}

/// Smallest |rho| over all member pairs of concept `k`; 1 for singletons.
inline double min_within_dependence(const Dataset& d, const ConceptPartition& part, ConceptId k,
                                    DependenceMeasure m = DependenceMeasure::pearson) {
  const auto& members = part.concept_at(k).members;
  double lowest = 1.0;
  for (std::size_t a = 0; a < members.size(); ++a)
    for (std::size_t b = a + 1; b < members.size(); ++b)
      lowest = std::min(lowest, std::abs(dependence(m, d.column(members[a]), d.column(members[b]))));
  return lowest;
}

// ---------------------------------------------------------------------------
// Expert concepts and partition files

/// Reads {concept_name: [feature_name, ...]} in file order. Features not
/// listed get their own singleton concept named after the feature.
inline ConceptPartition parse_expert_concepts(const nlohmann::ordered_json& j,
                                              const std::vector<std::string>& feature_names) {
  if (!j.is_object())
    throw Error(ErrorCode::parse, "expert concepts must be a JSON object of name -> feature list");
  std::vector<Concept> concepts;
  std::vector<bool> assigned(feature_names.size(), false);
  for (const auto& [name, members] : j.items()) {
    if (!members.is_array())
      throw Error(ErrorCode::parse, "concept '" + name + "' must map to an array of feature names");
    Concept c{concepts.size(), name, {}};
    for (const auto& m : members) {
      if (!m.is_string())
        throw Error(ErrorCode::parse, "concept '" + name + "' lists a non-string feature");
      const auto feat = m.get<std::string>();
      const auto it = std::find(feature_names.begin(), feature_names.end(), feat);
      if (it == feature_names.end())
        throw Error(ErrorCode::unknown_feature,
                    "concept '" + name + "' lists unknown feature '" + feat + "'");
      const auto idx = static_cast<std::size_t>(it - feature_names.begin());
      if (assigned[idx])
        throw Error(ErrorCode::duplicate_assignment,
                    "feature '" + feat + "' is assigned to more than one concept");
      assigned[idx] = true;
      c.members.push_back(idx);
    }
    if (c.members.empty()) throw Error(ErrorCode::invalid_argument, "concept '" + name + "' is empty");
    concepts.push_back(std::move(c));
  }
  for (std::size_t f = 0; f < feature_names.size(); ++f) {
    if (assigned[f]) continue;
    std::string name = feature_names[f];
    while (std::any_of(concepts.begin(), concepts.end(), [&](const Concept& c) { return c.name == name; }))
      name += "'";
    concepts.push_back({concepts.size(), std::move(name), {f}});
  }
  return {std::move(concepts), feature_names.size()};
}

inline nlohmann::ordered_json read_ordered_json(const std::string& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, std::string("cannot open ") + what + " '" + path + "'");
  try {
    return nlohmann::ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string(what) + " '" + path + "': " + e.what());
  }
}

inline ConceptPartition load_expert_concepts(const std::string& path, const Dataset& d) {
  return parse_expert_concepts(read_ordered_json(path, "expert concepts file"), d.names());
}

inline nlohmann::ordered_json partition_to_json(const ConceptPartition& part,
                                                const std::vector<std::string>& feature_names) {
  nlohmann::ordered_json out;
  out["format"] = "concept-partition";
  out["version"] = 1;
  auto& arr = out["concepts"] = nlohmann::ordered_json::array();
  for (const auto& c : part.concepts()) {
    nlohmann::ordered_json jc;
    jc["id"] = c.id;
    jc["name"] = c.name;
    auto& names = jc["members"] = nlohmann::ordered_json::array();
    for (std::size_t j : c.members) names.push_back(feature_names.at(j));
    arr.push_back(std::move(jc));
  }
  return out;
}

inline ConceptPartition partition_from_json(const nlohmann::ordered_json& j,
                                            const std::vector<std::string>& feature_names) {
  if (!j.is_object() || !j.contains("concepts") || !j["concepts"].is_array())
    throw Error(ErrorCode::parse, "partition JSON needs a 'concepts' array");
  std::vector<Concept> concepts;
  for (const auto& jc : j["concepts"]) {
    Concept c;
    c.id = jc.at("id").get<std::size_t>();
    c.name = jc.at("name").get<std::string>();
    for (const auto& m : jc.at("members")) {
      const auto feat = m.get<std::string>();
      const auto it = std::find(feature_names.begin(), feature_names.end(), feat);
      if (it == feature_names.end())
        throw Error(ErrorCode::unknown_feature, "partition lists unknown feature '" + feat + "'");
      c.members.push_back(static_cast<std::size_t>(it - feature_names.begin()));
    }
    concepts.push_back(std::move(c));
  }
  return {std::move(concepts), feature_names.size()};
}

}  // namespace ctree
