#pragma once

// Synthetic datasets with known structure, used by the `demo` subcommand and
// the test suites.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "concept_tree/dataset.hpp"
#include "concept_tree/random.hpp"

namespace ctree::fixtures {

struct PlantedRuleFixture {
  Dataset data;                          // labelled
  nlohmann::ordered_json expert_concepts;  // {concept: [features]}
  std::string planted_concept;
  std::vector<std::string> planted_features;
};

/// Three groups of three tightly correlated features plus two noise columns.
/// The label is 2-of-{g1 > 0, g2 > 0, g3 > 0} over the "Planted" group; the
/// "Distractor A" group shares part of the planted latent factor (|rho| about
/// 0.6), "Distractor B" is independent.
inline PlantedRuleFixture planted_rule(std::size_t rows = 500, std::uint64_t seed = 7) {
  Rng rng(seed);
  const std::vector<std::string> names = {"g1", "g2", "g3", "a1", "a2", "a3", "b1", "b2", "b3", "n1", "n2"};
  std::vector<std::vector<double>> cols(names.size(), std::vector<double>(rows));
  std::vector<Label> labels(rows);
  constexpr double kSpread = 0.2;
  for (std::size_t i = 0; i < rows; ++i) {
    const double zg = rng.normal();
    const double za = 0.6 * zg + 0.8 * rng.normal();
    const double zb = rng.normal();
    for (std::size_t k = 0; k < 3; ++k) {
      cols[k][i] = zg + kSpread * rng.normal();
      cols[3 + k][i] = za + kSpread * rng.normal();
      cols[6 + k][i] = zb + kSpread * rng.normal();
    }
    cols[9][i] = rng.normal();
    cols[10][i] = rng.normal();
    const int votes = (cols[0][i] > 0) + (cols[1][i] > 0) + (cols[2][i] > 0);
    labels[i] = votes >= 2 ? 1 : 0;
  }
  PlantedRuleFixture f;
  f.data = Dataset::from_columns(names, cols, labels);
  f.expert_concepts = nlohmann::ordered_json::object();
  f.expert_concepts["Planted"] = {"g1", "g2", "g3"};
  f.expert_concepts["Distractor A"] = {"a1", "a2", "a3"};
  f.expert_concepts["Distractor B"] = {"b1", "b2", "b3"};
  f.planted_concept = "Planted";
  f.planted_features = {"g1", "g2", "g3"};
  return f;
}

/// A, B = 2 A, and C independent of both.
inline Dataset linear_pair(std::size_t rows = 200, std::uint64_t seed = 11) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(3, std::vector<double>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    cols[0][i] = rng.normal();
    cols[1][i] = 2.0 * cols[0][i];
    cols[2][i] = rng.normal();
  }
  return Dataset::from_columns({"A", "B", "C"}, cols);
}

/// Chain A - B - C: |rho(A,B)| and |rho(B,C)| about 0.96 while |rho(A,C)|
/// is about 0.85, so C cannot join {A, B} at epsilon 0.9.
inline Dataset correlation_chain(std::size_t rows = 2000, std::uint64_t seed = 13) {
  Rng rng(seed);
  constexpr double r = 0.85;
  const double tail = std::sqrt(1.0 - r * r);
  std::vector<std::vector<double>> cols(3, std::vector<double>(rows));
  for (std::size_t i = 0; i < rows; ++i) {
    const double a = rng.normal();
    const double c = r * a + tail * rng.normal();
    cols[0][i] = a;
    cols[1][i] = a + c;
    cols[2][i] = c;
  }
  return Dataset::from_columns({"A", "B", "C"}, cols);
}

/// Random latent-factor data: each feature loads on one of `factors` latent
/// variables with a random noise level, giving a mix of strong and weak
/// within-factor correlations.
inline Dataset latent_factors(std::size_t rows, std::size_t features, std::size_t factors, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::size_t> owner(features);
  std::vector<double> noise(features);
  std::vector<double> sign(features);
  for (std::size_t j = 0; j < features; ++j) {
    owner[j] = rng.uniform_index(factors);
    noise[j] = 0.05 + 0.8 * rng.uniform01();
    sign[j] = rng.uniform01() < 0.5 ? -1.0 : 1.0;
  }
  std::vector<std::vector<double>> cols(features, std::vector<double>(rows));
  std::vector<double> z(factors);
  for (std::size_t i = 0; i < rows; ++i) {
    for (auto& v : z) v = rng.normal();
    for (std::size_t j = 0; j < features; ++j) cols[j][i] = sign[j] * z[owner[j]] + noise[j] * rng.normal();
  }
  std::vector<std::string> names;
  for (std::size_t j = 0; j < features; ++j) names.push_back("x" + std::to_string(j + 1));
  return Dataset::from_columns(std::move(names), cols);
}

}  // namespace ctree::fixtures
