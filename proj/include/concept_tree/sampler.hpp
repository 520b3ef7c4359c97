#pragma once

// Synthetic instance generation. Each feature gets an independent
// kernel-smoothed empirical marginal (a training value plus Gaussian noise at
// Silverman's bandwidth); proposals are rejected until they satisfy the path
// of rules leading to a tree node.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"
#include "concept_tree/random.hpp"
#include "concept_tree/rules.hpp"

namespace ctree {

struct FeatureMarginal {
  std::vector<double> values;
  double bandwidth = 0.0;
};

struct MarginalModel {
  std::vector<FeatureMarginal> features;

  std::size_t size() const noexcept { return features.size(); }
};

namespace detail {

// Linear-interpolation quantile of sorted data (type 7).
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.size() == 1) return sorted.front();
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace detail

/// Silverman's rule of thumb, 0.9 * min(sd, IQR / 1.34) * n^(-1/5), with the
/// usual fallback to sd when the IQR is zero on a non-constant sample.
inline double silverman_bandwidth(std::vector<double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  std::sort(values.begin(), values.end());
  if (values.front() == values.back()) return 0.0;
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  const double iqr = detail::quantile_sorted(values, 0.75) - detail::quantile_sorted(values, 0.25);
  double spread = std::min(sd, iqr / 1.34);
  if (!(spread > 0.0)) spread = sd;
  return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

inline MarginalModel fit_marginals(const Dataset& d) {
  if (d.empty()) throw Error(ErrorCode::empty_input, "cannot fit marginals on an empty dataset");
  MarginalModel model;
  model.features.reserve(d.n_features());
  for (std::size_t j = 0; j < d.n_features(); ++j) {
    auto col = d.column(j);
    const double h = silverman_bandwidth(col);
    model.features.push_back({std::move(col), h});
  }
  return model;
}

struct PathStep {
  MOfNRule rule;
  bool outcome = true;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

/// Ordered (rule, required outcome) pairs from the root to a node.
struct PathConstraint {
  std::vector<PathStep> steps;

  bool satisfied_by(std::span<const double> row) const {
    return std::all_of(steps.begin(), steps.end(),
                       [&](const PathStep& s) { return s.rule.eval(row) == s.outcome; });
  }

  PathConstraint extended(const MOfNRule& rule, bool outcome) const {
    PathConstraint out = *this;
    out.steps.push_back({rule, outcome});
    return out;
  }
};

struct DrawResult {
  std::vector<double> values;  // row-major, count x model.size()
  std::size_t rows = 0;
  std::size_t proposals = 0;
};

/// Draws exactly `count` rows satisfying `constraint`. Per proposal and per
/// feature, a training value is picked uniformly and Gaussian noise at the
/// feature's bandwidth is added. Throws SamplingExhausted (carrying the rows
/// accepted so far) after 1000 * count consecutive rejections.
inline DrawResult draw_sample(const MarginalModel& model, const PathConstraint& constraint,
                              std::size_t count, std::uint64_t seed) {
  DrawResult out;
  if (count == 0) return out;
  const std::size_t p = model.size();
  out.values.reserve(count * p);
  Rng rng(seed);
  std::vector<double> proposal(p);
  const std::size_t max_attempts = 1000 * count;
  std::size_t consecutive_rejects = 0;
  while (out.rows < count) {
    for (std::size_t j = 0; j < p; ++j) {
      const auto& f = model.features[j];
      double v = f.values[rng.uniform_index(f.values.size())];
      if (f.bandwidth > 0.0) v += f.bandwidth * rng.normal();
      proposal[j] = v;
    }
    ++out.proposals;
    if (constraint.satisfied_by(proposal)) {
      out.values.insert(out.values.end(), proposal.begin(), proposal.end());
      ++out.rows;
      consecutive_rejects = 0;
    } else if (++consecutive_rejects >= max_attempts) {
      throw SamplingExhausted(out.rows, count, std::move(out.values));
    }
  }
  return out;
}

/// Convenience wrapper returning the rows as an unlabelled Dataset.
inline Dataset draw_dataset(const MarginalModel& model, const std::vector<std::string>& names,
                            const PathConstraint& constraint, std::size_t count, std::uint64_t seed) {
  const auto draw = draw_sample(model, constraint, count, seed);
  Dataset d(names);
  for (std::size_t i = 0; i < draw.rows; ++i)
    d.add_row(std::span<const double>(draw.values.data() + i * names.size(), names.size()));
  return d;
}

}  // namespace ctree
