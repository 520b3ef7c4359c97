#pragma once

// Threshold literals, m-of-n split rules, information gain and the greedy
// rule search used at every tree node.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "concept_tree/concepts.hpp"
#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"

namespace ctree {

enum class Op { leq, gt };

inline const char* to_string(Op op) { return op == Op::leq ? "leq" : "gt"; }
inline const char* symbol(Op op) { return op == Op::leq ? "<=" : ">"; }

inline Op parse_op(std::string_view s) {
  if (s == "leq" || s == "<=") return Op::leq;
  if (s == "gt" || s == ">") return Op::gt;
  throw Error(ErrorCode::parse, "unknown literal op '" + std::string(s) + "'");
}

struct Literal {
  std::size_t feature = 0;
  Op op = Op::gt;
  double threshold = 0.0;

  bool holds(std::span<const double> row) const {
    const double v = row[feature];
    return op == Op::leq ? v <= threshold : v > threshold;
  }

  Literal negated() const { return {feature, op == Op::leq ? Op::gt : Op::leq, threshold}; }

  friend bool operator==(const Literal&, const Literal&) = default;
};

/// Satisfied when at least `m` of the literals hold.
struct MOfNRule {
  std::size_t m = 1;
  std::vector<Literal> literals;
  std::optional<ConceptId> concept_id;

  std::size_t n() const noexcept { return literals.size(); }

  std::size_t satisfied_count(std::span<const double> row) const {
    std::size_t k = 0;
    for (const auto& lit : literals) k += lit.holds(row) ? 1 : 0;
    return k;
  }

  bool eval(std::span<const double> row) const { return satisfied_count(row) >= m; }

  void validate(std::size_t n_features, const ConceptPartition* partition = nullptr) const {
    if (literals.empty()) throw Error(ErrorCode::invalid_argument, "rule has no literals");
    if (m < 1 || m > literals.size())
      throw Error(ErrorCode::invalid_argument, "rule needs 1 <= m <= n");
    for (std::size_t a = 0; a < literals.size(); ++a) {
      const auto& lit = literals[a];
      if (lit.feature >= n_features)
        throw Error(ErrorCode::invalid_argument, "literal references feature out of range");
      if (!std::isfinite(lit.threshold))
        throw Error(ErrorCode::invalid_argument, "literal threshold must be finite");
      for (std::size_t b = a + 1; b < literals.size(); ++b)
        if (literals[b] == lit) throw Error(ErrorCode::invalid_argument, "duplicate literal in rule");
      if (partition && concept_id && partition->concept_of(lit.feature) != *concept_id)
        throw Error(ErrorCode::invalid_argument, "literal feature outside the rule's concept");
    }
  }

  friend bool operator==(const MOfNRule&, const MOfNRule&) = default;
};

inline bool eval_rule(const MOfNRule& r, std::span<const double> row) { return r.eval(row); }

// ---------------------------------------------------------------------------
// Information gain

/// Binary entropy in bits of a set with `positives` ones out of `total`.
inline double binary_entropy(std::size_t positives, std::size_t total) {
  if (total == 0 || positives == 0 || positives == total) return 0.0;
  const double p = static_cast<double>(positives) / static_cast<double>(total);
  const double q = 1.0 - p;
  return -(p * std::log2(p) + q * std::log2(q));
}

struct SplitCounts {
  std::size_t total = 0;
  std::size_t positives = 0;
  std::size_t in_true = 0;
  std::size_t positives_in_true = 0;
};

inline double information_gain(const SplitCounts& c) {
  if (c.total == 0) return 0.0;
  const double n = static_cast<double>(c.total);
  const std::size_t in_false = c.total - c.in_true;
  const std::size_t pos_false = c.positives - c.positives_in_true;
  const double side_true = static_cast<double>(c.in_true) / n * binary_entropy(c.positives_in_true, c.in_true);
  const double side_false = static_cast<double>(in_false) / n * binary_entropy(pos_false, in_false);
  return std::max(0.0, binary_entropy(c.positives, c.total) - (side_true + side_false));
}

/// Gain of splitting `labels` by `mask` (true side / false side).
template <class Mask>
double information_gain(std::span<const Label> labels, const Mask& mask) {
  if (labels.size() != std::size(mask))
    throw Error(ErrorCode::length_mismatch, "labels and mask differ in length");
  SplitCounts c;
  c.total = labels.size();
  std::size_t i = 0;
  for (const auto side : mask) {
    const bool pos = labels[i++] == 1;
    c.positives += pos;
    if (side) {
      ++c.in_true;
      c.positives_in_true += pos;
    }
  }
  return information_gain(c);
}

// ---------------------------------------------------------------------------
// Rule search

struct RuleSearchConfig {
  std::size_t m_max = 1;
  std::size_t n_max = 1;
  std::size_t max_thresholds_per_feature = 32;
  double min_gain_improvement = 0.0;

  void validate() const {
    if (m_max < 1 || n_max < 1 || max_thresholds_per_feature < 1)
      throw Error(ErrorCode::invalid_argument, "rule search caps must be >= 1");
    if (!(min_gain_improvement >= 0.0))
      throw Error(ErrorCode::invalid_argument, "min_gain_improvement must be >= 0");
  }
};

/// Midpoints between consecutive distinct sorted values. When there are more
/// than `cap` of them, `cap` midpoints are kept at evenly spaced ranks
/// floor((i + 1/2) * M / cap), i = 0..cap-1, over the M available.
inline std::vector<double> candidate_thresholds(std::span<const double> values, std::size_t cap) {
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  if (v.size() < 2) return {};
  std::vector<double> mids;
  mids.reserve(v.size() - 1);
  for (std::size_t i = 0; i + 1 < v.size(); ++i) mids.push_back(v[i] + (v[i + 1] - v[i]) / 2.0);
  if (mids.size() <= cap) return mids;
  std::vector<double> picked;
  picked.reserve(cap);
  const std::size_t total = mids.size();
  for (std::size_t i = 0; i < cap; ++i) picked.push_back(mids[((2 * i + 1) * total) / (2 * cap)]);
  return picked;
}

/// One literal per (feature, threshold), canonical op `gt`, features in the
/// order given and thresholds ascending.
inline std::vector<Literal> candidate_literals(const Dataset& sample, std::span<const std::size_t> features,
                                               std::size_t cap = 32) {
  std::vector<Literal> out;
  for (std::size_t f : features)
    for (double t : candidate_thresholds(sample.column(f), cap)) out.push_back({f, Op::gt, t});
  return out;
}

struct RuleFit {
  MOfNRule rule;
  double gain = 0.0;
};

namespace detail {

// Satisfaction table of every `gt` candidate over the sample rows; the `leq`
// literal on the same threshold is its complement.
struct CandidateTable {
  std::vector<Literal> literals;          // op == gt
  std::vector<std::uint8_t> satisfied;    // literals.size() x rows, row-contiguous per literal
  std::size_t rows = 0;

  std::span<const std::uint8_t> of(std::size_t c) const { return {satisfied.data() + c * rows, rows}; }
};

inline CandidateTable build_candidates(const Dataset& sample, std::span<const std::size_t> features,
                                       std::size_t cap) {
  CandidateTable t;
  t.rows = sample.n_rows();
  t.literals = candidate_literals(sample, features, cap);
  t.satisfied.resize(t.literals.size() * t.rows);
  for (std::size_t c = 0; c < t.literals.size(); ++c) {
    const auto& lit = t.literals[c];
    for (std::size_t i = 0; i < t.rows; ++i)
      t.satisfied[c * t.rows + i] = sample.at(i, lit.feature) > lit.threshold ? 1 : 0;
  }
  return t;
}

inline bool contains(const std::vector<Literal>& lits, const Literal& l) {
  return std::find(lits.begin(), lits.end(), l) != lits.end();
}

}  // namespace detail

/// Greedy hill climbing over m-of-n rules built from literals on
/// `allowed_features`.
///
/// Starts from the best single literal (a 1-of-1 rule), then repeatedly tries
/// two expansions: add the best literal keeping m (m-of-(n+1)) or add the best
/// literal and increment m ((m+1)-of-(n+1)). The better expansion (m-of-(n+1)
/// on ties) is accepted when it beats the incumbent gain by more than
/// `min_gain_improvement`. An expansion is only tried while it stays within
/// the m_max / n_max caps. Candidates are scanned by feature index, then
/// threshold, then `leq` before `gt`, and only a strictly better gain
/// replaces the current best, which makes the result deterministic.
inline RuleFit fit_mofn(const Dataset& sample, std::span<const std::size_t> allowed_features,
                        const RuleSearchConfig& cfg) {
  cfg.validate();
  if (allowed_features.empty()) throw Error(ErrorCode::no_candidate, "no allowed features");
  const auto labels = sample.labels();
  std::vector<std::size_t> features(allowed_features.begin(), allowed_features.end());
  std::sort(features.begin(), features.end());
  features.erase(std::unique(features.begin(), features.end()), features.end());

  const auto table = detail::build_candidates(sample, features, cfg.max_thresholds_per_feature);
  if (table.literals.empty())
    throw Error(ErrorCode::no_candidate, "allowed features are constant on this sample");

  const std::size_t rows = table.rows;
  std::size_t positives = 0;
  for (Label y : labels) positives += (y == 1);

  // 1-of-1 initialisation.
  RuleFit best;
  best.gain = -1.0;
  for (std::size_t c = 0; c < table.literals.size(); ++c) {
    const auto sat = table.of(c);
    SplitCounts gt{rows, positives, 0, 0};
    for (std::size_t i = 0; i < rows; ++i) {
      gt.in_true += sat[i];
      gt.positives_in_true += sat[i] & static_cast<std::uint8_t>(labels[i] == 1);
    }
    SplitCounts leq{rows, positives, rows - gt.in_true, positives - gt.positives_in_true};
    const double g_leq = information_gain(leq);
    const double g_gt = information_gain(gt);
    if (g_leq > best.gain) best = {{1, {table.literals[c].negated()}, std::nullopt}, g_leq};
    if (g_gt > best.gain) best = {{1, {table.literals[c]}, std::nullopt}, g_gt};
  }

  std::vector<std::uint8_t> count(rows, 0);
  for (std::size_t i = 0; i < rows; ++i) count[i] = best.rule.literals.front().holds(sample.row(i)) ? 1 : 0;

  while (true) {
    const std::size_t m = best.rule.m;
    const std::size_t n = best.rule.n();
    const bool keep_m = n + 1 <= cfg.n_max;
    const bool bump_m = keep_m && m + 1 <= cfg.m_max;
    if (!keep_m) break;

    struct Choice {
      double gain = -1.0;
      Literal lit;
    };
    Choice best_keep, best_bump;
    for (std::size_t c = 0; c < table.literals.size(); ++c) {
      const Literal lit_gt = table.literals[c];
      const Literal lit_leq = lit_gt.negated();
      const bool skip_leq = detail::contains(best.rule.literals, lit_leq);
      const bool skip_gt = detail::contains(best.rule.literals, lit_gt);
      if (skip_leq && skip_gt) continue;
      const auto sat = table.of(c);
      // [leq/gt][keep/bump]
      SplitCounts k_leq{rows, positives, 0, 0}, k_gt = k_leq, b_leq = k_leq, b_gt = k_leq;
      for (std::size_t i = 0; i < rows; ++i) {
        const std::size_t pos = labels[i] == 1;
        const std::size_t with_gt = count[i] + sat[i];
        const std::size_t with_leq = count[i] + (1 - sat[i]);
        if (with_leq >= m) { ++k_leq.in_true; k_leq.positives_in_true += pos; }
        if (with_gt >= m) { ++k_gt.in_true; k_gt.positives_in_true += pos; }
        if (with_leq >= m + 1) { ++b_leq.in_true; b_leq.positives_in_true += pos; }
        if (with_gt >= m + 1) { ++b_gt.in_true; b_gt.positives_in_true += pos; }
      }
      if (!skip_leq) {
        if (const double g = information_gain(k_leq); g > best_keep.gain) best_keep = {g, lit_leq};
        if (bump_m)
          if (const double g = information_gain(b_leq); g > best_bump.gain) best_bump = {g, lit_leq};
      }
      if (!skip_gt) {
        if (const double g = information_gain(k_gt); g > best_keep.gain) best_keep = {g, lit_gt};
        if (bump_m)
          if (const double g = information_gain(b_gt); g > best_bump.gain) best_bump = {g, lit_gt};
      }
    }
    if (best_keep.gain < 0.0) break;  // every candidate already in the rule

    const bool take_bump = bump_m && best_bump.gain > best_keep.gain;
    const Choice& chosen = take_bump ? best_bump : best_keep;
    if (!(chosen.gain > best.gain + cfg.min_gain_improvement)) break;

    best.rule.literals.push_back(chosen.lit);
    if (take_bump) ++best.rule.m;
    best.gain = chosen.gain;
    for (std::size_t i = 0; i < rows; ++i) count[i] += chosen.lit.holds(sample.row(i)) ? 1 : 0;
  }
  return best;
}

/// Fits one rule per usable concept (restricted to that concept's features)
/// and keeps the one with the highest gain, lower concept id on ties.
/// Throws NoCandidate when no concept yields a positive gain.
inline RuleFit construct_concept_rule(const Dataset& sample, const ConceptPartition& partition,
                                      std::span<const ConceptId> usable_concepts,
                                      const RuleSearchConfig& cfg) {
  if (usable_concepts.empty()) throw Error(ErrorCode::no_candidate, "no usable concepts");
  std::vector<ConceptId> order(usable_concepts.begin(), usable_concepts.end());
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::optional<RuleFit> best;
  for (ConceptId k : order) {
    RuleFit fit;
    try {
      fit = fit_mofn(sample, partition.concept_at(k).members, cfg);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::no_candidate) continue;
      throw;
    }
    if (fit.gain > (best ? best->gain : 0.0)) {
      fit.rule.concept_id = k;
      best = std::move(fit);
    }
  }
  if (!best) throw Error(ErrorCode::no_candidate, "no concept yields a positive information gain");
  return *best;
}

// ---------------------------------------------------------------------------
// Rendering and serialization

inline std::string format_threshold(double t) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", t);
  return buf;
}

inline std::string render_literal(const Literal& lit, const std::vector<std::string>& names) {
  return names.at(lit.feature) + " " + symbol(lit.op) + " " + format_threshold(lit.threshold);
}

/// "m of {lit, lit, ...}"
inline std::string render_rule(const MOfNRule& r, const std::vector<std::string>& names) {
  std::string out = std::to_string(r.m) + " of {";
  for (std::size_t i = 0; i < r.literals.size(); ++i) {
    if (i) out += ", ";
    out += render_literal(r.literals[i], names);
  }
  return out + "}";
}

inline nlohmann::ordered_json rule_to_json(const MOfNRule& r, const std::vector<std::string>& names,
                                           const ConceptPartition* partition = nullptr) {
  nlohmann::ordered_json j;
  j["m"] = r.m;
  auto& lits = j["literals"] = nlohmann::ordered_json::array();
  for (const auto& l : r.literals)
    lits.push_back({{"feature_name", names.at(l.feature)}, {"op", to_string(l.op)}, {"threshold", l.threshold}});
  if (r.concept_id) {
    j["concept"] = *r.concept_id;
    if (partition) j["concept_name"] = partition->concept_at(*r.concept_id).name;
  } else {
    j["concept"] = nullptr;
  }
  return j;
}

inline MOfNRule rule_from_json(const nlohmann::ordered_json& j, const std::vector<std::string>& names) {
  MOfNRule r;
  r.m = j.at("m").get<std::size_t>();
  for (const auto& jl : j.at("literals")) {
    const auto name = jl.at("feature_name").get<std::string>();
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw Error(ErrorCode::unknown_feature, "rule references unknown feature '" + name + "'");
    r.literals.push_back({static_cast<std::size_t>(it - names.begin()), parse_op(jl.at("op").get<std::string>()),
                          jl.at("threshold").get<double>()});
  }
  if (j.contains("concept") && !j["concept"].is_null()) r.concept_id = j["concept"].get<ConceptId>();
  return r;
}

}  // namespace ctree
