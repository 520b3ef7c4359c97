#pragma once

// Surrogate tree growth shared by both modes:
//   trepan   each node fits an m-of-n rule over all features not yet used on
//            the path to the node.
//   concept  each node fits one rule per concept not yet used on the path and
//            keeps the best; every rule then draws on a single concept.
//
// Nodes are expanded first-in first-out. Every node sample is padded with
// synthetic rows up to `min_sample` and labelled by the black-box.

#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "concept_tree/concepts.hpp"
#include "concept_tree/dataset.hpp"
#include "concept_tree/errors.hpp"
#include "concept_tree/oracle.hpp"
#include "concept_tree/random.hpp"
#include "concept_tree/rules.hpp"
#include "concept_tree/sampler.hpp"

namespace ctree {

enum class TreeMode { trepan, concept_tree };

inline const char* to_string(TreeMode m) { return m == TreeMode::trepan ? "trepan" : "concept"; }

inline TreeMode parse_tree_mode(std::string_view s) {
  if (s == "trepan") return TreeMode::trepan;
  if (s == "concept") return TreeMode::concept_tree;
  throw Error(ErrorCode::invalid_argument, "unknown mode '" + std::string(s) + "'");
}

struct TreeConfig {
  std::size_t max_nodes = 10;   // internal nodes
  std::size_t min_sample = 100;
  RuleSearchConfig rules;
  double purity_threshold = 0.95;
  std::uint64_t seed = 0;
  bool allow_concept_reuse = false;

  void validate() const {
    rules.validate();
    if (max_nodes < 1) throw Error(ErrorCode::invalid_argument, "max_nodes must be >= 1");
    if (!(purity_threshold > 0.5 && purity_threshold <= 1.0))
      throw Error(ErrorCode::invalid_argument, "purity_threshold must be in (0.5, 1]");
  }

  friend bool operator==(const TreeConfig& a, const TreeConfig& b) {
    return a.max_nodes == b.max_nodes && a.min_sample == b.min_sample && a.rules.m_max == b.rules.m_max &&
           a.rules.n_max == b.rules.n_max &&
           a.rules.max_thresholds_per_feature == b.rules.max_thresholds_per_feature &&
           a.rules.min_gain_improvement == b.rules.min_gain_improvement &&
           a.purity_threshold == b.purity_threshold && a.seed == b.seed &&
           a.allow_concept_reuse == b.allow_concept_reuse;
  }
};

enum class NodeKind { internal, leaf };

struct Node {
  std::size_t id = 0;
  NodeKind kind = NodeKind::leaf;
  std::optional<MOfNRule> rule;
  double gain = 0.0;
  std::size_t true_child = 0;
  std::size_t false_child = 0;
  Label label = 1;
  std::size_t depth = 0;
  std::size_t real_rows = 0;
  std::size_t synthetic_rows = 0;
  std::array<std::size_t, 2> label_counts{0, 0};
  bool sampling_exhausted = false;

  bool is_leaf() const noexcept { return kind == NodeKind::leaf; }

  friend bool operator==(const Node&, const Node&) = default;
};

struct SurrogateTree {
  TreeMode mode = TreeMode::trepan;
  TreeConfig config;
  std::vector<std::string> feature_names;
  std::optional<ConceptPartition> partition;
  std::vector<Node> nodes;
  std::size_t root = 0;
  std::vector<std::string> warnings;

  std::size_t internal_count() const {
    std::size_t k = 0;
    for (const auto& n : nodes) k += !n.is_leaf();
    return k;
  }
  std::size_t leaf_count() const { return nodes.size() - internal_count(); }

  friend bool operator==(const SurrogateTree&, const SurrogateTree&) = default;
};

/// Receives the synthetic rows drawn for a node (debug dumps).
using SyntheticSink = std::function<void(std::size_t node_id, const Dataset& rows)>;

namespace detail {

struct NodeSample {
  Dataset rows;              // labelled by the oracle
  std::vector<bool> real;    // per row: from the training data
};

struct QueueEntry {
  std::size_t node;
  NodeSample sample;
  PathConstraint path;
};

inline Label majority(const std::array<std::size_t, 2>& counts) { return counts[1] >= counts[0] ? 1 : 0; }

inline std::array<std::size_t, 2> count_labels(const Dataset& d) {
  std::array<std::size_t, 2> c{0, 0};
  if (d.has_labels())
    for (Label y : d.labels()) ++c[y];
  return c;
}

}  // namespace detail

/// Grows a surrogate of `oracle` from the rows of `d` (its labels, if any, are
/// ignored). `partition` is required in concept mode and must cover every
/// feature of `d`.
inline SurrogateTree grow(const Dataset& d, const Oracle& oracle, TreeMode mode,
                          const ConceptPartition* partition, const TreeConfig& cfg,
                          const SyntheticSink& sink = {}) {
  cfg.validate();
  if (d.empty()) throw Error(ErrorCode::empty_input, "cannot grow a tree on an empty dataset");
  if (oracle.feature_names() != d.names())
    throw Error(ErrorCode::schema_mismatch, "oracle feature schema differs from the dataset");
  if (mode == TreeMode::concept_tree) {
    if (!partition) throw Error(ErrorCode::invalid_argument, "concept mode needs a concept partition");
    if (partition->n_features() != d.n_features())
      throw Error(ErrorCode::invalid_argument, "concept partition does not cover the dataset features");
  }

  SurrogateTree tree;
  tree.mode = mode;
  tree.config = cfg;
  tree.feature_names = d.names();
  if (partition) tree.partition = *partition;

  const MarginalModel marginals = fit_marginals(d);

  // Pads `sample` up to min_sample with rows satisfying `path` and labels
  // them. Returns false when the sampler gave up.
  auto pad = [&](detail::NodeSample& sample, const PathConstraint& path, std::size_t node_id) {
    const std::size_t have = sample.rows.n_rows();
    if (have >= cfg.min_sample) return true;
    const std::size_t want = cfg.min_sample - have;
    std::vector<double> values;
    std::size_t drawn = 0;
    bool exhausted = false;
    try {
      auto draw = draw_sample(marginals, path, want, derive_seed(cfg.seed, node_id));
      values = std::move(draw.values);
      drawn = draw.rows;
    } catch (const SamplingExhausted& e) {
      values = e.partial_values();
      drawn = e.drawn();
      exhausted = true;
      tree.warnings.push_back("node " + std::to_string(node_id) + ": sampling exhausted after " +
                              std::to_string(drawn) + " of " + std::to_string(want) + " rows");
    }
    if (drawn > 0) {
      Dataset synth(d.names());
      for (std::size_t i = 0; i < drawn; ++i)
        synth.add_row(std::span<const double>(values.data() + i * d.n_features(), d.n_features()));
      if (sink) sink(node_id, synth);
      const auto labels = oracle.predict_batch(synth);
      for (std::size_t i = 0; i < drawn; ++i) {
        sample.rows.add_row(synth.row(i), labels[i]);
        sample.real.push_back(false);
      }
    }
    return !exhausted;
  };

  auto make_node = [&](std::size_t depth) {
    Node n;
    n.id = tree.nodes.size();
    n.depth = depth;
    tree.nodes.push_back(n);
    return n.id;
  };

  auto record_stats = [&](std::size_t id, const detail::NodeSample& s, Label fallback) {
    Node& n = tree.nodes[id];
    n.label_counts = detail::count_labels(s.rows);
    n.real_rows = 0;
    for (bool r : s.real) n.real_rows += r;
    n.synthetic_rows = s.real.size() - n.real_rows;
    n.label = s.rows.empty() ? fallback : detail::majority(n.label_counts);
  };

  auto pure_enough = [&](const Node& n) {
    const std::size_t total = n.label_counts[0] + n.label_counts[1];
    if (total == 0) return true;
    const double top = static_cast<double>(std::max(n.label_counts[0], n.label_counts[1]));
    return top / static_cast<double>(total) >= cfg.purity_threshold;
  };

  // Root sample: training rows plus synthetic padding, all labelled by the oracle.
  detail::NodeSample root_sample{Dataset(d.names()), {}};
  {
    Dataset features = d;
    features.clear_labels();
    const auto labels = oracle.predict_batch(features);
    for (std::size_t i = 0; i < d.n_rows(); ++i) {
      root_sample.rows.add_row(d.row(i), labels[i]);
      root_sample.real.push_back(true);
    }
  }
  const std::size_t root = make_node(0);
  tree.root = root;
  const bool root_padded = pad(root_sample, {}, root);
  record_stats(root, root_sample, 1);
  tree.nodes[root].sampling_exhausted = !root_padded;

  std::deque<detail::QueueEntry> queue;
  if (root_padded && !pure_enough(tree.nodes[root]))
    queue.push_back({root, std::move(root_sample), {}});

  std::size_t internal = 0;
  while (!queue.empty() && internal < cfg.max_nodes) {
    detail::QueueEntry entry = std::move(queue.front());
    queue.pop_front();
    const auto& sample = entry.sample;
    if (sample.rows.n_rows() < 2) continue;

    std::optional<RuleFit> fit;
    try {
      if (mode == TreeMode::trepan) {
        std::set<std::size_t> used;
        if (!cfg.allow_concept_reuse)
          for (const auto& step : entry.path.steps)
            for (const auto& lit : step.rule.literals) used.insert(lit.feature);
        std::vector<std::size_t> allowed;
        for (std::size_t j = 0; j < d.n_features(); ++j)
          if (!used.contains(j)) allowed.push_back(j);
        if (!allowed.empty()) fit = fit_mofn(sample.rows, allowed, cfg.rules);
      } else {
        std::set<ConceptId> used;
        if (!cfg.allow_concept_reuse)
          for (const auto& step : entry.path.steps) used.insert(*step.rule.concept_id);
        std::vector<ConceptId> usable;
        for (ConceptId k = 0; k < partition->size(); ++k)
          if (!used.contains(k)) usable.push_back(k);
        if (!usable.empty()) fit = construct_concept_rule(sample.rows, *partition, usable, cfg.rules);
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::no_candidate) throw;
      fit.reset();
    }
    if (!fit || !(fit->gain > 0.0)) continue;

    const std::size_t id = entry.node;
    const std::size_t depth = tree.nodes[id].depth;
    const Label parent_label = tree.nodes[id].label;
    ++internal;

    std::array<std::size_t, 2> children{};
    std::array<detail::NodeSample, 2> child_samples{detail::NodeSample{Dataset(d.names()), {}},
                                                    detail::NodeSample{Dataset(d.names()), {}}};
    for (std::size_t i = 0; i < sample.rows.n_rows(); ++i) {
      const std::size_t side = fit->rule.eval(sample.rows.row(i)) ? 0 : 1;
      child_samples[side].rows.add_row(sample.rows.row(i), sample.rows.label(i));
      child_samples[side].real.push_back(sample.real[i]);
    }
    for (std::size_t side = 0; side < 2; ++side) {
      const bool outcome = side == 0;
      const std::size_t child = make_node(depth + 1);
      children[side] = child;
      PathConstraint path = entry.path.extended(fit->rule, outcome);
      const bool padded = pad(child_samples[side], path, child);
      record_stats(child, child_samples[side], parent_label);
      tree.nodes[child].sampling_exhausted = !padded;
      if (padded && !pure_enough(tree.nodes[child]))
        queue.push_back({child, std::move(child_samples[side]), std::move(path)});
    }
    Node& n = tree.nodes[id];
    n.kind = NodeKind::internal;
    n.rule = fit->rule;
    n.gain = fit->gain;
    n.true_child = children[0];
    n.false_child = children[1];
  }
  return tree;
}

// ---------------------------------------------------------------------------
// Prediction and explanations

struct ExplanationStep {
  std::size_t node = 0;
  std::string rule;
  bool outcome = false;
  std::optional<std::string> concept_name;

  friend bool operator==(const ExplanationStep&, const ExplanationStep&) = default;
};

struct Explanation {
  std::vector<ExplanationStep> steps;
  std::size_t leaf = 0;
  Label label = 0;
};

struct Prediction {
  Label label = 0;
  Explanation explanation;
};

inline Prediction predict(const SurrogateTree& t, std::span<const double> row) {
  if (row.size() != t.feature_names.size())
    throw Error(ErrorCode::schema_mismatch, "row has " + std::to_string(row.size()) + " values, tree expects " +
                                                std::to_string(t.feature_names.size()));
  Prediction p;
  std::size_t k = t.root;
  while (!t.nodes.at(k).is_leaf()) {
    const Node& n = t.nodes[k];
    const bool outcome = n.rule->eval(row);
    ExplanationStep step{k, render_rule(*n.rule, t.feature_names), outcome, std::nullopt};
    if (n.rule->concept_id && t.partition) step.concept_name = t.partition->concept_at(*n.rule->concept_id).name;
    p.explanation.steps.push_back(std::move(step));
    k = outcome ? n.true_child : n.false_child;
  }
  p.label = t.nodes[k].label;
  p.explanation.leaf = k;
  p.explanation.label = p.label;
  return p;
}

inline std::vector<Label> predict_all(const SurrogateTree& t, const Dataset& rows) {
  if (rows.names() != t.feature_names)
    throw Error(ErrorCode::schema_mismatch, "row columns do not match the tree's features");
  std::vector<Label> out(rows.n_rows());
  for (std::size_t i = 0; i < rows.n_rows(); ++i) out[i] = predict(t, rows.row(i)).label;
  return out;
}

/// Follows the recorded outcomes from the root and returns the leaf label
/// reached. Throws when the trace does not match the tree.
inline Label replay(const SurrogateTree& t, const Explanation& e) {
  std::size_t k = t.root;
  for (const auto& step : e.steps) {
    const Node& n = t.nodes.at(k);
    if (n.is_leaf() || step.node != k)
      throw Error(ErrorCode::invalid_argument, "explanation does not follow the tree");
    k = step.outcome ? n.true_child : n.false_child;
  }
  if (!t.nodes.at(k).is_leaf()) throw Error(ErrorCode::invalid_argument, "explanation stops before a leaf");
  return t.nodes[k].label;
}

inline nlohmann::ordered_json explanation_to_json(const Explanation& e) {
  nlohmann::ordered_json j;
  auto& steps = j["path"] = nlohmann::ordered_json::array();
  for (const auto& s : e.steps) {
    nlohmann::ordered_json js;
    js["node"] = s.node;
    if (s.concept_name) js["concept"] = *s.concept_name;
    js["rule"] = s.rule;
    js["outcome"] = s.outcome;
    steps.push_back(std::move(js));
  }
  j["leaf"] = e.leaf;
  j["label"] = e.label;
  return j;
}

inline Explanation explanation_from_json(const nlohmann::ordered_json& j) {
  Explanation e;
  for (const auto& js : j.at("path")) {
    ExplanationStep s;
    s.node = js.at("node").get<std::size_t>();
    s.rule = js.at("rule").get<std::string>();
    s.outcome = js.at("outcome").get<bool>();
    if (js.contains("concept")) s.concept_name = js["concept"].get<std::string>();
    e.steps.push_back(std::move(s));
  }
  e.leaf = j.at("leaf").get<std::size_t>();
  e.label = j.at("label").get<Label>();
  return e;
}

// ---------------------------------------------------------------------------
// Export

enum class ExportFormat { json, dot, ascii };

inline ExportFormat parse_export_format(std::string_view s) {
  if (s == "json") return ExportFormat::json;
  if (s == "dot") return ExportFormat::dot;
  if (s == "ascii") return ExportFormat::ascii;
  throw Error(ErrorCode::invalid_argument, "unknown export format '" + std::string(s) + "'");
}

inline constexpr int kTreeSchemaVersion = 1;

inline nlohmann::ordered_json tree_to_json(const SurrogateTree& t,
                                           const nlohmann::ordered_json& run_config = nullptr) {
  nlohmann::ordered_json j;
  j["format"] = "concept-tree";
  j["version"] = kTreeSchemaVersion;
  j["mode"] = to_string(t.mode);
  auto& cfg = j["config"];
  cfg["max_nodes"] = t.config.max_nodes;
  cfg["min_sample"] = t.config.min_sample;
  cfg["m_max"] = t.config.rules.m_max;
  cfg["n_max"] = t.config.rules.n_max;
  cfg["max_thresholds_per_feature"] = t.config.rules.max_thresholds_per_feature;
  cfg["min_gain_improvement"] = t.config.rules.min_gain_improvement;
  cfg["purity_threshold"] = t.config.purity_threshold;
  cfg["seed"] = t.config.seed;
  cfg["allow_concept_reuse"] = t.config.allow_concept_reuse;
  j["features"] = t.feature_names;
  j["partition"] = t.partition ? partition_to_json(*t.partition, t.feature_names) : nlohmann::ordered_json();
  j["root"] = t.root;
  auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
  const ConceptPartition* part = t.partition ? &*t.partition : nullptr;
  for (const auto& n : t.nodes) {
    nlohmann::ordered_json jn;
    jn["id"] = n.id;
    jn["kind"] = n.is_leaf() ? "leaf" : "internal";
    jn["depth"] = n.depth;
    jn["label"] = n.label;
    jn["label_counts"] = {n.label_counts[0], n.label_counts[1]};
    jn["real_rows"] = n.real_rows;
    jn["synthetic_rows"] = n.synthetic_rows;
    jn["sampling_exhausted"] = n.sampling_exhausted;
    if (!n.is_leaf()) {
      jn["rule"] = rule_to_json(*n.rule, t.feature_names, part);
      jn["gain"] = n.gain;
      jn["true_child"] = n.true_child;
      jn["false_child"] = n.false_child;
    }
    nodes.push_back(std::move(jn));
  }
  j["warnings"] = t.warnings;
  if (!run_config.is_null()) j["run_config"] = run_config;
  return j;
}

inline SurrogateTree tree_from_json(const nlohmann::ordered_json& j) {
  try {
    if (j.at("format") != "concept-tree") throw Error(ErrorCode::parse, "not a concept-tree document");
    if (j.at("version").get<int>() != kTreeSchemaVersion)
      throw Error(ErrorCode::parse, "unsupported tree schema version");
    SurrogateTree t;
    t.mode = parse_tree_mode(j.at("mode").get<std::string>());
    const auto& cfg = j.at("config");
    t.config.max_nodes = cfg.at("max_nodes").get<std::size_t>();
    t.config.min_sample = cfg.at("min_sample").get<std::size_t>();
    t.config.rules.m_max = cfg.at("m_max").get<std::size_t>();
    t.config.rules.n_max = cfg.at("n_max").get<std::size_t>();
    t.config.rules.max_thresholds_per_feature = cfg.at("max_thresholds_per_feature").get<std::size_t>();
    t.config.rules.min_gain_improvement = cfg.at("min_gain_improvement").get<double>();
    t.config.purity_threshold = cfg.at("purity_threshold").get<double>();
    t.config.seed = cfg.at("seed").get<std::uint64_t>();
    t.config.allow_concept_reuse = cfg.at("allow_concept_reuse").get<bool>();
    t.feature_names = j.at("features").get<std::vector<std::string>>();
    if (!j.at("partition").is_null()) t.partition = partition_from_json(j["partition"], t.feature_names);
    t.root = j.at("root").get<std::size_t>();
    for (const auto& jn : j.at("nodes")) {
      Node n;
      n.id = jn.at("id").get<std::size_t>();
      n.kind = jn.at("kind") == "leaf" ? NodeKind::leaf : NodeKind::internal;
      n.depth = jn.at("depth").get<std::size_t>();
      n.label = jn.at("label").get<Label>();
      n.label_counts = {jn.at("label_counts")[0].get<std::size_t>(), jn.at("label_counts")[1].get<std::size_t>()};
      n.real_rows = jn.at("real_rows").get<std::size_t>();
      n.synthetic_rows = jn.at("synthetic_rows").get<std::size_t>();
      n.sampling_exhausted = jn.at("sampling_exhausted").get<bool>();
      if (!n.is_leaf()) {
        n.rule = rule_from_json(jn.at("rule"), t.feature_names);
        n.gain = jn.at("gain").get<double>();
        n.true_child = jn.at("true_child").get<std::size_t>();
        n.false_child = jn.at("false_child").get<std::size_t>();
      }
      t.nodes.push_back(std::move(n));
    }
    t.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (std::size_t k = 0; k < t.nodes.size(); ++k) {
      const Node& n = t.nodes[k];
      if (n.id != k) throw Error(ErrorCode::parse, "node ids must be 0..N-1 in order");
      if (!n.is_leaf()) {
        if (n.true_child >= t.nodes.size() || n.false_child >= t.nodes.size())
          throw Error(ErrorCode::parse, "child index out of range");
        n.rule->validate(t.feature_names.size(), t.partition ? &*t.partition : nullptr);
      }
    }
    if (t.root >= t.nodes.size()) throw Error(ErrorCode::parse, "root index out of range");
    return t;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::parse, std::string("tree JSON: ") + e.what());
  }
}

inline SurrogateTree load_tree(const std::string& path) {
  return tree_from_json(read_ordered_json(path, "tree file"));
}

namespace detail {

inline std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

inline std::string html_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

inline constexpr std::array<const char*, 10> kConceptColors = {
    "#d95f02", "#1b9e77", "#7570b3", "#e7298a", "#66a61e",
    "#e6ab02", "#a6761d", "#1f78b4", "#b2182b", "#666666"};

}  // namespace detail

/// Graphviz rendering. Internal nodes show "Concept: <name>" (concept mode),
/// then "m of" and one literal per line. When `coloring` is given, each
/// literal is colored by the concept its feature belongs to in `coloring`.
inline std::string export_dot(const SurrogateTree& t, const ConceptPartition* coloring = nullptr) {
  std::ostringstream out;
  out << "digraph SurrogateTree {\n";
  out << "  node [shape=box, fontname=\"Helvetica\"];\n";
  for (const auto& n : t.nodes) {
    out << "  n" << n.id << " [";
    if (n.is_leaf()) {
      out << "label=\"" << n.label << "\", shape=ellipse";
    } else {
      const auto& r = *n.rule;
      std::optional<std::string> concept_name;
      if (r.concept_id && t.partition) concept_name = t.partition->concept_at(*r.concept_id).name;
      if (coloring) {
        out << "label=<";
        if (concept_name) out << "<b>Concept: " << detail::html_escape(*concept_name) << "</b><br/>";
        out << "<i>" << r.m << " of</i>";
        for (const auto& lit : r.literals) {
          const auto color = detail::kConceptColors[coloring->concept_of(lit.feature) % detail::kConceptColors.size()];
          out << "<br/><font color=\"" << color << "\">"
              << detail::html_escape(render_literal(lit, t.feature_names)) << "</font>";
        }
        out << ">";
      } else {
        std::string label;
        if (concept_name) label += "Concept: " + *concept_name + "\n";
        label += std::to_string(r.m) + " of";
        for (const auto& lit : r.literals) label += "\n" + render_literal(lit, t.feature_names);
        std::string escaped;
        for (char c : detail::dot_escape(label)) escaped += c == '\n' ? std::string("\\n") : std::string(1, c);
        out << "label=\"" << escaped << "\"";
      }
    }
    out << "];\n";
  }
  for (const auto& n : t.nodes) {
    if (n.is_leaf()) continue;
    out << "  n" << n.id << " -> n" << n.true_child << " [label=\"true\"];\n";
    out << "  n" << n.id << " -> n" << n.false_child << " [label=\"false\"];\n";
  }
  out << "}\n";
  return out.str();
}

inline std::string export_ascii(const SurrogateTree& t) {
  std::ostringstream out;
  std::function<void(std::size_t, const std::string&, const std::string&)> walk =
      [&](std::size_t k, const std::string& indent, const std::string& edge) {
        const Node& n = t.nodes[k];
        out << indent << edge;
        if (n.is_leaf()) {
          out << "class " << n.label << "  [" << n.label_counts[0] << "/" << n.label_counts[1] << "]\n";
          return;
        }
        if (n.rule->concept_id && t.partition)
          out << "[" << t.partition->concept_at(*n.rule->concept_id).name << "] ";
        out << render_rule(*n.rule, t.feature_names) << "\n";
        walk(n.true_child, indent + "  ", "true:  ");
        walk(n.false_child, indent + "  ", "false: ");
      };
  walk(t.root, "", "");
  return out.str();
}

inline std::string export_tree(const SurrogateTree& t, ExportFormat format,
                               const ConceptPartition* coloring = nullptr,
                               const nlohmann::ordered_json& run_config = nullptr) {
  switch (format) {
    case ExportFormat::json: return tree_to_json(t, run_config).dump(2) + "\n";
    case ExportFormat::dot: return export_dot(t, coloring);
    case ExportFormat::ascii: return export_ascii(t);
  }
  return {};
}

}  // namespace ctree
