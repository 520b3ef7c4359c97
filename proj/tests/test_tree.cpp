#include <functional>
#include <set>

#include <gtest/gtest.h>

#include "concept_tree/fixtures.hpp"
#include "concept_tree/tree.hpp"

using namespace ctree;

namespace {

/// Labels rows with an arbitrary function of the feature vector.
class FunctionOracle final : public Oracle {
 public:
  FunctionOracle(std::vector<std::string> names, std::function<Label(std::span<const double>)> fn)
      : Oracle(std::move(names)), fn_(std::move(fn)) {}
  std::string describe() const override { return "function"; }

 protected:
  std::vector<Label> predict_rows(const Dataset& rows) const override {
    std::vector<Label> out(rows.n_rows());
    for (std::size_t i = 0; i < rows.n_rows(); ++i) out[i] = fn_(rows.row(i));
    return out;
  }

 private:
  std::function<Label(std::span<const double>)> fn_;
};

Dataset gaussian(std::size_t rows, std::size_t features, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::vector<double>> cols(features, std::vector<double>(rows));
  for (auto& c : cols)
    for (auto& v : c) v = rng.normal();
  std::vector<std::string> names;
  for (std::size_t j = 0; j < features; ++j) names.push_back("x" + std::to_string(j + 1));
  return Dataset::from_columns(names, cols);
}

void check_paths(const SurrogateTree& t, std::size_t node, std::set<ConceptId> used) {
  const Node& n = t.nodes.at(node);
  if (n.is_leaf()) return;
  const auto k = *n.rule->concept_id;
  EXPECT_FALSE(used.contains(k)) << "concept repeats at node " << node;
  for (const auto& l : n.rule->literals) EXPECT_EQ(t.partition->concept_of(l.feature), k);
  used.insert(k);
  check_paths(t, n.true_child, used);
  check_paths(t, n.false_child, used);
}

}  // namespace

TEST(Grow, PureRootIsSingleLeaf) {
  const auto d = gaussian(50, 2, 1);
  const FunctionOracle all_one(d.names(), [](auto) { return 1; });
  const auto t = grow(d, all_one, TreeMode::trepan, nullptr, {});
  ASSERT_EQ(t.nodes.size(), 1u);
  EXPECT_TRUE(t.nodes[0].is_leaf());
  EXPECT_EQ(t.nodes[0].label, 1);
}

TEST(Grow, MaxNodesOneGivesStump) {
  const auto d = gaussian(200, 3, 2);
  const FunctionOracle o(d.names(), [](auto r) { return (r[0] > 0) != (r[1] > 0) ? 1 : 0; });
  TreeConfig cfg;
  cfg.max_nodes = 1;
  const auto t = grow(d, o, TreeMode::trepan, nullptr, cfg);
  EXPECT_EQ(t.internal_count(), 1u);
  EXPECT_EQ(t.nodes.size(), 3u);
}

TEST(Grow, RealRowsAreKeptAndPadded) {
  const auto d = gaussian(60, 2, 3);
  const FunctionOracle o(d.names(), [](auto r) { return r[0] > 0.3 ? 1 : 0; });
  TreeConfig cfg;
  cfg.min_sample = 150;
  std::size_t synthetic = 0;
  const auto t = grow(d, o, TreeMode::trepan, nullptr, cfg, [&](std::size_t, const Dataset& rows) {
    synthetic += rows.n_rows();
  });
  EXPECT_EQ(t.nodes[0].real_rows, 60u);
  EXPECT_EQ(t.nodes[0].synthetic_rows, 90u);
  EXPECT_GE(synthetic, 90u);
  ASSERT_FALSE(t.nodes[0].is_leaf());
  EXPECT_EQ(t.nodes[0].rule->literals[0].feature, 0u);
}

TEST(Grow, ConceptsNeverRepeatOnAPath) {
  // Three features in two concepts; the label needs all three.
  const auto d = gaussian(300, 3, 4);
  const FunctionOracle o(d.names(), [](auto r) { return ((r[0] > 0) ^ (r[1] > 0) ^ (r[2] > 0.5)) ? 1 : 0; });
  const ConceptPartition part({{0, "first", {0, 2}}, {1, "second", {1}}}, 3);
  TreeConfig cfg;
  cfg.max_nodes = 20;
  const auto t = grow(d, o, TreeMode::concept_tree, &part, cfg);
  check_paths(t, t.root, {});
  bool saw_depth2_leaf = false;
  std::size_t max_depth = 0;
  for (const auto& n : t.nodes) {
    max_depth = std::max(max_depth, n.depth);
    if (n.depth == 2) {
      EXPECT_TRUE(n.is_leaf());
      saw_depth2_leaf = true;
    }
  }
  EXPECT_LE(max_depth, 2u);
  EXPECT_TRUE(saw_depth2_leaf);
}

TEST(Grow, ConceptReuseFlagLiftsRestriction) {
  const auto d = gaussian(300, 2, 5);
  const FunctionOracle o(d.names(), [](auto r) { return (r[0] > 0 && r[0] < 1) ? 1 : 0; });
  const auto part = ConceptPartition::singletons(d.names());
  TreeConfig cfg;
  cfg.allow_concept_reuse = true;
  const auto t = grow(d, o, TreeMode::concept_tree, &part, cfg);
  std::size_t uses_x1 = 0;
  for (const auto& n : t.nodes)
    if (!n.is_leaf() && n.rule->literals[0].feature == 0) ++uses_x1;
  EXPECT_GE(uses_x1, 2u);
}

TEST(Grow, SingletonConceptTreeMatchesTrepan) {
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    const auto d = gaussian(150, 4, 10 + seed);
    const FunctionOracle o(d.names(), [](auto r) { return r[0] + r[1] * r[2] - 0.5 * r[3] > 0 ? 1 : 0; });
    TreeConfig cfg;
    cfg.seed = seed;
    const auto part = ConceptPartition::singletons(d.names());
    const auto a = grow(d, o, TreeMode::trepan, nullptr, cfg);
    const auto b = grow(d, o, TreeMode::concept_tree, &part, cfg);
    ASSERT_EQ(a.nodes.size(), b.nodes.size());
    for (std::size_t i = 0; i < a.nodes.size(); ++i) {
      Node x = a.nodes[i], y = b.nodes[i];
      if (y.rule) y.rule->concept_id.reset();
      EXPECT_EQ(x, y) << "node " << i;
    }
  }
}

TEST(Grow, DeterministicUnderSeed) {
  const auto fx = fixtures::planted_rule(200, 2);
  Dataset x = fx.data;
  x.clear_labels();
  const FunctionOracle o(x.names(), [](auto r) { return (r[0] > 0) + (r[1] > 0) + (r[2] > 0) >= 2 ? 1 : 0; });
  TreeConfig cfg;
  cfg.rules.m_max = cfg.rules.n_max = 3;
  cfg.seed = 4;
  EXPECT_EQ(grow(x, o, TreeMode::trepan, nullptr, cfg), grow(x, o, TreeMode::trepan, nullptr, cfg));
}

TEST(Predict, LeafAndStump) {
  const auto d = gaussian(50, 2, 1);
  const FunctionOracle one(d.names(), [](auto) { return 1; });
  const auto leaf = grow(d, one, TreeMode::trepan, nullptr, {});
  const auto p = predict(leaf, d.row(0));
  EXPECT_EQ(p.label, 1);
  EXPECT_TRUE(p.explanation.steps.empty());

  const FunctionOracle split(d.names(), [](auto r) { return r[1] > 0.2 ? 1 : 0; });
  TreeConfig cfg;
  cfg.max_nodes = 1;
  const auto stump = grow(d, split, TreeMode::trepan, nullptr, cfg);
  const std::vector<double> row{0.0, 2.0};
  const auto q = predict(stump, row);
  ASSERT_EQ(q.explanation.steps.size(), 1u);
  const bool outcome = stump.nodes[0].rule->eval(row);
  EXPECT_EQ(q.explanation.steps[0].outcome, outcome);
  EXPECT_EQ(q.label, stump.nodes[outcome ? stump.nodes[0].true_child : stump.nodes[0].false_child].label);
  EXPECT_EQ(q.label, 1);
  EXPECT_THROW(predict(stump, std::vector<double>{1.0}), Error);
}

TEST(Predict, ReplayRoundTrip) {
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const auto fx = fixtures::planted_rule(150, seed);
    Dataset x = fx.data;
    x.clear_labels();
    const FunctionOracle o(x.names(), [](auto r) { return r[0] + r[3] - r[9] > 0 ? 1 : 0; });
    const auto part = parse_expert_concepts(fx.expert_concepts, x.names());
    TreeConfig cfg;
    cfg.seed = seed;
    cfg.rules.m_max = cfg.rules.n_max = 2;
    const auto t = grow(x, o, TreeMode::concept_tree, &part, cfg);
    for (std::size_t i = 0; i < x.n_rows(); ++i) {
      const auto p = predict(t, x.row(i));
      EXPECT_EQ(replay(t, p.explanation), p.label);
      EXPECT_EQ(replay(t, explanation_from_json(explanation_to_json(p.explanation))), p.label);
      for (const auto& s : p.explanation.steps) EXPECT_TRUE(s.concept_name.has_value());
    }
  }
}

TEST(Export, JsonRoundTrip) {
  const auto fx = fixtures::planted_rule(150, 3);
  Dataset x = fx.data;
  x.clear_labels();
  const FunctionOracle o(x.names(), [](auto r) { return r[0] > 0.1 ? 1 : 0; });
  const auto part = parse_expert_concepts(fx.expert_concepts, x.names());
  TreeConfig cfg;
  cfg.rules.m_max = cfg.rules.n_max = 3;
  const auto t = grow(x, o, TreeMode::concept_tree, &part, cfg);
  const auto j = tree_to_json(t);
  EXPECT_EQ(j["format"], "concept-tree");
  EXPECT_EQ(tree_from_json(nlohmann::ordered_json::parse(j.dump())), t);
}

TEST(Export, DotHeadersAndLeaves) {
  const auto d = gaussian(200, 3, 6);
  const FunctionOracle o(d.names(), [](auto r) { return r[1] > 0 ? 1 : 0; });
  const ConceptPartition part({{0, "Labor market", {1}}, {1, "Prices", {0, 2}}}, 3);
  TreeConfig cfg;
  cfg.max_nodes = 1;
  const auto t = grow(d, o, TreeMode::concept_tree, &part, cfg);
  const auto dot = export_dot(t);
  const auto pos = dot.find("label=\"");
  ASSERT_NE(pos, std::string::npos);
  EXPECT_EQ(dot.substr(pos + 7, 21), "Concept: Labor market");

  const FunctionOracle one(d.names(), [](auto) { return 0; });
  const auto leaf = grow(d, one, TreeMode::trepan, nullptr, {});
  const auto single = export_dot(leaf);
  std::size_t nodes = 0;
  for (std::size_t p = single.find(" [label="); p != std::string::npos; p = single.find(" [label=", p + 1)) ++nodes;
  EXPECT_EQ(nodes, 1u);
  EXPECT_EQ(single.find("->"), std::string::npos);
}

TEST(Export, ColoredDotUsesConceptColors) {
  const auto d = gaussian(200, 3, 6);
  const FunctionOracle o(d.names(), [](auto r) { return r[1] > 0 ? 1 : 0; });
  const ConceptPartition part({{0, "Labor market", {1}}, {1, "Prices", {0, 2}}}, 3);
  TreeConfig cfg;
  cfg.max_nodes = 1;
  const auto t = grow(d, o, TreeMode::concept_tree, &part, cfg);
  const auto dot = export_dot(t, &part);
  EXPECT_NE(dot.find("Concept: Labor market"), std::string::npos);
  EXPECT_NE(dot.find("<font color="), std::string::npos);
}
