// Grow a concept tree on the planted-rule fixture and print it.
//
//   ./quickstart

#include <iostream>

#include "concept_tree/concept_tree.hpp"
#include "concept_tree/fixtures.hpp"

int main() {
  using namespace ctree;

  const auto fx = fixtures::planted_rule(500, 7);
  const ConceptPartition concepts = parse_expert_concepts(fx.expert_concepts, fx.data.names());

  // The black-box the tree will mimic.
  const auto blackbox = train_builtin(fx.data, EnsembleParams{}, 42);

  Dataset x = fx.data;
  x.clear_labels();

  TreeConfig cfg;
  cfg.rules.m_max = 3;
  cfg.rules.n_max = 3;
  cfg.seed = 1;
  const SurrogateTree tree = grow(x, *blackbox, TreeMode::concept_tree, &concepts, cfg);

  std::cout << export_ascii(tree) << '\n';
  std::cout << "fidelity on the training rows: " << fidelity(predict_all(tree, x), blackbox->predict_batch(x))
            << "\n\n";

  const Prediction p = predict(tree, x.row(0));
  std::cout << "row 0 is class " << p.label << " because\n";
  for (const auto& step : p.explanation.steps)
    std::cout << "  " << (step.concept_name ? *step.concept_name + ": " : "") << step.rule << " is "
              << (step.outcome ? "true" : "false") << '\n';
  return 0;
}
