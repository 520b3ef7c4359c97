// concept-tree: command-line front end.
//
//   concept-tree demo      write the synthetic fixtures
//   concept-tree concepts  build a concept partition (expert file or --auto)
//   concept-tree train     grow one surrogate tree and export it
//   concept-tree explain   predict rows with a saved tree and explain them
//   concept-tree evaluate  cross-validated fidelity / accuracy grid
//
// Exit codes: 0 ok, 1 unexpected, 2 usage, 3 input data, 4 concepts,
// 5 black-box oracle, 6 training.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "concept_tree/concept_tree.hpp"
#include "concept_tree/fixtures.hpp"

namespace {

using nlohmann::ordered_json;
using namespace ctree;

struct DataOptions {
  std::string path;
  std::string delimiter = ",";
  std::string transforms;
  std::string non_finite = "error";
  std::string target;
  std::string label_column;

  void add(CLI::App& app, bool required = true) {
    auto* d = app.add_option("--data", path, "CSV file with a header row");
    if (required) d->required();
    app.add_option("--delimiter", delimiter, "Field delimiter")->capture_default_str();
    app.add_option("--transforms", transforms, "JSON transform schema {column: kind}");
    app.add_option("--non-finite", non_finite, "Policy for NaN/inf cells: error | drop-rows")->capture_default_str();
    app.add_option("--target", target, "Build a direction-of-change label from this column");
    app.add_option("--label-column", label_column, "Use this 0/1 column as the label");
  }

  CsvOptions csv() const {
    if (delimiter.size() != 1) throw Error(ErrorCode::invalid_argument, "--delimiter must be one character");
    CsvOptions o;
    o.delimiter = delimiter.front();
    o.non_finite = parse_non_finite_policy(non_finite);
    if (!transforms.empty()) o.transforms = load_transform_schema(transforms);
    if (!label_column.empty()) o.label_column = label_column;
    return o;
  }

  Dataset load() const {
    if (!target.empty() && !label_column.empty())
      throw Error(ErrorCode::invalid_argument, "--target and --label-column are mutually exclusive");
    Dataset d = load_csv(path, csv());
    if (!target.empty()) d = build_direction_target(d, target);
    return d;
  }

  ordered_json echo() const {
    return {{"data", path},           {"delimiter", delimiter}, {"transforms", transforms},
            {"non_finite", non_finite}, {"target", target},       {"label_column", label_column}};
  }
};

struct TreeOptions {
  std::size_t m = 3;
  std::size_t n = 3;
  std::size_t max_nodes = 10;
  std::size_t min_sample = 100;
  double purity = 0.95;
  std::size_t max_thresholds = 32;
  double min_gain = 0.0;
  bool allow_reuse = false;
  std::uint64_t seed = 0;

  void add(CLI::App& app, bool with_rule_caps = true) {
    if (with_rule_caps) {
      app.add_option("--m", m, "Upper bound on m in m-of-n rules")->capture_default_str();
      app.add_option("--n", n, "Upper bound on n in m-of-n rules")->capture_default_str();
    }
    app.add_option("--max-nodes", max_nodes, "Maximum number of internal nodes")->capture_default_str();
    app.add_option("--min-sample", min_sample, "Minimum sample size per node")->capture_default_str();
    app.add_option("--purity", purity, "Majority fraction at which a node stops")->capture_default_str();
    app.add_option("--max-thresholds", max_thresholds, "Threshold candidates per feature")->capture_default_str();
    app.add_option("--min-gain", min_gain, "Gain improvement needed to grow a rule")->capture_default_str();
    app.add_flag("--allow-concept-reuse", allow_reuse, "Let a concept (or feature) repeat on a path");
    app.add_option("--seed", seed, "Run seed")->capture_default_str();
  }

  TreeConfig config() const {
    TreeConfig c;
    c.max_nodes = max_nodes;
    c.min_sample = min_sample;
    c.purity_threshold = purity;
    c.rules.m_max = m;
    c.rules.n_max = n;
    c.rules.max_thresholds_per_feature = max_thresholds;
    c.rules.min_gain_improvement = min_gain;
    c.allow_concept_reuse = allow_reuse;
    c.seed = seed;
    c.validate();
    return c;
  }

  ordered_json echo() const {
    return {{"m", m},
            {"n", n},
            {"max_nodes", max_nodes},
            {"min_sample", min_sample},
            {"purity", purity},
            {"max_thresholds", max_thresholds},
            {"min_gain", min_gain},
            {"allow_concept_reuse", allow_reuse},
            {"seed", seed}};
  }
};

struct OracleOptions {
  std::string kind = "builtin";
  std::string command;
  std::size_t estimators = 200;
  bool no_bootstrap = false;
  std::string cache;

  void add(CLI::App& app) {
    app.add_option("--oracle", kind, "Black-box: builtin | cmd")->capture_default_str();
    app.add_option("--oracle-cmd", command, "Shell command answering CSV batches with one 0/1 per line");
    app.add_option("--estimators", estimators, "Trees in the builtin black-box")->capture_default_str();
    app.add_flag("--no-bootstrap", no_bootstrap, "Train builtin trees on the full train set");
    app.add_option("--oracle-cache", cache, "CSV file persisting external oracle answers");
  }

  std::string resolved_kind() const { return command.empty() ? kind : "cmd"; }

  EnsembleParams ensemble() const { return {estimators, !no_bootstrap}; }

  ordered_json echo() const {
    return {{"oracle", resolved_kind()},
            {"oracle_cmd", command},
            {"estimators", estimators},
            {"bootstrap", !no_bootstrap},
            {"oracle_cache", cache}};
  }
};

std::unique_ptr<Oracle> make_external(const OracleOptions& o, const Dataset& d) {
  auto ext = std::make_unique<ExternalProcessOracle>(o.command, d.names());
  if (!o.cache.empty() && std::filesystem::exists(o.cache)) ext->load_cache(o.cache);
  return ext;
}

void save_external_cache(const OracleOptions& o, const Oracle& oracle) {
  if (o.cache.empty()) return;
  if (const auto* ext = dynamic_cast<const ExternalProcessOracle*>(&oracle)) ext->save_cache(o.cache);
}

std::unique_ptr<Oracle> make_oracle(const OracleOptions& o, const Dataset& d, std::uint64_t seed) {
  const auto kind = o.resolved_kind();
  if (kind == "cmd") {
    if (o.command.empty()) throw Error(ErrorCode::invalid_argument, "--oracle cmd needs --oracle-cmd");
    return make_external(o, d);
  }
  if (kind == "builtin") {
    if (!d.has_labels())
      throw Error(ErrorCode::unlabeled_dataset, "the builtin black-box needs --target or --label-column");
    return train_builtin(d, o.ensemble(), seed);
  }
  throw Error(ErrorCode::invalid_argument, "unknown oracle '" + o.kind + "'");
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::io, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

Dataset features_only(Dataset d) {
  d.clear_labels();
  return d;
}

// ---------------------------------------------------------------------------

struct ConceptSource {
  std::string expert;
  std::string partition;
  bool automatic = false;
  double epsilon = 0.9;

  void add(CLI::App& app) {
    app.add_option("--expert", expert, "Expert concepts JSON {concept: [features]}");
    app.add_option("--partition", partition, "Partition JSON written by `concepts`");
    app.add_flag("--auto", automatic, "Cluster features by correlation");
    app.add_option("--epsilon", epsilon, "Correlation threshold for --auto")->capture_default_str();
  }

  bool given() const { return automatic || !expert.empty() || !partition.empty(); }

  ConceptPartition build(const Dataset& d, std::vector<std::string>* warnings = nullptr) const {
    const int sources = automatic + !expert.empty() + !partition.empty();
    if (sources != 1)
      throw Error(ErrorCode::invalid_argument, "give exactly one of --auto, --expert, --partition");
    if (!expert.empty()) return load_expert_concepts(expert, d);
    if (!partition.empty()) return partition_from_json(read_ordered_json(partition, "partition file"), d.names());
    DependenceConfig cfg;
    cfg.epsilon = epsilon;
    return cluster_by_dependence(features_only(d), cfg, warnings);
  }

  ordered_json echo() const {
    return {{"expert", expert}, {"partition", partition}, {"auto", automatic}, {"epsilon", epsilon}};
  }
};

// ---------------------------------------------------------------------------

int cmd_demo(const std::string& out_dir, std::size_t rows, std::uint64_t seed) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  const auto planted = fixtures::planted_rule(rows, seed);
  save_csv((dir / "planted.csv").string(), planted.data);
  write_text((dir / "planted_concepts.json").string(), planted.expert_concepts.dump(2) + "\n");
  save_csv((dir / "linear_pair.csv").string(), fixtures::linear_pair(200, seed));
  save_csv((dir / "correlation_chain.csv").string(), fixtures::correlation_chain(2000, seed));
  std::cout << "wrote planted.csv (" << planted.data.n_rows() << " rows, label column 'label'),\n"
            << "      planted_concepts.json, linear_pair.csv, correlation_chain.csv to " << out_dir << "\n\n"
            << "try:\n"
            << "  concept-tree concepts --data " << (dir / "linear_pair.csv").string() << " --auto\n"
            << "  concept-tree train --data " << (dir / "planted.csv").string()
            << " --label-column label --mode concept --expert " << (dir / "planted_concepts.json").string()
            << " --out tree.json --ascii\n"
            << "  concept-tree evaluate --data " << (dir / "planted.csv").string()
            << " --label-column label --expert " << (dir / "planted_concepts.json").string() << "\n";
  return 0;
}

int cmd_concepts(const DataOptions& data, const ConceptSource& src, const std::string& out) {
  const Dataset d = data.load();
  std::vector<std::string> warnings;
  const auto part = src.build(d, &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

  auto doc = partition_to_json(part, d.names());
  doc["run_config"] = {{"subcommand", "concepts"}, {"input", data.echo()}, {"concepts", src.echo()}};
  const std::string text = doc.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    write_text(out, text);

  std::ostream& summary = out.empty() ? std::cerr : std::cout;
  summary << part.size() << " concepts over " << part.n_features() << " features\n";
  const Dataset x = features_only(d);
  for (const auto& c : part.concepts()) {
    summary << "  [" << c.id << "] " << c.name << ": " << c.members.size() << " feature(s)";
    if (c.members.size() > 1) {
      try {
        summary << ", min |rho| = " << min_within_dependence(x, part, c.id);
      } catch (const Error&) {
        summary << ", min |rho| undefined (constant feature)";
      }
    }
    summary << "\n";
  }
  return 0;
}

int cmd_train(const DataOptions& data, const TreeOptions& topt, const OracleOptions& oopt,
              const ConceptSource& src, const std::string& mode_name, const std::string& out,
              const std::string& dot, bool ascii, const std::string& ascii_out, const std::string& color_by,
              const std::string& dump_synthetic) {
  const TreeMode mode = parse_tree_mode(mode_name);
  const TreeConfig cfg = topt.config();
  const Dataset d = data.load();
  const Dataset x = features_only(d);

  std::optional<ConceptPartition> part;
  if (mode == TreeMode::concept_tree) {
    if (!src.given()) throw Error(ErrorCode::invalid_argument, "--mode concept needs --expert, --auto or --partition");
    part = src.build(d);
  } else if (src.given()) {
    std::cerr << "warning: --mode trepan ignores concept options\n";
  }

  const auto oracle = make_oracle(oopt, d, derive_seed(topt.seed, 0xB1AC));
  std::optional<Dataset> synthetic_dump;
  std::vector<std::size_t> synthetic_nodes;
  SyntheticSink sink;
  if (!dump_synthetic.empty()) {
    sink = [&](std::size_t node, const Dataset& rows) {
      if (!synthetic_dump) synthetic_dump.emplace(rows.names());
      for (std::size_t i = 0; i < rows.n_rows(); ++i) {
        synthetic_dump->add_row(rows.row(i));
        synthetic_nodes.push_back(node);
      }
    };
  }
  const auto tree = grow(x, *oracle, mode, part ? &*part : nullptr, cfg, sink);
  save_external_cache(oopt, *oracle);

  ordered_json run_config = {{"subcommand", "train"},
                             {"mode", to_string(mode)},
                             {"input", data.echo()},
                             {"tree", topt.echo()},
                             {"black_box", oopt.echo()},
                             {"concepts", mode == TreeMode::concept_tree ? src.echo() : ordered_json()}};
  write_text(out, export_tree(tree, ExportFormat::json, nullptr, run_config));

  std::optional<ConceptPartition> coloring;
  if (!color_by.empty())
    coloring = load_expert_concepts(color_by, d);
  else if (part)
    coloring = part;
  if (!dot.empty()) write_text(dot, export_dot(tree, coloring ? &*coloring : nullptr));
  if (!ascii_out.empty()) write_text(ascii_out, export_ascii(tree));
  if (ascii) std::cout << export_ascii(tree);

  if (synthetic_dump) {
    std::ofstream dump(dump_synthetic, std::ios::binary);
    if (!dump) throw Error(ErrorCode::io, "cannot write '" + dump_synthetic + "'");
    std::vector<std::vector<double>> cols;
    for (std::size_t j = 0; j < synthetic_dump->n_features(); ++j) cols.push_back(synthetic_dump->column(j));
    std::vector<double> node_col(synthetic_nodes.begin(), synthetic_nodes.end());
    auto names = synthetic_dump->names();
    names.insert(names.begin(), "node_id");
    cols.insert(cols.begin(), node_col);
    write_csv(dump, Dataset::from_columns(names, cols));
  }

  const auto bb = oracle->predict_batch(x);
  const auto sur = predict_all(tree, x);
  std::cout << "mode: " << to_string(mode) << ", internal nodes: " << tree.internal_count()
            << ", leaves: " << tree.leaf_count() << ", train fidelity: " << fidelity(sur, bb) << "\n";
  for (const auto& w : tree.warnings) std::cerr << "warning: " << w << "\n";
  return 0;
}

int cmd_explain(const DataOptions& data, const std::string& tree_path, const std::string& format,
                const std::string& out) {
  const auto tree = load_tree(tree_path);
  DataOptions rows_opts = data;
  rows_opts.label_column.clear();
  rows_opts.target.clear();
  const Dataset raw = load_csv(rows_opts.path, rows_opts.csv());
  std::vector<std::size_t> cols;
  for (const auto& name : tree.feature_names) {
    const auto j = raw.find(name);
    if (!j) throw Error(ErrorCode::schema_mismatch, "rows file lacks tree feature '" + name + "'");
    cols.push_back(*j);
  }
  std::vector<double> row(cols.size());
  std::ostringstream text;
  ordered_json doc;
  doc["tree"] = tree_path;
  auto& list = doc["explanations"] = ordered_json::array();
  for (std::size_t i = 0; i < raw.n_rows(); ++i) {
    for (std::size_t k = 0; k < cols.size(); ++k) row[k] = raw.at(i, cols[k]);
    const auto p = predict(tree, row);
    if (format == "json") {
      auto e = explanation_to_json(p.explanation);
      e["row"] = i;
      list.push_back(std::move(e));
    } else {
      text << "row " << i << ": class " << p.label << "\n";
      for (const auto& s : p.explanation.steps) {
        text << "  node " << s.node << " ";
        if (s.concept_name) text << "[" << *s.concept_name << "] ";
        text << s.rule << " -> " << (s.outcome ? "true" : "false") << "\n";
      }
    }
  }
  doc["run_config"] = {{"subcommand", "explain"}, {"rows", rows_opts.echo()}, {"format", format}};
  if (format != "json" && format != "text") throw Error(ErrorCode::invalid_argument, "--format must be text or json");
  const std::string result = format == "json" ? doc.dump(2) + "\n" : text.str();
  if (out.empty())
    std::cout << result;
  else
    write_text(out, result);
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_evaluate(const DataOptions& data, TreeOptions topt, const OracleOptions& oopt,
                 const std::string& expert, double epsilon, const std::string& algorithms, const std::string& rules,
                 std::size_t n_folds, bool time_ordered, bool blackbox_row, const std::string& json_out,
                 const std::string& csv_out) {
  const Dataset d = data.load();
  if (!d.has_labels()) throw Error(ErrorCode::unlabeled_dataset, "evaluate needs --target or --label-column");

  bool with_trepan = false, with_expert = false, with_auto = false;
  for (const auto& a : split_list(algorithms)) {
    if (a == "trepan") with_trepan = true;
    else if (a == "concept-expert") with_expert = true;
    else if (a == "concept-auto" || a == "concept-correlation") with_auto = true;
    else throw Error(ErrorCode::invalid_argument, "unknown algorithm '" + a + "'");
  }
  std::vector<std::size_t> sizes;
  for (const auto& r : split_list(rules)) {
    std::size_t k = 0;
    try {
      k = std::stoul(r);
    } catch (const std::exception&) {
      throw Error(ErrorCode::invalid_argument, "bad split rule size '" + r + "'");
    }
    if (k < 1) throw Error(ErrorCode::invalid_argument, "split rule sizes must be >= 1");
    sizes.push_back(k);
  }
  auto grid = standard_grid(sizes, with_expert, with_auto, with_trepan);
  if (blackbox_row) grid.insert(grid.begin(), SurrogateSpec{Algorithm::blackbox, ConceptType::none, 0, 0});

  ProtocolConfig cfg;
  cfg.tree = topt.config();
  cfg.seed = topt.seed;
  cfg.dependence.epsilon = epsilon;
  cfg.dependence.validate();
  if (with_expert) {
    if (expert.empty()) throw Error(ErrorCode::invalid_argument, "concept-expert needs --expert");
    cfg.expert = load_expert_concepts(expert, d);
  }

  BlackBoxTrainer trainer;
  if (oopt.resolved_kind() == "cmd") {
    if (oopt.command.empty()) throw Error(ErrorCode::invalid_argument, "--oracle cmd needs --oracle-cmd");
    // An external model is fixed; every fold queries the same process command.
    trainer = [&oopt, &d](const Dataset&, std::uint64_t) -> std::unique_ptr<Oracle> { return make_external(oopt, d); };
  } else if (oopt.resolved_kind() == "builtin") {
    trainer = builtin_trainer(oopt.ensemble());
  } else {
    throw Error(ErrorCode::invalid_argument, "unknown oracle '" + oopt.kind + "'");
  }

  const auto folds = make_folds(d, n_folds, topt.seed, time_ordered);
  const auto report = run_protocol(d, grid, trainer, folds, cfg);

  ordered_json run_config = {{"subcommand", "evaluate"},
                             {"input", data.echo()},
                             {"tree", topt.echo()},
                             {"black_box", oopt.echo()},
                             {"expert", expert},
                             {"epsilon", epsilon},
                             {"algorithms", algorithms},
                             {"rules", rules},
                             {"folds", n_folds},
                             {"time_ordered_folds", time_ordered},
                             {"blackbox_row", blackbox_row}};
  std::cout << report_to_table(report);
  if (!json_out.empty()) write_text(json_out, report_to_json(report, run_config).dump(2) + "\n");
  if (!csv_out.empty()) write_text(csv_out, report_to_csv(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Surrogate decision trees with concept-constrained m-of-n rules"};
  app.require_subcommand(1);

  // demo
  auto* demo = app.add_subcommand("demo", "Write synthetic fixtures");
  std::string demo_dir = "demo_data";
  std::size_t demo_rows = 500;
  std::uint64_t demo_seed = 7;
  demo->add_option("--out-dir", demo_dir, "Output directory")->capture_default_str();
  demo->add_option("--rows", demo_rows, "Rows in the planted-rule dataset")->capture_default_str();
  demo->add_option("--seed", demo_seed, "Generator seed")->capture_default_str();

  // concepts
  auto* concepts = app.add_subcommand("concepts", "Build a concept partition");
  DataOptions c_data;
  ConceptSource c_src;
  std::string c_out;
  c_data.add(*concepts);
  c_src.add(*concepts);
  concepts->add_option("--out", c_out, "Partition JSON output (default: standard output)");

  // train
  auto* train = app.add_subcommand("train", "Grow one surrogate tree");
  DataOptions t_data;
  TreeOptions t_tree;
  OracleOptions t_oracle;
  ConceptSource t_src;
  std::string t_mode = "concept", t_out, t_dot, t_ascii_out, t_color, t_dump;
  bool t_ascii = false;
  t_data.add(*train);
  t_tree.add(*train);
  t_oracle.add(*train);
  t_src.add(*train);
  train->add_option("--mode", t_mode, "trepan | concept")->capture_default_str();
  train->add_option("--out", t_out, "Tree JSON output")->required();
  train->add_option("--dot", t_dot, "Graphviz output");
  train->add_flag("--ascii", t_ascii, "Print an indented outline");
  train->add_option("--ascii-out", t_ascii_out, "Write the outline to a file");
  train->add_option("--color-by", t_color, "Expert concepts file used to color literals in --dot");
  train->add_option("--dump-synthetic", t_dump, "Write every synthetic row drawn to CSV");

  // explain
  auto* explain = app.add_subcommand("explain", "Explain predictions of a saved tree");
  DataOptions e_data;
  std::string e_tree, e_format = "text", e_out;
  explain->add_option("--tree", e_tree, "Tree JSON written by `train`")->required();
  explain->add_option("--rows", e_data.path, "CSV rows to explain")->required();
  explain->add_option("--delimiter", e_data.delimiter, "Field delimiter")->capture_default_str();
  explain->add_option("--transforms", e_data.transforms, "JSON transform schema {column: kind}");
  explain->add_option("--non-finite", e_data.non_finite, "error | drop-rows")->capture_default_str();
  explain->add_option("--format", e_format, "text | json")->capture_default_str();
  explain->add_option("--out", e_out, "Output file (default: standard output)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Cross-validated fidelity and accuracy");
  DataOptions v_data;
  TreeOptions v_tree;
  OracleOptions v_oracle;
  std::string v_expert, v_algorithms = "concept-expert,concept-auto,trepan", v_rules = "1,3,5", v_json, v_csv;
  double v_epsilon = 0.9;
  std::size_t v_folds = 5;
  bool v_time_ordered = false, v_blackbox_row = false;
  v_data.add(*evaluate);
  v_tree.add(*evaluate, false);
  v_oracle.add(*evaluate);
  evaluate->add_option("--expert", v_expert, "Expert concepts JSON");
  evaluate->add_option("--epsilon", v_epsilon, "Correlation threshold for automatic concepts")->capture_default_str();
  evaluate->add_option("--algorithms", v_algorithms, "Comma list of trepan, concept-expert, concept-auto")
      ->capture_default_str();
  evaluate->add_option("--rules", v_rules, "Comma list of k for k-of-k split rule caps")->capture_default_str();
  evaluate->add_option("--folds", v_folds, "Cross-validation folds")->capture_default_str();
  evaluate->add_flag("--time-ordered-folds", v_time_ordered, "Contiguous folds instead of shuffled ones");
  evaluate->add_flag("--blackbox-row", v_blackbox_row, "Add the black-box itself as a control row");
  evaluate->add_option("--json", v_json, "Write the report as JSON");
  evaluate->add_option("--csv", v_csv, "Write the report as CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*demo) return cmd_demo(demo_dir, demo_rows, demo_seed);
    if (*concepts) return cmd_concepts(c_data, c_src, c_out);
    if (*train)
      return cmd_train(t_data, t_tree, t_oracle, t_src, t_mode, t_out, t_dot, t_ascii, t_ascii_out, t_color, t_dump);
    if (*explain) return cmd_explain(e_data, e_tree, e_format, e_out);
    if (*evaluate)
      return cmd_evaluate(v_data, v_tree, v_oracle, v_expert, v_epsilon, v_algorithms, v_rules, v_folds,
                          v_time_ordered, v_blackbox_row, v_json, v_csv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
