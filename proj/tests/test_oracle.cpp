#include <gtest/gtest.h>

#include "concept_tree/fixtures.hpp"
#include "concept_tree/oracle.hpp"
#include "support.hpp"

using namespace ctree;
using testing_support::ScratchDir;

namespace {

Dataset strip(Dataset d) {
  d.clear_labels();
  return d;
}

}  // namespace

TEST(FixedLabels, ReturnsBoundLabels) {
  const auto d = Dataset::from_columns({"a"}, {{0.5, -1.0}}, std::vector<Label>{1, 0});
  const FixedLabelsOracle o(d);
  EXPECT_EQ(o.predict_batch(strip(d)), (std::vector<Label>{1, 0}));
  const auto unknown = Dataset::from_columns({"a"}, {{3.0}});
  EXPECT_THROW(o.predict_batch(unknown), Error);
}

TEST(Oracle, SchemaIsChecked) {
  const auto d = Dataset::from_columns({"a"}, {{0.5, -1.0}}, std::vector<Label>{1, 0});
  const FixedLabelsOracle o(d);
  try {
    o.predict_batch(Dataset::from_columns({"b"}, {{0.5}}));
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::schema_mismatch);
  }
}

TEST(Builtin, FitsSeparableTrainingRowsExactly) {
  Rng rng(4);
  std::vector<std::vector<double>> cols(2, std::vector<double>(120));
  std::vector<Label> y(120);
  for (std::size_t i = 0; i < 120; ++i) {
    cols[0][i] = rng.normal();
    cols[1][i] = rng.normal();
    y[i] = cols[0][i] + 0.5 * cols[1][i] > 0;
  }
  const auto d = Dataset::from_columns({"a", "b"}, cols, y);
  const auto o = train_builtin(d, {}, 1);
  EXPECT_EQ(o->predict_batch(strip(d)), y);

  std::vector<std::size_t> all(d.n_rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto single = FullTree::fit(d, all);
  for (std::size_t i = 0; i < d.n_rows(); ++i) EXPECT_EQ(single.predict(d.row(i)), y[i]);
}

TEST(Builtin, SingleEstimatorWithoutBootstrapIsOneTree) {
  const auto fx = fixtures::planted_rule(150, 3);
  const auto o = train_builtin(fx.data, {1, false}, 9);
  std::vector<std::size_t> all(fx.data.n_rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  const auto single = FullTree::fit(fx.data, all);
  const auto probe = fixtures::planted_rule(100, 99).data;
  const auto preds = o->predict_batch(strip(probe));
  for (std::size_t i = 0; i < probe.n_rows(); ++i) EXPECT_EQ(preds[i], single.predict(probe.row(i)));
}

TEST(Builtin, BeatsMajorityOutOfFold) {
  const auto train = fixtures::planted_rule(400, 5).data;
  const auto test = fixtures::planted_rule(300, 6).data;
  const auto o = train_builtin(train, {}, 2);
  const auto preds = o->predict_batch(strip(test));
  std::size_t right = 0, ones = 0;
  for (std::size_t i = 0; i < test.n_rows(); ++i) {
    right += preds[i] == test.label(i);
    ones += test.label(i);
  }
  const double majority = std::max(ones, test.n_rows() - ones) / static_cast<double>(test.n_rows());
  EXPECT_GT(right / static_cast<double>(test.n_rows()), majority);
}

TEST(Builtin, DeterministicPerSeed) {
  const auto fx = fixtures::planted_rule(200, 3);
  const auto probe = strip(fixtures::planted_rule(100, 4).data);
  EXPECT_EQ(train_builtin(fx.data, {}, 5)->predict_batch(probe), train_builtin(fx.data, {}, 5)->predict_batch(probe));
}

TEST(External, ConstantAnswer) {
  const auto d = fixtures::linear_pair(5, 1);
  ExternalProcessOracle o("awk 'NR > 1 { print 1 }'", d.names());
  EXPECT_EQ(o.predict_batch(d), (std::vector<Label>(5, 1)));
  EXPECT_EQ(o.process_calls(), 1u);
  EXPECT_EQ(o.predict_batch(d), (std::vector<Label>(5, 1)));
  EXPECT_EQ(o.process_calls(), 1u);
}

TEST(External, ReadsHeaderedCsvAndCaches) {
  ScratchDir dir("oracle");
  const auto d = fixtures::linear_pair(20, 2);
  ExternalProcessOracle o("awk -F, 'NR > 1 { print ($1 > 0) ? 1 : 0 }'", d.names());
  const auto labels = o.predict_batch(d);
  for (std::size_t i = 0; i < d.n_rows(); ++i) EXPECT_EQ(labels[i], d.at(i, 0) > 0 ? 1 : 0);
  o.save_cache(dir.file("cache.csv"));

  ExternalProcessOracle fresh("exit 1", d.names());
  fresh.load_cache(dir.file("cache.csv"));
  EXPECT_EQ(fresh.predict_batch(d), labels);
  EXPECT_EQ(fresh.process_calls(), 0u);
}

TEST(External, FailuresAreReported) {
  const auto d = fixtures::linear_pair(3, 1);
  auto code = [&](const std::string& cmd) {
    try {
      ExternalProcessOracle(cmd, d.names()).predict_batch(d);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::io;
  };
  EXPECT_EQ(code("exit 3"), ErrorCode::process_failure);
  EXPECT_EQ(code("echo 1"), ErrorCode::process_failure);
  EXPECT_EQ(code("awk 'NR > 1 { print 7 }'"), ErrorCode::process_failure);
}
