#include <algorithm>

#include <gtest/gtest.h>

#include "concept_tree/fixtures.hpp"
#include "concept_tree/sampler.hpp"

using namespace ctree;

TEST(Bandwidth, StandardNormalSample) {
  Rng rng(1);
  std::vector<double> v(100);
  for (auto& x : v) x = rng.normal();
  const double h = silverman_bandwidth(v);
  EXPECT_GE(h, 0.2);
  EXPECT_LE(h, 0.6);
}

TEST(Bandwidth, ConstantFeatureNeverMoves) {
  const auto d = Dataset::from_columns({"k", "x"}, {{4, 4, 4, 4}, {1, 2, 3, 9}});
  const auto model = fit_marginals(d);
  ASSERT_EQ(model.size(), 2u);
  EXPECT_EQ(model.features[0].bandwidth, 0.0);
  const auto draw = draw_sample(model, {}, 30, 5);
  for (std::size_t i = 0; i < draw.rows; ++i) EXPECT_EQ(draw.values[i * 2], 4.0);
}

TEST(Bandwidth, ZeroIqrFallsBackToSd) {
  std::vector<double> v(20, 1.0);
  v[0] = 0.0;
  v[19] = 5.0;
  EXPECT_GT(silverman_bandwidth(v), 0.0);
}

TEST(Draw, EmptyCountAndVacuousConstraint) {
  const auto model = fit_marginals(fixtures::linear_pair(50, 2));
  EXPECT_EQ(draw_sample(model, {}, 0, 1).rows, 0u);
  const auto d = draw_sample(model, {}, 50, 1);
  EXPECT_EQ(d.rows, 50u);
  EXPECT_EQ(d.proposals, 50u);
}

TEST(Draw, MedianLiteralAcceptanceNearHalf) {
  const auto data = fixtures::latent_factors(400, 2, 2, 4);
  auto col = data.column(0);
  std::nth_element(col.begin(), col.begin() + 200, col.end());
  const double q = col[200];
  const auto model = fit_marginals(data);
  PathConstraint c;
  c = c.extended({1, {{0, Op::gt, q}}, std::nullopt}, true);
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    const auto draw = draw_sample(model, c, 20, seed);
    ASSERT_EQ(draw.rows, 20u);
    for (std::size_t i = 0; i < 20; ++i) EXPECT_GT(draw.values[i * 2], q);
  }
}

TEST(Draw, DeterministicPerSeed) {
  const auto model = fit_marginals(fixtures::linear_pair(50, 2));
  EXPECT_EQ(draw_sample(model, {}, 10, 7).values, draw_sample(model, {}, 10, 7).values);
  EXPECT_NE(draw_sample(model, {}, 10, 7).values, draw_sample(model, {}, 10, 8).values);
}

TEST(Draw, ImpossibleConstraintExhausts) {
  const auto model = fit_marginals(Dataset::from_columns({"k"}, {{1, 1, 1}}));
  PathConstraint c;
  c = c.extended({1, {{0, Op::gt, 2.0}}, std::nullopt}, true);
  try {
    draw_sample(model, c, 3, 0);
    ADD_FAILURE();
  } catch (const SamplingExhausted& e) {
    EXPECT_EQ(e.code(), ErrorCode::sampling_exhausted);
    EXPECT_EQ(e.drawn(), 0u);
    EXPECT_EQ(e.requested(), 3u);
  }
}

TEST(Draw, FalseOutcomeIsHonoured) {
  const auto data = fixtures::linear_pair(100, 3);
  const auto model = fit_marginals(data);
  const MOfNRule r{1, {{0, Op::gt, 0.0}, {2, Op::gt, 0.0}}, std::nullopt};
  PathConstraint c;
  c = c.extended(r, false);
  const auto d = draw_dataset(model, data.names(), c, 40, 9);
  ASSERT_EQ(d.n_rows(), 40u);
  for (std::size_t i = 0; i < d.n_rows(); ++i) EXPECT_FALSE(r.eval(d.row(i)));
}
