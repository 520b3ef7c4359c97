#include <cmath>
#include <limits>
#include <set>

#include <gtest/gtest.h>

#include "concept_tree/dataset.hpp"
#include "support.hpp"

using namespace ctree;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected a ctree::Error";
  return ErrorCode::io;
}

}  // namespace

TEST(Csv, ReadsPlainTable) {
  const auto d = parse_csv("a,b\n1,2\n3,4\n5,6\n");
  EXPECT_EQ(d.n_rows(), 3u);
  EXPECT_EQ(d.names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_DOUBLE_EQ(d.at(2, 1), 6.0);
  EXPECT_FALSE(d.has_labels());
}

TEST(Csv, DuplicateHeaderIsRejected) {
  EXPECT_EQ(code_of([] { parse_csv("x,x\n1,2\n"); }), ErrorCode::duplicate_column);
}

TEST(Csv, NonNumericCellIsParseError) {
  EXPECT_EQ(code_of([] { parse_csv("a,b\n1,zz\n"); }), ErrorCode::parse);
}

TEST(Csv, QuotedFieldsAndCustomDelimiter) {
  CsvOptions o;
  o.delimiter = ';';
  const auto d = parse_csv("\"first;col\";b\n1;\"2\"\n", o);
  EXPECT_EQ(d.name(0), "first;col");
  EXPECT_DOUBLE_EQ(d.at(0, 1), 2.0);
}

TEST(Csv, NonFinitePolicy) {
  const std::string text = "a,b\n1,2\n,3\n4,inf\n5,6\n";
  EXPECT_EQ(code_of([&] { parse_csv(text); }), ErrorCode::non_finite);
  CsvOptions o;
  o.non_finite = NonFinitePolicy::drop_rows;
  const auto d = parse_csv(text, o);
  ASSERT_EQ(d.n_rows(), 2u);
  EXPECT_DOUBLE_EQ(d.at(1, 0), 5.0);
}

TEST(Csv, LabelColumnIsExtracted) {
  CsvOptions o;
  o.label_column = "y";
  const auto d = parse_csv("a,y\n1,0\n2,1\n", o);
  EXPECT_EQ(d.names(), std::vector<std::string>{"a"});
  EXPECT_EQ(std::vector<Label>(d.labels().begin(), d.labels().end()), (std::vector<Label>{0, 1}));
  EXPECT_EQ(code_of([&] { parse_csv("a,y\n1,2\n", o); }), ErrorCode::parse);
}

TEST(Csv, RoundTripKeepsValuesExactly) {
  const auto d = Dataset::from_columns({"a", "b"}, {{0.1, 1e-300, -3.25}, {1.0 / 3.0, 2.0, 7.0}}, std::vector<Label>{1, 0, 1});
  std::ostringstream out;
  write_csv(out, d);
  CsvOptions o;
  o.label_column = "label";
  EXPECT_EQ(parse_csv(out.str(), o), d);
}

TEST(Transforms, PercentChange) {
  const std::vector<double> s{100, 110, 99};
  const auto t = apply_transform(TransformKind::percent_change, s);
  ASSERT_EQ(t.size(), 2u);
  EXPECT_NEAR(t[0], 110.0 / 100.0 - 1.0, 1e-15);
  EXPECT_NEAR(t[1], 99.0 / 110.0 - 1.0, 1e-15);
  EXPECT_NEAR(t[0], 0.10, 1e-12);
  EXPECT_NEAR(t[1], -0.10, 1e-12);
}

TEST(Transforms, FirstAndLogDifference) {
  const std::vector<double> s{1, 4, 2};
  EXPECT_EQ(apply_transform(TransformKind::first_difference, s), (std::vector<double>{3, -2}));
  const auto l = apply_transform(TransformKind::log_difference, s);
  EXPECT_NEAR(l[0], std::log(4.0), 1e-15);
  EXPECT_NEAR(l[1], std::log(0.5), 1e-15);
  const std::vector<double> neg{1, -1};
  EXPECT_TRUE(std::isnan(apply_transform(TransformKind::log_difference, neg)[0]));
  const std::vector<double> zero{0, 1};
  EXPECT_TRUE(std::isinf(apply_transform(TransformKind::percent_change, zero)[0]));
}

TEST(Transforms, SchemaShortensAllColumns) {
  CsvOptions o;
  o.transforms = parse_transform_schema(nlohmann::json::parse(R"({"p": "percent_change"})"));
  const auto d = parse_csv("p,q\n100,1\n110,2\n99,3\n", o);
  ASSERT_EQ(d.n_rows(), 2u);
  EXPECT_NEAR(d.at(0, 0), 0.1, 1e-12);
  EXPECT_DOUBLE_EQ(d.at(0, 1), 2.0);
  EXPECT_DOUBLE_EQ(d.at(1, 1), 3.0);
  o.transforms = parse_transform_schema(nlohmann::json::parse(R"({"q": "log_difference"})"));
  EXPECT_EQ(code_of([&] { parse_csv("q\n1\n-1\n2\n", o); }), ErrorCode::non_finite);
  o.non_finite = NonFinitePolicy::drop_rows;
  EXPECT_EQ(parse_csv("q\n1\n-1\n2\n", o).n_rows(), 0u);
  EXPECT_EQ(parse_csv("q\n1\n2\n4\n", o).n_rows(), 2u);
  o.transforms = parse_transform_schema(nlohmann::json::parse(R"({"nope": "first_difference"})"));
  EXPECT_EQ(code_of([&] { parse_csv("p\n1\n2\n", o); }), ErrorCode::unknown_column);
}

TEST(DirectionTarget, LowerThanPreviousIsZero) {
  auto labels_for = [](std::vector<double> s) {
    const auto d = Dataset::from_columns({"t", "f"}, {s, std::vector<double>(s.size(), 0.0)});
    const auto out = build_direction_target(d, "t");
    EXPECT_EQ(out.names(), std::vector<std::string>{"f"});
    return std::vector<Label>(out.labels().begin(), out.labels().end());
  };
  EXPECT_EQ(labels_for({5.0, 4.8, 4.9}), (std::vector<Label>{0, 1}));
  EXPECT_EQ(labels_for({3, 3, 3}), (std::vector<Label>{1, 1}));
  EXPECT_EQ(labels_for({1, 2, 3, 4}), (std::vector<Label>{1, 1, 1}));
}

TEST(DirectionTarget, FeaturesAlignWithLaterRow) {
  const auto d = Dataset::from_columns({"t", "f"}, {{1, 0, 2}, {10, 20, 30}});
  const auto out = build_direction_target(d, "t");
  EXPECT_EQ(out.column(0), (std::vector<double>{20, 30}));
}

TEST(Folds, RemainderGoesToFirstFolds) {
  EXPECT_EQ(make_folds(11, 5, 3).fold_sizes(), (std::vector<std::size_t>{3, 2, 2, 2, 2}));
  EXPECT_EQ(make_folds(10, 5, 3).fold_sizes(), (std::vector<std::size_t>(5, 2)));
  EXPECT_EQ(make_folds(11, 5, 3, true).fold_sizes(), (std::vector<std::size_t>{3, 2, 2, 2, 2}));
}

TEST(Folds, DeterministicAndPartitioning) {
  const auto a = make_folds(97, 5, 42);
  EXPECT_EQ(a.assignments, make_folds(97, 5, 42).assignments);
  EXPECT_NE(a.assignments, make_folds(97, 5, 43).assignments);
  std::set<std::size_t> seen;
  for (std::size_t f = 0; f < 5; ++f) {
    const auto test = a.test_rows(f);
    EXPECT_EQ(test.size() + a.train_rows(f).size(), 97u);
    seen.insert(test.begin(), test.end());
  }
  EXPECT_EQ(seen.size(), 97u);
}

TEST(Folds, TimeOrderedBlocksAreContiguous) {
  const auto p = make_folds(10, 3, 0, true);
  EXPECT_EQ(p.assignments, (std::vector<std::size_t>{0, 0, 0, 0, 1, 1, 1, 2, 2, 2}));
}

TEST(Folds, InvalidCounts) {
  EXPECT_EQ(code_of([] { make_folds(4, 5, 0); }), ErrorCode::invalid_argument);
  EXPECT_EQ(code_of([] { make_folds(4, 1, 0); }), ErrorCode::invalid_argument);
}

TEST(DatasetOps, SelectAndDropColumns) {
  const auto d = Dataset::from_columns({"a", "b", "c"}, {{1, 2, 3}, {4, 5, 6}, {7, 8, 9}}, std::vector<Label>{0, 1, 0});
  const auto s = d.select_rows(std::vector<std::size_t>{2, 0});
  EXPECT_EQ(s.column(1), (std::vector<double>{6, 4}));
  EXPECT_EQ(s.label(0), 0);
  const auto w = d.without_column(d.index_of("b"));
  EXPECT_EQ(w.names(), (std::vector<std::string>{"a", "c"}));
  EXPECT_EQ(code_of([&] { d.index_of("zz"); }), ErrorCode::unknown_column);
  Dataset e({"a"});
  const std::vector<double> bad{std::numeric_limits<double>::quiet_NaN()};
  EXPECT_EQ(code_of([&] { e.add_row(bad); }), ErrorCode::non_finite);
}
