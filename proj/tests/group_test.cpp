#include <gtest/gtest.h>

#include <random>
#include <set>
#include <unordered_set>

#include "tarski/group.hpp"
#include "test_util.hpp"

namespace tarski {
namespace {

TEST(Identity, NormalForms) {
  EXPECT_TRUE(identity(GroupSpec::free(2)).nf.empty());
  EXPECT_EQ(identity(GroupSpec::free_abelian(3)).nf, (std::vector<std::int64_t>{0, 0, 0}));
  EXPECT_EQ(identity(GroupSpec::sl2z()).nf, (std::vector<std::int64_t>{1, 0, 0, 1}));
  EXPECT_EQ(identity(GroupSpec::cyclic(5)).nf, (std::vector<std::int64_t>{0}));
}

TEST(Multiply, FreeReduction) {
  const auto F = GroupSpec::free(2);
  const Element x = parse_element(F, "a b");
  const Element y = parse_element(F, "b^-1 a");
  EXPECT_EQ(format_element(F, multiply(F, x, y)), "a a");
}

TEST(Multiply, AbelianIsComponentwise) {
  const auto Z2 = GroupSpec::free_abelian(2);
  EXPECT_EQ(multiply(Z2, {{1, 2}}, {{3, -2}}), (Element{{4, 0}}));
}

TEST(Multiply, MatrixProduct) {
  const auto M = GroupSpec::sl2z();
  const Element p = multiply(M, {{1, 2, 0, 1}}, {{1, 0, 2, 1}});
  EXPECT_EQ(format_element(M, p), "[[5,2],[2,1]]");
}

TEST(Multiply, MatrixOverflowIsAnError) {
  const auto M = GroupSpec::sl2z();
  const std::int64_t big = std::int64_t{1} << 40;
  const Element x = make_element(M, {1, big, 0, 1});
  const Element y = make_element(M, {1, 0, big, 1});
  EXPECT_THROW(multiply(M, x, y), OverflowError);
}

TEST(Invert, Examples) {
  const auto F = GroupSpec::free(2);
  EXPECT_EQ(format_element(F, invert(F, parse_element(F, "a b"))), "b^-1 a^-1");
  const auto C5 = GroupSpec::cyclic(5);
  EXPECT_EQ(invert(C5, {{2}}), (Element{{3}}));
  const auto M = GroupSpec::sl2z();
  EXPECT_EQ(invert(M, {{1, 2, 0, 1}}), (Element{{1, -2, 0, 1}}));
}

TEST(EvaluateWord, Examples) {
  const auto F = GroupSpec::free(2);
  EXPECT_EQ(evaluate_word(F, parse_word(F, "a a^-1")), identity(F));
  const auto Z1 = GroupSpec::free_abelian(1);
  EXPECT_EQ(evaluate_word(Z1, parse_word(Z1, "a a a")), (Element{{3}}));
  const auto M = GroupSpec::sl2z();
  EXPECT_EQ(evaluate_word(M, parse_word(M, "A B")), (Element{{5, 2, 2, 1}}));
}

TEST(EvaluateWord, UnknownSymbolReportsColumn) {
  const auto F = GroupSpec::free(2);
  try {
    parse_word(F, "a  z b");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.column(), 4u);
  }
}

TEST(Properties, AssociativityAndInverses) {
  std::mt19937_64 rng(7);
  for (const auto& spec : testing::all_models()) {
    const Element one = identity(spec);
    for (int i = 0; i < 1000; ++i) {
      const Element x = testing::random_element(spec, rng, spec.model() == Model::Matrix ? 5 : 8);
      const Element y = testing::random_element(spec, rng, spec.model() == Model::Matrix ? 5 : 8);
      const Element z = testing::random_element(spec, rng, spec.model() == Model::Matrix ? 5 : 8);
      ASSERT_EQ(multiply(spec, multiply(spec, x, y), z), multiply(spec, x, multiply(spec, y, z)))
          << spec.to_string();
      ASSERT_EQ(multiply(spec, x, invert(spec, x)), one);
      ASSERT_EQ(multiply(spec, invert(spec, x), x), one);
      ASSERT_EQ(multiply(spec, one, x), x);
      ASSERT_TRUE(is_valid(spec, multiply(spec, x, y)));
    }
  }
}

TEST(Properties, FreeWordsStayReduced) {
  std::mt19937_64 rng(11);
  const auto F = GroupSpec::free(3);
  for (int i = 0; i < 1000; ++i) {
    const Element x = testing::random_element(F, rng, 12);
    for (std::size_t k = 1; k < x.nf.size(); ++k) ASSERT_NE(x.nf[k], -x.nf[k - 1]);
  }
}

TEST(Properties, HashConsistentWithEquality) {
  std::mt19937_64 rng(3);
  const auto F = GroupSpec::free(2);
  std::unordered_set<Element, ElementHash> seen;
  std::set<Element> ordered;
  for (int i = 0; i < 2000; ++i) {
    const Element x = testing::random_element(F, rng, 6);
    // a second route to the same element
    const Element again = multiply(F, multiply(F, x, generator(F, 0)), invert(F, generator(F, 0)));
    ASSERT_EQ(x, again);
    ASSERT_EQ(ElementHash{}(x), ElementHash{}(again));
    seen.insert(x);
    ordered.insert(x);
  }
  EXPECT_EQ(seen.size(), ordered.size());
}

TEST(GroupSpecParse, Models) {
  EXPECT_EQ(parse_group_spec("free:3"), GroupSpec::free(3));
  EXPECT_EQ(parse_group_spec("abelian:2"), GroupSpec::free_abelian(2));
  EXPECT_EQ(parse_group_spec("cyclic:12"), GroupSpec::cyclic(12));
  EXPECT_EQ(parse_group_spec("sl2z"), GroupSpec::sl2z());
  const auto custom = parse_group_spec("sl2z:1,3,0,1,1,0,3,1");
  EXPECT_EQ(custom.matrices().size(), 2u);
  EXPECT_EQ(custom.matrices()[1], (Mat2{1, 0, 3, 1}));
  EXPECT_EQ(parse_group_spec(custom.to_string()), custom);
}

TEST(GroupSpecParse, Errors) {
  EXPECT_THROW(parse_group_spec("free:0"), ParseError);
  EXPECT_THROW(parse_group_spec("free"), ParseError);
  EXPECT_THROW(parse_group_spec("heisenberg:3"), ParseError);
  EXPECT_THROW(parse_group_spec("sl2z:1,1,1,1"), ParseError);  // det 0
  EXPECT_THROW(parse_group_spec("sl2z:1,2,3"), ParseError);
  EXPECT_THROW(GroupSpec::free(2).with_names({"a", "a"}), PreconditionError);
  EXPECT_THROW(GroupSpec::free(2).with_names({"a"}), PreconditionError);
}

TEST(ElementText, RoundTripEveryModel) {
  std::mt19937_64 rng(5);
  for (const auto& spec : testing::all_models()) {
    for (int i = 0; i < 200; ++i) {
      const Element x = testing::random_element(spec, rng, 6);
      ASSERT_EQ(parse_element(spec, format_element(spec, x)), x) << format_element(spec, x);
    }
  }
}

TEST(ElementText, BracketForms) {
  const auto C = GroupSpec::cyclic(12);
  EXPECT_EQ(parse_element(C, "[-1]"), (Element{{11}}));
  EXPECT_EQ(parse_element(C, "a^-1"), (Element{{11}}));
  const auto Z2 = GroupSpec::free_abelian(2);
  EXPECT_EQ(parse_element(Z2, "a b"), (Element{{1, 1}}));
  EXPECT_EQ(parse_element(Z2, "1"), identity(Z2));
  EXPECT_THROW(parse_element(Z2, "[1,2,3]"), ParseError);
  EXPECT_THROW(parse_element(GroupSpec::sl2z(), "[[1,1],[1,1]]"), ParseError);
  EXPECT_THROW(parse_element(GroupSpec::free(2), "[1]"), ParseError);
}

TEST(ElementText, ListsSplitOutsideBrackets) {
  const auto M = GroupSpec::sl2z();
  const auto xs = parse_element_list(M, "1, [[1,2],[0,1]], B");
  ASSERT_EQ(xs.size(), 3u);
  EXPECT_EQ(xs[1], generator(M, 0));
  EXPECT_EQ(xs[2], generator(M, 1));
}

}  // namespace
}  // namespace tarski
