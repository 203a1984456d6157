#include "bft/pdt.hpp"

#include <gtest/gtest.h>

#include <map>

#include "bft/oracle.hpp"

namespace bft {
namespace {

const char* kMaj3Tree = "n=3\n(Q 1,2 (Q 1 + -) (Q 3 + -))\n";

ParityDecisionTree maj3_tree() { return parse_tree(kMaj3Tree); }

std::map<std::string, LeafSummary> by_id(const ParityDecisionTree& t) {
  std::map<std::string, LeafSummary> out;
  for (auto& leaf : leaf_summaries(t)) out.emplace(leaf.leaf_id, leaf);
  return out;
}

TEST(PdtParse, Maj3Tree) {
  const auto t = maj3_tree();
  EXPECT_EQ(t.arity(), 3u);
  EXPECT_EQ(t.root().mask, 0b011u);
  EXPECT_EQ(to_text(t), kMaj3Tree);
}

TEST(PdtParse, SingleLeafAndRedundantQuery) {
  const auto leaf = parse_tree("n=1\n+");
  EXPECT_TRUE(leaf.root().is_leaf());
  EXPECT_EQ(depth(leaf), 0u);
  const auto redundant = parse_tree(1, "(Q 1 + +)");
  EXPECT_TRUE(computes(redundant, constant(1, 1)));
}

TEST(PdtParse, CanonicalForm) {
  const auto t = parse_tree("  n = 3 \n ( Q 2 , 1\n(Q 1 + -)(Q 3 + -) ) ");
  EXPECT_EQ(tree_expression(t), "(Q 1,2 (Q 1 + -) (Q 3 + -))");
  EXPECT_EQ(t, maj3_tree());
}

TEST(PdtParse, Errors) {
  EXPECT_THROW(parse_tree("n=3\n(Q + -)"), ParseError);
  EXPECT_THROW(parse_tree("n=3\n(Q 4 + -)"), ParseError);
  EXPECT_THROW(parse_tree("n=3\n(Q 0 + -)"), ParseError);
  EXPECT_THROW(parse_tree("n=3\n(Q 1,1 + -)"), ParseError);
  EXPECT_THROW(parse_tree("n=3\n(Q 1 + -"), ParseError);
  EXPECT_THROW(parse_tree("n=3\n(Q 1 + -) +"), ParseError);
  EXPECT_THROW(parse_tree("(Q 1 + -)"), ParseError);
  try {
    parse_tree("n=3\n(Q 1 + x)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position(), 11u);
  }
}

TEST(PdtParse, RoundTripOnRandomTrees) {
  Rng rng(31);
  for (int trial = 0; trial < 500; ++trial) {
    const auto t = oracle::random_pdt(static_cast<unsigned>(rng.between(1, 10)),
                                      static_cast<unsigned>(rng.between(0, 5)), rng);
    EXPECT_EQ(parse_tree(to_text(t)), t);
  }
}

TEST(PdtEval, Maj3Tree) {
  const auto t = maj3_tree();
  // (x1, x2, x3) = (+1, +1, -1): chi_12 = +1, then x1 = +1.
  auto r = eval(t, 0b100);
  EXPECT_EQ(r.label, 1);
  EXPECT_EQ(r.leaf_id, "++");
  // (-1, +1, +1): chi_12 = -1, then x3 = +1.
  r = eval(t, 0b001);
  EXPECT_EQ(r.label, 1);
  EXPECT_EQ(r.leaf_id, "-+");
  const auto leaf = parse_tree("n=2\n-");
  for (std::uint64_t x = 0; x < 4; ++x) EXPECT_EQ(eval(leaf, x).label, -1);
}

TEST(PdtComputes, Examples) {
  EXPECT_TRUE(computes(maj3_tree(), maj3()));
  const auto witness = find_disagreement(maj3_tree(), parity(3));
  ASSERT_TRUE(witness.has_value());
  EXPECT_NE(maj3().evaluate(*witness), parity(3).evaluate(*witness));
  EXPECT_TRUE(computes(parse_tree("n=2\n-"), constant(2, -1)));
  EXPECT_THROW(computes(maj3_tree(), parity(2)), std::invalid_argument);
}

TEST(PdtDepth, Examples) {
  EXPECT_EQ(depth(maj3_tree()), 2u);
  EXPECT_EQ(average_depth(maj3_tree()), 2);
  EXPECT_EQ(depth(parse_tree("n=1\n+")), 0u);
  EXPECT_EQ(average_depth(parse_tree("n=1\n+")), 0);
  const auto t = parse_tree("n=2\n(Q 1 + (Q 2 + -))");
  EXPECT_EQ(depth(t), 2u);
  EXPECT_EQ(average_depth(t), Rational(3, 2));
}

TEST(PdtLeaves, Maj3Vectors) {
  const auto leaves = by_id(maj3_tree());
  const std::map<std::string, std::vector<int>> expected{
      {"++", {1, 1, 0}}, {"+-", {-1, -1, 0}}, {"-+", {0, 0, 1}}, {"--", {0, 0, -1}}};
  ASSERT_EQ(leaves.size(), 4u);
  for (const auto& [id, v] : expected) {
    EXPECT_EQ(leaves.at(id).vector, v) << id;
    EXPECT_EQ(leaves.at(id).mass, Rational(1, 4));
    EXPECT_EQ(leaves.at(id).path_length, 2u);
  }
}

TEST(PdtLeaves, SingleParityFixesNothing) {
  for (const auto& leaf : leaf_summaries(parse_tree("n=3\n(Q 1,2 + -)"))) {
    EXPECT_EQ(leaf.vector, (std::vector<int>{0, 0, 0}));
    EXPECT_EQ(leaf.mass, Rational(1, 2));
  }
}

TEST(PdtLeaves, ContradictoryBranchIsDead) {
  const auto leaves = by_id(parse_tree("n=1\n(Q 1 (Q 1 + -) -)"));
  EXPECT_EQ(leaves.at("+-").mass, 0);
  EXPECT_FALSE(leaves.at("+-").live());
  EXPECT_EQ(leaves.at("++").mass, Rational(1, 2));
}

TEST(PdtLeaves, MassesSumToOneAndMatchEnumeration) {
  Rng rng(32);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = static_cast<unsigned>(rng.between(1, 4));
    const auto t = oracle::random_pdt(n, static_cast<unsigned>(rng.between(0, 5)), rng);
    Rational total = 0;
    std::map<std::string, oracle::LeafCensus> census;
    for (auto& c : oracle::leaf_census(t)) census.emplace(c.leaf_id, c);
    for (const auto& leaf : leaf_summaries(t)) {
      total += leaf.mass;
      const auto it = census.find(leaf.leaf_id);
      const std::uint64_t reached = it == census.end() ? 0 : it->second.points;
      ASSERT_EQ(leaf.mass, Rational(reached, std::uint64_t{1} << n));
      for (unsigned i = 0; i < n && reached > 0; ++i) {
        ASSERT_EQ(Rational(leaf.vector[i]), Rational(it->second.coordinate_totals[i], reached));
      }
    }
    EXPECT_EQ(total, 1);
  }
}

TEST(PdtMoments, SecondMoment) {
  EXPECT_EQ(second_moment(maj3_tree()), Rational(5, 2));
  EXPECT_EQ(second_moment(parse_tree("n=3\n(Q 1,2 + -)")), 0);
  EXPECT_EQ(second_moment(parse_tree("n=3\n(Q 1,2 (Q 1 + -) (Q 1 + -))")), 2);
}

TEST(PdtMoments, FirstAbsoluteMoment) {
  EXPECT_EQ(first_abs_moment(maj3_tree()), Rational(3, 2));
  EXPECT_EQ(first_abs_moment(parse_tree("n=2\n+")), 0);
  EXPECT_EQ(first_abs_moment(parse_tree("n=1\n(Q 1 + -)")), 1);
}

TEST(PdtCorrelation, Examples) {
  // On the chi_12 = -1 branch x1 != x2 is fixed while x1 and x2 are free.
  const auto m = find_correlation(maj3_tree());
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->leaf_id, "-+");
  EXPECT_EQ(m->pair, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_TRUE(is_correlation_free(parse_tree("n=3\n(Q 1,2 (Q 1 + -) (Q 1 (Q 3 + -) (Q 3 + -)))")));
  const auto w = find_correlation(parse_tree("n=3\n(Q 1,2 + -)"));
  ASSERT_TRUE(w.has_value());
  EXPECT_EQ(w->pair, (std::pair<std::size_t, std::size_t>{0, 1}));
  EXPECT_EQ(w->leaf_id, "+");
}

TEST(PdtCorrelation, PlainTreesAreCorrelationFree) {
  Rng rng(33);
  for (int trial = 0; trial < 300; ++trial) {
    const auto t = oracle::random_pdt(static_cast<unsigned>(rng.between(1, 8)),
                                      static_cast<unsigned>(rng.between(0, 5)), rng, /*plain=*/true);
    EXPECT_TRUE(is_correlation_free(t));
    EXPECT_LE(second_moment(t), depth(t));
  }
}

TEST(PdtRefine, ExtendsCorrelatedLeaves) {
  const auto t = parse_tree("n=3\n(Q 1,2 + -)");
  const auto r = refine_correlation_free(t);
  EXPECT_EQ(tree_expression(r), "(Q 1,2 (Q 1 + +) (Q 1 - -))");
  EXPECT_EQ(depth(r), 2u);
  EXPECT_EQ(second_moment(t), 0);
  EXPECT_EQ(second_moment(r), 2);
}

TEST(PdtRefine, Maj3Tree) {
  const auto r = refine_correlation_free(maj3_tree());
  EXPECT_EQ(tree_expression(r), "(Q 1,2 (Q 1 + -) (Q 3 (Q 1 + +) (Q 1 - -)))");
  EXPECT_EQ(depth(r), 3u);
  // The new queries fix x1 and x2 with opposite signs, so nothing is added.
  EXPECT_EQ(second_moment(r), Rational(5, 2));
  EXPECT_LE(second_moment(r), depth(r));
}

TEST(PdtRefine, FixpointOnCorrelationFreeInput) {
  const auto cf = parse_tree("n=3\n(Q 1,2 (Q 1 + -) (Q 1 (Q 3 + -) (Q 3 + -)))");
  EXPECT_EQ(refine_correlation_free(cf), cf);
  const auto leaf = parse_tree("n=2\n-");
  EXPECT_EQ(refine_correlation_free(leaf), leaf);
}

TEST(PdtRefine, RepeatsWhenQueriesExposeNewPairs) {
  // After querying x1 at leaf "++", x3 xor x4 becomes fixed.
  const auto t = parse_tree("n=4\n(Q 1,2 (Q 2,3,4 + -) -)");
  const auto r = refine_correlation_free(t);
  EXPECT_TRUE(is_correlation_free(r));
  EXPECT_LE(depth(r), 2 * depth(t));
  EXPECT_EQ(induced_function(r), induced_function(t));
  EXPECT_EQ(depth(r), 4u);
}

TEST(PdtRefine, PropertiesOnRandomTrees) {
  Rng rng(34);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto t = oracle::random_pdt(static_cast<unsigned>(rng.between(1, 8)),
                                      static_cast<unsigned>(rng.between(0, 5)), rng);
    const auto r = refine_correlation_free(t);
    ASSERT_TRUE(is_correlation_free(r)) << to_text(t);
    ASSERT_LE(depth(r), 2 * depth(t)) << to_text(t);
    ASSERT_EQ(induced_function(r), induced_function(t)) << to_text(t);
    ASSERT_GE(second_moment(r), second_moment(t));
    ASSERT_LE(second_moment(r), depth(r));
  }
}

TEST(PdtSplit, Examples) {
  const auto t = split_leaf(parse_tree("n=1\n+"), "", 1);
  EXPECT_EQ(tree_expression(t), "(Q 1 + +)");
  EXPECT_THROW(split_leaf(maj3_tree(), "+", 1), std::invalid_argument);
  EXPECT_THROW(split_leaf(maj3_tree(), "++", 0), std::invalid_argument);
  EXPECT_THROW(split_leaf(maj3_tree(), "++", 0b1000), std::invalid_argument);
  const auto s = split_leaf(maj3_tree(), "-+", 0b011);
  EXPECT_EQ(induced_function(s), maj3());
}

TEST(PdtSplit, IncreaseEqualsMassTimesDeltaSquared) {
  // Leaf "-" of (Q 1,2 + -) has x1 = -x2; querying x1 fixes both with
  // u = (1, -1, 0) on the + side, so delta = 0 and nothing changes.
  const auto t = parse_tree("n=3\n(Q 1,2 + -)");
  EXPECT_EQ(second_moment(split_leaf(t, "-", 0b001)), second_moment(t));
  // Leaf "+" has x1 = x2; delta = 2, mass 1/2, increase 2.
  EXPECT_EQ(second_moment(split_leaf(t, "+", 0b001)) - second_moment(t), 2);

  Rng rng(35);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = static_cast<unsigned>(rng.between(1, 8));
    const auto tree = oracle::random_pdt(n, static_cast<unsigned>(rng.between(0, 4)), rng);
    const auto leaves = leaf_summaries(tree);
    const auto& v = leaves[rng.below(leaves.size())];
    const Mask mask = rng.between(1, gf2::column_mask(n));
    const auto split = split_leaf(tree, v.leaf_id, mask);
    const auto children = by_id(split);
    const auto& u = children.at(v.leaf_id + "+");
    int delta = 0;
    if (u.live()) {
      for (const auto& [col, bit] : u.summary.forced) {
        if (!v.summary.forced.contains(col)) delta += u.vector[col];
      }
    }
    const Rational increase = second_moment(split) - second_moment(tree);
    ASSERT_GE(increase, 0);
    ASSERT_EQ(increase, v.mass * (delta * delta)) << to_text(tree) << v.leaf_id << " " << mask_string(mask);
  }
}

}  // namespace
}  // namespace bft
