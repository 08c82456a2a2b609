#include "qapga/instance.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <string>

#include "test_support.hpp"

namespace qapga {
namespace {

Instance three_by_three() {
  return Instance("tri", {{0, 1, 2}, {1, 0, 3}, {2, 3, 0}},
                  {{0, 4, 5}, {4, 0, 6}, {5, 6, 0}});
}

TEST(ParseQaplib, SmallestInstance) {
  const auto inst = parse_qaplib("1\n0\n0");
  EXPECT_EQ(inst.size(), 1u);
  EXPECT_EQ(inst.flow(), SquareMatrix({{0}}));
  EXPECT_EQ(inst.dist(), SquareMatrix({{0}}));
}

TEST(ParseQaplib, FillsRowMajorFlowThenDistance) {
  const auto inst = parse_qaplib("2\n0 1\n1 0\n0 3\n3 0");
  EXPECT_EQ(inst.flow(), SquareMatrix({{0, 1}, {1, 0}}));
  EXPECT_EQ(inst.dist(), SquareMatrix({{0, 3}, {3, 0}}));

  const auto asym = parse_qaplib("2 1 2 3 4 5 6 7 8");
  EXPECT_EQ(asym.flow(), SquareMatrix({{1, 2}, {3, 4}}));
  EXPECT_EQ(asym.dist(), SquareMatrix({{5, 6}, {7, 8}}));
}

TEST(ParseQaplib, ToleratesArbitraryWhitespace) {
  const auto inst = parse_qaplib("\n\n  2\t\n\n0   1\r\n1\n0\n\n\n0 3 3\n 0 \n\n");
  EXPECT_EQ(inst.dist(), SquareMatrix({{0, 3}, {3, 0}}));
}

TEST(ParseQaplib, TruncatedInputReportsCount) {
  try {
    parse_qaplib("2\n0 1\n1 0\n0 3");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("expected 8 matrix entries, found 6"),
              std::string::npos)
        << e.what();
  }
}

TEST(ParseQaplib, MalformedTokenHasPosition) {
  try {
    parse_qaplib("2\n0 1\n1 x\n0 3 3 0");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position().line, 3u);
    EXPECT_EQ(e.position().column, 3u);
  }
  EXPECT_THROW(parse_qaplib("2\n0 1\n1 0.5\n0 3 3 0"), ParseError);
  EXPECT_THROW(parse_qaplib("abc"), ParseError);
}

TEST(ParseQaplib, RejectsBadSizesAndEntries) {
  EXPECT_THROW(parse_qaplib(""), ParseError);
  EXPECT_THROW(parse_qaplib("   \n"), ParseError);
  EXPECT_THROW(parse_qaplib("-2\n0 0 0 0 0 0 0 0"), ParseError);
  EXPECT_THROW(parse_qaplib("0"), ParseError);
  EXPECT_THROW(parse_qaplib("2\n0 -1\n1 0\n0 3\n3 0"), ParseError);
  EXPECT_THROW(parse_qaplib("99999999999999999999 1"), ParseError);
}

TEST(ParseQaplib, RejectsTrailingGarbage) {
  try {
    parse_qaplib("1\n0\n0\n7");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.position().line, 4u);
  }
  EXPECT_THROW(parse_qaplib("1\n0\n0 junk"), ParseError);
}

TEST(ParseQaplib, RoundTripsThroughCanonicalWriter) {
  Rng rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = 1 + rng.below(9);
    const auto inst = testing::arbitrary_instance(n, 1000, rng);
    const auto text = render_qaplib(inst);
    EXPECT_EQ(parse_qaplib(text, inst.name()), inst);
  }
}

TEST(ParseQaplib, CanonicalLayout) {
  const auto inst = parse_qaplib("2 0 1 1 0 0 3 3 0");
  EXPECT_EQ(render_qaplib(inst), "2\n\n0 1\n1 0\n\n0 3\n3 0\n");
}

TEST(InstanceType, RejectsMismatchedMatrices) {
  EXPECT_THROW(Instance("x", SquareMatrix({{0, 1}, {1, 0}}), SquareMatrix({{0}})),
               DataError);
  EXPECT_THROW(Instance("x", SquareMatrix(), SquareMatrix()), DataError);
  EXPECT_THROW(Instance("x", SquareMatrix({{-1}}), SquareMatrix({{0}})),
               DataError);
}

TEST(PermutationType, EnforcesBijection) {
  EXPECT_NO_THROW(Permutation({2, 0, 1}));
  EXPECT_THROW(Permutation({0, 0, 1}), DataError);
  EXPECT_THROW(Permutation({0, 3, 1}), DataError);
  EXPECT_THROW(Permutation({-1, 0}), DataError);
  const int labels[] = {2, 4, 3, 1, 5};
  const auto p = Permutation::from_one_based(labels);
  EXPECT_EQ(p, Permutation({1, 3, 2, 0, 4}));
  EXPECT_EQ(p.one_based(), std::vector<int>({2, 4, 3, 1, 5}));
}

TEST(EvaluateCost, ZeroFlowIsZero) {
  Rng rng(3);
  const Instance inst("z", SquareMatrix(4), SquareMatrix({{0, 9, 9, 9},
                                                         {9, 0, 9, 9},
                                                         {9, 9, 0, 9},
                                                         {9, 9, 9, 0}}));
  for (int t = 0; t < 10; ++t) {
    EXPECT_EQ(evaluate_cost(inst, testing::shuffled(4, rng)), 0);
  }
}

TEST(EvaluateCost, HandComputedThreeByThree) {
  EXPECT_EQ(evaluate_cost(three_by_three(), Permutation::identity(3)), 64);
  EXPECT_EQ(evaluate_cost(three_by_three(), Permutation({2, 1, 0})), 56);
}

TEST(EvaluateCost, SingleFacilityIsDiagonalProduct) {
  const Instance inst("one", {{7}}, {{6}});
  EXPECT_EQ(evaluate_cost(inst, Permutation::identity(1)), 42);
}

TEST(EvaluateCost, DiagonalTermsCount) {
  const Instance inst("diag", {{2, 0}, {0, 3}}, {{5, 0}, {0, 7}});
  EXPECT_EQ(evaluate_cost(inst, Permutation::identity(2)), 2 * 5 + 3 * 7);
  EXPECT_EQ(evaluate_cost(inst, Permutation({1, 0})), 2 * 7 + 3 * 5);
}

TEST(EvaluateCost, DimensionMismatchThrows) {
  EXPECT_THROW(evaluate_cost(three_by_three(), Permutation::identity(2)),
               UsageError);
}

TEST(EvaluateCost, OverflowIsDetected) {
  const auto big = std::numeric_limits<std::int64_t>::max() / 2 + 1;
  const Instance inst("big", {{0, big}, {big, 0}}, {{0, 3}, {3, 0}});
  EXPECT_THROW(evaluate_cost(inst, Permutation::identity(2)), DataError);
  const Instance sum("sum", {{0, big}, {big, 0}}, {{0, 1}, {1, 0}});
  EXPECT_THROW(evaluate_cost(sum, Permutation::identity(2)), DataError);
}

TEST(EvaluateCost, MatchesQuadrupleSum) {
  Rng rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto n = 2 + rng.below(11);
    const auto inst = testing::arbitrary_instance(n, 50, rng);
    const auto p = testing::shuffled(n, rng);
    ASSERT_EQ(evaluate_cost(inst, p), testing::quadruple_sum_cost(inst, p));
  }
}

TEST(EvaluateCost, InvariantUnderFacilityRelabeling) {
  // Renaming facilities by sigma: flow'[s(i)][s(k)] = flow[i][k] and
  // assign'[s(i)] = assign[i] describe the same layout.
  Rng rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const auto n = 2 + rng.below(9);
    const auto inst = testing::arbitrary_instance(n, 30, rng);
    const auto p = testing::shuffled(n, rng);
    const auto sigma = testing::shuffled(n, rng);
    SquareMatrix relabeled(n);
    std::vector<int> assign(n);
    for (std::size_t i = 0; i < n; ++i) {
      assign[sigma[i]] = p[i];
      for (std::size_t k = 0; k < n; ++k) {
        relabeled(sigma[i], sigma[k]) = inst.flow()(i, k);
      }
    }
    const Instance other("r", relabeled, inst.dist());
    ASSERT_EQ(evaluate_cost(inst, p),
              evaluate_cost(other, Permutation(std::move(assign))));
  }
}

TEST(SwapDelta, ZeroFlowStaysZero) {
  const Instance inst("z", SquareMatrix(3), SquareMatrix({{0, 1, 2},
                                                         {1, 0, 3},
                                                         {2, 3, 0}}));
  EXPECT_EQ(swap_delta(inst, Permutation::identity(3), 0, 0, 2), 0);
}

TEST(SwapDelta, MatchesFullEvaluationOnExample) {
  const auto inst = three_by_three();
  const auto p = Permutation::identity(3);
  auto q = p;
  q.swap_positions(0, 1);
  EXPECT_EQ(swap_delta(inst, p, 64, 0, 1), evaluate_cost(inst, q));
  EXPECT_EQ(swap_delta(inst, p, 64, 0, 1), 62);
}

TEST(SwapDelta, SwapBackRestoresCost) {
  const auto inst = three_by_three();
  auto p = Permutation({1, 2, 0});
  const auto c0 = evaluate_cost(inst, p);
  const auto c1 = swap_delta(inst, p, c0, 0, 2);
  p.swap_positions(0, 2);
  EXPECT_EQ(swap_delta(inst, p, c1, 0, 2), c0);
}

TEST(SwapDelta, RejectsBadIndices) {
  const auto inst = three_by_three();
  const auto p = Permutation::identity(3);
  EXPECT_THROW(swap_delta(inst, p, 64, 1, 1), UsageError);
  EXPECT_THROW(swap_delta(inst, p, 64, 0, 3), UsageError);
}

TEST(SwapDelta, MatchesFullEvaluationOnRandomAsymmetricInstances) {
  Rng rng(5150);
  for (int trial = 0; trial < 10000; ++trial) {
    const auto n = 2 + rng.below(14);
    const auto inst = testing::arbitrary_instance(n, 100, rng);
    auto p = testing::shuffled(n, rng);
    const auto cost = evaluate_cost(inst, p);
    const auto r = rng.below(n);
    auto s = rng.below(n - 1);
    if (s >= r) ++s;
    const auto predicted = swap_delta(inst, p, cost, r, s);
    p.swap_positions(r, s);
    ASSERT_EQ(predicted, evaluate_cost(inst, p));
  }
}

}  // namespace
}  // namespace qapga
