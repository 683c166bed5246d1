#include <gtest/gtest.h>

#include <cmath>

#include <woldlab/error.hpp>
#include <woldlab/families.hpp>
#include <woldlab/weights.hpp>

#include "oracles.hpp"

using namespace woldlab;

namespace {

double p1(double x) { return 1.0 + x + x * x; }

struct Ex52Weights : ::testing::Test {
  TreePtr tree = make_tree("tqb");
  WeightsPtr ws = make_weights("ex52", tree);
};

}  // namespace

TEST(CoefficientRule, Parse) {
  const auto r = CoefficientRule::parse("table:-1=2|3=0.5|else=1.25");
  EXPECT_DOUBLE_EQ(r.at(-1), 2.0);
  EXPECT_DOUBLE_EQ(r.at(3), 0.5);
  EXPECT_DOUBLE_EQ(r.at(100), 1.25);
  EXPECT_DOUBLE_EQ(r.inf(), 0.5);
  EXPECT_DOUBLE_EQ(r.sup(), 2.0);
  EXPECT_EQ(r.table_extent(), 3);
  EXPECT_TRUE(CoefficientRule::parse("const:2").is_constant());
  EXPECT_DOUBLE_EQ(CoefficientRule::parse("0.75").at(-9), 0.75);
  EXPECT_THROW(CoefficientRule::parse("table:1=2"), ParseError);
  EXPECT_THROW(CoefficientRule::parse("bogus"), ParseError);
}

TEST(FamilyHypotheses, Window) {
  PolyFamilyParams ok;
  const auto h = check_family_hypotheses(ok, -10, 10);
  EXPECT_TRUE(h.holds);
  EXPECT_TRUE(h.window_certified);
  PolyFamilyParams bad{CoefficientRule::parse("table:2=-1|else=1"), CoefficientRule::constant(1)};
  EXPECT_FALSE(check_family_hypotheses(bad, -10, 10).holds);
}

TEST_F(Ex52Weights, WeightFormulas) {
  EXPECT_DOUBLE_EQ(ws->weight({0, 3}), std::sqrt(3.0 / 4.0));
  EXPECT_DOUBLE_EQ(ws->weight({1, 4}), 0.5);
  EXPECT_DOUBLE_EQ(ws->weight({0, -2}), 1.0);
  EXPECT_DOUBLE_EQ(ws->weight({1, 0}), 1.0);
  EXPECT_NEAR(ws->weight({5, 7}), std::sqrt(p1(4) / p1(3)), 1e-15);
  EXPECT_THROW(ws->weight({-1, 0}), OutOfRegionError);
}

TEST_F(Ex52Weights, Moment) {
  EXPECT_EQ(moment(*ws, *tree, {4, 2}, 0).log_value, 0.0);
  EXPECT_NEAR(moment(*ws, *tree, {4, 2}, 2).value(), ws->weight({4, 2}) * ws->weight({3, 2}), 1e-15);
  for (std::int64_t n = 1; n <= 6; ++n) {
    for (std::int64_t k = 0; k <= 5; ++k) {
      const double got = moment(*ws, *tree, {n + k, -3}, static_cast<std::size_t>(k)).value();
      EXPECT_NEAR(got * got, p1(static_cast<double>(n + k - 1)) / p1(static_cast<double>(n - 1)), 1e-12);
      EXPECT_NEAR(got, oracle::moment(*ws, *tree, {n + k, -3}, static_cast<std::size_t>(k)), 1e-13);
    }
  }
}

TEST_F(Ex52Weights, ShiftNorms) {
  for (std::int64_t m = -5; m <= 10; ++m) {
    EXPECT_NEAR(shift_norm_sq(*ws, *tree, {0, m}, 1), m >= 2 ? 1.0 : 2.0, 1e-12) << m;
    EXPECT_DOUBLE_EQ(shift_norm_sq(*ws, *tree, {0, m}, 0), 1.0);
  }
  for (std::int64_t n = 1; n <= 10; ++n) {
    for (std::size_t k = 0; k <= 5; ++k) {
      const double want = p1(static_cast<double>(n) + static_cast<double>(k) - 1) / p1(static_cast<double>(n - 1));
      EXPECT_NEAR(shift_norm_sq(*ws, *tree, {n, 2}, k), want, 1e-12);
      EXPECT_NEAR(shift_norm_sq(*ws, *tree, {n, 2}, k),
                  oracle::norm_sq(oracle::power(*ws, *tree, {{{n, 2}, 1.0}}, k)), 1e-12);
    }
  }
}

TEST_F(Ex52Weights, DualClosedForms) {
  const auto dual = cauchy_dual(ws, tree);
  for (std::int64_t m = 1; m <= 10; ++m) {
    EXPECT_NEAR(dual->weight({0, m}), std::sqrt(static_cast<double>(m) / (m + 1)), 1e-12);
    if (m >= 2) EXPECT_NEAR(dual->weight({1, m}), 1.0 / std::sqrt(static_cast<double>(m)), 1e-12);
    for (std::int64_t n = 2; n <= 12; ++n) {
      EXPECT_NEAR(dual->weight({n, m}), std::sqrt(p1(n - 2.0) / p1(n - 1.0)), 1e-12);
    }
  }
  for (std::int64_t m = -6; m <= 6; ++m) {
    for (std::int64_t n = 0; n <= 4; ++n) {
      const Vertex v{n, m};
      EXPECT_NEAR(dual->weight(v), ws->weight(v) / oracle::norm_sq(oracle::shift(*ws, *tree, {{tree->parent(v), 1.0}})),
                  1e-12);
    }
  }
}

TEST_F(Ex52Weights, DualIsInvolution) {
  const auto twice = cauchy_dual(cauchy_dual(ws, tree), tree);
  for (std::int64_t m = -20; m <= 20; ++m) {
    for (std::int64_t n = 0; n <= 8; ++n) EXPECT_NEAR(twice->weight({n, m}), ws->weight({n, m}), 1e-12);
  }
}

TEST(CauchyDual, TrivialCases) {
  const auto z = make_tree("zpath");
  const auto d = cauchy_dual(make_weights("constant:2", z), z);
  EXPECT_DOUBLE_EQ(d->weight({5, 0}), 0.5);
  const auto t3 = make_tree("tkinf:3");
  const auto iso = make_weights("tkinf-isometric:k=3", t3);
  const auto d3 = cauchy_dual(iso, t3);
  for (const Vertex& v : window_vertices(*t3, {{0, 0}, 2, 2})) EXPECT_NEAR(d3->weight(v), iso->weight(v), 1e-15);
}

TEST_F(Ex52Weights, Balance) {
  const auto b = is_balanced(*ws, *tree, {{0, 3}, 2, 2});
  ASSERT_EQ(b.status, Tri::no);
  ASSERT_TRUE(b.witness.has_value());
  const auto [u, w] = *b.witness;
  EXPECT_EQ(u.first, 0);
  EXPECT_EQ(w, (Vertex{1, u.second + 1}));
  EXPECT_NEAR(b.max_spread, 2.0, 1e-12);
}

TEST(Balance, BalancedFamilies) {
  const auto z = make_tree("zpath");
  EXPECT_EQ(is_balanced(*make_weights("constant:0.3", z), *z, {{0, 0}, 3, 3}).status, Tri::yes);
  for (int k : {2, 3, 5}) {
    const auto t = make_tree("tkinf:" + std::to_string(k));
    EXPECT_EQ(is_balanced(*make_weights("tkinf-isometric:k=" + std::to_string(k), t), *t, {{0, 0}, 3, 3}).status,
              Tri::yes);
  }
}

TEST_F(Ex52Weights, NormIncreasing) {
  const auto r = is_norm_increasing(*ws, *tree, {{0, 0}, 4, 4});
  EXPECT_EQ(r.status, Tri::yes);
  EXPECT_FALSE(r.equality);
  EXPECT_NEAR(r.min_norm_sq, 1.0, 1e-12);
}

TEST(NormIncreasing, WitnessAndEquality) {
  const auto z = make_tree("zpath");
  const auto bad = std::make_shared<MutatedWeights>(make_weights("constant:1", z), Vertex{3, 0}, 0.5);
  const auto r = is_norm_increasing(*bad, *z, {{0, 0}, 5, 5});
  EXPECT_EQ(r.status, Tri::no);
  EXPECT_EQ(r.witness, (Vertex{2, 0}));
  const auto t = make_tree("tkinf:4");
  const auto eq = is_norm_increasing(*make_weights("tkinf-isometric:k=4", t), *t, {{0, 0}, 2, 2});
  EXPECT_EQ(eq.status, Tri::yes);
  EXPECT_TRUE(eq.equality);
}

TEST(Boundedness, Examples) {
  const auto z = make_tree("zpath");
  EXPECT_NEAR(boundedness_estimate(*make_weights("constant:1.5", z), *z, {{0, 0}, 2, 2}).sup, 2.25, 1e-15);
  const auto t2 = make_tree("tkinf:2");
  const auto b = boundedness_estimate(*make_weights("constant:1", t2), *t2, {{0, 0}, 2, 2});
  EXPECT_DOUBLE_EQ(b.sup, 2.0);
  EXPECT_EQ(b.argmax, (Vertex{0, 0}));
  const auto tqb = make_tree("tqb");
  EXPECT_LE(boundedness_estimate(*make_weights("ex52", tqb), *tqb, {{0, 0}, 6, 6}).sup, 4.0);
}

TEST(Weights, Errors) {
  EXPECT_THROW(ConstantWeights(0.0), DomainError);
  EXPECT_THROW(ConstantWeights(-1.0), DomainError);
  const auto z = make_tree("zpath");
  EXPECT_THROW(make_weights("ex52", z), ParseError);
  EXPECT_THROW(make_weights("nonsense", z), ParseError);
  const auto t3 = make_tree("tkinf:3");
  EXPECT_THROW(make_weights("tkinf-isometric:k=2", t3), ParseError);
}

TEST(WeightCsv, Parse) {
  const auto tqb = make_tree("tqb");
  const auto w = parse_weight_csv("vertex,weight\n\"0,1\",0.5\n\"2,3\",2\n*,1\n", *tqb);
  EXPECT_DOUBLE_EQ(w->weight({0, 1}), 0.5);
  EXPECT_DOUBLE_EQ(w->weight({2, 3}), 2.0);
  EXPECT_DOUBLE_EQ(w->weight({7, 7}), 1.0);
  const auto strict = parse_weight_csv("\"0,1\",0.5\n", *tqb);
  EXPECT_THROW(strict->weight({0, 2}), OutOfRegionError);
  EXPECT_THROW(parse_weight_csv("\"0,1\",0.5\n\"0,1\",0.7\n", *tqb), ParseError);
  EXPECT_THROW(parse_weight_csv("\"0,1\",-0.5\n", *tqb), DomainError);
}
