#include <gtest/gtest.h>

#include <cmath>

#include <woldlab/error.hpp>
#include <woldlab/families.hpp>
#include <woldlab/series.hpp>

#include "oracles.hpp"

using namespace woldlab;

namespace {

constexpr double kDualAlpha00 = 5.19258912225076;  // 2 + 4 (S - 1), S = sum 1/(k^2+k+1)
constexpr double kDualAlpha01 = 2.79814728056269;  // 1 + S

struct Ex52Series : ::testing::Test {
  TreePtr tree = make_tree("tqb");
  WeightsPtr ws = make_weights("ex52", tree);
  WeightsPtr dual = cauchy_dual(ws, tree);
};

}  // namespace

TEST(AlphaPartial, IntegerPath) {
  const auto z = make_tree("zpath");
  const auto p = alpha_partial(*make_weights("constant:3", z), *z, {0, 0}, 20);
  EXPECT_DOUBLE_EQ(p.sum(), 1.0);
  EXPECT_EQ(p.last_index(), 20u);
  for (std::size_t n = 1; n <= 20; ++n) EXPECT_EQ(p.shell_sizes()[n], 0u);
}

TEST(AlphaPartial, KInfinity) {
  const auto t = make_tree("tkinf:3");
  const auto ws = make_weights("tkinf-isometric:k=3", t);
  const auto p = alpha_partial(*ws, *t, {1, 1}, 10);
  EXPECT_DOUBLE_EQ(p.sum(), 3.0);
  EXPECT_DOUBLE_EQ(alpha_partial(*ws, *t, {0, 0}, 10).sum(), 1.0);
}

TEST_F(Ex52Series, TermsMatchOracle) {
  for (const auto& [w, v] : {std::pair{ws, Vertex{0, 0}}, std::pair{dual, Vertex{0, 0}},
                             std::pair{ws, Vertex{2, 1}}, std::pair{dual, Vertex{1, -3}}}) {
    const auto p = alpha_partial(*w, *tree, v, 12);
    for (std::size_t n = 0; n <= 12; ++n) {
      EXPECT_NEAR(p.terms()[n], oracle::alpha_term(*w, *tree, v, n), 1e-12 * std::max(1.0, p.terms()[n]));
    }
  }
}

TEST_F(Ex52Series, SingleTermShells) {
  const auto p = alpha_partial(*ws, *tree, {0, 0}, 30);
  for (std::size_t n = 1; n <= 30; ++n) {
    EXPECT_EQ(p.shell_sizes()[n], 1u);
    const Vertex u{static_cast<std::int64_t>(n), static_cast<std::int64_t>(n)};
    const double r = oracle::moment(*ws, *tree, u, n) / oracle::moment(*ws, *tree, {0, 0}, n);
    EXPECT_NEAR(p.terms()[n], r * r, 1e-12 * r * r);
  }
}

TEST_F(Ex52Series, AlphaDiverges) {
  const auto v = alpha_verdict(*ws, *tree, {0, 0});
  EXPECT_EQ(v.kind, VerdictKind::diverged);
  EXPECT_EQ(v.method, VerdictMethod::analytic);
  EXPECT_TRUE(v.definitive());
  EXPECT_EQ(v.vertex, "0,0");
  EXPECT_GT(alpha_partial(*ws, *tree, {0, 0}, 500).sum(), 1e3);
}

TEST_F(Ex52Series, DualAlphaConverges) {
  const auto v = alpha_verdict(*dual, *tree, {0, 0});
  ASSERT_EQ(v.kind, VerdictKind::converged);
  EXPECT_TRUE(v.definitive());
  EXPECT_LE(*v.tail_bound, 1e-6);
  EXPECT_LE(v.terms_used, 10'000u);
  EXPECT_NEAR(*v.value, kDualAlpha00, *v.tail_bound + 1e-12);

  const auto w = alpha_verdict(*dual, *tree, {0, 1});
  ASSERT_EQ(w.kind, VerdictKind::converged);
  const auto s = oracle::series_k2k1();
  EXPECT_NEAR(*w.value - 1.0, s.value, *w.tail_bound + s.error);
  EXPECT_NEAR(*w.value, kDualAlpha01, *w.tail_bound + 1e-12);
}

TEST(AlphaVerdict, ConstantQuasiBrownian) {
  const auto tqb = make_tree("tqb");
  const auto ws = make_weights("constant:1", tqb);
  const auto a = alpha_verdict(*ws, *tqb, {0, 0});
  EXPECT_EQ(a.kind, VerdictKind::diverged);
  EXPECT_TRUE(a.definitive());
  const auto dual = cauchy_dual(ws, tqb);
  const auto p = alpha_partial(*dual, *tqb, {0, 0}, 20);
  for (std::size_t n = 1; n <= 20; ++n) {
    EXPECT_NEAR(p.terms()[n], std::pow(4.0, static_cast<double>(n) - 1.0), 1e-12 * std::pow(4.0, n));
  }
  const auto d = alpha_verdict(*dual, *tqb, {0, 0});
  EXPECT_EQ(d.kind, VerdictKind::diverged);
  EXPECT_TRUE(d.definitive());
}

TEST(AlphaVerdict, FiniteGenerations) {
  const auto z = make_tree("zpath");
  const auto a = alpha_verdict(*make_weights("constant:1", z), *z, {4, 0});
  EXPECT_EQ(a.kind, VerdictKind::converged);
  EXPECT_DOUBLE_EQ(*a.value, 1.0);
  EXPECT_DOUBLE_EQ(*a.tail_bound, 0.0);

  const auto t = make_tree("tkinf:3");
  const auto b = alpha_verdict(*make_weights("tkinf-isometric:k=3", t), *t, {1, 1});
  EXPECT_EQ(b.kind, VerdictKind::converged);
  EXPECT_DOUBLE_EQ(*b.value, 3.0);
}

TEST(AlphaVerdict, HeuristicPaths) {
  const auto tqb = make_tree("tqb");
  SeriesConfig cfg;
  cfg.use_plugins = false;
  const auto ws = make_weights("ex52", tqb);
  const auto a = alpha_verdict(*ws, *tqb, {0, 0}, cfg);
  EXPECT_EQ(a.kind, VerdictKind::diverged);
  EXPECT_EQ(a.method, VerdictMethod::heuristic);
  EXPECT_FALSE(a.definitive());

  const auto g = alpha_verdict(*cauchy_dual(make_weights("constant:1", tqb), tqb), *tqb, {0, 0}, cfg);
  EXPECT_EQ(g.kind, VerdictKind::diverged);

  cfg.n_max = 64;
  cfg.divergence_threshold = 1e300;
  const auto dual = cauchy_dual(ws, tqb);
  const auto slow = alpha_verdict(*dual, *tqb, {0, 0}, cfg);
  EXPECT_NE(slow.kind, VerdictKind::diverged);
  EXPECT_FALSE(slow.definitive());

  cfg.n_max = 8;
  cfg.ratio_window = 50;
  EXPECT_EQ(alpha_verdict(*dual, *tqb, {0, 0}, cfg).kind, VerdictKind::inconclusive);
}

TEST(GenerationInvariance, Examples) {
  const auto tqb = make_tree("tqb");
  const auto ws = make_weights("ex52", tqb);
  const auto r = generation_invariance_check(*ws, *tqb, {0, 0}, {1, 1});
  EXPECT_TRUE(r.match.found);
  EXPECT_TRUE(r.consistent);
  EXPECT_TRUE(r.first.diverged() && r.second.diverged());
  EXPECT_THROW(generation_invariance_check(*ws, *tqb, {0, 0}, {0, 1}), PreconditionError);

  const auto t = make_tree("tkinf:3");
  const auto s = generation_invariance_check(*make_weights("tkinf-isometric:k=3", t), *t, {1, 1}, {1, 2});
  EXPECT_TRUE(s.consistent);
  EXPECT_DOUBLE_EQ(*s.first.value, 3.0);
  EXPECT_DOUBLE_EQ(*s.second.value, 3.0);
}

TEST(GVector, Examples) {
  const auto z = make_tree("zpath");
  const auto cz = make_weights("constant:1", z);
  const auto pz = bilateral_path(*z, {0, 0}, -3, 3);
  for (std::int64_t m = -3; m <= 3; ++m) {
    const auto g = g_vector(*cz, *z, pz, m, 5);
    EXPECT_EQ(g.coefficients, SparseVector::unit({m, 0}));
    EXPECT_DOUBLE_EQ(g.tail_norm(), 0.0);
  }

  const auto t = make_tree("tkinf:3");
  const auto iso = make_weights("tkinf-isometric:k=3", t);
  const auto pt = bilateral_path(*t, {0, 0}, -3, 3);
  const auto g1 = g_vector(*iso, *t, pt, 1, 6);
  EXPECT_EQ(g1.coefficients.size(), 3u);
  for (int j = 1; j <= 3; ++j) EXPECT_DOUBLE_EQ(g1.coefficients.get({1, j}), 1.0);

  for (std::int64_t a = -3; a <= 3; ++a) {
    for (std::int64_t b = a + 1; b <= 3; ++b) {
      EXPECT_NEAR(dot(g_vector(*iso, *t, pt, a, 8).coefficients, g_vector(*iso, *t, pt, b, 8).coefficients), 0.0,
                  1e-12);
    }
  }

  const auto tqb = make_tree("tqb");
  const auto ex = make_weights("ex52", tqb);
  const auto g = g_vector(*ex, *tqb, bilateral_path(*tqb, {0, 0}, -2, 2), 0, 5);
  EXPECT_TRUE(g.zero);
  EXPECT_TRUE(g.coefficients.empty());
}

TEST(Recurrence, Examples) {
  const auto z = make_tree("zpath");
  const auto pz = bilateral_path(*z, {0, 0}, -4, 4);
  EXPECT_DOUBLE_EQ(hyperrange_recurrence_check(*make_weights("constant:1", z), *z, pz, 0, 6, 1e-10).residual, 0.0);
  for (int k : {2, 3}) {
    const auto t = make_tree("tkinf:" + std::to_string(k));
    const auto iso = make_weights("tkinf-isometric:k=" + std::to_string(k), t);
    const auto pt = bilateral_path(*t, {0, 0}, -4, 4);
    for (std::int64_t m = -3; m <= 3; ++m) {
      const auto r = hyperrange_recurrence_check(*iso, *t, pt, m, 20, 1e-10);
      EXPECT_TRUE(r.pass);
      EXPECT_LE(r.residual, 1e-10);
    }
  }
  const auto tqb = make_tree("tqb");
  EXPECT_THROW(hyperrange_recurrence_check(*make_weights("ex52", tqb), *tqb,
                                           bilateral_path(*tqb, {0, 0}, -2, 2), 0, 5, 1e-10),
               PreconditionError);
}

TEST(RangeMembership, Examples) {
  const auto tqb = make_tree("tqb");
  const auto ws = make_weights("ex52", tqb);
  const auto f = apply_shift(*ws, *tqb, SparseVector::unit({0, 4}));
  const auto r = range_membership_check(*ws, *tqb, f, 1);
  EXPECT_EQ(r.status, Tri::yes);
  EXPECT_NEAR(r.preimage.get({0, 4}), 1.0, 1e-14);
  EXPECT_EQ(r.preimage.size(), 1u);

  const auto s = range_membership_check(*ws, *tqb, SparseVector::unit({1, 4}), 1);
  EXPECT_EQ(s.status, Tri::no);
  ASSERT_TRUE(s.witness.has_value());
  EXPECT_EQ(tqb->parent(s.witness->first), tqb->parent(s.witness->second));

  const auto t = make_tree("tkinf:3");
  const auto iso = make_weights("tkinf-isometric:k=3", t);
  const auto g = g_vector(*iso, *t, bilateral_path(*t, {0, 0}, -2, 3), 2, 6);
  for (std::size_t n = 1; n <= 2; ++n) EXPECT_EQ(range_membership_check(*iso, *t, g.coefficients, n).status, Tri::yes);
}
