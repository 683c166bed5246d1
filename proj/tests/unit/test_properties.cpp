#include <gtest/gtest.h>

#include <woldlab/families.hpp>
#include <woldlab/tree.hpp>

#include "properties.hpp"

using namespace woldlab;

namespace {

void expect_ok(const props::Outcome& o) {
  EXPECT_GT(o.instances, 0u);
  for (const auto& f : o.failures) ADD_FAILURE() << f;
}

}  // namespace

TEST(GenerationShells, QuasiBrownian) {
  expect_ok(props::shell_properties(QuasiBrownianTree{}, {0, 0}, 60, 11));
}

TEST(GenerationShells, IntegerPath) {
  expect_ok(props::shell_properties(BilateralPathTree{}, BilateralPathTree::at(0), 60, 12));
}

TEST(GenerationShells, KInfinity) {
  expect_ok(props::shell_properties(KInfinityTree(2), {0, 0}, 60, 13));
  expect_ok(props::shell_properties(KInfinityTree(3), {1, 2}, 60, 14));
}

TEST(AdjointDuality, BuiltinScenarios) {
  const auto tqb = make_tree("tqb");
  expect_ok(props::adjoint_duality(*make_weights("ex52", tqb), *tqb, {0, 0}, 100, 21, 1e-12));
  const auto dual = cauchy_dual(make_weights("ex52", tqb), tqb);
  expect_ok(props::adjoint_duality(*dual, *tqb, {2, 1}, 100, 22, 1e-12));
  const auto z = make_tree("zpath");
  expect_ok(props::adjoint_duality(*make_weights("constant:1.5", z), *z, {0, 0}, 100, 23, 1e-12));
  const auto t3 = make_tree("tkinf:3");
  expect_ok(props::adjoint_duality(*make_weights("tkinf-isometric:k=3", t3), *t3, {0, 0}, 100, 24,
                                   1e-12));
}

TEST(DefectDiagonal, MatchesExpansion) {
  const auto tqb = make_tree("tqb");
  expect_ok(props::defect_agreement(*make_weights("ex52", tqb), *tqb, {0, 0}, 50, 31, 1e-10));
  expect_ok(props::defect_agreement(*make_weights("prop51:a=const:0.5,b=const:2", tqb), *tqb,
                                    {1, -3}, 50, 32, 1e-10));
  const auto t2 = make_tree("tkinf:2");
  expect_ok(props::defect_agreement(*make_weights("constant:0.9", t2), *t2, {0, 0}, 50, 33, 1e-10));
}
