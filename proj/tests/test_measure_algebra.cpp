#include <memory>

#include "doctest.h"
#include "palmcalc/measure_algebra.hpp"

using namespace palmcalc;

namespace {

ActionContext swap_fix_context() {
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {Perm({1, 0, 2})}));
  return ActionContext(GroupAction::natural(std::move(g)));
}

}  // namespace

TEST_CASE("invariance detection on the swap-and-fix action") {
  const ActionContext ctx = swap_fix_context();
  FiniteMeasure good(3);
  good.at(0) = good.at(1) = Rat(2, 3);
  good.at(2) = Rat(5);
  CHECK(is_invariant(ctx, good).passed());
  FiniteMeasure bad = good;
  bad.at(1) = Rat(1, 3);
  const CheckReport r = is_invariant(ctx, bad);
  CHECK_FALSE(r.passed());
  REQUIRE(r.witness.has_value());
}

TEST_CASE("orbit decomposition round trip on an invariant measure") {
  const ActionContext ctx = swap_fix_context();
  FiniteMeasure nu(3);
  nu.at(0) = nu.at(1) = Rat(3, 4);
  nu.at(2) = Rat(7, 2);
  const auto k = ctx.unit_witness();
  const OrbitMeasure star = invariant_cone_decompose(ctx, nu, k);
  // mu_0 has mass 2 on the orbit {0,1}, mu_2 has mass 2 on {2}.
  CHECK(star.at(0) == Rat(3, 4));
  CHECK(star.at(2) == Rat(7, 4));
  CHECK(invariant_cone_compose(ctx, star) == nu);
}

TEST_CASE("decomposition is independent of the properness witness") {
  const ActionContext ctx = swap_fix_context();
  FiniteMeasure nu(3);
  nu.at(0) = nu.at(1) = Rat(1, 2);
  nu.at(2) = Rat(4);
  std::vector<Rat> k{Rat(1, 3), Rat(5), Rat(2, 7)};
  const OrbitMeasure a = invariant_cone_decompose(ctx, nu, ctx.unit_witness());
  const OrbitMeasure b = invariant_cone_decompose(ctx, nu, k);
  CHECK(a == b);
}

TEST_CASE("decomposition rejects non-invariant input") {
  const ActionContext ctx = swap_fix_context();
  FiniteMeasure nu(3);
  nu.at(0) = Rat(1);
  CHECK_THROWS_AS(invariant_cone_decompose(ctx, nu, ctx.unit_witness()),
                  std::invalid_argument);
}

TEST_CASE("pair measures from orbit templates are jointly invariant") {
  const ActionContext ctx = swap_fix_context();
  const PairMeasure m =
      jointly_invariant_from_template(ctx, {{{0, 2}, Rat(1, 2)}, {{0, 1}, Rat(3)}});
  CHECK(is_jointly_invariant(ctx, m).passed());
  // Orbit of (0,2) is {(0,2),(1,2)}; orbit of (0,1) is {(0,1),(1,0)}.
  CHECK(m.at(0, 2) == Rat(1, 2));
  CHECK(m.at(1, 2) == Rat(1, 2));
  CHECK(m.at(0, 1) == Rat(3));
  CHECK(m.at(1, 0) == Rat(3));
  CHECK(m.at(2, 0) == Rat(0));
}

TEST_CASE("the unique symmetric set of the swap-and-fix action") {
  const ActionContext ctx = swap_fix_context();
  // Orbit masses: stabilizer 1 times count on {0,1} versus stabilizer 2 times
  // count on {2}; equality forces the full point set.
  const auto sets = find_symmetric_sets(ctx, 10);
  REQUIRE(sets.size() == 1);
  CHECK(sets[0] == std::vector<int>{0, 1, 2});
  CHECK(check_symmetric_set(ctx, sets[0]).passed());
  CHECK_FALSE(check_symmetric_set(ctx, {0, 2}).passed());
  CHECK_FALSE(check_symmetric_set(ctx, {}).passed());
}

TEST_CASE("weight balance detects per-orbit mass ratios") {
  const ActionContext ctx = swap_fix_context();
  std::vector<Rat> v{Rat(1), Rat(1), Rat(1)};
  // mu_0(v) = 2, mu_2(v) = 2; scaling w by 3 on both orbits stays balanced.
  std::vector<Rat> w{Rat(2), Rat(4), Rat(3)};
  CHECK(check_balance(ctx, v, w).passed());  // mu_0(w) = 6 = mu_2(w)
  w[2] = Rat(4);
  CHECK_FALSE(check_balance(ctx, v, w).passed());
  std::vector<Rat> bad_v{Rat(0), Rat(1), Rat(1)};
  CHECK(check_balance(ctx, bad_v, w).status == CheckStatus::PreconditionFailed);
}
