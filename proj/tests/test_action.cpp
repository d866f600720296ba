#include <memory>

#include "doctest.h"
#include "palmcalc/action.hpp"

using namespace palmcalc;

namespace {

ActionContext swap_fix_context() {
  // C2 acting on {0,1,2}: swap 0 and 1, fix 2.
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {Perm({1, 0, 2})}));
  return ActionContext(GroupAction::natural(std::move(g)));
}

ActionContext rotation_context() {
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {Perm({1, 2, 0})}));
  return ActionContext(GroupAction::natural(std::move(g)));
}

ActionContext trivial_context() {
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {}));
  return ActionContext(GroupAction::natural(std::move(g)));
}

}  // namespace

TEST_CASE("orbit decomposition of the swap-and-fix action") {
  const ActionContext ctx = swap_fix_context();
  CHECK(ctx.orbits().orbit_count() == 2);
  CHECK(ctx.representatives() == std::vector<int>{0, 2});
  CHECK(ctx.beta(1) == 0);
  CHECK(ctx.orbit_id(2) == 1);
}

TEST_CASE("transporter cosets and kernel weights by hand") {
  const ActionContext ctx = swap_fix_context();
  CHECK(ctx.coset(0, 0).size() == 1);   // identity only
  CHECK(ctx.coset(0, 1).size() == 1);   // the swap
  CHECK(ctx.coset(2, 2).size() == 2);   // whole group
  CHECK(ctx.coset(0, 2).empty());
  CHECK(ctx.kappa().uniform_weight(2, 2) == Rat(1, 2));
  CHECK(ctx.kappa().uniform_weight(0, 1) == Rat(1));
  CHECK(ctx.kappa().uniform_weight(0, 2) == Rat(0));
}

TEST_CASE("projection measures count transporters") {
  const ActionContext ctx = swap_fix_context();
  CHECK(ctx.mu(0, 0) == Rat(1));
  CHECK(ctx.mu(0, 1) == Rat(1));
  CHECK(ctx.mu(0, 2) == Rat(0));
  CHECK(ctx.mu(2, 2) == Rat(2));
  // Total mass is the group order on every point.
  for (int s = 0; s < 3; ++s) CHECK(ctx.mu(s).total() == Rat(2));
}

TEST_CASE("normalized projection with the unit witness") {
  const ActionContext ctx = swap_fix_context();
  const auto k = ctx.unit_witness();
  CHECK(ctx.phi(0, k).at(0) == Rat(1, 2));
  CHECK(ctx.phi(0, k).at(1) == Rat(1, 2));
  CHECK(ctx.phi(2, k).at(2) == Rat(1));
  CHECK(check_phi_orbit_constant(ctx, k).passed());
}

TEST_CASE("kernel disintegration and properties hold exactly") {
  for (const ActionContext& ctx : {swap_fix_context(), rotation_context(), trivial_context()}) {
    CHECK(check_kappa_disintegration(ctx).passed());
    CHECK(check_kappa_properties(ctx).passed());
    CHECK(check_mu_translation(ctx).passed());
    CHECK(check_delta_star_consistency(ctx).passed());
  }
}

TEST_CASE("transitive rotation action has singleton transporter cosets") {
  const ActionContext ctx = rotation_context();
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t) CHECK(ctx.coset(s, t).size() == 1);
  CHECK(ctx.orbits().orbit_count() == 1);
}

TEST_CASE("trivial group: kernel collapses to the diagonal point mass") {
  const ActionContext ctx = trivial_context();
  CHECK(ctx.orbits().orbit_count() == 3);
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t) {
      if (s == t) {
        REQUIRE(ctx.coset(s, t).size() == 1);
        CHECK(ctx.coset(s, t).front() == ctx.group().identity_index());
        CHECK(ctx.kappa().uniform_weight(s, t) == Rat(1));
      } else {
        CHECK(ctx.coset(s, t).empty());
      }
    }
}

TEST_CASE("modular transfer is identically one") {
  const ActionContext ctx = swap_fix_context();
  for (int s = 0; s < 3; ++s) CHECK(ctx.delta_star(s) == Rat(1));
  const auto k = ctx.unit_witness();
  for (int s = 0; s < 3; ++s)
    for (int t = 0; t < 3; ++t)
      if (ctx.orbit_id(s) == ctx.orbit_id(t)) CHECK(ctx.delta_tilde(k, s, t) == Rat(1));
}

TEST_CASE("action tables are validated on construction") {
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {Perm({1, 2, 0})}));
  // Identity row must fix every point.
  std::vector<int> bad(3 * 3, 0);
  CHECK_THROWS_AS(GroupAction(g, 3, bad), std::invalid_argument);
}
