#include <memory>

#include "doctest.h"
#include "palmcalc/transport_det.hpp"

using namespace palmcalc;

namespace {

ActionContext swap_fix_context() {
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {Perm({1, 0, 2})}));
  return ActionContext(GroupAction::natural(std::move(g)));
}

InvariantBifunction class_bifunction(const ActionContext& ctx) {
  // Constant on diagonal orbits of S x S; values chosen distinct per class.
  InvariantBifunction m(ctx.points());
  for (int s = 0; s < ctx.points(); ++s)
    for (int t = 0; t < ctx.points(); ++t) {
      int cls;
      if (s == 2 && t == 2) cls = 0;
      else if (s == 2) cls = 1;
      else if (t == 2) cls = 2;
      else if (s == t) cls = 3;
      else cls = 4;
      static const long vals[] = {3, 5, 7, 11, 13};
      m.at(s, t) = Rat(vals[cls], 2);
    }
  return m;
}

struct Layer {
  FiniteMeasure mu, nu;
  DetKernel gamma, delta;
};

Layer layer_from_pair(const PairMeasure& m) {
  Layer out;
  out.mu = FiniteMeasure(m.n);
  out.nu = FiniteMeasure(m.n);
  out.gamma.gamma.assign(static_cast<std::size_t>(m.n), FiniteMeasure(m.n));
  out.delta.gamma.assign(static_cast<std::size_t>(m.n), FiniteMeasure(m.n));
  for (int s = 0; s < m.n; ++s)
    for (int t = 0; t < m.n; ++t) {
      out.mu.at(s) += m.at(s, t);
      out.nu.at(t) += m.at(s, t);
    }
  for (int s = 0; s < m.n; ++s)
    for (int t = 0; t < m.n; ++t) {
      if (out.mu.at(s) != 0) out.gamma.gamma[static_cast<std::size_t>(s)].at(t) = m.at(s, t) / out.mu.at(s);
      if (out.nu.at(t) != 0) out.delta.gamma[static_cast<std::size_t>(t)].at(s) = m.at(s, t) / out.nu.at(t);
    }
  return out;
}

}  // namespace

TEST_CASE("bifunction invariance is checked on generators") {
  const ActionContext ctx = swap_fix_context();
  InvariantBifunction m = class_bifunction(ctx);
  CHECK(check_bifunction_invariance(ctx, m).passed());
  m.at(0, 1) += Rat(1);
  const CheckReport r = check_bifunction_invariance(ctx, m);
  CHECK_FALSE(r.passed());
  REQUIRE(r.witness.has_value());
}

TEST_CASE("orbit balance and the countable transport principle") {
  const ActionContext ctx = swap_fix_context();
  const InvariantBifunction m = class_bifunction(ctx);
  CHECK(check_orbit_balance(ctx, m).passed());
  CHECK(check_countable_mtp(ctx, m).passed());
}

TEST_CASE("hand-checked countable transport sum") {
  // Trivial group on two points: every matrix is invariant and the principle
  // reduces to comparing the two marginal totals, which always agree.
  auto g = std::make_shared<const PermGroup>(enumerate_group(2, {}));
  const ActionContext ctx(GroupAction::natural(std::move(g)));
  InvariantBifunction m(2);
  m.at(0, 1) = Rat(4);
  m.at(1, 0) = Rat(5);
  m.at(0, 0) = Rat(9);
  const CheckReport r = check_countable_mtp(ctx, m);
  CHECK(r.passed());
  CHECK(r.lhs == "18");  // total mass on both sides

  // Non-invariant weights are a precondition failure, not a disproof.
  const ActionContext sf = swap_fix_context();
  InvariantBifunction bad(3);
  bad.at(0, 1) = Rat(1);
  CHECK(check_countable_mtp(sf, bad).status == CheckStatus::PreconditionFailed);
}

TEST_CASE("kernel balance from a disintegrated pair measure") {
  const ActionContext ctx = swap_fix_context();
  const PairMeasure pm =
      jointly_invariant_from_template(ctx, {{{0, 2}, Rat(2)}, {{1, 1}, Rat(1, 3)}});
  const Layer l = layer_from_pair(pm);
  CHECK(check_kernel_invariance(ctx, l.gamma).passed());
  CHECK(check_kernel_balance(ctx, l.mu, l.gamma, l.nu, l.delta).passed());
  CHECK(check_detmtp_rep(ctx, l.mu, l.gamma, l.nu, l.delta, class_bifunction(ctx),
                         ctx.unit_witness()).passed());
}

TEST_CASE("unbalanced kernels are a reported precondition failure") {
  const ActionContext ctx = swap_fix_context();
  const PairMeasure pm = jointly_invariant_from_template(ctx, {{{0, 2}, Rat(2)}});
  Layer l = layer_from_pair(pm);
  l.gamma.gamma[0].at(0) += Rat(1);
  const CheckReport r = check_detmtp_rep(ctx, l.mu, l.gamma, l.nu, l.delta,
                                         class_bifunction(ctx), ctx.unit_witness());
  CHECK(r.status == CheckStatus::PreconditionFailed);
}

TEST_CASE("weighted and set forms of the transport principle") {
  const ActionContext ctx = swap_fix_context();
  const PairMeasure pm =
      jointly_invariant_from_template(ctx, {{{0, 1}, Rat(5, 2)}, {{2, 0}, Rat(1)}});
  const std::vector<Rat> v{Rat(1), Rat(1), Rat(1)};
  const std::vector<Rat> w{Rat(2), Rat(4), Rat(3)};  // balanced against v
  CHECK(check_short_mtp(ctx, pm, v, w).passed());
  CHECK(check_mtp_on_sets(ctx, pm, {0, 1, 2}, ctx.unit_witness()).passed());

  PairMeasure broken = pm;
  broken.at(0, 1) += Rat(1);
  CHECK(check_short_mtp(ctx, broken, v, w).status == CheckStatus::PreconditionFailed);
  CHECK(check_mtp_on_sets(ctx, broken, {0, 1, 2}, ctx.unit_witness()).status ==
        CheckStatus::PreconditionFailed);
}
