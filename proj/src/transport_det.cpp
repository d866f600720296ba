#include "palmcalc/transport_det.hpp"

#include <stdexcept>

namespace palmcalc {

CheckReport check_kernel_invariance(const ActionContext& ctx, const DetKernel& k) {
  for (int g : ctx.group().generator_indices()) {
    for (int s = 0; s < ctx.points(); ++s) {
      const int gs = ctx.apply(g, s);
      for (int t = 0; t < ctx.points(); ++t) {
        const Rat& a = k.at(gs, ctx.apply(g, t));
        const Rat& b = k.at(s, t);
        if (a != b) {
          Witness w{g, s, t, -1, "kernel moves under the generator"};
          return CheckReport::fail("kernel_invariance", a, b, std::move(w));
        }
      }
    }
  }
  return CheckReport::pass("kernel_invariance", Rat(1), Rat(1));
}

CheckReport check_bifunction_invariance(const ActionContext& ctx, const InvariantBifunction& m) {
  for (int g : ctx.group().generator_indices()) {
    for (int s = 0; s < ctx.points(); ++s) {
      for (int t = 0; t < ctx.points(); ++t) {
        const Rat& a = m.at(ctx.apply(g, s), ctx.apply(g, t));
        const Rat& b = m.at(s, t);
        if (a != b) {
          Witness w{g, s, t, -1, "bifunction not diagonal-invariant"};
          return CheckReport::fail("bifunction_invariance", a, b, std::move(w));
        }
      }
    }
  }
  return CheckReport::pass("bifunction_invariance", Rat(1), Rat(1));
}

CheckReport check_orbit_balance(const ActionContext& ctx, const InvariantBifunction& m) {
  if (!check_bifunction_invariance(ctx, m).passed()) {
    Witness w{-1, -1, -1, -1, "transport weights are not invariant"};
    return CheckReport::precondition_failed("orbit_balance", std::move(w));
  }
  for (int b : ctx.representatives()) {
    for (int bp : ctx.representatives()) {
      Rat lhs(0), rhs(0);
      for (int s = 0; s < ctx.points(); ++s) {
        lhs += m.at(b, s) * ctx.delta_star(s) * ctx.mu(bp, s);
        rhs += m.at(s, bp) * ctx.mu(b, s);
      }
      if (lhs != rhs) {
        Witness w{-1, b, bp, -1, "orbit pair out of balance"};
        return CheckReport::fail("orbit_balance", lhs, rhs, std::move(w));
      }
    }
  }
  return CheckReport::pass("orbit_balance", Rat(0), Rat(0));
}

namespace {

PairMeasure pair_from_kernel_forward(const FiniteMeasure& mu, const DetKernel& gamma) {
  PairMeasure out(mu.points());
  for (int s = 0; s < mu.points(); ++s) {
    if (mu.at(s) == 0) continue;
    for (int t = 0; t < mu.points(); ++t) out.at(s, t) += mu.at(s) * gamma.at(s, t);
  }
  return out;
}

PairMeasure pair_from_kernel_backward(const FiniteMeasure& nu, const DetKernel& delta) {
  PairMeasure out(nu.points());
  for (int t = 0; t < nu.points(); ++t) {
    if (nu.at(t) == 0) continue;
    for (int s = 0; s < nu.points(); ++s) out.at(s, t) += nu.at(t) * delta.at(t, s);
  }
  return out;
}

}  // namespace

CheckReport check_kernel_balance(const ActionContext& ctx, const FiniteMeasure& mu,
                                 const DetKernel& gamma, const FiniteMeasure& nu,
                                 const DetKernel& delta) {
  (void)ctx;
  const PairMeasure fwd = pair_from_kernel_forward(mu, gamma);
  const PairMeasure bwd = pair_from_kernel_backward(nu, delta);
  for (int s = 0; s < fwd.n; ++s)
    for (int t = 0; t < fwd.n; ++t)
      if (fwd.at(s, t) != bwd.at(s, t)) {
        Witness w{-1, s, t, -1, "transported pair mass differs"};
        return CheckReport::fail("kernel_balance", fwd.at(s, t), bwd.at(s, t), std::move(w));
      }
  return CheckReport::pass("kernel_balance", fwd.total(), bwd.total());
}

CheckReport check_detmtp_rep(const ActionContext& ctx, const FiniteMeasure& mu,
                             const DetKernel& gamma, const FiniteMeasure& nu,
                             const DetKernel& delta, const InvariantBifunction& m,
                             const std::vector<Rat>& k) {
  const CheckReport pre = check_kernel_balance(ctx, mu, gamma, nu, delta);
  if (!pre.passed()) {
    Witness w = pre.witness.value_or(Witness{});
    w.detail = "kernel balance precondition failed: " + w.detail;
    return CheckReport::precondition_failed("weighted_transport", std::move(w));
  }
  OrbitMeasure mu_star, nu_star;
  try {
    mu_star = invariant_cone_decompose(ctx, mu, k);
    nu_star = invariant_cone_decompose(ctx, nu, k);
  } catch (const std::invalid_argument&) {
    Witness w{-1, -1, -1, -1, "mu or nu is not invariant"};
    return CheckReport::precondition_failed("weighted_transport", std::move(w));
  }
  Rat lhs(0), rhs(0);
  for (int b : ctx.representatives()) {
    for (int t = 0; t < ctx.points(); ++t) {
      lhs += m.at(b, t) * ctx.delta_star(t) * gamma.at(b, t) * mu_star.at(b);
      rhs += m.at(t, b) * delta.at(b, t) * nu_star.at(b);
    }
  }
  if (lhs != rhs) {
    Witness w{-1, -1, -1, -1, "weighted transport identity fails"};
    return CheckReport::fail("weighted_transport", lhs, rhs, std::move(w));
  }
  return CheckReport::pass("weighted_transport", lhs, rhs);
}

CheckReport check_countable_mtp(const ActionContext& ctx, const InvariantBifunction& m) {
  if (!check_bifunction_invariance(ctx, m).passed()) {
    Witness w{-1, -1, -1, -1, "transport weights are not invariant"};
    return CheckReport::precondition_failed("countable_mtp", std::move(w));
  }
  Rat lhs(0), rhs(0);
  for (int b : ctx.representatives()) {
    for (int bp : ctx.representatives()) {
      for (int s = 0; s < ctx.points(); ++s) {
        if (ctx.beta(s) != bp) continue;
        lhs += m.at(b, s) * Rat(ctx.stabilizer_size(s));
        rhs += Rat(ctx.stabilizer_size(bp)) * m.at(s, b);
      }
    }
  }
  if (lhs != rhs) {
    Witness w{-1, -1, -1, -1, "stabilizer-weighted form fails"};
    return CheckReport::fail("countable_mtp", lhs, rhs, std::move(w));
  }
  // Unimodular form.
  Rat lhs2(0), rhs2(0);
  for (int b : ctx.representatives()) {
    const Rat inv_stab(1, static_cast<unsigned long>(ctx.stabilizer_size(b)));
    for (int s = 0; s < ctx.points(); ++s) {
      lhs2 += inv_stab * m.at(b, s);
      rhs2 += inv_stab * m.at(s, b);
    }
  }
  if (lhs2 != rhs2) {
    Witness w{-1, -1, -1, -1, "unimodular form fails"};
    return CheckReport::fail("countable_mtp", lhs2, rhs2, std::move(w));
  }
  return CheckReport::pass("countable_mtp", lhs, rhs);
}

CheckReport check_short_mtp(const ActionContext& ctx, const PairMeasure& m,
                            const std::vector<Rat>& v, const std::vector<Rat>& w) {
  if (!is_jointly_invariant(ctx, m).passed()) {
    Witness wit{-1, -1, -1, -1, "pair measure is not jointly invariant"};
    return CheckReport::precondition_failed("short_mtp", std::move(wit));
  }
  const CheckReport bal = check_balance(ctx, v, w);
  if (!bal.passed()) {
    Witness wit = bal.witness.value_or(Witness{});
    wit.detail = "weights unbalanced: " + wit.detail;
    return CheckReport::precondition_failed("short_mtp", std::move(wit));
  }
  Rat lhs(0), rhs(0);
  for (int s = 0; s < ctx.points(); ++s) {
    const Rat mu_s_v = ctx.mu_integrate(s, v);
    for (int t = 0; t < ctx.points(); ++t) {
      if (m.at(s, t) == 0) continue;
      const Rat delta_v = ctx.mu_integrate(t, v) / mu_s_v;
      lhs += delta_v * w[static_cast<std::size_t>(s)] * m.at(s, t);
      rhs += w[static_cast<std::size_t>(t)] * m.at(s, t);
    }
  }
  if (lhs != rhs) {
    Witness wit{-1, -1, -1, -1, "weighted out-mass differs from in-mass"};
    return CheckReport::fail("short_mtp", lhs, rhs, std::move(wit));
  }
  return CheckReport::pass("short_mtp", lhs, rhs);
}

CheckReport check_mtp_on_sets(const ActionContext& ctx, const PairMeasure& m,
                              const std::vector<int>& b_set, const std::vector<Rat>& k) {
  if (!is_jointly_invariant(ctx, m).passed()) {
    Witness wit{-1, -1, -1, -1, "pair measure is not jointly invariant"};
    return CheckReport::precondition_failed("mtp_on_sets", std::move(wit));
  }
  const CheckReport sym = check_symmetric_set(ctx, b_set);
  if (!sym.passed()) {
    Witness wit = sym.witness.value_or(Witness{});
    wit.detail = "set is not symmetric: " + wit.detail;
    return CheckReport::precondition_failed("mtp_on_sets", std::move(wit));
  }
  std::vector<bool> in_b(static_cast<std::size_t>(ctx.points()), false);
  for (int s : b_set) in_b[static_cast<std::size_t>(s)] = true;
  Rat lhs(0), rhs(0);
  for (int s = 0; s < ctx.points(); ++s) {
    for (int t = 0; t < ctx.points(); ++t) {
      if (m.at(s, t) == 0) continue;
      if (in_b[static_cast<std::size_t>(s)]) lhs += ctx.delta_tilde(k, s, t) * m.at(s, t);
      if (in_b[static_cast<std::size_t>(t)]) rhs += m.at(s, t);
    }
  }
  if (lhs != rhs) {
    Witness wit{-1, -1, -1, -1, "mass out of the symmetric set differs from mass into it"};
    return CheckReport::fail("mtp_on_sets", lhs, rhs, std::move(wit));
  }
  return CheckReport::pass("mtp_on_sets", lhs, rhs);
}

}  // namespace palmcalc
