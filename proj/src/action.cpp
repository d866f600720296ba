#include "palmcalc/action.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace palmcalc {

GroupAction::GroupAction(std::shared_ptr<const PermGroup> group, int points,
                         std::vector<int> table)
    : group_(std::move(group)), points_(points), table_(std::move(table)) {
  const int n = group_->size();
  if (table_.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(points_))
    throw std::invalid_argument("action table has wrong shape");
  for (int v : table_)
    if (v < 0 || v >= points_) throw std::invalid_argument("action table entry out of range");
  const int e = group_->identity_index();
  for (int s = 0; s < points_; ++s)
    if (apply(e, s) != s) throw std::invalid_argument("action violates the identity law");
  // Compatibility on (generator, element) pairs extends to all pairs by
  // induction over the closure.
  for (int g : group_->generator_indices())
    for (int h = 0; h < n; ++h)
      for (int s = 0; s < points_; ++s)
        if (apply(g, apply(h, s)) != apply(group_->mul(g, h), s))
          throw std::invalid_argument("action violates compatibility");
}

GroupAction GroupAction::natural(std::shared_ptr<const PermGroup> group) {
  const int n = group->size();
  const int d = group->degree();
  std::vector<int> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(d));
  for (int g = 0; g < n; ++g)
    for (int s = 0; s < d; ++s)
      table[static_cast<std::size_t>(g) * static_cast<std::size_t>(d) + static_cast<std::size_t>(s)] = group->element(g)(s);
  return GroupAction(std::move(group), d, std::move(table));
}

OrbitDecomposition orbits(const GroupAction& a) {
  const int m = a.points();
  OrbitDecomposition d;
  d.orbit_id.assign(static_cast<std::size_t>(m), -1);
  d.beta.assign(static_cast<std::size_t>(m), -1);
  for (int s = 0; s < m; ++s) {
    if (d.orbit_id[static_cast<std::size_t>(s)] >= 0) continue;
    // s is the minimal unvisited point of its orbit, hence its representative.
    const int id = static_cast<int>(d.representatives.size());
    d.representatives.push_back(s);
    for (int g = 0; g < a.group().size(); ++g) {
      const int t = a.apply(g, s);
      d.orbit_id[static_cast<std::size_t>(t)] = id;
      d.beta[static_cast<std::size_t>(t)] = s;
    }
  }
  return d;
}

std::vector<int> stabilizer_coset(const GroupAction& a, int s, int t) {
  std::vector<int> out;
  for (int g = 0; g < a.group().size(); ++g)
    if (a.apply(g, s) == t) out.push_back(g);
  return out;
}

PointKernel::PointKernel(int points, std::vector<std::vector<std::vector<int>>> cosets)
    : points_(points), cosets_(std::move(cosets)) {}

Rat PointKernel::uniform_weight(int s, int t) const {
  const auto& c = support(s, t);
  if (c.empty()) return Rat(0);
  return Rat(1, static_cast<unsigned long>(c.size()));
}

Rat PointKernel::weight(int s, int t, int g) const {
  const auto& c = support(s, t);
  if (std::binary_search(c.begin(), c.end(), g)) return uniform_weight(s, t);
  return Rat(0);
}

namespace {

PointKernel build_kernel(const GroupAction& a) {
  const int m = a.points();
  std::vector<std::vector<std::vector<int>>> cosets(static_cast<std::size_t>(m));
  for (int s = 0; s < m; ++s) {
    cosets[static_cast<std::size_t>(s)].resize(static_cast<std::size_t>(m));
    for (int g = 0; g < a.group().size(); ++g)
      cosets[static_cast<std::size_t>(s)][static_cast<std::size_t>(a.apply(g, s))].push_back(g);
  }
  // Element indices come out in increasing order already, but sort defensively
  // so binary_search in weight() stays valid for any construction path.
  for (auto& row : cosets)
    for (auto& c : row) std::sort(c.begin(), c.end());
  return PointKernel(m, std::move(cosets));
}

}  // namespace

ActionContext::ActionContext(GroupAction action)
    : action_(std::move(action)), orbits_(palmcalc::orbits(action_)), kappa_(build_kernel(action_)) {}

FiniteMeasure ActionContext::mu(int s) const {
  FiniteMeasure m(points());
  for (int t = 0; t < points(); ++t) m.at(t) = mu(s, t);
  return m;
}

Rat ActionContext::mu_integrate(int s, const std::vector<Rat>& k) const {
  Rat total(0);
  for (int t = 0; t < points(); ++t) total += mu(s, t) * k[static_cast<std::size_t>(t)];
  return total;
}

FiniteMeasure ActionContext::phi(int s, const std::vector<Rat>& k) const {
  const Rat norm = mu_integrate(s, k);
  if (norm == 0) throw std::invalid_argument("phi: mu_s(k) vanishes");
  FiniteMeasure m = mu(s);
  for (Rat& x : m.w) x /= norm;
  return m;
}

Rat ActionContext::delta_star(int s) const {
  // Delta(g_s^{-1}) with trivial Delta.
  (void)s;
  return Rat(1);
}

Rat ActionContext::delta_tilde(const std::vector<Rat>& k, int s, int t) const {
  const Rat ms = mu_integrate(s, k);
  const Rat mt = mu_integrate(t, k);
  const Rat mbs = mu_integrate(beta(s), k);
  const Rat mbt = mu_integrate(beta(t), k);
  if (ms == 0 || mbt == 0) throw std::invalid_argument("delta_tilde: vanishing normalizer");
  return (mt / mbt) * (mbs / ms);
}

CheckReport check_kappa_disintegration(const ActionContext& ctx) {
  const int m = ctx.points();
  const int n = ctx.group().size();
  // Both sides are measures on S x G; compare cell by cell.
  for (int s = 0; s < m; ++s) {
    std::vector<Rat> lhs(static_cast<std::size_t>(m) * static_cast<std::size_t>(n), Rat(0));
    for (int g = 0; g < n; ++g)
      lhs[static_cast<std::size_t>(ctx.apply(g, s)) * static_cast<std::size_t>(n) + static_cast<std::size_t>(g)] += 1;
    for (int t = 0; t < m; ++t) {
      const Rat mass = ctx.mu(s, t);
      const Rat uw = ctx.kappa().uniform_weight(s, t);
      std::vector<Rat> rhs_row(static_cast<std::size_t>(n), Rat(0));
      for (int g : ctx.coset(s, t)) rhs_row[static_cast<std::size_t>(g)] = mass * uw;
      for (int g = 0; g < n; ++g) {
        const Rat& l = lhs[static_cast<std::size_t>(t) * static_cast<std::size_t>(n) + static_cast<std::size_t>(g)];
        if (l != rhs_row[static_cast<std::size_t>(g)]) {
          Witness w;
          w.s = s;
          w.t = t;
          w.g = g;
          w.detail = "haar disintegration atom mismatch";
          return CheckReport::fail("kappa_disintegration", l, rhs_row[static_cast<std::size_t>(g)], std::move(w));
        }
      }
    }
  }
  return CheckReport::pass("kappa_disintegration", Rat(ctx.group().size()), Rat(ctx.group().size()));
}

CheckReport check_kappa_properties(const ActionContext& ctx) {
  const int m = ctx.points();
  const int n = ctx.group().size();
  for (int s = 0; s < m; ++s) {
    for (int t = 0; t < m; ++t) {
      const auto& c = ctx.coset(s, t);
      const bool on_orbit = ctx.orbit_id(s) == ctx.orbit_id(t);
      // (ii) concentration and (iii) normalization.
      Rat total(0);
      for (int g : c) {
        if (ctx.apply(g, s) != t) {
          Witness w{g, s, t, -1, "kernel mass outside the coset"};
          return CheckReport::fail("kappa_properties", Rat(1), Rat(0), std::move(w));
        }
        total += ctx.kappa().weight(s, t, g);
      }
      const Rat want = on_orbit ? Rat(1) : Rat(0);
      if (total != want) {
        Witness w{-1, s, t, -1, "kernel total mass"};
        return CheckReport::fail("kappa_properties", total, want, std::move(w));
      }
      // (i) equivariance: kappa_{s,gt}({h}) = kappa_{s,t}({g^{-1}h}).
      for (int g = 0; g < n; ++g) {
        const int gt = ctx.apply(g, t);
        for (int h = 0; h < n; ++h) {
          const Rat a = ctx.kappa().weight(s, gt, h);
          const Rat b = ctx.kappa().weight(s, t, ctx.group().mul(ctx.group().inv(g), h));
          if (a != b) {
            Witness w{g, s, t, -1, "kernel equivariance at h=" + std::to_string(h)};
            return CheckReport::fail("kappa_properties", a, b, std::move(w));
          }
        }
      }
    }
  }
  return CheckReport::pass("kappa_properties", Rat(1), Rat(1));
}

CheckReport check_mu_translation(const ActionContext& ctx) {
  for (int g = 0; g < ctx.group().size(); ++g) {
    for (int s = 0; s < ctx.points(); ++s) {
      const int gs = ctx.apply(g, s);
      for (int t = 0; t < ctx.points(); ++t) {
        const Rat a = ctx.mu(gs, t);
        const Rat b = ctx.mu(s, t);
        if (a != b) {
          Witness w{g, s, t, -1, "mu_{gs} != mu_s"};
          return CheckReport::fail("mu_translation", a, b, std::move(w));
        }
      }
    }
  }
  return CheckReport::pass("mu_translation", Rat(1), Rat(1));
}

CheckReport check_delta_star_consistency(const ActionContext& ctx) {
  for (int s = 0; s < ctx.points(); ++s) {
    const int b = ctx.beta(s);
    const Rat via_modular = ctx.delta_star(s);
    Rat via_stab(static_cast<long>(ctx.stabilizer_size(s)), static_cast<long>(ctx.stabilizer_size(b)));
    via_stab.canonicalize();

    // |G_{s,s} b| and |G_{b,b} s|: orbits of the representative / the point
    // under the two stabilizer subgroups.
    std::vector<bool> hit1(static_cast<std::size_t>(ctx.points()), false);
    for (int g : ctx.coset(s, s)) hit1[static_cast<std::size_t>(ctx.apply(g, b))] = true;
    std::vector<bool> hit2(static_cast<std::size_t>(ctx.points()), false);
    for (int g : ctx.coset(b, b)) hit2[static_cast<std::size_t>(ctx.apply(g, s))] = true;
    const long c1 = std::count(hit1.begin(), hit1.end(), true);
    const long c2 = std::count(hit2.begin(), hit2.end(), true);
    Rat via_counts(c1, c2);
    via_counts.canonicalize();

    if (via_modular != via_stab || via_stab != via_counts) {
      Witness w{-1, s, -1, -1, "delta_star route disagreement"};
      return CheckReport::fail("delta_star_consistency", via_stab, via_counts, std::move(w));
    }
  }
  return CheckReport::pass("delta_star_consistency", Rat(1), Rat(1));
}

CheckReport check_phi_orbit_constant(const ActionContext& ctx, const std::vector<Rat>& k) {
  for (int s = 0; s < ctx.points(); ++s) {
    const FiniteMeasure base = ctx.phi(s, k);
    for (int g = 0; g < ctx.group().size(); ++g) {
      const FiniteMeasure shifted = ctx.phi(ctx.apply(g, s), k);
      if (!(shifted == base)) {
        Witness w{g, s, -1, -1, "phi not constant on the orbit"};
        return CheckReport::fail("phi_orbit_constant", base.total(), shifted.total(), std::move(w));
      }
    }
  }
  return CheckReport::pass("phi_orbit_constant", Rat(1), Rat(1));
}

}  // namespace palmcalc
