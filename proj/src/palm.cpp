#include "palmcalc/palm.hpp"

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace palmcalc {

namespace {

// Sparse measure on a product cell space; both sides of an identity are
// accumulated here and compared atom by atom.
template <std::size_t N>
class CellMeasure {
 public:
  void add(const std::array<int, N>& cell, const Rat& weight) {
    if (weight == 0) return;
    cells_[cell] += weight;
  }

  Rat total() const {
    Rat t(0);
    for (const auto& [c, x] : cells_) t += x;
    return t;
  }

  struct Diff {
    std::array<int, N> cell;
    Rat lhs;
    Rat rhs;
  };

  static std::optional<Diff> first_difference(const CellMeasure& a, const CellMeasure& b) {
    auto ia = a.cells_.begin();
    auto ib = b.cells_.begin();
    while (ia != a.cells_.end() || ib != b.cells_.end()) {
      if (ib == b.cells_.end() || (ia != a.cells_.end() && ia->first < ib->first)) {
        if (ia->second != 0) return Diff{ia->first, ia->second, Rat(0)};
        ++ia;
      } else if (ia == a.cells_.end() || ib->first < ia->first) {
        if (ib->second != 0) return Diff{ib->first, Rat(0), ib->second};
        ++ib;
      } else {
        if (ia->second != ib->second) return Diff{ia->first, ia->second, ib->second};
        ++ia;
        ++ib;
      }
    }
    return std::nullopt;
  }

 private:
  std::map<std::array<int, N>, Rat> cells_;
};

template <std::size_t N>
CheckReport compare_cells(const std::string& name, const CellMeasure<N>& lhs,
                          const CellMeasure<N>& rhs, const std::string& what) {
  if (auto d = CellMeasure<N>::first_difference(lhs, rhs)) {
    Witness w;
    w.detail = what + " at cell (";
    for (std::size_t i = 0; i < N; ++i)
      w.detail += (i ? "," : "") + std::to_string(d->cell[i]);
    w.detail += ")";
    if (N >= 1) w.omega = d->cell[0];
    return CheckReport::fail(name, d->lhs, d->rhs, std::move(w));
  }
  return CheckReport::pass(name, lhs.total(), rhs.total());
}

}  // namespace

CheckReport check_flow_invariance(const FlowSystem& f) {
  for (int g : f.flow.group().generator_indices()) {
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat& a = f.P[static_cast<std::size_t>(f.shift(g, w))];
      const Rat& b = f.P[static_cast<std::size_t>(w)];
      if (a != b) {
        Witness wit{g, -1, -1, w, "underlying measure moves under the flow"};
        return CheckReport::fail("flow_invariance", a, b, std::move(wit));
      }
    }
  }
  Rat tot(0);
  for (const Rat& x : f.P) tot += x;
  return CheckReport::pass("flow_invariance", tot, tot);
}

CheckReport check_random_measure_covariance(const FlowSystem& f, const ActionContext& ctx,
                                            const RandomMeasure& xi) {
  for (int g : f.flow.group().generator_indices()) {
    const int ginv = f.flow.group().inv(g);
    for (int w = 0; w < f.omega_size(); ++w) {
      const int gw = f.shift(g, w);
      for (int s = 0; s < ctx.points(); ++s) {
        // xi(theta_g w, {s}) = xi(w, {g^{-1} s}).
        const Rat& a = xi.at(gw).at(s);
        const Rat& b = xi.at(w).at(ctx.apply(ginv, s));
        if (a != b) {
          Witness wit{g, s, -1, w, "random measure violates covariance"};
          return CheckReport::fail("random_measure_covariance", a, b, std::move(wit));
        }
      }
    }
  }
  return CheckReport::pass("random_measure_covariance", Rat(1), Rat(1));
}

CheckReport check_transport_kernel_invariance(const FlowSystem& f, const ActionContext& ctx,
                                              const RandomTransportKernel& gamma) {
  for (int g : f.flow.group().generator_indices()) {
    const int ginv = f.flow.group().inv(g);
    for (int w = 0; w < f.omega_size(); ++w) {
      const int gw = f.shift(g, w);
      for (int s = 0; s < ctx.points(); ++s) {
        const int gs = ctx.apply(g, s);
        for (int t = 0; t < ctx.points(); ++t) {
          const Rat& a = gamma.at(gw, gs).at(t);
          const Rat& b = gamma.at(w, s).at(ctx.apply(ginv, t));
          if (a != b) {
            Witness wit{g, s, t, w, "transport kernel violates equivariance"};
            return CheckReport::fail("transport_kernel_invariance", a, b, std::move(wit));
          }
        }
      }
    }
  }
  return CheckReport::pass("transport_kernel_invariance", Rat(1), Rat(1));
}

TransportQuadruple disintegrate_random_pair_measure(const FlowSystem& f,
                                                    const RandomPairMeasure& m) {
  const int omega = f.omega_size();
  const int n = omega > 0 ? m.at(0).n : 0;
  TransportQuadruple q;
  q.xi.xi.assign(static_cast<std::size_t>(omega), FiniteMeasure(n));
  q.eta.xi.assign(static_cast<std::size_t>(omega), FiniteMeasure(n));
  q.gamma = RandomTransportKernel(omega, n);
  q.delta = RandomTransportKernel(omega, n);
  for (int w = 0; w < omega; ++w) {
    const PairMeasure& mw = m.at(w);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        q.xi.at(w).at(s) += mw.at(s, t);
        q.eta.at(w).at(t) += mw.at(s, t);
      }
    for (int s = 0; s < n; ++s) {
      if (q.xi.at(w).at(s) == 0) continue;
      for (int t = 0; t < n; ++t) q.gamma.at(w, s).at(t) = mw.at(s, t) / q.xi.at(w).at(s);
    }
    for (int t = 0; t < n; ++t) {
      if (q.eta.at(w).at(t) == 0) continue;
      for (int s = 0; s < n; ++s) q.delta.at(w, t).at(s) = mw.at(s, t) / q.eta.at(w).at(t);
    }
  }
  return q;
}

PairMeasure campbell(const FlowSystem& f, const RandomMeasure& xi) {
  // Rows indexed by omega, columns by s; PairMeasure is square, so embed into
  // max(omega, points). Kept rectangular-aware by only touching valid cells.
  const int omega = f.omega_size();
  const int n = omega > 0 ? xi.at(0).points() : 0;
  PairMeasure c(std::max(omega, n));
  for (int w = 0; w < omega; ++w) {
    if (f.P[static_cast<std::size_t>(w)] == 0) continue;
    for (int s = 0; s < n; ++s) c.at(w, s) = f.P[static_cast<std::size_t>(w)] * xi.at(w).at(s);
  }
  return c;
}

PalmPair palm_pair(const FlowSystem& f, const RandomMeasure& xi) {
  const int omega = f.omega_size();
  const int n = omega > 0 ? xi.at(0).points() : 0;
  PalmPair p;
  p.nu = FiniteMeasure(n);
  p.Q.assign(static_cast<std::size_t>(n), FiniteMeasure(omega));
  for (int w = 0; w < omega; ++w)
    for (int s = 0; s < n; ++s)
      p.nu.at(s) += f.P[static_cast<std::size_t>(w)] * xi.at(w).at(s);
  for (int s = 0; s < n; ++s) {
    if (p.nu.at(s) == 0) continue;  // zero kernel on nu-null points
    for (int w = 0; w < omega; ++w)
      p.Q[static_cast<std::size_t>(s)].at(w) =
          f.P[static_cast<std::size_t>(w)] * xi.at(w).at(s) / p.nu.at(s);
  }
  return p;
}

CheckReport check_palm_pair_invariants(const FlowSystem& f, const ActionContext& ctx,
                                       const RandomMeasure& xi, const PalmPair& pair) {
  const int omega = f.omega_size();
  const int n = ctx.points();
  // Disintegration: C({w} x {s}) = nu({s}) Q_s({w}).
  for (int w = 0; w < omega; ++w)
    for (int s = 0; s < n; ++s) {
      const Rat c = f.P[static_cast<std::size_t>(w)] * xi.at(w).at(s);
      const Rat d = pair.nu.at(s) * pair.Q[static_cast<std::size_t>(s)].at(w);
      if (c != d) {
        Witness wit{-1, s, -1, w, "Campbell disintegration atom mismatch"};
        return CheckReport::fail("palm_pair_invariants", c, d, std::move(wit));
      }
    }
  // Kernel equivariance over the whole group.
  for (int g = 0; g < ctx.group().size(); ++g) {
    const int ginv = ctx.group().inv(g);
    for (int s = 0; s < n; ++s) {
      const int gs = ctx.apply(g, s);
      for (int w = 0; w < omega; ++w) {
        const Rat& a = pair.Q[static_cast<std::size_t>(gs)].at(w);
        const Rat& b = pair.Q[static_cast<std::size_t>(s)].at(f.shift(ginv, w));
        if (a != b) {
          Witness wit{g, s, -1, w, "Palm kernel violates equivariance"};
          return CheckReport::fail("palm_pair_invariants", a, b, std::move(wit));
        }
      }
    }
  }
  return CheckReport::pass("palm_pair_invariants", pair.nu.total(), pair.nu.total());
}

CheckReport check_refined_campbell(const FlowSystem& f, const ActionContext& ctx,
                                   const RandomMeasure& xi, const PalmPair& pair,
                                   const std::vector<Rat>& k) {
  const OrbitMeasure nu_star = invariant_cone_decompose(ctx, pair.nu, k);
  // Cells: (shifted sample point, group element, orbit).
  CellMeasure<3> lhs, rhs;
  for (int w = 0; w < f.omega_size(); ++w) {
    if (f.P[static_cast<std::size_t>(w)] == 0) continue;
    for (int t = 0; t < ctx.points(); ++t) {
      const Rat mass = f.P[static_cast<std::size_t>(w)] * xi.at(w).at(t);
      if (mass == 0) continue;
      const int b = ctx.beta(t);
      const Rat kw = ctx.kappa().uniform_weight(b, t);
      for (int g : ctx.coset(b, t))
        lhs.add({f.shift(ctx.group().inv(g), w), g, ctx.orbit_id(t)}, mass * kw);
    }
  }
  for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
    const int b = ctx.representatives()[static_cast<std::size_t>(j)];
    const Rat scale = nu_star.at(b);
    if (scale == 0) continue;
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat qmass = pair.Q[static_cast<std::size_t>(b)].at(w);
      if (qmass == 0) continue;
      for (int g = 0; g < ctx.group().size(); ++g) rhs.add({w, g, j}, scale * qmass);
    }
  }
  return compare_cells("refined_campbell", lhs, rhs, "refined Campbell identity differs");
}

namespace {

// Shared core of the transport and exchange formulas. The kernels are
// callables (omega, source point) -> measure on S so that the exchange case
// can plug in the random measures themselves.
template <typename KernelFn>
void transport_side_lhs(const FlowSystem& f, const ActionContext& ctx,
                        const PalmPair& pair_eta, const OrbitMeasure& nu_star_eta,
                        KernelFn delta, CellMeasure<4>& out) {
  for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
    const int b = ctx.representatives()[static_cast<std::size_t>(j)];
    const Rat scale = nu_star_eta.at(b);
    if (scale == 0) continue;
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat qmass = pair_eta.Q[static_cast<std::size_t>(b)].at(w);
      if (qmass == 0) continue;
      for (int s = 0; s < ctx.points(); ++s) {
        const Rat dmass = delta(w, b).at(s);
        if (dmass == 0) continue;
        const int bs = ctx.beta(s);
        const Rat kw = ctx.kappa().uniform_weight(bs, s);
        const Rat weight = scale * qmass * dmass * ctx.delta_star(s) * kw;
        for (int g : ctx.coset(bs, s)) {
          const int ginv = ctx.group().inv(g);
          out.add({f.shift(ginv, w), ginv, j, ctx.orbit_id(s)}, weight);
        }
      }
    }
  }
}

template <typename KernelFn>
void transport_side_rhs(const FlowSystem& f, const ActionContext& ctx,
                        const PalmPair& pair_xi, const OrbitMeasure& nu_star_xi,
                        KernelFn gamma, CellMeasure<4>& out) {
  for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
    const int b = ctx.representatives()[static_cast<std::size_t>(j)];
    const Rat scale = nu_star_xi.at(b);
    if (scale == 0) continue;
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat qmass = pair_xi.Q[static_cast<std::size_t>(b)].at(w);
      if (qmass == 0) continue;
      for (int s = 0; s < ctx.points(); ++s) {
        const Rat gmass = gamma(w, b).at(s);
        if (gmass == 0) continue;
        const int bs = ctx.beta(s);
        const Rat kw = ctx.kappa().uniform_weight(bs, s);
        const Rat weight = scale * qmass * gmass * kw;
        for (int g : ctx.coset(bs, s)) out.add({w, g, ctx.orbit_id(s), j}, weight);
      }
    }
  }
}

std::optional<Witness> transport_compatibility_violation(const FlowSystem& f,
                                                         const RandomMeasure& xi,
                                                         const RandomMeasure& eta,
                                                         const RandomTransportKernel& gamma,
                                                         const RandomTransportKernel& delta) {
  const int n = gamma.points;
  for (int w = 0; w < f.omega_size(); ++w) {
    if (f.P[static_cast<std::size_t>(w)] == 0) continue;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        const Rat a = xi.at(w).at(s) * gamma.at(w, s).at(t);
        const Rat b = eta.at(w).at(t) * delta.at(w, t).at(s);
        if (a != b)
          return Witness{-1, s, t, w, "transports disagree on the fibered pair measure"};
      }
  }
  return std::nullopt;
}

}  // namespace

CheckReport check_transport_formula(const FlowSystem& f, const ActionContext& ctx,
                                    const RandomMeasure& xi, const RandomMeasure& eta,
                                    const RandomTransportKernel& gamma,
                                    const RandomTransportKernel& delta,
                                    const PalmPair& pair_xi, const PalmPair& pair_eta,
                                    const std::vector<Rat>& k) {
  if (auto w = transport_compatibility_violation(f, xi, eta, gamma, delta))
    return CheckReport::precondition_failed("transport_formula", std::move(*w));

  const OrbitMeasure nu_star_xi = invariant_cone_decompose(ctx, pair_xi.nu, k);
  const OrbitMeasure nu_star_eta = invariant_cone_decompose(ctx, pair_eta.nu, k);
  CellMeasure<4> lhs, rhs;
  transport_side_lhs(f, ctx, pair_eta, nu_star_eta,
                     [&](int w, int b) -> const FiniteMeasure& { return delta.at(w, b); }, lhs);
  transport_side_rhs(f, ctx, pair_xi, nu_star_xi,
                     [&](int w, int b) -> const FiniteMeasure& { return gamma.at(w, b); }, rhs);
  return compare_cells("transport_formula", lhs, rhs, "transport formula differs");
}

CheckReport check_exchange(const FlowSystem& f, const ActionContext& ctx,
                           const RandomMeasure& xi, const RandomMeasure& eta,
                           const PalmPair& pair_xi, const PalmPair& pair_eta,
                           const std::vector<Rat>& k, bool group_case) {
  const OrbitMeasure nu_star_xi = invariant_cone_decompose(ctx, pair_xi.nu, k);
  const OrbitMeasure nu_star_eta = invariant_cone_decompose(ctx, pair_eta.nu, k);

  // Four-argument form: gamma(w, s, .) := eta(w, .), delta(w, t, .) := xi(w, .).
  {
    CellMeasure<4> lhs, rhs;
    transport_side_lhs(f, ctx, pair_eta, nu_star_eta,
                       [&](int w, int) -> const FiniteMeasure& { return xi.at(w); }, lhs);
    transport_side_rhs(f, ctx, pair_xi, nu_star_xi,
                       [&](int w, int) -> const FiniteMeasure& { return eta.at(w); }, rhs);
    CheckReport r = compare_cells("exchange_formula", lhs, rhs, "exchange formula differs");
    if (!r.passed()) return r;
  }

  // Reduced three-argument form: cells (sample point, point, point).
  {
    CellMeasure<3> lhs, rhs;
    for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
      const int b = ctx.representatives()[static_cast<std::size_t>(j)];
      const Rat se = nu_star_eta.at(b);
      const Rat sx = nu_star_xi.at(b);
      for (int w = 0; w < f.omega_size(); ++w) {
        const Rat qe = pair_eta.Q[static_cast<std::size_t>(b)].at(w);
        const Rat qx = pair_xi.Q[static_cast<std::size_t>(b)].at(w);
        for (int s = 0; s < ctx.points(); ++s) {
          if (se != 0 && qe != 0 && xi.at(w).at(s) != 0) {
            const int bs = ctx.beta(s);
            const Rat kw = ctx.kappa().uniform_weight(bs, s);
            const Rat weight = se * qe * xi.at(w).at(s) * ctx.delta_star(s) * kw;
            for (int g : ctx.coset(bs, s)) {
              const int ginv = ctx.group().inv(g);
              lhs.add({f.shift(ginv, w), ctx.apply(ginv, b), bs}, weight);
            }
          }
          if (sx != 0 && qx != 0 && eta.at(w).at(s) != 0)
            rhs.add({w, s, b}, sx * qx * eta.at(w).at(s));
        }
      }
    }
    CheckReport r = compare_cells("exchange_formula_reduced", lhs, rhs,
                                  "reduced exchange formula differs");
    if (!r.passed()) return r;
  }

  // Classical group form on S = G instances; the transitive representative is
  // the identity point and the modular weight is trivial.
  if (group_case) {
    const int b = ctx.representatives()[0];
    CellMeasure<2> lhs, rhs;
    const Rat se = nu_star_eta.at(b);
    const Rat sx = nu_star_xi.at(b);
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat qe = pair_eta.Q[static_cast<std::size_t>(b)].at(w);
      const Rat qx = pair_xi.Q[static_cast<std::size_t>(b)].at(w);
      for (int s = 0; s < ctx.points(); ++s) {
        if (se != 0 && qe != 0 && xi.at(w).at(s) != 0) {
          // kappa_{b,s} is the point mass at the unique transporter.
          const int g = ctx.coset(b, s).front();
          const int ginv = ctx.group().inv(g);
          lhs.add({f.shift(ginv, w), ginv}, se * qe * xi.at(w).at(s));
        }
        if (sx != 0 && qx != 0 && eta.at(w).at(s) != 0) {
          const int g = ctx.coset(b, s).front();
          rhs.add({w, g}, sx * qx * eta.at(w).at(s));
        }
      }
    }
    CheckReport r = compare_cells("exchange_formula_group", lhs, rhs,
                                  "group-case exchange formula differs");
    if (!r.passed()) return r;
  }

  return CheckReport::pass("exchange_formula", Rat(0), Rat(0));
}

CheckReport check_char_palm(const FlowSystem& f, const RandomMeasure& xi,
                            const FiniteMeasure& nu, const std::vector<FiniteMeasure>& q) {
  const int omega = f.omega_size();
  const int n = nu.points();
  // Mass of the candidate kernel on {xi = 0} must vanish on the support.
  for (int s = 0; s < n; ++s) {
    if (nu.at(s) == 0) continue;
    for (int w = 0; w < omega; ++w)
      if (xi.vanishes_at(w) && q[static_cast<std::size_t>(s)].at(w) != 0) {
        Witness wit{-1, s, -1, w, "kernel mass on vanishing configurations"};
        return CheckReport::fail("char_palm", q[static_cast<std::size_t>(s)].at(w), Rat(0),
                                 std::move(wit));
      }
  }
  // Symmetry identity over indicator cells (sample point, s, t).
  CellMeasure<3> lhs, rhs;
  for (int s = 0; s < n; ++s) {
    if (nu.at(s) == 0) continue;
    for (int w = 0; w < omega; ++w) {
      const Rat base = nu.at(s) * q[static_cast<std::size_t>(s)].at(w);
      if (base == 0) continue;
      for (int t = 0; t < n; ++t) {
        const Rat mass = base * xi.at(w).at(t);
        if (mass == 0) continue;
        lhs.add({w, s, t}, mass);
        rhs.add({w, t, s}, mass);
      }
    }
  }
  return compare_cells("char_palm", lhs, rhs, "symmetry identity differs");
}

std::vector<Rat> reconstruct_underlying(const FiniteMeasure& nu,
                                        const std::vector<FiniteMeasure>& q,
                                        const RandomMeasure& xi) {
  const int omega = static_cast<int>(xi.xi.size());
  std::vector<Rat> p(static_cast<std::size_t>(omega), Rat(0));
  for (int w = 0; w < omega; ++w) {
    const Rat total = xi.at(w).total();
    if (total == 0) continue;  // division guard
    for (int s = 0; s < nu.points(); ++s)
      p[static_cast<std::size_t>(w)] += q[static_cast<std::size_t>(s)].at(w) * nu.at(s) / total;
  }
  return p;
}

CheckReport check_mecke(const FlowSystem& f, const ActionContext& ctx,
                        const FiniteMeasure& nu, const std::vector<FiniteMeasure>& q,
                        const RandomMeasure& xi, const std::vector<Rat>& k) {
  OrbitMeasure nu_star;
  try {
    nu_star = invariant_cone_decompose(ctx, nu, k);
  } catch (const std::invalid_argument&) {
    Witness wit{-1, -1, -1, -1, "candidate supporting measure is not invariant"};
    return CheckReport::precondition_failed("mecke", std::move(wit));
  }

  // Forward identity over cells (sample point, point, point).
  CellMeasure<3> lhs, rhs;
  for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
    const int b = ctx.representatives()[static_cast<std::size_t>(j)];
    const Rat scale = nu_star.at(b);
    if (scale == 0) continue;
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat qmass = q[static_cast<std::size_t>(b)].at(w);
      if (qmass == 0) continue;
      for (int s = 0; s < ctx.points(); ++s) {
        const Rat mass = xi.at(w).at(s);
        if (mass == 0) continue;
        const int bs = ctx.beta(s);
        const Rat kw = ctx.kappa().uniform_weight(bs, s);
        const Rat weight = scale * qmass * mass * ctx.delta_star(s) * kw;
        for (int g : ctx.coset(bs, s)) {
          const int ginv = ctx.group().inv(g);
          lhs.add({f.shift(ginv, w), ctx.apply(ginv, b), bs}, weight);
        }
        rhs.add({w, s, b}, scale * qmass * mass);
      }
    }
  }
  CheckReport fwd = compare_cells("mecke", lhs, rhs, "characterizing identity differs");
  if (!fwd.passed()) return fwd;

  // Regularity: no kernel mass on {xi = 0} (sigma-finiteness is automatic).
  CheckReport reg = check_char_palm(f, xi, nu, q);
  if (!reg.passed()) {
    reg.check_name = "mecke";
    return reg;
  }

  // Converse: the reconstructed underlying measure is invariant and carries
  // (nu, Q) as a Palm pair of xi.
  const std::vector<Rat> p = reconstruct_underlying(nu, q, xi);
  FlowSystem recon{f.flow, p};
  const CheckReport inv = check_flow_invariance(recon);
  if (!inv.passed()) {
    Witness wit = inv.witness.value_or(Witness{});
    wit.detail = "reconstructed measure is not invariant: " + wit.detail;
    return CheckReport::fail("mecke", Rat(0), Rat(1), std::move(wit));
  }
  const PalmPair again = palm_pair(recon, xi);
  for (int s = 0; s < ctx.points(); ++s)
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat a = again.nu.at(s) * again.Q[static_cast<std::size_t>(s)].at(w);
      const Rat b = nu.at(s) * q[static_cast<std::size_t>(s)].at(w);
      if (a != b) {
        Witness wit{-1, s, -1, w, "reconstruction does not reproduce the Campbell atoms"};
        return CheckReport::fail("mecke", a, b, std::move(wit));
      }
    }
  return fwd;
}

CheckReport check_inversion(const FlowSystem& f, const ActionContext& ctx,
                            const RandomMeasure& xi, const PalmPair& pair,
                            const std::vector<Rat>& f_invariant,
                            const std::vector<Rat>& v, const std::vector<Rat>& k) {
  const int n = ctx.points();
  const auto fval = [&](int w, int s) -> const Rat& {
    return f_invariant[static_cast<std::size_t>(w) * static_cast<std::size_t>(n) + static_cast<std::size_t>(s)];
  };
  for (int g : ctx.group().generator_indices())
    for (int w = 0; w < f.omega_size(); ++w)
      for (int s = 0; s < n; ++s)
        if (fval(f.shift(g, w), ctx.apply(g, s)) != fval(w, s)) {
          Witness wit{g, s, -1, w, "integrand is not jointly invariant"};
          return CheckReport::precondition_failed("inversion", std::move(wit));
        }

  const OrbitMeasure nu_star = invariant_cone_decompose(ctx, pair.nu, k);
  Rat lhs(0), rhs(0);
  for (int b : ctx.representatives()) {
    const Rat scale = nu_star.at(b) * ctx.mu_integrate(b, v);
    if (scale == 0) continue;
    for (int w = 0; w < f.omega_size(); ++w)
      lhs += scale * pair.Q[static_cast<std::size_t>(b)].at(w) * fval(w, b);
  }
  for (int w = 0; w < f.omega_size(); ++w) {
    if (f.P[static_cast<std::size_t>(w)] == 0) continue;
    for (int s = 0; s < n; ++s)
      rhs += f.P[static_cast<std::size_t>(w)] * fval(w, s) * v[static_cast<std::size_t>(s)] * xi.at(w).at(s);
  }
  if (lhs != rhs) {
    Witness wit{-1, -1, -1, -1, "inversion identity fails"};
    return CheckReport::fail("inversion", lhs, rhs, std::move(wit));
  }
  return CheckReport::pass("inversion", lhs, rhs);
}

CheckReport check_random_mtp(const FlowSystem& f, const ActionContext& ctx,
                             const RandomMeasure& xi, const RandomMeasure& eta,
                             const RandomTransportKernel& gamma,
                             const RandomTransportKernel& delta,
                             const std::vector<int>& b_set,
                             const std::vector<Rat>& h_invariant,
                             const std::vector<Rat>& v, const std::vector<Rat>& w,
                             const std::vector<Rat>& k) {
  const int n = ctx.points();
  const auto hval = [&](int om, int s, int t) -> const Rat& {
    return h_invariant[(static_cast<std::size_t>(om) * static_cast<std::size_t>(n) + static_cast<std::size_t>(s)) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)];
  };

  if (auto wit = transport_compatibility_violation(f, xi, eta, gamma, delta))
    return CheckReport::precondition_failed("random_mtp", std::move(*wit));
  {
    const CheckReport sym = check_symmetric_set(ctx, b_set);
    if (!sym.passed()) {
      Witness wit = sym.witness.value_or(Witness{});
      wit.detail = "set is not symmetric: " + wit.detail;
      return CheckReport::precondition_failed("random_mtp", std::move(wit));
    }
  }
  for (int g : ctx.group().generator_indices())
    for (int om = 0; om < f.omega_size(); ++om)
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          if (hval(f.shift(g, om), ctx.apply(g, s), ctx.apply(g, t)) != hval(om, s, t)) {
            Witness wit{g, s, t, om, "weight function is not jointly invariant"};
            return CheckReport::precondition_failed("random_mtp", std::move(wit));
          }

  std::vector<bool> in_b(static_cast<std::size_t>(n), false);
  for (int s : b_set) in_b[static_cast<std::size_t>(s)] = true;

  // Set form with the orbit-normalized weight.
  {
    Rat lhs(0), rhs(0);
    for (int om = 0; om < f.omega_size(); ++om) {
      const Rat pw = f.P[static_cast<std::size_t>(om)];
      if (pw == 0) continue;
      for (int s = 0; s < n; ++s) {
        if (in_b[static_cast<std::size_t>(s)] && xi.at(om).at(s) != 0)
          for (int t = 0; t < n; ++t)
            lhs += pw * xi.at(om).at(s) * gamma.at(om, s).at(t) * ctx.delta_tilde(k, s, t) * hval(om, s, t);
        if (in_b[static_cast<std::size_t>(s)] && eta.at(om).at(s) != 0)
          for (int t = 0; t < n; ++t)
            rhs += pw * eta.at(om).at(s) * delta.at(om, s).at(t) * hval(om, t, s);
      }
    }
    if (lhs != rhs) {
      Witness wit{-1, -1, -1, -1, "set form fails"};
      return CheckReport::fail("random_mtp", lhs, rhs, std::move(wit));
    }
  }

  // Weighted form for balanced (v, w).
  {
    const CheckReport bal = check_balance(ctx, v, w);
    if (!bal.passed()) {
      Witness wit = bal.witness.value_or(Witness{});
      wit.detail = "weights unbalanced: " + wit.detail;
      return CheckReport::precondition_failed("random_mtp", std::move(wit));
    }
    Rat lhs(0), rhs(0);
    for (int om = 0; om < f.omega_size(); ++om) {
      const Rat pw = f.P[static_cast<std::size_t>(om)];
      if (pw == 0) continue;
      for (int t = 0; t < n; ++t)
        if (eta.at(om).at(t) != 0 && w[static_cast<std::size_t>(t)] != 0)
          for (int s = 0; s < n; ++s)
            lhs += pw * eta.at(om).at(t) * w[static_cast<std::size_t>(t)] * delta.at(om, t).at(s) * hval(om, t, s);
      for (int s = 0; s < n; ++s)
        if (xi.at(om).at(s) != 0 && w[static_cast<std::size_t>(s)] != 0) {
          const Rat mu_s_v = ctx.mu_integrate(s, v);
          for (int t = 0; t < n; ++t) {
            if (gamma.at(om, s).at(t) == 0) continue;
            const Rat delta_v = ctx.mu_integrate(t, v) / mu_s_v;
            rhs += pw * xi.at(om).at(s) * w[static_cast<std::size_t>(s)] * gamma.at(om, s).at(t) * delta_v * hval(om, t, s);
          }
        }
    }
    if (lhs != rhs) {
      Witness wit{-1, -1, -1, -1, "weighted form fails"};
      return CheckReport::fail("random_mtp", lhs, rhs, std::move(wit));
    }
  }

  // Two-random-measure corollary: gamma := eta, delta := xi.
  {
    Rat lhs(0), rhs(0);
    for (int om = 0; om < f.omega_size(); ++om) {
      const Rat pw = f.P[static_cast<std::size_t>(om)];
      if (pw == 0) continue;
      for (int s = 0; s < n; ++s) {
        if (xi.at(om).at(s) == 0) continue;
        const Rat mu_s_v = ctx.mu_integrate(s, v);
        for (int t = 0; t < n; ++t) {
          const Rat mass = pw * xi.at(om).at(s) * eta.at(om).at(t) * hval(om, s, t);
          if (mass == 0) continue;
          lhs += ctx.mu_integrate(t, v) / mu_s_v * w[static_cast<std::size_t>(s)] * mass;
          rhs += w[static_cast<std::size_t>(t)] * mass;
        }
      }
    }
    if (lhs != rhs) {
      Witness wit{-1, -1, -1, -1, "two-random-measure corollary fails"};
      return CheckReport::fail("random_mtp", lhs, rhs, std::move(wit));
    }
    return CheckReport::pass("random_mtp", lhs, rhs);
  }
}

CheckReport check_palm_quasi(const FlowSystem& f, const ActionContext& ctx,
                             const RandomMeasure& xi, const PalmPair& pair) {
  // nu* is unique here (the projection measures have disjoint supports), so
  // aligning with the per-orbit supporting measure sum_b mu_b multiplies the
  // canonical kernel by nu*({b}).
  const OrbitMeasure nu_star = invariant_cone_decompose(ctx, pair.nu, ctx.unit_witness());
  std::string skipped;
  for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
    const int b = ctx.representatives()[static_cast<std::size_t>(j)];
    const Rat scale = nu_star.at(b);
    if (scale == 0) {
      skipped += (skipped.empty() ? "" : ",") + std::to_string(b);
      continue;
    }
    // Explicit kernel with the flat orbit weight w_b = 1_{Gb}/|G|.
    const Rat wb(1, static_cast<unsigned long>(ctx.group().size()));
    FiniteMeasure explicit_q(f.omega_size());
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat pw = f.P[static_cast<std::size_t>(w)];
      if (pw == 0) continue;
      for (int t = 0; t < ctx.points(); ++t) {
        if (ctx.orbit_id(t) != j) continue;
        const Rat mass = pw * xi.at(w).at(t) * wb;
        if (mass == 0) continue;
        const Rat kw = ctx.kappa().uniform_weight(b, t);
        for (int g : ctx.coset(b, t))
          explicit_q.at(f.shift(ctx.group().inv(g), w)) += mass * kw;
      }
    }
    for (int w = 0; w < f.omega_size(); ++w) {
      const Rat expected = scale * pair.Q[static_cast<std::size_t>(b)].at(w);
      if (explicit_q.at(w) != expected) {
        Witness wit{-1, b, -1, w, "explicit Palm kernel atom differs"};
        return CheckReport::fail("palm_quasi", explicit_q.at(w), expected, std::move(wit));
      }
    }
  }
  CheckReport r = CheckReport::pass("palm_quasi", Rat(0), Rat(0));
  if (!skipped.empty()) {
    Witness wit;
    wit.detail = "zero-intensity orbits skipped at representatives " + skipped;
    r.witness = std::move(wit);
  }
  return r;
}

}  // namespace palmcalc
