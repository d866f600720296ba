#include "palmcalc/instance.hpp"

#include <algorithm>
#include <cstdio>
#include <deque>
#include <map>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "palmcalc/measure_algebra.hpp"
#include "palmcalc/rng.hpp"

namespace palmcalc {

namespace {

using Json = nlohmann::ordered_json;

Perm cycle_perm(int degree, const std::vector<int>& cycle) {
  std::vector<int> im(static_cast<std::size_t>(degree));
  for (int i = 0; i < degree; ++i) im[static_cast<std::size_t>(i)] = i;
  for (std::size_t i = 0; i < cycle.size(); ++i)
    im[static_cast<std::size_t>(cycle[i])] = cycle[(i + 1) % cycle.size()];
  return Perm(std::move(im));
}

std::vector<Perm> family_generators(const InstanceSpec& spec, int& degree) {
  switch (spec.family) {
    case GroupFamily::Trivial:
      degree = 3;
      return {};
    case GroupFamily::Cyclic: {
      degree = spec.family_n;
      std::vector<int> cyc(static_cast<std::size_t>(degree));
      for (int i = 0; i < degree; ++i) cyc[static_cast<std::size_t>(i)] = i;
      return {cycle_perm(degree, cyc)};
    }
    case GroupFamily::Dihedral: {
      degree = spec.family_n;
      std::vector<int> cyc(static_cast<std::size_t>(degree));
      for (int i = 0; i < degree; ++i) cyc[static_cast<std::size_t>(i)] = i;
      std::vector<int> refl(static_cast<std::size_t>(degree));
      for (int i = 0; i < degree; ++i)
        refl[static_cast<std::size_t>(i)] = (degree - i) % degree;
      return {cycle_perm(degree, cyc), Perm(std::move(refl))};
    }
    case GroupFamily::Symmetric3:
      degree = 3;
      return {Perm({1, 0, 2}), Perm({1, 2, 0})};
    case GroupFamily::Symmetric4:
      degree = 4;
      return {Perm({1, 0, 2, 3}), Perm({1, 2, 3, 0})};
    case GroupFamily::Alternating4:
      degree = 4;
      return {cycle_perm(4, {0, 1, 2}), cycle_perm(4, {1, 2, 3})};
    case GroupFamily::KleinFour:
      degree = 4;
      return {Perm({1, 0, 2, 3}), Perm({0, 1, 3, 2})};
    case GroupFamily::Quaternion8:
      // Regular representation on {1,-1,i,-i,j,-j,k,-k}.
      degree = 8;
      return {Perm({2, 3, 1, 0, 6, 7, 5, 4}), Perm({4, 5, 7, 6, 1, 0, 2, 3})};
  }
  throw std::logic_error("unknown group family");
}

Rat rand_rat_pos(Rng& rng) {
  static const long dens[] = {1, 2, 3, 4, 6, 8, 12, 16};
  Rat r(rng.range(1, 8), dens[rng.below(8)]);
  r.canonicalize();
  return r;
}

Rat rand_rat(Rng& rng) {
  if (rng.below(3) == 0) return Rat(0);
  return rand_rat_pos(rng);
}

/// Action of G on the left cosets of the cyclic subgroup generated by h.
/// Returns the coset count and appends the action table column block.
struct CosetAction {
  int cosets = 0;
  std::vector<int> point_coset;  // element index -> coset id
  std::vector<int> coset_rep;    // coset id -> least element index
};

CosetAction coset_partition(const PermGroup& g, int h) {
  // subgroup <h>
  std::vector<int> sub;
  int x = g.identity_index();
  do {
    sub.push_back(x);
    x = g.mul(h, x);
  } while (x != g.identity_index());
  CosetAction out;
  out.point_coset.assign(static_cast<std::size_t>(g.size()), -1);
  for (int a = 0; a < g.size(); ++a) {
    if (out.point_coset[static_cast<std::size_t>(a)] != -1) continue;
    const int id = out.cosets++;
    out.coset_rep.push_back(a);
    for (int s : sub) out.point_coset[static_cast<std::size_t>(g.mul(a, s))] = id;
  }
  return out;
}

GroupAction build_action(std::shared_ptr<const PermGroup> group, const InstanceSpec& spec,
                         const SizeCaps& caps, Rng& rng, bool& s_is_group) {
  s_is_group = false;
  if (spec.action == ActionKind::Natural) return GroupAction::natural(group);

  const int parts = spec.action == ActionKind::Coset ? 1 : spec.union_parts;
  std::vector<CosetAction> blocks;
  int total = 0;
  for (int p = 0; p < parts; ++p) {
    CosetAction best;
    // Draw subgroup generators until the accumulated point count fits; a few
    // retries suffice because the whole group is always a valid block.
    for (int attempt = 0; attempt < 8; ++attempt) {
      const int h = static_cast<int>(rng.below(static_cast<std::uint64_t>(group->size())));
      CosetAction c = coset_partition(*group, h);
      if (best.cosets == 0 || c.cosets < best.cosets) best = std::move(c);
      const int remaining = parts - p - 1;  // later parts need >= 1 point each
      if (total + best.cosets + remaining <= caps.max_points) break;
    }
    if (total + best.cosets > caps.max_points)
      throw std::length_error("point set exceeds cap");
    total += best.cosets;
    blocks.push_back(std::move(best));
  }
  if (parts == 1 && blocks[0].cosets == group->size()) s_is_group = true;
  std::vector<int> table(static_cast<std::size_t>(group->size()) * static_cast<std::size_t>(total));
  int offset = 0;
  for (const CosetAction& blk : blocks) {
    for (int g = 0; g < group->size(); ++g)
      for (int c = 0; c < blk.cosets; ++c) {
        const int moved = blk.point_coset[static_cast<std::size_t>(
            group->mul(g, blk.coset_rep[static_cast<std::size_t>(c)]))];
        table[static_cast<std::size_t>(g) * static_cast<std::size_t>(total) +
              static_cast<std::size_t>(offset + c)] = offset + moved;
      }
    offset += blk.cosets;
  }
  return GroupAction(std::move(group), total, std::move(table));
}

GroupAction build_omega(std::shared_ptr<const PermGroup> group, const GroupAction& s_action,
                        OmegaKind kind, const SizeCaps& caps) {
  switch (kind) {
    case OmegaKind::Point: {
      std::vector<int> table(static_cast<std::size_t>(group->size()), 0);
      return GroupAction(std::move(group), 1, std::move(table));
    }
    case OmegaKind::Self:
      return s_action;
    case OmegaKind::Group: {
      const int n = group->size();
      if (n > caps.max_omega) throw std::length_error("sample space exceeds cap");
      std::vector<int> table(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
      for (int g = 0; g < n; ++g)
        for (int x = 0; x < n; ++x)
          table[static_cast<std::size_t>(g) * static_cast<std::size_t>(n) +
                static_cast<std::size_t>(x)] = group->mul(g, x);
      return GroupAction(std::move(group), n, std::move(table));
    }
  }
  throw std::logic_error("unknown omega kind");
}

/// A measure on S attached to each sample point, equivariant by construction:
/// stabilizer-averaged at each flow-orbit representative and transported
/// along canonical coset elements.
RandomMeasure equivariant_random_measure(const ActionContext& flow_ctx,
                                         const ActionContext& ctx, Rng& rng,
                                         bool vanish_last_orbit, bool force_positive) {
  const int omega = flow_ctx.points();
  const int n = ctx.points();
  RandomMeasure out;
  out.xi.assign(static_cast<std::size_t>(omega), FiniteMeasure(n));
  const int norb = flow_ctx.orbits().orbit_count();
  for (int j = 0; j < norb; ++j) {
    const int r = flow_ctx.representatives()[static_cast<std::size_t>(j)];
    FiniteMeasure base(n);
    const bool zero_orbit = vanish_last_orbit && j == norb - 1 && norb > 1;
    if (!zero_orbit) {
      for (int s = 0; s < n; ++s)
        base.at(s) = (force_positive && j == 0) ? rand_rat_pos(rng) : rand_rat(rng);
      if (j == 0 && base.is_zero()) base.at(0) = Rat(1);
    }
    const std::vector<int>& stab = flow_ctx.coset(r, r);
    FiniteMeasure avg(n);
    for (int s = 0; s < n; ++s) {
      for (int h : stab) avg.at(s) += base.at(ctx.apply(ctx.group().inv(h), s));
      avg.at(s) /= Rat(static_cast<long>(stab.size()));
    }
    for (int w = 0; w < omega; ++w) {
      if (flow_ctx.orbit_id(w) != j) continue;
      const int g = flow_ctx.coset(r, w).front();
      const int ginv = ctx.group().inv(g);
      for (int s = 0; s < n; ++s) out.at(w).at(s) = avg.at(ctx.apply(ginv, s));
    }
  }
  return out;
}

/// Jointly equivariant random pair measure, same construction on S x S.
RandomPairMeasure equivariant_random_pair(const ActionContext& flow_ctx,
                                          const ActionContext& ctx, Rng& rng) {
  const int omega = flow_ctx.points();
  const int n = ctx.points();
  RandomPairMeasure out;
  out.m.assign(static_cast<std::size_t>(omega), PairMeasure(n));
  for (int j = 0; j < flow_ctx.orbits().orbit_count(); ++j) {
    const int r = flow_ctx.representatives()[static_cast<std::size_t>(j)];
    PairMeasure base(n);
    const int atoms = static_cast<int>(rng.range(2, 5));
    for (int i = 0; i < atoms; ++i)
      base.at(static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
              static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))) += rand_rat_pos(rng);
    const std::vector<int>& stab = flow_ctx.coset(r, r);
    PairMeasure avg(n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        for (int h : stab) {
          const int hi = ctx.group().inv(h);
          avg.at(s, t) += base.at(ctx.apply(hi, s), ctx.apply(hi, t));
        }
        avg.at(s, t) /= Rat(static_cast<long>(stab.size()));
      }
    for (int w = 0; w < omega; ++w) {
      if (flow_ctx.orbit_id(w) != j) continue;
      const int g = flow_ctx.coset(r, w).front();
      const int ginv = ctx.group().inv(g);
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t)
          out.at(w).at(s, t) = avg.at(ctx.apply(ginv, s), ctx.apply(ginv, t));
    }
  }
  return out;
}

/// Class labels of the diagonal action on cells of a product space, via BFS.
/// The cell coordinates move by (shift, act, act, ...) as configured.
std::vector<int> product_classes(const ActionContext& flow_ctx, const ActionContext& ctx,
                                 int arity) {
  const int omega = flow_ctx.points();
  const int n = ctx.points();
  long total = omega;
  for (int i = 1; i < arity; ++i) total *= n;
  std::vector<int> cls(static_cast<std::size_t>(total), -1);
  const auto decode = [&](long cell, std::vector<int>& coord) {
    for (int i = arity - 1; i >= 1; --i) {
      coord[static_cast<std::size_t>(i)] = static_cast<int>(cell % n);
      cell /= n;
    }
    coord[0] = static_cast<int>(cell);
  };
  const auto encode = [&](const std::vector<int>& coord) {
    long cell = coord[0];
    for (int i = 1; i < arity; ++i) cell = cell * n + coord[static_cast<std::size_t>(i)];
    return cell;
  };
  int next_class = 0;
  std::vector<int> coord(static_cast<std::size_t>(arity)), moved(static_cast<std::size_t>(arity));
  for (long start = 0; start < total; ++start) {
    if (cls[static_cast<std::size_t>(start)] != -1) continue;
    const int id = next_class++;
    std::deque<long> queue{start};
    cls[static_cast<std::size_t>(start)] = id;
    while (!queue.empty()) {
      const long cell = queue.front();
      queue.pop_front();
      decode(cell, coord);
      for (int g : ctx.group().generator_indices()) {
        moved[0] = flow_ctx.apply(g, coord[0]);
        for (int i = 1; i < arity; ++i)
          moved[static_cast<std::size_t>(i)] = ctx.apply(g, coord[static_cast<std::size_t>(i)]);
        const long m = encode(moved);
        if (cls[static_cast<std::size_t>(m)] == -1) {
          cls[static_cast<std::size_t>(m)] = id;
          queue.push_back(m);
        }
      }
    }
  }
  return cls;
}

std::vector<Rat> class_function(const std::vector<int>& classes, Rng& rng) {
  int nclasses = 0;
  for (int c : classes) nclasses = std::max(nclasses, c + 1);
  std::vector<Rat> values(static_cast<std::size_t>(nclasses));
  for (Rat& v : values) v = rand_rat(rng);
  std::vector<Rat> out(classes.size());
  for (std::size_t i = 0; i < classes.size(); ++i)
    out[i] = values[static_cast<std::size_t>(classes[i])];
  return out;
}

Json rat_array(const std::vector<Rat>& v) {
  Json a = Json::array();
  for (const Rat& x : v) a.push_back(rat_to_string(x));
  return a;
}

std::vector<Rat> parse_rats(const Json& a, const char* where) {
  if (!a.is_array()) throw std::invalid_argument(std::string("expected array at ") + where);
  std::vector<Rat> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(rat_from_string(x.get<std::string>()));
  return out;
}

std::vector<int> parse_ints(const Json& a, const char* where) {
  if (!a.is_array()) throw std::invalid_argument(std::string("expected array at ") + where);
  std::vector<int> out;
  out.reserve(a.size());
  for (const auto& x : a) out.push_back(x.get<int>());
  return out;
}

GroupFamily family_from_string(const std::string& s) {
  for (GroupFamily f : {GroupFamily::Trivial, GroupFamily::Cyclic, GroupFamily::Dihedral,
                        GroupFamily::Symmetric3, GroupFamily::Symmetric4,
                        GroupFamily::Alternating4, GroupFamily::KleinFour,
                        GroupFamily::Quaternion8})
    if (s == to_string(f)) return f;
  throw std::invalid_argument("unknown group family: " + s);
}

ActionKind action_from_string(const std::string& s) {
  for (ActionKind a : {ActionKind::Natural, ActionKind::Coset, ActionKind::DisjointUnion})
    if (s == to_string(a)) return a;
  throw std::invalid_argument("unknown action kind: " + s);
}

OmegaKind omega_from_string(const std::string& s) {
  for (OmegaKind o : {OmegaKind::Point, OmegaKind::Self, OmegaKind::Group})
    if (s == to_string(o)) return o;
  throw std::invalid_argument("unknown sample space kind: " + s);
}

MutationKind mutation_from_string(const std::string& s) {
  for (MutationKind m : {MutationKind::Identity, MutationKind::BreakJointInvariance,
                         MutationKind::ScaleQ, MutationKind::MoveMassOffsupport,
                         MutationKind::BreakLastTstar})
    if (s == to_string(m)) return m;
  throw std::invalid_argument("unknown mutation kind: " + s);
}

}  // namespace

const char* to_string(MutationKind k) {
  switch (k) {
    case MutationKind::Identity: return "identity";
    case MutationKind::BreakJointInvariance: return "break_joint_invariance";
    case MutationKind::ScaleQ: return "scale_Q";
    case MutationKind::MoveMassOffsupport: return "move_mass_offsupport";
    case MutationKind::BreakLastTstar: return "break_lastTstar";
  }
  return "?";
}

const char* to_string(GroupFamily f) {
  switch (f) {
    case GroupFamily::Trivial: return "trivial";
    case GroupFamily::Cyclic: return "cyclic";
    case GroupFamily::Dihedral: return "dihedral";
    case GroupFamily::Symmetric3: return "symmetric3";
    case GroupFamily::Symmetric4: return "symmetric4";
    case GroupFamily::Alternating4: return "alternating4";
    case GroupFamily::KleinFour: return "klein_four";
    case GroupFamily::Quaternion8: return "quaternion8";
  }
  return "?";
}

const char* to_string(ActionKind a) {
  switch (a) {
    case ActionKind::Natural: return "natural";
    case ActionKind::Coset: return "coset";
    case ActionKind::DisjointUnion: return "disjoint_union";
  }
  return "?";
}

const char* to_string(OmegaKind o) {
  switch (o) {
    case OmegaKind::Point: return "point";
    case OmegaKind::Self: return "self";
    case OmegaKind::Group: return "group";
  }
  return "?";
}

InstanceSpec spec_from_seed(std::uint64_t seed) {
  InstanceSpec s;
  s.seed = seed;
  if (seed == 0) {
    s.family = GroupFamily::Cyclic;
    s.family_n = 3;
    s.action = ActionKind::Natural;
    s.omega = OmegaKind::Self;
    return s;
  }
  if (seed == 1) {
    s.family = GroupFamily::Dihedral;
    s.family_n = 4;
    s.action = ActionKind::DisjointUnion;
    s.union_parts = 2;
    s.omega = OmegaKind::Self;
    return s;
  }
  if (seed == 2) {
    s.family = GroupFamily::Trivial;
    s.action = ActionKind::Natural;
    s.omega = OmegaKind::Self;
    return s;
  }
  Rng rng(seed ^ 0xc0ffee123456789ULL);
  switch (rng.below(7)) {
    case 0:
      s.family = GroupFamily::Cyclic;
      s.family_n = static_cast<int>(rng.range(2, 12));
      break;
    case 1:
      s.family = GroupFamily::Dihedral;
      s.family_n = static_cast<int>(rng.range(3, 6));
      break;
    case 2: s.family = GroupFamily::Symmetric3; break;
    case 3: s.family = GroupFamily::Symmetric4; break;
    case 4: s.family = GroupFamily::Alternating4; break;
    case 5: s.family = GroupFamily::KleinFour; break;
    default: s.family = GroupFamily::Quaternion8; break;
  }
  switch (rng.below(3)) {
    case 0: s.action = ActionKind::Natural; break;
    case 1: s.action = ActionKind::Coset; break;
    default:
      s.action = ActionKind::DisjointUnion;
      s.union_parts = static_cast<int>(rng.range(2, 3));
      break;
  }
  switch (rng.below(3)) {
    case 0: s.omega = OmegaKind::Point; break;
    case 1: s.omega = OmegaKind::Self; break;
    default: s.omega = OmegaKind::Group; break;
  }
  if (s.action == ActionKind::DisjointUnion && rng.below(3) == 0) s.vanish_orbit = true;
  return s;
}

Instance generate(const InstanceSpec& spec, const SizeCaps& caps) {
  Instance inst;
  inst.spec = spec;
  Rng rng(spec.seed * 0x9e3779b97f4a7c15ULL + 0x5bd1e995U);

  int degree = 0;
  std::vector<Perm> gens = family_generators(spec, degree);
  auto group = std::make_shared<const PermGroup>(
      enumerate_group(degree, gens, static_cast<std::size_t>(caps.max_group_order)));

  GroupAction s_action = build_action(group, spec, caps, rng, inst.s_is_group);
  if (s_action.points() > caps.max_points) throw std::length_error("point set exceeds cap");
  GroupAction o_action = build_omega(group, s_action, spec.omega, caps);
  if (o_action.points() > caps.max_omega) throw std::length_error("sample space exceeds cap");

  inst.ctx = std::make_shared<const ActionContext>(std::move(s_action));
  inst.flow_ctx = spec.omega == OmegaKind::Self
                      ? inst.ctx
                      : std::make_shared<const ActionContext>(std::move(o_action));
  const ActionContext& ctx = *inst.ctx;
  const ActionContext& fctx = *inst.flow_ctx;
  const int omega = fctx.points();
  const int n = ctx.points();

  // Invariant weight measure on the sample space: one positive weight per
  // flow orbit.
  inst.P.assign(static_cast<std::size_t>(omega), Rat(0));
  for (int j = 0; j < fctx.orbits().orbit_count(); ++j) {
    const Rat weight = rand_rat_pos(rng);
    for (int w = 0; w < omega; ++w)
      if (fctx.orbit_id(w) == j) inst.P[static_cast<std::size_t>(w)] = weight;
  }

  inst.xi = equivariant_random_measure(fctx, ctx, rng, spec.vanish_orbit, true);
  inst.eta = equivariant_random_measure(fctx, ctx, rng, false, true);

  const PalmPair canonical = palm_pair(inst.flow_system(), inst.xi);
  inst.cand_nu = canonical.nu;
  inst.cand_q = canonical.Q;

  inst.joint = equivariant_random_pair(fctx, ctx, rng);
  inst.quad = disintegrate_random_pair_measure(inst.flow_system(), inst.joint);

  // Deterministic layer.
  std::map<std::pair<int, int>, Rat> tmpl;
  const int atoms = static_cast<int>(rng.range(2, 5));
  for (int i = 0; i < atoms; ++i)
    tmpl[{static_cast<int>(rng.below(static_cast<std::uint64_t>(n))),
          static_cast<int>(rng.below(static_cast<std::uint64_t>(n)))}] = rand_rat_pos(rng);
  inst.pair_det = jointly_invariant_from_template(ctx, tmpl);

  {
    // Bifunction constant on diagonal classes of S x S. product_classes
    // expects the sample coordinate first; reuse it with the S action in
    // both slots by passing ctx as the flow.
    const std::vector<int> classes = product_classes(ctx, ctx, 2);
    const std::vector<Rat> values = class_function(classes, rng);
    inst.bif = InvariantBifunction(n);
    inst.bif.values = values;
  }

  inst.v.assign(static_cast<std::size_t>(n), Rat(0));
  inst.k.assign(static_cast<std::size_t>(n), Rat(0));
  std::vector<Rat> w_raw(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) {
    inst.v[static_cast<std::size_t>(s)] = rand_rat_pos(rng);
    inst.k[static_cast<std::size_t>(s)] = rand_rat_pos(rng);
    w_raw[static_cast<std::size_t>(s)] = rand_rat_pos(rng);
  }
  // Balance w against v: scale each orbit so the mu_b masses agree.
  inst.w.assign(static_cast<std::size_t>(n), Rat(0));
  for (int b : ctx.representatives()) {
    const Rat factor = ctx.mu_integrate(b, inst.v) / ctx.mu_integrate(b, w_raw);
    for (int s = 0; s < n; ++s)
      if (ctx.beta(s) == b)
        inst.w[static_cast<std::size_t>(s)] = w_raw[static_cast<std::size_t>(s)] * factor;
  }

  const std::vector<std::vector<int>> sets = find_symmetric_sets(ctx, 8);
  inst.b_set = sets[rng.below(sets.size())];

  inst.f_os = class_function(product_classes(fctx, ctx, 2), rng);
  inst.h_oss = class_function(product_classes(fctx, ctx, 3), rng);

  const std::string text = to_json(inst);
  inst.digest = fnv1a_hex(text);
  return inst;
}

Instance mutate(const Instance& inst, MutationKind kind) {
  Instance out = inst;
  out.mutation = kind;
  switch (kind) {
    case MutationKind::Identity:
      break;
    case MutationKind::BreakJointInvariance: {
      const ActionContext& ctx = *out.ctx;
      for (int s = 0; s < ctx.points(); ++s)
        for (int t = 0; t < ctx.points(); ++t)
          for (int g = 1; g < ctx.group().size(); ++g)
            if (ctx.apply(g, s) != s || ctx.apply(g, t) != t) {
              out.pair_det.at(s, t) += Rat(1);
              goto mutated;
            }
      throw std::logic_error("no cell with a nontrivial diagonal orbit");
    mutated:
      break;
    }
    case MutationKind::ScaleQ: {
      for (int s = 0; s < out.cand_nu.points(); ++s)
        if (out.cand_nu.at(s) != 0) {
          for (Rat& x : out.cand_q[static_cast<std::size_t>(s)].w) x *= Rat(3, 2);
          goto scaled;
        }
      throw std::logic_error("candidate supporting measure is zero");
    scaled:
      break;
    }
    case MutationKind::MoveMassOffsupport: {
      int target = -1;
      for (int w = 0; w < out.flow_ctx->points(); ++w)
        if (out.xi.vanishes_at(w)) {
          target = w;
          break;
        }
      if (target < 0) throw std::logic_error("no vanishing sample point available");
      for (int s = 0; s < out.cand_nu.points(); ++s)
        if (out.cand_nu.at(s) != 0) {
          out.cand_q[static_cast<std::size_t>(s)].at(target) += Rat(1);
          break;
        }
      break;
    }
    case MutationKind::BreakLastTstar: {
      for (int w = 0; w < out.flow_ctx->points(); ++w)
        for (int s = 0; s < out.ctx->points(); ++s)
          if (out.quad.xi.at(w).at(s) != 0 && !out.quad.gamma.at(w, s).is_zero()) {
            for (Rat& x : out.quad.gamma.at(w, s).w) x *= Rat(2);
            goto broken;
          }
      throw std::logic_error("transport quadruple carries no mass");
    broken:
      break;
    }
  }
  const std::string text = to_json(out);
  out.digest = fnv1a_hex(text);
  return out;
}

std::string to_json(const Instance& inst) {
  const PermGroup& g = inst.ctx->group();
  Json doc;
  doc["seed"] = inst.spec.seed;
  doc["mutation"] = to_string(inst.mutation);
  doc["spec"] = {{"family", to_string(inst.spec.family)},
                 {"n", inst.spec.family_n},
                 {"action", to_string(inst.spec.action)},
                 {"union_parts", inst.spec.union_parts},
                 {"omega", to_string(inst.spec.omega)},
                 {"vanish_orbit", inst.spec.vanish_orbit}};
  {
    Json gens = Json::array();
    for (const Perm& p : g.generators()) gens.push_back(p.images);
    doc["group"] = {{"degree", g.degree()}, {"generators", std::move(gens)}};
  }
  {
    const int n = inst.ctx->points();
    Json table = Json::array();
    for (int e = 0; e < g.size(); ++e)
      for (int s = 0; s < n; ++s) table.push_back(inst.ctx->apply(e, s));
    doc["action"] = {{"points", n}, {"table", std::move(table)},
                     {"s_is_group", inst.s_is_group}};
  }
  {
    const int omega = inst.flow_ctx->points();
    Json table = Json::array();
    for (int e = 0; e < g.size(); ++e)
      for (int w = 0; w < omega; ++w) table.push_back(inst.flow_ctx->apply(e, w));
    doc["omega"] = {{"points", omega}, {"table", std::move(table)}, {"P", rat_array(inst.P)}};
  }
  {
    Json m;
    m["pair_det"] = rat_array(inst.pair_det.w);
    m["bifunction"] = rat_array(inst.bif.values);
    m["v"] = rat_array(inst.v);
    m["w"] = rat_array(inst.w);
    m["k"] = rat_array(inst.k);
    m["b_set"] = inst.b_set;
    m["f_os"] = rat_array(inst.f_os);
    m["h_oss"] = rat_array(inst.h_oss);
    doc["measures"] = std::move(m);
  }
  {
    Json r;
    Json xi = Json::array(), eta = Json::array(), q = Json::array();
    for (const FiniteMeasure& fm : inst.xi.xi) xi.push_back(rat_array(fm.w));
    for (const FiniteMeasure& fm : inst.eta.xi) eta.push_back(rat_array(fm.w));
    for (const FiniteMeasure& fm : inst.cand_q) q.push_back(rat_array(fm.w));
    r["xi"] = std::move(xi);
    r["eta"] = std::move(eta);
    r["nu"] = rat_array(inst.cand_nu.w);
    r["Q"] = std::move(q);
    doc["random_measures"] = std::move(r);
  }
  {
    Json t;
    Json joint = Json::array(), gamma = Json::array(), delta = Json::array();
    for (const PairMeasure& pm : inst.joint.m) joint.push_back(rat_array(pm.w));
    for (const FiniteMeasure& fm : inst.quad.gamma.g) gamma.push_back(rat_array(fm.w));
    for (const FiniteMeasure& fm : inst.quad.delta.g) delta.push_back(rat_array(fm.w));
    Json qxi = Json::array(), qeta = Json::array();
    for (const FiniteMeasure& fm : inst.quad.xi.xi) qxi.push_back(rat_array(fm.w));
    for (const FiniteMeasure& fm : inst.quad.eta.xi) qeta.push_back(rat_array(fm.w));
    t["joint"] = std::move(joint);
    t["gamma"] = std::move(gamma);
    t["delta"] = std::move(delta);
    t["xi"] = std::move(qxi);
    t["eta"] = std::move(qeta);
    doc["transports"] = std::move(t);
  }
  doc["checks"] = {{"suites", {"deterministic", "palm", "mecke", "mtp"}}};
  return doc.dump(2) + "\n";
}

Instance from_json(const std::string& text, const SizeCaps& caps) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance JSON: ") + e.what());
  }
  try {
    Instance inst;
    inst.spec.seed = doc.at("seed").get<std::uint64_t>();
    inst.mutation = mutation_from_string(doc.at("mutation").get<std::string>());
    const Json& sp = doc.at("spec");
    inst.spec.family = family_from_string(sp.at("family").get<std::string>());
    inst.spec.family_n = sp.at("n").get<int>();
    inst.spec.action = action_from_string(sp.at("action").get<std::string>());
    inst.spec.union_parts = sp.at("union_parts").get<int>();
    inst.spec.omega = omega_from_string(sp.at("omega").get<std::string>());
    inst.spec.vanish_orbit = sp.at("vanish_orbit").get<bool>();

    const Json& gj = doc.at("group");
    const int degree = gj.at("degree").get<int>();
    std::vector<Perm> gens;
    for (const auto& p : gj.at("generators")) gens.emplace_back(parse_ints(p, "generators"));
    auto group = std::make_shared<const PermGroup>(
        enumerate_group(degree, gens, static_cast<std::size_t>(caps.max_group_order)));

    const Json& aj = doc.at("action");
    const int n = aj.at("points").get<int>();
    if (n > caps.max_points) throw std::length_error("point set exceeds cap");
    inst.s_is_group = aj.at("s_is_group").get<bool>();
    inst.ctx = std::make_shared<const ActionContext>(
        GroupAction(group, n, parse_ints(aj.at("table"), "action.table")));

    const Json& oj = doc.at("omega");
    const int omega = oj.at("points").get<int>();
    if (omega > caps.max_omega) throw std::length_error("sample space exceeds cap");
    inst.flow_ctx = std::make_shared<const ActionContext>(
        GroupAction(group, omega, parse_ints(oj.at("table"), "omega.table")));
    inst.P = parse_rats(oj.at("P"), "omega.P");
    if (static_cast<int>(inst.P.size()) != omega)
      throw std::invalid_argument("omega.P has the wrong length");

    const Json& mj = doc.at("measures");
    inst.pair_det = PairMeasure(n);
    inst.pair_det.w = parse_rats(mj.at("pair_det"), "measures.pair_det");
    inst.bif = InvariantBifunction(n);
    inst.bif.values = parse_rats(mj.at("bifunction"), "measures.bifunction");
    inst.v = parse_rats(mj.at("v"), "measures.v");
    inst.w = parse_rats(mj.at("w"), "measures.w");
    inst.k = parse_rats(mj.at("k"), "measures.k");
    inst.b_set = parse_ints(mj.at("b_set"), "measures.b_set");
    inst.f_os = parse_rats(mj.at("f_os"), "measures.f_os");
    inst.h_oss = parse_rats(mj.at("h_oss"), "measures.h_oss");
    if (static_cast<int>(inst.pair_det.w.size()) != n * n ||
        static_cast<int>(inst.bif.values.size()) != n * n ||
        static_cast<int>(inst.v.size()) != n || static_cast<int>(inst.w.size()) != n ||
        static_cast<int>(inst.k.size()) != n ||
        static_cast<int>(inst.f_os.size()) != omega * n ||
        static_cast<int>(inst.h_oss.size()) != static_cast<long>(omega) * n * n)
      throw std::invalid_argument("measures section has wrong-sized arrays");

    const Json& rj = doc.at("random_measures");
    const auto parse_family = [&](const Json& arr, int expect_len, const char* where) {
      std::vector<FiniteMeasure> out;
      for (const auto& row : arr) {
        FiniteMeasure fm;
        fm.w = parse_rats(row, where);
        if (static_cast<int>(fm.w.size()) != expect_len)
          throw std::invalid_argument(std::string("bad row length in ") + where);
        out.push_back(std::move(fm));
      }
      return out;
    };
    inst.xi.xi = parse_family(rj.at("xi"), n, "random_measures.xi");
    inst.eta.xi = parse_family(rj.at("eta"), n, "random_measures.eta");
    inst.cand_nu.w = parse_rats(rj.at("nu"), "random_measures.nu");
    inst.cand_q = parse_family(rj.at("Q"), omega, "random_measures.Q");
    if (static_cast<int>(inst.xi.xi.size()) != omega ||
        static_cast<int>(inst.eta.xi.size()) != omega ||
        static_cast<int>(inst.cand_nu.w.size()) != n ||
        static_cast<int>(inst.cand_q.size()) != n)
      throw std::invalid_argument("random_measures section has wrong-sized arrays");

    const Json& tj = doc.at("transports");
    inst.joint.m.clear();
    for (const auto& row : tj.at("joint")) {
      PairMeasure pm(n);
      pm.w = parse_rats(row, "transports.joint");
      if (static_cast<int>(pm.w.size()) != n * n)
        throw std::invalid_argument("bad row length in transports.joint");
      inst.joint.m.push_back(std::move(pm));
    }
    if (static_cast<int>(inst.joint.m.size()) != omega)
      throw std::invalid_argument("transports.joint has the wrong length");
    inst.quad.gamma = RandomTransportKernel(omega, n);
    inst.quad.delta = RandomTransportKernel(omega, n);
    inst.quad.gamma.g = parse_family(tj.at("gamma"), n, "transports.gamma");
    inst.quad.delta.g = parse_family(tj.at("delta"), n, "transports.delta");
    inst.quad.xi.xi = parse_family(tj.at("xi"), n, "transports.xi");
    inst.quad.eta.xi = parse_family(tj.at("eta"), n, "transports.eta");
    if (static_cast<int>(inst.quad.gamma.g.size()) != omega * n ||
        static_cast<int>(inst.quad.delta.g.size()) != omega * n ||
        static_cast<int>(inst.quad.xi.xi.size()) != omega ||
        static_cast<int>(inst.quad.eta.xi.size()) != omega)
      throw std::invalid_argument("transports section has wrong-sized arrays");

    inst.digest = fnv1a_hex(to_json(inst));
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed instance JSON: ") + e.what());
  }
}

std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace palmcalc
