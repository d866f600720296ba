#include "palmcalc/measure_algebra.hpp"

#include <algorithm>
#include <stdexcept>

namespace palmcalc {

CheckReport is_invariant(const ActionContext& ctx, const FiniteMeasure& nu) {
  for (int g : ctx.group().generator_indices()) {
    for (int s = 0; s < ctx.points(); ++s) {
      const Rat& a = nu.at(ctx.apply(g, s));
      const Rat& b = nu.at(s);
      if (a != b) {
        Witness w{g, s, -1, -1, "measure moves under the generator"};
        return CheckReport::fail("measure_invariance", a, b, std::move(w));
      }
    }
  }
  return CheckReport::pass("measure_invariance", nu.total(), nu.total());
}

CheckReport is_jointly_invariant(const ActionContext& ctx, const PairMeasure& m) {
  for (int g : ctx.group().generator_indices()) {
    for (int s = 0; s < ctx.points(); ++s) {
      for (int t = 0; t < ctx.points(); ++t) {
        const Rat& a = m.at(ctx.apply(g, s), ctx.apply(g, t));
        const Rat& b = m.at(s, t);
        if (a != b) {
          Witness w{g, s, t, -1, "pair measure moves under the diagonal action"};
          return CheckReport::fail("pair_measure_invariance", a, b, std::move(w));
        }
      }
    }
  }
  return CheckReport::pass("pair_measure_invariance", m.total(), m.total());
}

OrbitMeasure invariant_cone_decompose(const ActionContext& ctx, const FiniteMeasure& nu,
                                      const std::vector<Rat>& k) {
  if (!is_invariant(ctx, nu).passed())
    throw std::invalid_argument("cone decomposition requires an invariant measure");
  // nu* = (mu_beta(k)^{-1} k . nu) o beta^{-1}, concentrated on the
  // representatives.
  OrbitMeasure out;
  for (int b : ctx.representatives()) out.w[b] = Rat(0);
  for (int s = 0; s < ctx.points(); ++s) {
    if (nu.at(s) == 0) continue;
    const int b = ctx.beta(s);
    out.w[b] += nu.at(s) * k[static_cast<std::size_t>(s)] / ctx.mu_integrate(b, k);
  }
  return out;
}

FiniteMeasure invariant_cone_compose(const ActionContext& ctx, const OrbitMeasure& w) {
  FiniteMeasure nu(ctx.points());
  for (const auto& [b, c] : w.w) {
    if (c == 0) continue;
    for (int t = 0; t < ctx.points(); ++t) nu.at(t) += c * ctx.mu(b, t);
  }
  return nu;
}

PairMeasure jointly_invariant_from_template(const ActionContext& ctx,
                                            const std::map<std::pair<int, int>, Rat>& tmpl) {
  PairMeasure m(ctx.points());
  for (const auto& [st, weight] : tmpl) {
    if (weight == 0) continue;
    std::vector<bool> hit(static_cast<std::size_t>(ctx.points()) * static_cast<std::size_t>(ctx.points()), false);
    for (int g = 0; g < ctx.group().size(); ++g) {
      const int s = ctx.apply(g, st.first);
      const int t = ctx.apply(g, st.second);
      auto seen = hit[static_cast<std::size_t>(s) * static_cast<std::size_t>(ctx.points()) + static_cast<std::size_t>(t)];
      if (!seen) {
        seen = true;
        m.at(s, t) += weight;
      }
    }
  }
  return m;
}

namespace {

// Per-orbit symmetric mass: mu_b(B) = |G_{b,b}| * |B n Gb|.
Rat orbit_mass(const ActionContext& ctx, int orbit, const std::vector<int>& b_set) {
  long count = 0;
  for (int s : b_set)
    if (ctx.orbit_id(s) == orbit) ++count;
  const int b = ctx.representatives()[static_cast<std::size_t>(orbit)];
  return Rat(count * ctx.stabilizer_size(b));
}

}  // namespace

CheckReport check_symmetric_set(const ActionContext& ctx, const std::vector<int>& b_set) {
  if (b_set.empty()) {
    Witness w{-1, -1, -1, -1, "empty set has zero mass"};
    return CheckReport::fail("symmetric_set", Rat(0), Rat(0), std::move(w));
  }
  const Rat first = orbit_mass(ctx, 0, b_set);
  for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
    const Rat mass = orbit_mass(ctx, j, b_set);
    if (mass != first || mass == 0) {
      Witness w;
      w.s = ctx.representatives()[0];
      w.t = ctx.representatives()[static_cast<std::size_t>(j)];
      w.detail = "unequal or vanishing mass between orbit representatives";
      return CheckReport::fail("symmetric_set", first, mass, std::move(w));
    }
  }
  return CheckReport::pass("symmetric_set", first, first);
}

std::vector<std::vector<int>> find_symmetric_sets(const ActionContext& ctx,
                                                  std::size_t max_results) {
  // Feasible per-orbit element counts first (products with the stabilizer
  // sizes must agree), then the subsets realizing each count vector. Subsets
  // are produced in order of total size, then lexicographically.
  const int norb = ctx.orbits().orbit_count();
  std::vector<std::vector<int>> orbit_points(static_cast<std::size_t>(norb));
  for (int s = 0; s < ctx.points(); ++s)
    orbit_points[static_cast<std::size_t>(ctx.orbit_id(s))].push_back(s);

  std::vector<long> stab(static_cast<std::size_t>(norb));
  for (int j = 0; j < norb; ++j)
    stab[static_cast<std::size_t>(j)] = ctx.stabilizer_size(ctx.representatives()[static_cast<std::size_t>(j)]);

  // Common mass values v must satisfy stab_j | v and v/stab_j <= |orbit_j|.
  std::vector<std::vector<long>> feasible;  // list of count vectors
  long vmax = stab[0] * static_cast<long>(orbit_points[0].size());
  for (long v = 1; v <= vmax; ++v) {
    std::vector<long> counts(static_cast<std::size_t>(norb));
    bool ok = true;
    for (int j = 0; j < norb && ok; ++j) {
      if (v % stab[static_cast<std::size_t>(j)] != 0) ok = false;
      else {
        counts[static_cast<std::size_t>(j)] = v / stab[static_cast<std::size_t>(j)];
        if (counts[static_cast<std::size_t>(j)] > static_cast<long>(orbit_points[static_cast<std::size_t>(j)].size()))
          ok = false;
      }
    }
    if (ok) feasible.push_back(std::move(counts));
  }

  // Order count vectors by total subset size; mass order breaks ties.
  std::stable_sort(feasible.begin(), feasible.end(), [](const auto& a, const auto& b) {
    long sa = 0, sb = 0;
    for (long x : a) sa += x;
    for (long x : b) sb += x;
    return sa < sb;
  });

  std::vector<std::vector<int>> results;
  for (const auto& counts : feasible) {
    // Enumerate choices of counts[j] points per orbit, lexicographically in
    // the concatenated point lists.
    std::vector<std::vector<std::vector<int>>> per_orbit(static_cast<std::size_t>(norb));
    for (int j = 0; j < norb; ++j) {
      const auto& pts = orbit_points[static_cast<std::size_t>(j)];
      const long c = counts[static_cast<std::size_t>(j)];
      std::vector<int> idx(static_cast<std::size_t>(c));
      for (long i = 0; i < c; ++i) idx[static_cast<std::size_t>(i)] = static_cast<int>(i);
      while (true) {
        std::vector<int> pick;
        for (int i : idx) pick.push_back(pts[static_cast<std::size_t>(i)]);
        per_orbit[static_cast<std::size_t>(j)].push_back(std::move(pick));
        // next combination
        long i = c - 1;
        while (i >= 0 && idx[static_cast<std::size_t>(i)] == static_cast<int>(pts.size()) - static_cast<int>(c - i)) --i;
        if (i < 0) break;
        ++idx[static_cast<std::size_t>(i)];
        for (long j2 = i + 1; j2 < c; ++j2) idx[static_cast<std::size_t>(j2)] = idx[static_cast<std::size_t>(j2 - 1)] + 1;
      }
    }
    // Cartesian product across orbits.
    std::vector<std::size_t> cursor(static_cast<std::size_t>(norb), 0);
    while (true) {
      std::vector<int> b_set;
      for (int j = 0; j < norb; ++j) {
        const auto& pick = per_orbit[static_cast<std::size_t>(j)][cursor[static_cast<std::size_t>(j)]];
        b_set.insert(b_set.end(), pick.begin(), pick.end());
      }
      std::sort(b_set.begin(), b_set.end());
      results.push_back(std::move(b_set));
      if (results.size() >= max_results) return results;
      int j = norb - 1;
      while (j >= 0 && cursor[static_cast<std::size_t>(j)] + 1 == per_orbit[static_cast<std::size_t>(j)].size()) {
        cursor[static_cast<std::size_t>(j)] = 0;
        --j;
      }
      if (j < 0) break;
      ++cursor[static_cast<std::size_t>(j)];
    }
  }
  return results;
}

CheckReport check_balance(const ActionContext& ctx, const std::vector<Rat>& v,
                          const std::vector<Rat>& w) {
  for (int s = 0; s < ctx.points(); ++s)
    if (v[static_cast<std::size_t>(s)] <= 0) {
      Witness wit{-1, s, -1, -1, "reference weight v not strictly positive"};
      return CheckReport::precondition_failed("balance", std::move(wit));
    }
  const int b0 = ctx.representatives()[0];
  const Rat ref = ctx.mu_integrate(b0, w) / ctx.mu_integrate(b0, v);
  for (int b : ctx.representatives()) {
    const Rat ratio = ctx.mu_integrate(b, w) / ctx.mu_integrate(b, v);
    if (ratio != ref) {
      Witness wit{-1, b0, b, -1, "mass-to-reference ratio differs between orbits"};
      return CheckReport::fail("balance", ref, ratio, std::move(wit));
    }
  }
  return CheckReport::pass("balance", ref, ref);
}

}  // namespace palmcalc
