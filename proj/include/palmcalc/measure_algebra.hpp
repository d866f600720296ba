#pragma once

#include <map>
#include <utility>
#include <vector>

#include "palmcalc/action.hpp"
#include "palmcalc/measure.hpp"
#include "palmcalc/report.hpp"

namespace palmcalc {

/// nu o theta_g = nu on generators (sufficient by generation).
CheckReport is_invariant(const ActionContext& ctx, const FiniteMeasure& nu);

/// M o (theta_g x theta_g) = M on generators.
CheckReport is_jointly_invariant(const ActionContext& ctx, const PairMeasure& m);

/// Coordinates of an invariant measure in the cone spanned by the projection
/// measures mu_b, b running over the orbit representatives. Exact inverse of
/// invariant_cone_compose. Throws std::invalid_argument on non-invariant nu.
OrbitMeasure invariant_cone_decompose(const ActionContext& ctx, const FiniteMeasure& nu,
                                      const std::vector<Rat>& k);

/// nu = sum_b w({b}) mu_b; always invariant.
FiniteMeasure invariant_cone_compose(const ActionContext& ctx, const OrbitMeasure& w);

/// The invariant extension of a template: each listed pair (s,t) contributes
/// its weight to every element of the diagonal orbit of (s,t).
PairMeasure jointly_invariant_from_template(const ActionContext& ctx,
                                            const std::map<std::pair<int, int>, Rat>& tmpl);

/// Subsets B with equal positive mu_b(B) across all representatives, listed
/// by increasing size then lexicographically; at most max_results entries.
/// Exhaustive via per-orbit counting: B is symmetric iff the per-orbit
/// products |B n Gb| * |G_{b,b}| are equal and positive.
std::vector<std::vector<int>> find_symmetric_sets(const ActionContext& ctx,
                                                  std::size_t max_results);

/// Whether a single subset is symmetric; on failure names the violating orbit
/// pair in the witness.
CheckReport check_symmetric_set(const ActionContext& ctx, const std::vector<int>& b_set);

/// mu_b(w) / mu_b(v) constant over representatives.
CheckReport check_balance(const ActionContext& ctx, const std::vector<Rat>& v,
                          const std::vector<Rat>& w);

}  // namespace palmcalc
