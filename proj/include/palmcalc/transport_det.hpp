#pragma once

#include <vector>

#include "palmcalc/action.hpp"
#include "palmcalc/measure.hpp"
#include "palmcalc/measure_algebra.hpp"
#include "palmcalc/report.hpp"

namespace palmcalc {

/// A deterministic kernel on S: gamma[s] is the measure gamma(s, .).
struct DetKernel {
  std::vector<FiniteMeasure> gamma;

  int points() const { return static_cast<int>(gamma.size()); }
  const Rat& at(int s, int t) const { return gamma[static_cast<std::size_t>(s)].at(t); }
};

/// Invariance gamma(gs, gB) = gamma(s, B) on generators and singletons.
CheckReport check_kernel_invariance(const ActionContext& ctx, const DetKernel& k);

/// m(gs, gt) = m(s, t), stored densely over S x S.
struct InvariantBifunction {
  int n = 0;
  std::vector<Rat> values;

  InvariantBifunction() = default;
  explicit InvariantBifunction(int points)
      : n(points), values(static_cast<std::size_t>(points) * static_cast<std::size_t>(points), Rat(0)) {}

  Rat& at(int s, int t) { return values[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)]; }
  const Rat& at(int s, int t) const {
    return values[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)];
  }
};

CheckReport check_bifunction_invariance(const ActionContext& ctx, const InvariantBifunction& m);

/// Between any two orbit representatives b, b':
/// sum_s m(b,s) delta*(s) mu_{b'}({s}) = sum_s m(s,b') mu_b({s}).
CheckReport check_orbit_balance(const ActionContext& ctx, const InvariantBifunction& m);

/// gamma disintegrates mu against delta and nu: both orderings produce the
/// same pair measure on S x S.
CheckReport check_kernel_balance(const ActionContext& ctx, const FiniteMeasure& mu,
                                 const DetKernel& gamma, const FiniteMeasure& nu,
                                 const DetKernel& delta);

/// Weighted transport identity over orbit representatives; requires the
/// kernel balance above as a precondition (reported distinctly).
CheckReport check_detmtp_rep(const ActionContext& ctx, const FiniteMeasure& mu,
                             const DetKernel& gamma, const FiniteMeasure& nu,
                             const DetKernel& delta, const InvariantBifunction& m,
                             const std::vector<Rat>& k);

/// Countable mass-transport principle, both the stabilizer-weighted and the
/// unimodular form.
CheckReport check_countable_mtp(const ActionContext& ctx, const InvariantBifunction& m);

/// sum Delta_v(s,t) w(s) M({(s,t)}) = sum w(t) M({(s,t)}) for balanced (v,w).
CheckReport check_short_mtp(const ActionContext& ctx, const PairMeasure& m,
                            const std::vector<Rat>& v, const std::vector<Rat>& w);

/// Set form of the mass-transport principle for a symmetric B.
CheckReport check_mtp_on_sets(const ActionContext& ctx, const PairMeasure& m,
                              const std::vector<int>& b_set, const std::vector<Rat>& k);

}  // namespace palmcalc
