#pragma once

#include <memory>
#include <vector>

#include "palmcalc/group.hpp"
#include "palmcalc/measure.hpp"
#include "palmcalc/report.hpp"

namespace palmcalc {

/// A finite G-action on S = {0..points-1}, given by a full element x point
/// table. Validated on construction: identity law and compatibility with the
/// group's composition convention.
class GroupAction {
 public:
  GroupAction(std::shared_ptr<const PermGroup> group, int points, std::vector<int> table);

  /// The group acting on {0..degree-1} by its permutations.
  static GroupAction natural(std::shared_ptr<const PermGroup> group);

  const PermGroup& group() const { return *group_; }
  std::shared_ptr<const PermGroup> group_ptr() const { return group_; }
  int points() const { return points_; }

  int apply(int g, int s) const { return table_[static_cast<std::size_t>(g) * static_cast<std::size_t>(points_) + static_cast<std::size_t>(s)]; }

 private:
  std::shared_ptr<const PermGroup> group_;
  int points_;
  std::vector<int> table_;
};

struct OrbitDecomposition {
  std::vector<int> orbit_id;         // point -> orbit number
  std::vector<int> representatives;  // orbit number -> minimal point index
  std::vector<int> beta;             // point -> representative of its orbit

  int orbit_count() const { return static_cast<int>(representatives.size()); }
};

OrbitDecomposition orbits(const GroupAction& a);

/// G_{s,t} = {g : gs = t} as a sorted list of element indices.
std::vector<int> stabilizer_coset(const GroupAction& a, int s, int t);

/// The disintegration kernel: kappa_{s,t} is the uniform probability measure
/// on the coset G_{s,t} when t lies in the orbit of s, and the zero measure
/// otherwise. In the purely atomic case the disintegration identity forces
/// uniformity, so no choice remains on-orbit; off-orbit we fix zero, which
/// keeps the family total and invariant.
class PointKernel {
 public:
  PointKernel(int points, std::vector<std::vector<std::vector<int>>> cosets);

  const std::vector<int>& support(int s, int t) const { return cosets_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t)]; }

  /// kappa_{s,t}({g}).
  Rat weight(int s, int t, int g) const;

  /// 1/|G_{s,t}| when nonempty, 0 otherwise.
  Rat uniform_weight(int s, int t) const;

 private:
  int points_;
  std::vector<std::vector<std::vector<int>>> cosets_;
};

/// Derived tables of an action, computed once and immutable thereafter.
/// Safe to share across concurrent verification tasks.
class ActionContext {
 public:
  explicit ActionContext(GroupAction action);

  const GroupAction& action() const { return action_; }
  const PermGroup& group() const { return action_.group(); }
  int points() const { return action_.points(); }
  int apply(int g, int s) const { return action_.apply(g, s); }

  const OrbitDecomposition& orbits() const { return orbits_; }
  int beta(int s) const { return orbits_.beta[static_cast<std::size_t>(s)]; }
  int orbit_id(int s) const { return orbits_.orbit_id[static_cast<std::size_t>(s)]; }
  const std::vector<int>& representatives() const { return orbits_.representatives; }

  const std::vector<int>& coset(int s, int t) const { return kappa_.support(s, t); }
  int stabilizer_size(int s) const { return static_cast<int>(coset(s, s).size()); }

  /// mu_s({t}) = |G_{s,t}|.
  Rat mu(int s, int t) const { return Rat(static_cast<long>(coset(s, t).size())); }
  FiniteMeasure mu(int s) const;
  Rat mu_integrate(int s, const std::vector<Rat>& k) const;

  /// Normalized projection measure phi_s = mu_s / mu_s(k); constant on orbits.
  FiniteMeasure phi(int s, const std::vector<Rat>& k) const;

  const PointKernel& kappa() const { return kappa_; }

  /// Canonical transfer of the (trivial) modular function to S; identically 1
  /// for finite groups since stabilizers along an orbit are conjugate.
  Rat delta_star(int s) const;

  /// Orbit-quotient weight built from a strictly positive k; identically 1 in
  /// the finite backend but kept generic.
  Rat delta_tilde(const std::vector<Rat>& k, int s, int t) const;

  /// Default properness witness k == 1.
  std::vector<Rat> unit_witness() const { return std::vector<Rat>(static_cast<std::size_t>(points()), Rat(1)); }

 private:
  GroupAction action_;
  OrbitDecomposition orbits_;
  PointKernel kappa_;
};

/// Exhaustive verification of the disintegration identity: for every s, the
/// pushforward g -> (gs, g) of counting measure equals the kappa-mixture of
/// the projection measures, as measures on S x G.
CheckReport check_kappa_disintegration(const ActionContext& ctx);

/// Kernel properties: equivariance kappa_{s,gt} = kappa_{s,t} o theta_g^{-1},
/// concentration on the cosets, and total mass one on orbits.
CheckReport check_kappa_properties(const ActionContext& ctx);

/// mu_{gs} = mu_s exactly (the modular factor is trivial here).
CheckReport check_mu_translation(const ActionContext& ctx);

/// The three routes to delta_star agree: the trivial modular value, the
/// stabilizer-size ratio, and the cross-orbit coset-count ratio.
CheckReport check_delta_star_consistency(const ActionContext& ctx);

/// phi_{gs} = phi_s for all g, s.
CheckReport check_phi_orbit_constant(const ActionContext& ctx, const std::vector<Rat>& k);

}  // namespace palmcalc
