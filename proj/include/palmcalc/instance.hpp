#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "palmcalc/action.hpp"
#include "palmcalc/measure.hpp"
#include "palmcalc/palm.hpp"
#include "palmcalc/transport_det.hpp"

namespace palmcalc {

enum class GroupFamily {
  Trivial,
  Cyclic,       // n in 2..12
  Dihedral,     // n in 3..6
  Symmetric3,
  Symmetric4,
  Alternating4,
  KleinFour,
  Quaternion8,
};

enum class ActionKind { Natural, Coset, DisjointUnion };
enum class OmegaKind { Point, Self, Group };

struct SizeCaps {
  int max_group_order = 48;
  int max_points = 24;
  int max_omega = 24;
};

struct InstanceSpec {
  std::uint64_t seed = 0;
  GroupFamily family = GroupFamily::Cyclic;
  int family_n = 3;          // order parameter for cyclic/dihedral
  ActionKind action = ActionKind::Natural;
  int union_parts = 2;       // for DisjointUnion
  OmegaKind omega = OmegaKind::Self;
  bool vanish_orbit = false; // zero out xi on the last sample-space orbit
};

/// Deterministic seed -> spec mapping used by the positive suite.
InstanceSpec spec_from_seed(std::uint64_t seed);

enum class MutationKind {
  Identity,
  BreakJointInvariance,
  ScaleQ,
  MoveMassOffsupport,
  BreakLastTstar,
};

const char* to_string(MutationKind k);
const char* to_string(GroupFamily f);
const char* to_string(ActionKind a);
const char* to_string(OmegaKind o);

/// A fully materialized verification instance. All stochastic objects are
/// invariant by construction (orbit templates and stabilizer averaging);
/// mutations break exactly one named property.
struct Instance {
  InstanceSpec spec;
  MutationKind mutation = MutationKind::Identity;

  std::shared_ptr<const ActionContext> ctx;       // action on S
  std::shared_ptr<const ActionContext> flow_ctx;  // same group acting on Omega
  bool s_is_group = false;                        // S carries the regular action

  std::vector<Rat> P;  // invariant weight measure on Omega
  RandomMeasure xi, eta;
  FiniteMeasure cand_nu;               // candidate Palm pair for xi
  std::vector<FiniteMeasure> cand_q;

  RandomPairMeasure joint;
  TransportQuadruple quad;

  PairMeasure pair_det;        // jointly invariant deterministic pair measure
  InvariantBifunction bif;
  std::vector<Rat> v, w, k;    // v, k strictly positive; (v, w) balanced
  std::vector<int> b_set;      // symmetric set
  std::vector<Rat> f_os;       // invariant function on Omega x S
  std::vector<Rat> h_oss;      // invariant function on Omega x S x S

  std::string digest;

  FlowSystem flow_system() const { return FlowSystem{flow_ctx->action(), P}; }
};

/// Pure function of the spec; throws std::length_error when a cap is hit.
Instance generate(const InstanceSpec& spec, const SizeCaps& caps = {});

/// Copy with exactly one named precondition broken (Identity is a no-op).
Instance mutate(const Instance& inst, MutationKind kind);

/// Canonical JSON document (sections group/action/omega/measures/
/// random_measures/transports/checks, rationals as "p/q" strings).
/// Byte-identical across runs for a fixed spec.
std::string to_json(const Instance& inst);

/// Inverse of to_json; validates structure and throws std::invalid_argument
/// with a location on malformed input, std::length_error on cap violations.
Instance from_json(const std::string& text, const SizeCaps& caps = {});

/// FNV-1a digest of the canonical serialization.
std::string fnv1a_hex(const std::string& data);

}  // namespace palmcalc
