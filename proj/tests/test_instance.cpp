#include <stdexcept>

#include "doctest.h"
#include "palmcalc/instance.hpp"
#include "palmcalc/suite.hpp"

using namespace palmcalc;

namespace {

InstanceSpec negative_spec(std::uint64_t seed) {
  // Shape with a vanishing orbit and at least two interacting sample points,
  // so every mutation kind has room to break its target.
  InstanceSpec s;
  s.seed = seed;
  s.family = GroupFamily::Dihedral;
  s.family_n = 4;
  s.action = ActionKind::DisjointUnion;
  s.union_parts = 2;
  s.omega = OmegaKind::Self;
  s.vanish_orbit = true;
  return s;
}

/// The check a mutation is built to break, given the mutated instance.
bool targeted_check_failed(const Instance& inst, MutationKind kind) {
  const auto reports = run_checks(inst, Suite::All);
  const char* name = nullptr;
  switch (kind) {
    case MutationKind::BreakJointInvariance: name = "pair_measure_invariance"; break;
    case MutationKind::ScaleQ: name = "mecke"; break;
    case MutationKind::MoveMassOffsupport: name = "mecke"; break;
    case MutationKind::BreakLastTstar: name = "transport_formula"; break;
    case MutationKind::Identity: return false;
  }
  for (const auto& r : reports)
    if (r.check_name == name && !r.passed()) {
      REQUIRE(r.witness.has_value());
      return true;
    }
  return false;
}

}  // namespace

TEST_CASE("generation is a pure function of the spec") {
  const InstanceSpec spec = spec_from_seed(17);
  const Instance a = generate(spec);
  const Instance b = generate(spec);
  CHECK(a.digest == b.digest);
  CHECK(to_json(a) == to_json(b));
}

TEST_CASE("fixed shapes of the first seeds") {
  const Instance i0 = generate(spec_from_seed(0));
  CHECK(i0.spec.family == GroupFamily::Cyclic);
  CHECK(i0.ctx->points() == 3);
  CHECK(i0.flow_ctx == i0.ctx);

  const Instance i1 = generate(spec_from_seed(1));
  CHECK(i1.spec.family == GroupFamily::Dihedral);
  CHECK(i1.spec.action == ActionKind::DisjointUnion);
  CHECK(i1.ctx->orbits().orbit_count() >= 2);

  const Instance i2 = generate(spec_from_seed(2));
  CHECK(i2.spec.family == GroupFamily::Trivial);
  CHECK(i2.ctx->group().size() == 1);
  CHECK(i2.ctx->orbits().orbit_count() == i2.ctx->points());
}

TEST_CASE("serialization round trip preserves the instance") {
  const Instance a = generate(spec_from_seed(5));
  const Instance b = from_json(to_json(a));
  CHECK(to_json(b) == to_json(a));
  CHECK(b.digest == a.digest);
}

TEST_CASE("malformed documents are rejected with a location") {
  CHECK_THROWS_AS(from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(from_json("{\"seed\": 0}"), std::invalid_argument);
  const Instance a = generate(spec_from_seed(3));
  std::string doc = to_json(a);
  const std::size_t slash = doc.find('/');
  REQUIRE(slash != std::string::npos);
  doc[slash] = 'x';  // corrupts one rational literal
  CHECK_THROWS_AS(from_json(doc), std::invalid_argument);
}

TEST_CASE("size caps are enforced on generation") {
  InstanceSpec big;
  big.family = GroupFamily::Symmetric4;
  big.action = ActionKind::DisjointUnion;
  big.union_parts = 2;
  SizeCaps caps;
  caps.max_group_order = 12;
  CHECK_THROWS_AS(generate(big, caps), std::length_error);
}

TEST_CASE("every check passes on unmutated instances") {
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 9ULL}) {
    const Instance inst = generate(spec_from_seed(seed));
    for (const auto& r : run_checks(inst, Suite::All)) {
      INFO("seed ", seed, " check ", r.check_name);
      CHECK(r.passed());
      CHECK(r.residual == "0");
    }
  }
}

TEST_CASE("each mutation kind breaks exactly its targeted check") {
  const Instance base = generate(negative_spec(42));
  for (MutationKind kind : {MutationKind::BreakJointInvariance, MutationKind::ScaleQ,
                            MutationKind::MoveMassOffsupport, MutationKind::BreakLastTstar}) {
    const Instance bad = mutate(base, kind);
    INFO("mutation ", to_string(kind));
    CHECK(targeted_check_failed(bad, kind));
  }
  const Instance same = mutate(base, MutationKind::Identity);
  CHECK(all_passed(run_checks(same, Suite::All)));
}
