// Acceptance gate: one line per criterion, exit 0 only if all hold.
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "palmcalc/axb.hpp"
#include "palmcalc/instance.hpp"
#include "palmcalc/suite.hpp"

using namespace palmcalc;

namespace {

int failures = 0;

void criterion(const char* name, bool ok, const std::string& detail) {
  std::printf("[%s] %s%s%s\n", ok ? "PASS" : "FAIL", name, detail.empty() ? "" : ": ",
              detail.c_str());
  if (!ok) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

InstanceSpec negative_spec(std::uint64_t seed) {
  InstanceSpec s;
  s.seed = seed;
  static const GroupFamily fams[] = {GroupFamily::Cyclic, GroupFamily::Dihedral,
                                     GroupFamily::Symmetric3, GroupFamily::KleinFour,
                                     GroupFamily::Quaternion8};
  s.family = fams[seed % 5];
  s.family_n = (s.family == GroupFamily::Cyclic) ? 3 + static_cast<int>(seed % 4)
               : (s.family == GroupFamily::Dihedral) ? 3 + static_cast<int>(seed % 3)
                                                     : 0;
  s.action = ActionKind::DisjointUnion;
  s.union_parts = 2;
  s.omega = OmegaKind::Self;
  s.vanish_orbit = true;
  return s;
}

const char* target_of(MutationKind kind) {
  switch (kind) {
    case MutationKind::BreakJointInvariance: return "pair_measure_invariance";
    case MutationKind::ScaleQ: return "mecke";
    case MutationKind::MoveMassOffsupport: return "mecke";
    case MutationKind::BreakLastTstar: return "transport_formula";
    case MutationKind::Identity: return "";
  }
  return "";
}

void exact_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Instance> instances;
  for (std::uint64_t seed = 0; seed < 60; ++seed)
    instances.push_back(generate(spec_from_seed(seed)));
  const auto reports = run_suite(instances, Suite::All, true);
  int bad = 0;
  std::string first;
  for (const auto& r : reports)
    if (!r.passed() || r.residual != "0") {
      if (bad++ == 0) first = r.check_name + " on digest " + r.instance_digest;
    }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof buf, "%zu checks on 60 instances, %d non-zero, %.1fs",
                reports.size(), bad, secs);
  criterion("exact suite: all residuals identically zero within 60s",
            bad == 0 && secs <= 60.0, bad ? first : std::string(buf));
}

bool action_moves_a_point(const Instance& inst) {
  for (int g = 1; g < inst.ctx->group().size(); ++g)
    for (int s = 0; s < inst.ctx->points(); ++s)
      if (inst.ctx->apply(g, s) != s) return true;
  return false;
}

void negative_suite() {
  const MutationKind kinds[] = {MutationKind::BreakJointInvariance, MutationKind::ScaleQ,
                                MutationKind::MoveMassOffsupport,
                                MutationKind::BreakLastTstar};
  // Some seeds collapse both union parts to single cosets, leaving a trivial
  // action with nothing to break; scan past those.
  std::vector<Instance> bases;
  for (std::uint64_t seed = 1000; bases.size() < 10 && seed < 1100; ++seed) {
    Instance inst = generate(negative_spec(seed));
    if (action_moves_a_point(inst)) bases.push_back(std::move(inst));
  }
  int total = 0, caught = 0;
  std::string first;
  for (MutationKind kind : kinds)
    for (const Instance& base : bases) {
      const Instance bad = mutate(base, kind);
      ++total;
      bool hit = false;
      for (const auto& r : run_checks(bad, Suite::All))
        if (r.check_name == target_of(kind) && !r.passed() && r.witness.has_value())
          hit = true;
      if (hit) ++caught;
      else if (first.empty())
        first = std::string(to_string(kind)) + " undetected on seed " +
                std::to_string(base.spec.seed);
    }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d/%d mutations caught with witnesses", caught, total);
  criterion("negative suite: every mutation caught by its targeted check",
            caught == total && total >= 40, first.empty() ? buf : first);
}

void degenerate_regime() {
  InstanceSpec spec;
  spec.seed = 2;
  spec.family = GroupFamily::Trivial;
  spec.action = ActionKind::Natural;
  spec.omega = OmegaKind::Self;
  const Instance inst = generate(spec);
  bool shape = inst.ctx->group().size() == 1;
  for (int s = 0; shape && s < inst.ctx->points(); ++s)
    for (int t = 0; t < inst.ctx->points(); ++t) {
      if (s == t) {
        shape = inst.ctx->coset(s, t).size() == 1 &&
                inst.ctx->coset(s, t).front() == inst.ctx->group().identity_index() &&
                inst.ctx->kappa().uniform_weight(s, t) == Rat(1);
      } else {
        shape = inst.ctx->coset(s, t).empty();
      }
      if (!shape) break;
    }
  const bool ok = shape && all_passed(run_checks(inst, Suite::All));
  criterion("trivial-group regime: diagonal point-mass kernel, full suite passes", ok,
            shape ? "" : "kernel shape differs");
}

void axb_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  const axb::QuadratureGrid grid;
  const auto reports = axb::run_axb_suite(grid, 1e-8);
  bool ok = !reports.empty();
  std::string first;
  for (const auto& r : reports)
    if (!r.passed()) {
      ok = false;
      if (first.empty()) first = r.check_name + " residual " + r.residual;
    }
  const axb::ModularCalibration cal = axb::calibrate_modular(grid);
  if (cal.winner != axb::ModularSign::AInverse || cal.loser_residual < 1e-2) {
    ok = false;
    if (first.empty()) first = "calibration did not discriminate";
  }
  if (!axb::check_modular_homomorphism(1000, 7, 1e-10).passed()) {
    ok = false;
    if (first.empty()) first = "homomorphism residual above 1e-10";
  }
  const double secs = seconds_since(t0);
  if (secs > 30.0) {
    ok = false;
    if (first.empty()) first = "exceeded 30s";
  }
  char buf[96];
  std::snprintf(buf, sizeof buf, "%zu checks, %.1fs", reports.size(), secs);
  criterion("affine-line quadrature suite within tolerances in 30s", ok,
            first.empty() ? buf : first);
}

void determinism() {
  bool ok = true;
  std::string first;
  for (std::uint64_t seed : {0ULL, 7ULL, 23ULL, 1003ULL}) {
    const InstanceSpec spec = seed >= 1000 ? negative_spec(seed) : spec_from_seed(seed);
    const Instance a = generate(spec);
    const Instance b = generate(spec);
    if (to_json(a) != to_json(b) || a.digest != b.digest) {
      ok = false;
      if (first.empty()) first = "instance bytes differ at seed " + std::to_string(seed);
    }
    const std::string ra = reports_to_json(run_checks(a, Suite::All));
    const std::string rb = reports_to_json(run_checks(b, Suite::All));
    if (ra != rb) {
      ok = false;
      if (first.empty()) first = "report bytes differ at seed " + std::to_string(seed);
    }
  }
  // Parallel and serial suite runs must also serialize identically.
  std::vector<Instance> insts;
  for (std::uint64_t seed = 0; seed < 12; ++seed)
    insts.push_back(generate(spec_from_seed(seed)));
  if (reports_to_json(run_suite(insts, Suite::All, true)) !=
      reports_to_json(run_suite(insts, Suite::All, false))) {
    ok = false;
    if (first.empty()) first = "parallel run serializes differently";
  }
  criterion("byte-identical instances and reports across runs", ok, first);
}

}  // namespace

int main() {
  exact_suite();
  negative_suite();
  degenerate_regime();
  axb_suite();
  determinism();
  return failures == 0 ? 0 : 1;
}
