#include "palmcalc/suite.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "palmcalc/measure_algebra.hpp"

namespace palmcalc {

namespace {

/// Invariant measures decompose over orbits and compose back exactly.
CheckReport cone_roundtrip(const ActionContext& ctx, const FiniteMeasure& nu,
                           const std::vector<Rat>& k) {
  OrbitMeasure star;
  try {
    star = invariant_cone_decompose(ctx, nu, k);
  } catch (const std::invalid_argument&) {
    Witness w{-1, -1, -1, -1, "measure is not invariant"};
    return CheckReport::precondition_failed("cone_roundtrip", std::move(w));
  }
  const FiniteMeasure back = invariant_cone_compose(ctx, star);
  for (int s = 0; s < ctx.points(); ++s)
    if (back.at(s) != nu.at(s)) {
      Witness w{-1, s, -1, -1, "orbit decomposition does not recompose the measure"};
      return CheckReport::fail("cone_roundtrip", back.at(s), nu.at(s), std::move(w));
    }
  return CheckReport::pass("cone_roundtrip", nu.total(), back.total());
}

struct DetLayer {
  FiniteMeasure mu, nu;
  DetKernel gamma, delta;
};

DetLayer disintegrate_det(const PairMeasure& m) {
  const int n = m.n;
  DetLayer out;
  out.mu = FiniteMeasure(n);
  out.nu = FiniteMeasure(n);
  out.gamma.gamma.assign(static_cast<std::size_t>(n), FiniteMeasure(n));
  out.delta.gamma.assign(static_cast<std::size_t>(n), FiniteMeasure(n));
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      out.mu.at(s) += m.at(s, t);
      out.nu.at(t) += m.at(s, t);
    }
  for (int s = 0; s < n; ++s) {
    if (out.mu.at(s) == 0) continue;
    for (int t = 0; t < n; ++t)
      out.gamma.gamma[static_cast<std::size_t>(s)].at(t) = m.at(s, t) / out.mu.at(s);
  }
  for (int t = 0; t < n; ++t) {
    if (out.nu.at(t) == 0) continue;
    for (int s = 0; s < n; ++s)
      out.delta.gamma[static_cast<std::size_t>(t)].at(s) = m.at(s, t) / out.nu.at(t);
  }
  return out;
}

void deterministic_checks(const Instance& inst, std::vector<CheckReport>& out) {
  const ActionContext& ctx = *inst.ctx;
  out.push_back(check_haar_invariance(ctx.group()));
  out.push_back(check_kappa_disintegration(ctx));
  out.push_back(check_kappa_properties(ctx));
  out.push_back(check_mu_translation(ctx));
  out.push_back(check_delta_star_consistency(ctx));
  out.push_back(check_phi_orbit_constant(ctx, inst.k));
  const DetLayer det = disintegrate_det(inst.pair_det);
  out.push_back(cone_roundtrip(ctx, det.mu, inst.k));
  out.push_back(check_symmetric_set(ctx, inst.b_set));
  out.push_back(check_balance(ctx, inst.v, inst.w));
  out.push_back(is_jointly_invariant(ctx, inst.pair_det));
  out.push_back(check_bifunction_invariance(ctx, inst.bif));
  out.push_back(check_orbit_balance(ctx, inst.bif));
  out.push_back(check_countable_mtp(ctx, inst.bif));
  out.push_back(check_kernel_balance(ctx, det.mu, det.gamma, det.nu, det.delta));
  out.push_back(check_detmtp_rep(ctx, det.mu, det.gamma, det.nu, det.delta, inst.bif, inst.k));
  out.push_back(check_short_mtp(ctx, inst.pair_det, inst.v, inst.w));
  out.push_back(check_mtp_on_sets(ctx, inst.pair_det, inst.b_set, inst.k));
}

void palm_checks(const Instance& inst, std::vector<CheckReport>& out) {
  const ActionContext& ctx = *inst.ctx;
  const FlowSystem flow = inst.flow_system();
  out.push_back(check_flow_invariance(flow));
  out.push_back(check_random_measure_covariance(flow, ctx, inst.xi));
  out.push_back(check_random_measure_covariance(flow, ctx, inst.eta));
  const PalmPair pair_xi = palm_pair(flow, inst.xi);
  const PalmPair pair_eta = palm_pair(flow, inst.eta);
  out.push_back(check_palm_pair_invariants(flow, ctx, inst.xi, pair_xi));
  out.push_back(check_refined_campbell(flow, ctx, inst.xi, pair_xi, inst.k));
  out.push_back(check_palm_quasi(flow, ctx, inst.xi, pair_xi));
  out.push_back(check_char_palm(flow, inst.xi, inst.cand_nu, inst.cand_q));
  out.push_back(check_inversion(flow, ctx, inst.xi, pair_xi, inst.f_os, inst.v, inst.k));
  const bool group_case = inst.s_is_group && inst.spec.omega == OmegaKind::Self;
  out.push_back(check_exchange(flow, ctx, inst.xi, inst.eta, pair_xi, pair_eta, inst.k,
                               group_case));
  out.push_back(check_transport_kernel_invariance(flow, ctx, inst.quad.gamma));
  out.push_back(check_transport_kernel_invariance(flow, ctx, inst.quad.delta));
}

void mecke_checks(const Instance& inst, std::vector<CheckReport>& out) {
  out.push_back(check_mecke(inst.flow_system(), *inst.ctx, inst.cand_nu, inst.cand_q,
                            inst.xi, inst.k));
}

void mtp_checks(const Instance& inst, std::vector<CheckReport>& out) {
  const ActionContext& ctx = *inst.ctx;
  const FlowSystem flow = inst.flow_system();
  const PalmPair pair_qxi = palm_pair(flow, inst.quad.xi);
  const PalmPair pair_qeta = palm_pair(flow, inst.quad.eta);
  out.push_back(check_transport_formula(flow, ctx, inst.quad.xi, inst.quad.eta,
                                        inst.quad.gamma, inst.quad.delta, pair_qxi,
                                        pair_qeta, inst.k));
  out.push_back(check_random_mtp(flow, ctx, inst.quad.xi, inst.quad.eta, inst.quad.gamma,
                                 inst.quad.delta, inst.b_set, inst.h_oss, inst.v, inst.w,
                                 inst.k));
}

}  // namespace

Suite suite_from_string(const std::string& s) {
  if (s == "deterministic") return Suite::Deterministic;
  if (s == "palm") return Suite::Palm;
  if (s == "mecke") return Suite::Mecke;
  if (s == "mtp") return Suite::Mtp;
  if (s == "all") return Suite::All;
  throw std::invalid_argument("unknown suite: " + s);
}

const char* to_string(Suite s) {
  switch (s) {
    case Suite::Deterministic: return "deterministic";
    case Suite::Palm: return "palm";
    case Suite::Mecke: return "mecke";
    case Suite::Mtp: return "mtp";
    case Suite::All: return "all";
  }
  return "?";
}

std::vector<CheckReport> run_checks(const Instance& inst, Suite suite) {
  std::vector<CheckReport> out;
  if (suite == Suite::Deterministic || suite == Suite::All) deterministic_checks(inst, out);
  if (suite == Suite::Palm || suite == Suite::All) palm_checks(inst, out);
  if (suite == Suite::Mecke || suite == Suite::All) mecke_checks(inst, out);
  if (suite == Suite::Mtp || suite == Suite::All) mtp_checks(inst, out);
  for (CheckReport& r : out) {
    r.instance_digest = inst.digest;
    r.seed = inst.spec.seed;
  }
  return out;
}

std::vector<CheckReport> run_suite(const std::vector<Instance>& instances, Suite suite,
                                   bool parallel) {
  std::vector<std::vector<CheckReport>> per(instances.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (long i = 0; i < static_cast<long>(instances.size()); ++i)
    per[static_cast<std::size_t>(i)] = run_checks(instances[static_cast<std::size_t>(i)], suite);
  std::vector<CheckReport> out;
  for (auto& v : per)
    for (CheckReport& r : v) out.push_back(std::move(r));
  return out;
}

bool all_passed(const std::vector<CheckReport>& reports) {
  for (const CheckReport& r : reports)
    if (!r.passed()) return false;
  return true;
}

namespace {

void sort_reports(std::vector<CheckReport>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const CheckReport& a, const CheckReport& b) {
                     if (a.check_name != b.check_name) return a.check_name < b.check_name;
                     return a.instance_digest < b.instance_digest;
                   });
}

}  // namespace

std::string reports_to_json(std::vector<CheckReport> reports) {
  sort_reports(reports);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const CheckReport& r : reports) {
    nlohmann::ordered_json o;
    o["check"] = r.check_name;
    o["status"] = to_string(r.status);
    o["lhs"] = r.lhs;
    o["rhs"] = r.rhs;
    o["residual"] = r.residual;
    if (r.witness) {
      o["witness"] = {{"g", r.witness->g},
                      {"s", r.witness->s},
                      {"t", r.witness->t},
                      {"omega", r.witness->omega},
                      {"detail", r.witness->detail}};
    }
    o["digest"] = r.instance_digest;
    o["seed"] = r.seed;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string reports_to_text(std::vector<CheckReport> reports) {
  sort_reports(reports);
  std::ostringstream os;
  for (const CheckReport& r : reports) {
    os << to_string(r.status) << "  " << r.check_name << "  seed=" << r.seed
       << "  digest=" << r.instance_digest << "  residual=" << r.residual;
    if (r.witness && !r.witness->detail.empty()) os << "  [" << r.witness->detail << "]";
    os << "\n";
  }
  return os.str();
}

}  // namespace palmcalc
