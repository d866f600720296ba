#include <memory>

#include "doctest.h"
#include "palmcalc/palm.hpp"

using namespace palmcalc;

namespace {

Rat rat(long p, long q) {
  Rat r(p, q);
  r.canonicalize();
  return r;
}

struct Setup {
  std::shared_ptr<const ActionContext> ctx;
  FlowSystem flow;
  RandomMeasure xi;
};

/// Rotation group on three points acting on itself in effect: the sample
/// space equals the point space, the weight measure is uniform, and the
/// configuration is the point mass at the sample.
Setup rotation_dirac() {
  auto g = std::make_shared<const PermGroup>(enumerate_group(3, {Perm({1, 2, 0})}));
  auto ctx = std::make_shared<const ActionContext>(GroupAction::natural(std::move(g)));
  Setup s{ctx, FlowSystem{ctx->action(), {Rat(1), Rat(1), Rat(1)}}, {}};
  s.xi.xi.assign(3, FiniteMeasure(3));
  for (int w = 0; w < 3; ++w) s.xi.at(w).at(w) = Rat(1);
  return s;
}

}  // namespace

TEST_CASE("point-mass configuration on the rotation flow: Palm pair by hand") {
  const Setup s = rotation_dirac();
  CHECK(check_flow_invariance(s.flow).passed());
  CHECK(check_random_measure_covariance(s.flow, *s.ctx, s.xi).passed());
  const PalmPair p = palm_pair(s.flow, s.xi);
  for (int t = 0; t < 3; ++t) {
    CHECK(p.nu.at(t) == Rat(1));
    for (int w = 0; w < 3; ++w)
      CHECK(p.Q[static_cast<std::size_t>(t)].at(w) == (w == t ? Rat(1) : Rat(0)));
  }
  CHECK(check_palm_pair_invariants(s.flow, *s.ctx, s.xi, p).passed());
  CHECK(check_refined_campbell(s.flow, *s.ctx, s.xi, p, s.ctx->unit_witness()).passed());
  CHECK(check_palm_quasi(s.flow, *s.ctx, s.xi, p).passed());
}

TEST_CASE("characterization accepts the canonical pair and rejects scaled kernels") {
  const Setup s = rotation_dirac();
  const PalmPair p = palm_pair(s.flow, s.xi);
  CHECK(check_char_palm(s.flow, s.xi, p.nu, p.Q).passed());
  CHECK(check_mecke(s.flow, *s.ctx, p.nu, p.Q, s.xi, s.ctx->unit_witness()).passed());

  auto scaled = p.Q;
  for (Rat& x : scaled[0].w) x *= Rat(3, 2);
  const CheckReport r = check_mecke(s.flow, *s.ctx, p.nu, scaled, s.xi, s.ctx->unit_witness());
  CHECK_FALSE(r.passed());
  REQUIRE(r.witness.has_value());
}

TEST_CASE("kernel mass off the configuration support is rejected") {
  Setup s = rotation_dirac();
  // Vanishing configuration everywhere forces a zero kernel; inject mass.
  s.xi.at(1) = FiniteMeasure(3);
  // Restore covariance by zeroing the whole orbit.
  s.xi.at(0) = FiniteMeasure(3);
  s.xi.at(2) = FiniteMeasure(3);
  FiniteMeasure nu(3);
  nu.at(0) = Rat(1);
  std::vector<FiniteMeasure> q(3, FiniteMeasure(3));
  q[0].at(1) = Rat(1);
  const CheckReport r = check_char_palm(s.flow, s.xi, nu, q);
  CHECK_FALSE(r.passed());
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->omega == 1);
}

TEST_CASE("underlying measure reconstructs from the Palm pair") {
  const Setup s = rotation_dirac();
  const PalmPair p = palm_pair(s.flow, s.xi);
  CHECK(reconstruct_underlying(p.nu, p.Q, s.xi) == s.flow.P);
}

TEST_CASE("inversion formula on an invariant integrand") {
  const Setup s = rotation_dirac();
  const PalmPair p = palm_pair(s.flow, s.xi);
  // f(w, t) depends on the transporter class of (w, t); here constant per
  // "w == t" since the diagonal action on pairs has two classes.
  std::vector<Rat> f(9, Rat(2, 5));
  for (int w = 0; w < 3; ++w) f[static_cast<std::size_t>(w * 3 + w)] = Rat(7);
  const std::vector<Rat> v{Rat(1, 2), Rat(1, 2), Rat(1, 2)};
  CHECK(check_inversion(s.flow, *s.ctx, s.xi, p, f, v, s.ctx->unit_witness()).passed());
  f[0] = Rat(0);  // breaks joint invariance
  CHECK(check_inversion(s.flow, *s.ctx, s.xi, p, f, v, s.ctx->unit_witness()).status ==
        CheckStatus::PreconditionFailed);
}

TEST_CASE("exchange formula including the group-on-itself form") {
  const Setup s = rotation_dirac();
  RandomMeasure eta;
  eta.xi.assign(3, FiniteMeasure(3));
  for (int w = 0; w < 3; ++w)
    for (int t = 0; t < 3; ++t) eta.at(w).at(t) = (w == t) ? Rat(3) : Rat(1, 2);
  CHECK(check_random_measure_covariance(s.flow, *s.ctx, eta).passed());
  const PalmPair px = palm_pair(s.flow, s.xi);
  const PalmPair pe = palm_pair(s.flow, eta);
  CHECK(check_exchange(s.flow, *s.ctx, s.xi, eta, px, pe, s.ctx->unit_witness(), true)
            .passed());
}

TEST_CASE("transport quadruples from disintegration satisfy the transport formula") {
  const Setup s = rotation_dirac();
  RandomPairMeasure joint;
  joint.m.assign(3, PairMeasure(3));
  // Equivariant family: mass depends on the displacement pair classes.
  for (int w = 0; w < 3; ++w)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const int da = (a - w + 3) % 3;
        const int db = (b - w + 3) % 3;
        joint.at(w).at(a, b) = rat(1 + da * 3 + db, 4);
      }
  const TransportQuadruple q = disintegrate_random_pair_measure(s.flow, joint);
  CHECK(check_transport_kernel_invariance(s.flow, *s.ctx, q.gamma).passed());
  const PalmPair px = palm_pair(s.flow, q.xi);
  const PalmPair pe = palm_pair(s.flow, q.eta);
  CHECK(check_transport_formula(s.flow, *s.ctx, q.xi, q.eta, q.gamma, q.delta, px, pe,
                                s.ctx->unit_witness()).passed());

  TransportQuadruple broken = q;
  for (Rat& x : broken.gamma.at(0, 0).w) x *= Rat(2);
  CHECK(check_transport_formula(s.flow, *s.ctx, broken.xi, broken.eta, broken.gamma,
                                broken.delta, px, pe, s.ctx->unit_witness()).status ==
        CheckStatus::PreconditionFailed);
}

TEST_CASE("stochastic transport principle on the uniform symmetric set") {
  const Setup s = rotation_dirac();
  RandomPairMeasure joint;
  joint.m.assign(3, PairMeasure(3));
  for (int w = 0; w < 3; ++w)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        joint.at(w).at(a, b) = rat(2 + ((a - w + 3) % 3) + 2 * ((b - w + 3) % 3), 3);
  const TransportQuadruple q = disintegrate_random_pair_measure(s.flow, joint);
  std::vector<Rat> h(27, Rat(0));
  for (int w = 0; w < 3; ++w)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        h[static_cast<std::size_t>((w * 3 + a) * 3 + b)] =
            Rat(1 + ((a - w + 3) % 3) * 3 + ((b - w + 3) % 3));
  const std::vector<Rat> v{Rat(1), Rat(1), Rat(1)};
  const std::vector<Rat> w{Rat(5, 3), Rat(5, 3), Rat(5, 3)};
  CHECK(check_random_mtp(s.flow, *s.ctx, q.xi, q.eta, q.gamma, q.delta, {0}, h, v, w,
                         s.ctx->unit_witness()).passed());
}
