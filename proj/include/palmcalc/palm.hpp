#pragma once

#include <vector>

#include "palmcalc/action.hpp"
#include "palmcalc/measure.hpp"
#include "palmcalc/measure_algebra.hpp"
#include "palmcalc/report.hpp"

namespace palmcalc {

/// Finite sample space with a flow of the same group and an invariant weight
/// measure. P is sigma-finite in spirit: arbitrary nonnegative rational
/// weights, not normalized.
struct FlowSystem {
  GroupAction flow;
  std::vector<Rat> P;

  int omega_size() const { return flow.points(); }
  int shift(int g, int omega) const { return flow.apply(g, omega); }
};

/// P o theta_g^{-1} = P on generators.
CheckReport check_flow_invariance(const FlowSystem& f);

/// An invariant random measure: one measure on S per sample point, subject to
/// the covariance xi(theta_g omega, B) = xi(omega, g^{-1} B).
struct RandomMeasure {
  std::vector<FiniteMeasure> xi;  // indexed by omega

  const FiniteMeasure& at(int omega) const { return xi[static_cast<std::size_t>(omega)]; }
  FiniteMeasure& at(int omega) { return xi[static_cast<std::size_t>(omega)]; }
  bool vanishes_at(int omega) const { return at(omega).is_zero(); }
};

CheckReport check_random_measure_covariance(const FlowSystem& f, const ActionContext& ctx,
                                            const RandomMeasure& xi);

/// Supporting measure on S plus the kernel from S back to the sample space
/// disintegrating the Campbell measure.
struct PalmPair {
  FiniteMeasure nu;               // on S
  std::vector<FiniteMeasure> Q;   // Q[s] is a measure on Omega
};

/// Random transport kernel from Omega x S to S.
struct RandomTransportKernel {
  int omega_size = 0;
  int points = 0;
  std::vector<FiniteMeasure> g;  // g[omega * points + s] on S

  RandomTransportKernel() = default;
  RandomTransportKernel(int omega, int pts)
      : omega_size(omega),
        points(pts),
        g(static_cast<std::size_t>(omega) * static_cast<std::size_t>(pts), FiniteMeasure(pts)) {}

  const FiniteMeasure& at(int omega, int s) const {
    return g[static_cast<std::size_t>(omega) * static_cast<std::size_t>(points) + static_cast<std::size_t>(s)];
  }
  FiniteMeasure& at(int omega, int s) {
    return g[static_cast<std::size_t>(omega) * static_cast<std::size_t>(points) + static_cast<std::size_t>(s)];
  }
};

/// gamma(theta_g omega, gs, B) = gamma(omega, s, g^{-1}B).
CheckReport check_transport_kernel_invariance(const FlowSystem& f, const ActionContext& ctx,
                                              const RandomTransportKernel& gamma);

/// One random jointly invariant pair measure per sample point.
struct RandomPairMeasure {
  std::vector<PairMeasure> m;  // indexed by omega

  const PairMeasure& at(int omega) const { return m[static_cast<std::size_t>(omega)]; }
  PairMeasure& at(int omega) { return m[static_cast<std::size_t>(omega)]; }
};

/// Marginals and atomic disintegration transports of a random pair measure;
/// the quadruple satisfies the transport compatibility equation exactly.
struct TransportQuadruple {
  RandomMeasure xi;
  RandomMeasure eta;
  RandomTransportKernel gamma;
  RandomTransportKernel delta;
};

TransportQuadruple disintegrate_random_pair_measure(const FlowSystem& f,
                                                    const RandomPairMeasure& m);

/// Campbell measure on Omega x S: C({omega} x {s}) = P({omega}) xi(omega,{s}).
PairMeasure campbell(const FlowSystem& f, const RandomMeasure& xi);

/// Canonical Palm pair: nu is the S-marginal of the Campbell measure and Q
/// the atomic disintegration along it (zero on nu-null points).
PalmPair palm_pair(const FlowSystem& f, const RandomMeasure& xi);

/// Both defining invariants of a Palm pair: exact disintegration of the
/// Campbell measure and equivariance of the kernel.
CheckReport check_palm_pair_invariants(const FlowSystem& f, const ActionContext& ctx,
                                       const RandomMeasure& xi, const PalmPair& pair);

/// Refined Campbell theorem over the spanning family of indicator functions
/// on Omega x G x O.
CheckReport check_refined_campbell(const FlowSystem& f, const ActionContext& ctx,
                                   const RandomMeasure& xi, const PalmPair& pair,
                                   const std::vector<Rat>& k);

/// Transport formula for the Palm pairs of two jointly stationary random
/// measures linked by compatible transport kernels.
CheckReport check_transport_formula(const FlowSystem& f, const ActionContext& ctx,
                                    const RandomMeasure& xi, const RandomMeasure& eta,
                                    const RandomTransportKernel& gamma,
                                    const RandomTransportKernel& delta,
                                    const PalmPair& pair_xi, const PalmPair& pair_eta,
                                    const std::vector<Rat>& k);

/// Exchange formula (both the four-argument and the reduced three-argument
/// form; on S = G instances additionally the classical group form).
CheckReport check_exchange(const FlowSystem& f, const ActionContext& ctx,
                           const RandomMeasure& xi, const RandomMeasure& eta,
                           const PalmPair& pair_xi, const PalmPair& pair_eta,
                           const std::vector<Rat>& k, bool group_case);

/// Intrinsic characterization without invariance: sigma-finiteness (automatic
/// here), no kernel mass on {xi = 0}, and the symmetry identity.
CheckReport check_char_palm(const FlowSystem& f, const RandomMeasure& xi,
                            const FiniteMeasure& nu, const std::vector<FiniteMeasure>& q);

/// Reconstruction of an underlying measure from a candidate Palm pair.
/// The division guard sends sample points with vanishing total mass to zero.
std::vector<Rat> reconstruct_underlying(const FiniteMeasure& nu,
                                        const std::vector<FiniteMeasure>& q,
                                        const RandomMeasure& xi);

/// Mecke-type characterization: the forward identity for a genuine pair, and
/// the converse via reconstruction (re-deriving the Palm pair and comparing).
CheckReport check_mecke(const FlowSystem& f, const ActionContext& ctx,
                        const FiniteMeasure& nu, const std::vector<FiniteMeasure>& q,
                        const RandomMeasure& xi, const std::vector<Rat>& k);

/// Inversion: recovers expectations under P from the Palm kernel for jointly
/// invariant integrands.
CheckReport check_inversion(const FlowSystem& f, const ActionContext& ctx,
                            const RandomMeasure& xi, const PalmPair& pair,
                            const std::vector<Rat>& f_invariant,  // omega * points + s
                            const std::vector<Rat>& v, const std::vector<Rat>& k);

/// Stochastic mass-transport principle: the set form on a symmetric B, the
/// (v, w)-weighted form, and the two-random-measure corollary.
CheckReport check_random_mtp(const FlowSystem& f, const ActionContext& ctx,
                             const RandomMeasure& xi, const RandomMeasure& eta,
                             const RandomTransportKernel& gamma,
                             const RandomTransportKernel& delta,
                             const std::vector<int>& b_set,
                             const std::vector<Rat>& h_invariant,  // (omega * n + s) * n + t
                             const std::vector<Rat>& v, const std::vector<Rat>& w,
                             const std::vector<Rat>& k);

/// The explicit quasi-transitive Palm kernel formula reproduces the kernel
/// from palm_pair after aligning supporting measures through the cone
/// decomposition. Zero-intensity orbits are skipped with a notice.
CheckReport check_palm_quasi(const FlowSystem& f, const ActionContext& ctx,
                             const RandomMeasure& xi, const PalmPair& pair);

}  // namespace palmcalc
