#pragma once

#include <functional>
#include <string>
#include <vector>

#include "palmcalc/report.hpp"

namespace palmcalc::axb {

/// Element (a, b) of the affine group of the line, acting by x -> ax + b.
struct AxBElement {
  double a = 1.0;
  double b = 0.0;

  double act(double x) const { return a * x + b; }
};

inline AxBElement compose(const AxBElement& g, const AxBElement& h) {
  return {g.a * h.a, g.a * h.b + g.b};
}

inline AxBElement inverse(const AxBElement& g) { return {1.0 / g.a, -g.b / g.a}; }

inline AxBElement identity_element() { return {1.0, 0.0}; }

/// Axis-aligned rectangle in the (a, b) half-plane, a > 0.
struct Box {
  double a_lo = 0.0, a_hi = 0.0, b_lo = 0.0, b_hi = 0.0;

  bool contains(const Box& inner) const {
    return a_lo <= inner.a_lo && inner.a_hi <= a_hi && b_lo <= inner.b_lo &&
           inner.b_hi <= b_hi;
  }
};

/// Image bounding box of a rectangle under a map whose coordinate extremes
/// are attained at corners (true for left/right translation and inversion:
/// each output coordinate is monotone or linear in each input coordinate).
Box map_box_corners(const Box& box, const std::function<AxBElement(AxBElement)>& map);

/// Smooth compactly supported test function together with the exact bounding
/// box of its support.
struct TestFunction {
  std::function<double(AxBElement)> f;
  Box support;

  double operator()(const AxBElement& g) const { return f(g); }
};

/// Mollifier bump centered at c with radii (ra, rb): the product of two
/// one-dimensional exp(-1/(1-x^2)) profiles. Infinitely differentiable on the
/// whole plane, zero outside the centered box.
TestFunction bump(AxBElement center, double ra, double rb);

struct QuadratureGrid {
  Box window{0.125, 8.0, -8.0, 8.0};
  int order = 64;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Integral of f against the left Haar measure a^-2 da db over the support
/// box, which must lie strictly inside the grid window (throws
/// std::domain_error otherwise). The box is split into 2x2 panels with a full
/// tensor rule per panel; this keeps mollifier bumps accurate to ~1e-10.
double haar_integrate(const TestFunction& f, const QuadratureGrid& grid);

/// Same rule evaluated without OpenMP; the parallel kernel is checked against
/// this in tests and in the benchmark tool.
double haar_integrate_serial(const TestFunction& f, const QuadratureGrid& grid);

/// Candidate modular functions on the group.
enum class ModularSign { A, AInverse };

double modular_value(ModularSign sign, const AxBElement& g);

struct ModularCalibration {
  ModularSign winner = ModularSign::AInverse;
  double winner_residual = 0.0;
  double loser_residual = 0.0;
  double inverse_identity_residual = 0.0;  // winner in the inversion identity
};

/// Left-invariance of the Haar functional: max over sample translations h of
/// the relative residual |int f(hg) - int f(g)| / |int f|.
CheckReport check_left_invariance(const QuadratureGrid& grid, double tolerance);

/// Decides between the two candidate modular functions by their residual in
/// the right-translation identity int f(gh) = Delta(h^-1) int f, then checks
/// the winner in the inversion identity int f(g^-1) = int Delta(g^-1) f(g).
ModularCalibration calibrate_modular(const QuadratureGrid& grid);

CheckReport check_modular_calibration(const QuadratureGrid& grid, double tolerance);

/// int f(g^-1) dlambda vs int Delta(g^-1) f(g) dlambda for the calibrated
/// Delta; with unit_delta the residual must instead exceed the floor (the
/// group is not unimodular).
CheckReport check_exchange_group(const TestFunction& f, const QuadratureGrid& grid,
                                 double tolerance, bool unit_delta = false);

/// Skew factorization on the group acting on itself with P the Haar measure
/// and the configuration measure the point mass at the sample: the direct
/// route and the route through the explicitly constructed Palm measure agree.
/// u weights the sample component, v the group component.
CheckReport check_skew_factorization(const TestFunction& u, const TestFunction& v,
                                     const QuadratureGrid& grid, double tolerance);

/// Projection measure mu_s is Delta(s^-1) lambda: quadrature check of
/// int f(gs) dlambda = Delta(s^-1) int f for sampled s.
CheckReport check_projection_scaling(const QuadratureGrid& grid, double tolerance);

/// The Dirac transport kernel located at t s^-1 satisfies equivariance,
/// concentration and unit mass by direct algebra on sampled triples.
CheckReport check_dirac_kernel_properties(int samples, std::uint64_t seed);

/// |Delta(gh) - Delta(g) Delta(h)| on sampled pairs for the calibrated sign.
CheckReport check_modular_homomorphism(int samples, std::uint64_t seed, double tolerance);

/// The full quadrature suite: Haar invariance, modular calibration and its
/// discriminations, exchange and skew factorization, projection scaling,
/// kernel algebra, homomorphism sampling.
std::vector<CheckReport> run_axb_suite(const QuadratureGrid& grid, double tolerance);

}  // namespace palmcalc::axb
