#pragma once

#include <map>
#include <vector>

#include "palmcalc/rational.hpp"

namespace palmcalc {

/// Nonnegative exact-rational weights on a finite point set S = {0..n-1}.
struct FiniteMeasure {
  std::vector<Rat> w;

  FiniteMeasure() = default;
  explicit FiniteMeasure(int n) : w(static_cast<std::size_t>(n), Rat(0)) {}

  int points() const { return static_cast<int>(w.size()); }
  Rat& at(int s) { return w[static_cast<std::size_t>(s)]; }
  const Rat& at(int s) const { return w[static_cast<std::size_t>(s)]; }

  Rat total() const {
    Rat t(0);
    for (const Rat& x : w) t += x;
    return t;
  }

  /// Integral of a weight vector against this measure.
  Rat integrate(const std::vector<Rat>& f) const {
    Rat t(0);
    for (std::size_t i = 0; i < w.size(); ++i) t += w[i] * f[i];
    return t;
  }

  bool is_zero() const {
    for (const Rat& x : w)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const FiniteMeasure&, const FiniteMeasure&) = default;
};

/// Nonnegative weights on ordered pairs S x S, stored densely.
struct PairMeasure {
  int n = 0;
  std::vector<Rat> w;

  PairMeasure() = default;
  explicit PairMeasure(int points)
      : n(points), w(static_cast<std::size_t>(points) * static_cast<std::size_t>(points), Rat(0)) {}

  Rat& at(int s, int t) { return w[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)]; }
  const Rat& at(int s, int t) const {
    return w[static_cast<std::size_t>(s) * static_cast<std::size_t>(n) + static_cast<std::size_t>(t)];
  }

  Rat total() const {
    Rat t(0);
    for (const Rat& x : w) t += x;
    return t;
  }

  friend bool operator==(const PairMeasure&, const PairMeasure&) = default;
};

/// A measure concentrated on the orbit representatives, keyed by point index.
struct OrbitMeasure {
  std::map<int, Rat> w;

  Rat at(int b) const {
    auto it = w.find(b);
    return it == w.end() ? Rat(0) : it->second;
  }

  bool is_zero() const {
    for (const auto& [b, x] : w)
      if (x != 0) return false;
    return true;
  }

  friend bool operator==(const OrbitMeasure&, const OrbitMeasure&) = default;
};

}  // namespace palmcalc
