#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "palmcalc/report.hpp"

namespace palmcalc {

/// A permutation of {0..n-1}; images[i] is the image of point i.
struct Perm {
  std::vector<int> images;

  Perm() = default;
  explicit Perm(std::vector<int> im) : images(std::move(im)) {}

  int degree() const { return static_cast<int>(images.size()); }
  int operator()(int i) const { return images[i]; }

  static Perm identity(int n);
  bool is_valid() const;

  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;
};

/// compose(g, h) acts as "first h, then g": compose(g,h)(i) = g(h(i)).
/// Every action table in the project assumes this convention.
Perm compose(const Perm& g, const Perm& h);
Perm inverse(const Perm& g);

/// A finite permutation group, fully enumerated in breadth-first closure
/// order starting from the identity (generators applied in input order).
/// Element indices are therefore stable identifiers across runs.
/// Immutable after construction.
class PermGroup {
 public:
  PermGroup(int degree, std::vector<Perm> generators, std::vector<Perm> elements);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(elements_.size()); }
  int identity_index() const { return 0; }

  const Perm& element(int i) const { return elements_[i]; }
  const std::vector<Perm>& elements() const { return elements_; }
  const std::vector<Perm>& generators() const { return generators_; }
  const std::vector<int>& generator_indices() const { return generator_indices_; }

  /// Index of a permutation in the enumeration; -1 if absent.
  int index_of(const Perm& p) const;

  /// Index of elements[i] ∘ elements[j] ("first j, then i").
  int mul(int i, int j) const;
  int inv(int i) const { return inv_[i]; }

 private:
  // The multiplication table is only materialized for small groups; large
  // enumerations fall back to composing and looking up.
  static constexpr int kMulTableLimit = 1024;

  int degree_;
  std::vector<Perm> generators_;
  std::vector<Perm> elements_;
  std::vector<int> generator_indices_;
  std::map<std::vector<int>, int> index_;
  std::vector<int> mul_;
  std::vector<int> inv_;
};

inline constexpr std::size_t kDefaultGroupCap = 20160;

/// Breadth-first closure of the generators. Throws std::invalid_argument on a
/// non-bijective generator or degree mismatch, std::length_error when the
/// closure exceeds the cap.
PermGroup enumerate_group(int degree, const std::vector<Perm>& generators,
                          std::size_t cap = kDefaultGroupCap);

/// Brute-force verification that counting measure on the elements is both
/// left- and right-invariant with modular function identically 1.
CheckReport check_haar_invariance(const PermGroup& g);

}  // namespace palmcalc
