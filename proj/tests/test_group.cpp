#include <stdexcept>

#include "doctest.h"
#include "palmcalc/group.hpp"

using namespace palmcalc;

TEST_CASE("composition convention: first right factor, then left") {
  const Perm a({1, 2, 0});
  const Perm b({1, 0, 2});
  const Perm ab = compose(a, b);
  // ab(0) = a(b(0)) = a(1) = 2
  CHECK(ab.images == std::vector<int>{2, 1, 0});
}

TEST_CASE("inverse of a 3-cycle") {
  CHECK(inverse(Perm({1, 2, 0})).images == std::vector<int>{2, 0, 1});
}

TEST_CASE("symmetric group on three points closes to order 6") {
  const PermGroup g = enumerate_group(3, {Perm({1, 0, 2}), Perm({1, 2, 0})});
  CHECK(g.size() == 6);
  CHECK(g.element(0) == Perm::identity(3));
  for (int i = 0; i < g.size(); ++i) {
    CHECK(g.mul(i, g.inv(i)) == g.identity_index());
    CHECK(g.mul(g.inv(i), i) == g.identity_index());
  }
}

TEST_CASE("enumeration order is breadth-first and stable") {
  const PermGroup g = enumerate_group(3, {Perm({1, 2, 0})});
  CHECK(g.size() == 3);
  CHECK(g.element(1) == Perm({1, 2, 0}));
  CHECK(g.element(2) == Perm({2, 0, 1}));
}

TEST_CASE("invalid generators are rejected") {
  CHECK_THROWS_AS(enumerate_group(3, {Perm({0, 0, 1})}), std::invalid_argument);
  CHECK_THROWS_AS(enumerate_group(2, {Perm({1, 0, 2})}), std::invalid_argument);
}

TEST_CASE("closure cap is enforced") {
  // S5 has order 120.
  CHECK_THROWS_AS(enumerate_group(5, {Perm({1, 0, 2, 3, 4}), Perm({1, 2, 3, 4, 0})}, 60),
                  std::length_error);
}

TEST_CASE("counting measure is two-sided invariant") {
  const PermGroup g = enumerate_group(4, {Perm({1, 0, 2, 3}), Perm({1, 2, 3, 0})});
  CHECK(g.size() == 24);
  CHECK(check_haar_invariance(g).passed());
}
