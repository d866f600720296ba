#include "palmcalc/group.hpp"

#include <algorithm>
#include <stdexcept>

namespace palmcalc {

Perm Perm::identity(int n) {
  std::vector<int> im(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) im[static_cast<std::size_t>(i)] = i;
  return Perm(std::move(im));
}

bool Perm::is_valid() const {
  const int n = degree();
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : images) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

Perm compose(const Perm& g, const Perm& h) {
  if (g.degree() != h.degree())
    throw std::invalid_argument("compose: degree mismatch");
  std::vector<int> im(g.images.size());
  for (std::size_t i = 0; i < im.size(); ++i)
    im[i] = g.images[static_cast<std::size_t>(h.images[i])];
  return Perm(std::move(im));
}

Perm inverse(const Perm& g) {
  std::vector<int> im(g.images.size());
  for (std::size_t i = 0; i < im.size(); ++i)
    im[static_cast<std::size_t>(g.images[i])] = static_cast<int>(i);
  return Perm(std::move(im));
}

PermGroup::PermGroup(int degree, std::vector<Perm> generators,
                     std::vector<Perm> elements)
    : degree_(degree),
      generators_(std::move(generators)),
      elements_(std::move(elements)) {
  for (int i = 0; i < size(); ++i) index_[elements_[static_cast<std::size_t>(i)].images] = i;
  generator_indices_.reserve(generators_.size());
  for (const Perm& g : generators_) generator_indices_.push_back(index_.at(g.images));

  inv_.resize(static_cast<std::size_t>(size()));
  for (int i = 0; i < size(); ++i)
    inv_[static_cast<std::size_t>(i)] = index_.at(inverse(elements_[static_cast<std::size_t>(i)]).images);

  if (size() <= kMulTableLimit) {
    mul_.resize(static_cast<std::size_t>(size()) * static_cast<std::size_t>(size()));
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j)
        mul_[static_cast<std::size_t>(i) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(j)] =
            index_.at(compose(elements_[static_cast<std::size_t>(i)], elements_[static_cast<std::size_t>(j)]).images);
  }
}

int PermGroup::index_of(const Perm& p) const {
  auto it = index_.find(p.images);
  return it == index_.end() ? -1 : it->second;
}

int PermGroup::mul(int i, int j) const {
  if (!mul_.empty())
    return mul_[static_cast<std::size_t>(i) * static_cast<std::size_t>(size()) + static_cast<std::size_t>(j)];
  return index_.at(compose(elements_[static_cast<std::size_t>(i)], elements_[static_cast<std::size_t>(j)]).images);
}

PermGroup enumerate_group(int degree, const std::vector<Perm>& generators,
                          std::size_t cap) {
  for (const Perm& g : generators) {
    if (g.degree() != degree)
      throw std::invalid_argument("invalid permutation: degree mismatch");
    if (!g.is_valid())
      throw std::invalid_argument("invalid permutation: not a bijection");
  }

  std::vector<Perm> elements{Perm::identity(degree)};
  std::map<std::vector<int>, int> seen{{elements[0].images, 0}};

  // Breadth-first closure: process elements in discovery order, applying the
  // generators on the left in input order. The resulting order is the stable
  // element numbering used everywhere else.
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const Perm& g : generators) {
      Perm next = compose(g, elements[head]);
      if (seen.emplace(next.images, static_cast<int>(elements.size())).second) {
        if (elements.size() + 1 > cap) throw std::length_error("group too large");
        elements.push_back(std::move(next));
      }
    }
  }
  return PermGroup(degree, generators, std::move(elements));
}

CheckReport check_haar_invariance(const PermGroup& g) {
  const int n = g.size();
  // Indicator test functions span everything, so left invariance of counting
  // measure for each h reduces to g -> hg being a bijection of element
  // indices, and similarly on the right with Delta == 1.
  for (int h = 0; h < n; ++h) {
    std::vector<bool> hit_left(static_cast<std::size_t>(n), false);
    std::vector<bool> hit_right(static_cast<std::size_t>(n), false);
    for (int x = 0; x < n; ++x) {
      hit_left[static_cast<std::size_t>(g.mul(h, x))] = true;
      hit_right[static_cast<std::size_t>(g.mul(x, h))] = true;
    }
    for (int x = 0; x < n; ++x) {
      if (!hit_left[static_cast<std::size_t>(x)] || !hit_right[static_cast<std::size_t>(x)]) {
        Witness w;
        w.g = h;
        w.detail = "translation by element " + std::to_string(h) + " misses index " + std::to_string(x);
        return CheckReport::fail("haar_invariance", Rat(n), Rat(n - 1), std::move(w));
      }
    }
  }
  return CheckReport::pass("haar_invariance", Rat(n), Rat(n));
}

}  // namespace palmcalc
