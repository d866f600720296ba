#pragma once

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace palmcalc {

/// Exact rational scalar. All identity checks in the finite backend are
/// carried out in this type; residuals are compared against literal zero.
using Rat = mpq_class;

/// Parses "p/q" or "p" (optionally signed). Throws std::invalid_argument on
/// malformed input or zero denominator.
inline Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  for (char c : s) {
    if (!(c == '-' || c == '+' || c == '/' || (c >= '0' && c <= '9')))
      throw std::invalid_argument("malformed rational literal: " + s);
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("malformed rational literal: " + s);
  if (q.get_den() == 0)
    throw std::invalid_argument("zero denominator: " + s);
  q.canonicalize();
  return q;
}

/// Canonical "p/q" form; integers render without the "/1" suffix.
inline std::string rat_to_string(const Rat& r) {
  return r.get_str(10);
}

}  // namespace palmcalc
