#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "palmcalc/rational.hpp"

namespace palmcalc {

/// Structured locator of the first failing term of an identity check.
/// Indices that do not apply to a given check stay at -1.
struct Witness {
  int g = -1;
  int s = -1;
  int t = -1;
  int omega = -1;
  std::string detail;
};

enum class CheckStatus { Pass, Fail, PreconditionFailed };

inline const char* to_string(CheckStatus st) {
  switch (st) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::PreconditionFailed: return "precondition-failed";
  }
  return "?";
}

/// One verified identity: both sides, their difference, and on failure a
/// witness of the first differing term. Exact checks store rationals in
/// lhs/rhs/residual; the quadrature backend stores decimal reals.
struct CheckReport {
  std::string check_name;
  CheckStatus status = CheckStatus::Pass;
  std::string lhs;
  std::string rhs;
  std::string residual;
  std::optional<Witness> witness;
  std::string instance_digest;
  std::uint64_t seed = 0;

  bool passed() const { return status == CheckStatus::Pass; }

  static CheckReport pass(std::string name, const Rat& lhs_v, const Rat& rhs_v) {
    CheckReport r;
    r.check_name = std::move(name);
    r.status = CheckStatus::Pass;
    r.lhs = rat_to_string(lhs_v);
    r.rhs = rat_to_string(rhs_v);
    r.residual = "0";
    return r;
  }

  static CheckReport fail(std::string name, const Rat& lhs_v, const Rat& rhs_v,
                          Witness w) {
    CheckReport r;
    r.check_name = std::move(name);
    r.status = CheckStatus::Fail;
    r.lhs = rat_to_string(lhs_v);
    r.rhs = rat_to_string(rhs_v);
    r.residual = rat_to_string(Rat(abs(lhs_v - rhs_v)));
    r.witness = std::move(w);
    return r;
  }

  static CheckReport precondition_failed(std::string name, Witness w) {
    CheckReport r;
    r.check_name = std::move(name);
    r.status = CheckStatus::PreconditionFailed;
    r.lhs = "0";
    r.rhs = "0";
    r.residual = "0";
    r.witness = std::move(w);
    return r;
  }
};

}  // namespace palmcalc
