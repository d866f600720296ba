#pragma once

#include <string>
#include <vector>

#include "palmcalc/instance.hpp"
#include "palmcalc/report.hpp"

namespace palmcalc {

enum class Suite { Deterministic, Palm, Mecke, Mtp, All };

Suite suite_from_string(const std::string& s);
const char* to_string(Suite s);

/// Every check of the selected suite on one instance, in a fixed order.
/// Reports carry the instance digest and seed.
std::vector<CheckReport> run_checks(const Instance& inst, Suite suite);

/// Batch run over instances; with parallel=true the instances are distributed
/// over OpenMP threads. Output is identical to the serial run regardless of
/// scheduling.
std::vector<CheckReport> run_suite(const std::vector<Instance>& instances, Suite suite,
                                   bool parallel);

bool all_passed(const std::vector<CheckReport>& reports);

/// Canonical JSON array of reports, sorted by check name then digest.
std::string reports_to_json(std::vector<CheckReport> reports);

/// Plain-text rendering, one line per report, same ordering.
std::string reports_to_text(std::vector<CheckReport> reports);

}  // namespace palmcalc
