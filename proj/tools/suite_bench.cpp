// Benchmark of the OpenMP kernels against their serial references: the suite
// runner over generated instances and the Haar quadrature rule. Verifies that
// both backends produce identical output before timing them.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "palmcalc/axb.hpp"
#include "palmcalc/instance.hpp"
#include "palmcalc/suite.hpp"

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same_reports(const std::vector<palmcalc::CheckReport>& a,
                  const std::vector<palmcalc::CheckReport>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].check_name != b[i].check_name || a[i].status != b[i].status ||
        a[i].lhs != b[i].lhs || a[i].rhs != b[i].rhs || a[i].residual != b[i].residual)
      return false;
  return true;
}

}  // namespace

int main() {
  constexpr int kInstances = 24;
  std::vector<palmcalc::Instance> instances;
  for (int i = 0; i < kInstances; ++i)
    instances.push_back(palmcalc::generate(palmcalc::spec_from_seed(static_cast<std::uint64_t>(i))));

  auto t0 = std::chrono::steady_clock::now();
  const auto serial = palmcalc::run_suite(instances, palmcalc::Suite::All, false);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = palmcalc::run_suite(instances, palmcalc::Suite::All, true);
  const double t_parallel = seconds_since(t0);

  if (!same_reports(serial, parallel)) {
    std::puts("FAIL: parallel suite runner diverges from the serial reference");
    return 1;
  }
  std::printf("suite (%d instances, %zu checks): serial %.3fs, parallel %.3fs, speedup %.2fx\n",
              kInstances, serial.size(), t_serial, t_parallel, t_serial / t_parallel);

  const palmcalc::axb::QuadratureGrid grid;
  const auto f = palmcalc::axb::bump({2.0, 0.0}, 1.0, 1.0);
  constexpr int kReps = 200;
  double acc = 0.0;
  t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kReps; ++i) acc += palmcalc::axb::haar_integrate_serial(f, grid);
  const double q_serial = seconds_since(t0);
  double acc2 = 0.0;
  t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < kReps; ++i) acc2 += palmcalc::axb::haar_integrate(f, grid);
  const double q_parallel = seconds_since(t0);
  if (std::fabs(acc - acc2) > 1e-12 * std::fabs(acc)) {
    std::puts("FAIL: parallel quadrature diverges from the serial reference");
    return 1;
  }
  std::printf("quadrature (%d evaluations): serial %.3fs, parallel %.3fs, speedup %.2fx\n",
              kReps, q_serial, q_parallel, q_serial / q_parallel);
  return 0;
}
