// Batch verification front end: generate instances, run check suites, print
// orbit/kernel tables, aggregate reports. Exit codes: 0 pass, 1 verification
// failure, 2 input error, 3 resource cap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "palmcalc/axb.hpp"
#include "palmcalc/instance.hpp"
#include "palmcalc/measure_algebra.hpp"
#include "palmcalc/suite.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitCap = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<palmcalc::Instance> collect_instances(const std::vector<std::string>& files,
                                                  std::uint64_t seed, int count,
                                                  const palmcalc::SizeCaps& caps) {
  std::vector<palmcalc::Instance> out;
  for (const std::string& path : files)
    out.push_back(palmcalc::from_json(read_file(path), caps));
  if (files.empty()) {
    for (int i = 0; i < count; ++i)
      out.push_back(palmcalc::generate(palmcalc::spec_from_seed(seed + static_cast<std::uint64_t>(i)), caps));
  }
  return out;
}

bool parse_window(const std::string& text, palmcalc::axb::Box& window) {
  double v[4];
  if (std::sscanf(text.c_str(), "%lf,%lf,%lf,%lf", &v[0], &v[1], &v[2], &v[3]) != 4)
    return false;
  window = {v[0], v[1], v[2], v[3]};
  return window.a_lo > 0 && window.a_lo < window.a_hi && window.b_lo < window.b_hi;
}

void print_reports(const std::vector<palmcalc::CheckReport>& reports,
                   const std::string& format) {
  if (format == "json")
    std::cout << palmcalc::reports_to_json(reports);
  else
    std::cout << palmcalc::reports_to_text(reports);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"palmcheck: exact verification of Palm-pair and mass-transport identities"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int count = 1;
  std::string suite_name = "all";
  std::string format = "text";
  std::string out_dir;
  std::string window_text;
  std::vector<std::string> files;
  palmcalc::SizeCaps caps;
  int axb_order = 64;
  double tolerance = 1e-8;

  auto add_common = [&](CLI::App* cmd, bool with_files) {
    cmd->add_option("--seed", seed, "base seed for generated instances");
    cmd->add_option("--max-group-order", caps.max_group_order, "group enumeration cap");
    if (with_files) cmd->add_option("files", files, "instance JSON files");
  };

  CLI::App* orbits_cmd = app.add_subcommand("orbits", "print orbit decomposition and symmetric sets");
  add_common(orbits_cmd, true);

  CLI::App* kernel_cmd = app.add_subcommand("kernel", "print disintegration kernel tables");
  add_common(kernel_cmd, true);

  CLI::App* check_cmd = app.add_subcommand("check", "run a verification suite");
  add_common(check_cmd, true);
  check_cmd->add_option("--count", count, "number of generated instances");
  check_cmd->add_option("--suite", suite_name, "deterministic|palm|mecke|mtp|axb|all");
  check_cmd->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));
  check_cmd->add_option("--axb-order", axb_order, "quadrature order per axis");
  check_cmd->add_option("--axb-window", window_text, "a_lo,a_hi,b_lo,b_hi");
  check_cmd->add_option("--tolerance", tolerance, "relative tolerance for quadrature checks");
  bool serial = false;
  check_cmd->add_flag("--serial", serial, "disable the parallel runner");

  CLI::App* gen_cmd = app.add_subcommand("gen", "write generated instance files");
  add_common(gen_cmd, false);
  gen_cmd->add_option("--count", count, "number of instances");
  gen_cmd->add_option("--out", out_dir, "output directory (default: stdout)");

  CLI::App* report_cmd = app.add_subcommand("report", "aggregate report JSON files");
  report_cmd->add_option("files", files, "report JSON files")->required();
  report_cmd->add_option("--format", format, "json|text")
      ->check(CLI::IsMember({"json", "text"}));

  CLI11_PARSE(app, argc, argv);

  try {
    if (orbits_cmd->parsed() || kernel_cmd->parsed()) {
      const auto instances = collect_instances(files, seed, 1, caps);
      for (const palmcalc::Instance& inst : instances) {
        const palmcalc::ActionContext& ctx = *inst.ctx;
        std::cout << "instance seed=" << inst.spec.seed << " digest=" << inst.digest
                  << " |G|=" << ctx.group().size() << " |S|=" << ctx.points() << "\n";
        if (orbits_cmd->parsed()) {
          for (int j = 0; j < ctx.orbits().orbit_count(); ++j) {
            std::cout << "orbit " << j << " rep " << ctx.representatives()[static_cast<std::size_t>(j)]
                      << ":";
            for (int s = 0; s < ctx.points(); ++s)
              if (ctx.orbit_id(s) == j) std::cout << " " << s;
            std::cout << "\n";
          }
          std::cout << "delta_star:";
          for (int s = 0; s < ctx.points(); ++s)
            std::cout << " " << palmcalc::rat_to_string(ctx.delta_star(s));
          std::cout << "\nsymmetric sets:\n";
          for (const auto& set : palmcalc::find_symmetric_sets(ctx, 8)) {
            std::cout << " ";
            for (int s : set) std::cout << " " << s;
            std::cout << "\n";
          }
        } else {
          for (int s = 0; s < ctx.points(); ++s)
            for (int t = 0; t < ctx.points(); ++t) {
              const auto& coset = ctx.coset(s, t);
              if (coset.empty()) continue;
              std::cout << "kappa[" << s << "," << t << "] = uniform on {";
              for (std::size_t i = 0; i < coset.size(); ++i)
                std::cout << (i ? "," : "") << coset[i];
              std::cout << "}\n";
            }
        }
      }
      return kExitPass;
    }

    if (check_cmd->parsed()) {
      std::vector<palmcalc::CheckReport> reports;
      if (suite_name == "axb" || suite_name == "all") {
        palmcalc::axb::QuadratureGrid grid;
        grid.order = axb_order;
        if (!window_text.empty() && !parse_window(window_text, grid.window)) {
          std::cerr << "invalid --axb-window, expected a_lo,a_hi,b_lo,b_hi with 0 < a_lo < a_hi\n";
          return kExitInput;
        }
        reports = palmcalc::axb::run_axb_suite(grid, tolerance);
      }
      if (suite_name != "axb") {
        const palmcalc::Suite suite = palmcalc::suite_from_string(suite_name);
        const auto instances = collect_instances(files, seed, count, caps);
        auto exact = palmcalc::run_suite(instances, suite, !serial);
        for (auto& r : exact) reports.push_back(std::move(r));
      }
      print_reports(reports, format);
      return palmcalc::all_passed(reports) ? kExitPass : kExitFail;
    }

    if (gen_cmd->parsed()) {
      for (int i = 0; i < count; ++i) {
        const auto inst = palmcalc::generate(
            palmcalc::spec_from_seed(seed + static_cast<std::uint64_t>(i)), caps);
        const std::string text = palmcalc::to_json(inst);
        if (out_dir.empty()) {
          std::cout << text;
        } else {
          const std::string path =
              out_dir + "/instance_" + std::to_string(inst.spec.seed) + ".json";
          std::ofstream out(path, std::ios::binary);
          if (!out) throw std::invalid_argument("cannot write " + path);
          out << text;
        }
      }
      return kExitPass;
    }

    if (report_cmd->parsed()) {
      std::vector<palmcalc::CheckReport> merged;
      for (const std::string& path : files) {
        nlohmann::json arr;
        try {
          arr = nlohmann::json::parse(read_file(path));
        } catch (const nlohmann::json::exception& e) {
          throw std::invalid_argument(path + ": " + e.what());
        }
        for (const auto& o : arr) {
          palmcalc::CheckReport r;
          r.check_name = o.at("check").get<std::string>();
          const std::string st = o.at("status").get<std::string>();
          r.status = st == "pass"   ? palmcalc::CheckStatus::Pass
                     : st == "fail" ? palmcalc::CheckStatus::Fail
                                    : palmcalc::CheckStatus::PreconditionFailed;
          r.lhs = o.at("lhs").get<std::string>();
          r.rhs = o.at("rhs").get<std::string>();
          r.residual = o.at("residual").get<std::string>();
          if (o.contains("witness")) {
            palmcalc::Witness w;
            w.g = o["witness"].at("g").get<int>();
            w.s = o["witness"].at("s").get<int>();
            w.t = o["witness"].at("t").get<int>();
            w.omega = o["witness"].at("omega").get<int>();
            w.detail = o["witness"].at("detail").get<std::string>();
            r.witness = std::move(w);
          }
          r.instance_digest = o.at("digest").get<std::string>();
          r.seed = o.at("seed").get<std::uint64_t>();
          merged.push_back(std::move(r));
        }
      }
      print_reports(merged, format);
      return palmcalc::all_passed(merged) ? kExitPass : kExitFail;
    }
  } catch (const std::length_error& e) {
    std::cerr << "resource cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
