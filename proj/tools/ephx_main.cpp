#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "ephx/errors.hpp"
#include "ephx/scenarios.hpp"

namespace {

enum Exit { kOk = 0, kConfigError = 1, kRuntimeAbort = 2, kCheckFailure = 3 };

void print_checks(const std::vector<ephx::Check>& checks) {
  for (const auto& c : checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(40) << c.name << std::setprecision(6)
              << c.value << ' ' << c.relation << ' ' << c.threshold << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ephx: electron-photon collision simulations in phase space"};
  app.require_subcommand(1);

  std::string cfg_path, out_dir;
  long stride = -1;
  bool quiet = false;
  auto* run = app.add_subcommand("run", "run a scenario file");
  run->add_option("config", cfg_path, "scenario config")->required();
  run->add_option("--out", out_dir, "output directory (default: out/<scenario>)");
  run->add_option("--stride", stride, "snapshot stride in time steps")->check(CLI::PositiveNumber);
  run->add_flag("--quiet", quiet, "no progress output");

  std::string res_path;
  auto* res = app.add_subcommand("resonances", "print the transmission resonances of a scenario's potential");
  res->add_option("config", res_path, "scenario config")->required();

  auto* self = app.add_subcommand("selftest", "run the built-in invariant checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      ephx::ConfigFile file = ephx::ConfigFile::load(cfg_path);
      if (stride > 0) file.set("output", "stride", std::to_string(stride));
      ephx::ScenarioConfig cfg = ephx::parse_scenario_config(file);
      if (out_dir.empty()) out_dir = "out/" + std::string(ephx::to_string(cfg.id));
      ephx::RunOptions opt{out_dir, quiet ? nullptr : &std::cerr};
      auto result = ephx::run_scenario(cfg, opt);
      if (!quiet) print_checks(result.checks);
      return result.all_passed() ? kOk : kCheckFailure;
    }
    if (*res) {
      auto cfg = ephx::load_scenario_config(res_path);
      std::cout << std::setprecision(8);
      for (double e : ephx::scenario_resonances(cfg)) std::cout << e << '\n';
      return kOk;
    }
    if (*self) {
      auto checks = ephx::run_selftest();
      print_checks(checks);
      for (const auto& c : checks)
        if (!c.pass) return kCheckFailure;
      return kOk;
    }
  } catch (const ephx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ephx::EdgeAbort& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kRuntimeAbort;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeAbort;
  }
  return kOk;
}
