#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "functorad/checks.hpp"
#include "functorad/errors.hpp"
#include "functorad/scenario.hpp"

namespace {

enum Exit { Ok = 0, CheckFailed = 1, ConfigError = 2, RuntimeError = 3, IoFailure = 4 };

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw functorad::IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& config_path, const std::string& out_path, bool summary_only) {
  using namespace functorad;
  try {
    const auto cfg = scenario::parse_config(read_file(config_path));
    const auto ra = scenario::run_scenario(cfg);
    if (!out_path.empty()) scenario::emit_csv(ra, out_path);
    if (summary_only || !out_path.empty()) {
      std::cout << scenario::summary_text(ra);
    } else {
      std::cout << scenario::csv_text(ra);
      std::cerr << scenario::summary_text(ra);
    }
    std::cout.flush();
    if (!std::cout) throw IoError("failed writing to stdout");
    return Ok;
  } catch (const ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ConfigError;
  } catch (const ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return ConfigError;
  } catch (const SingularityError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return RuntimeError;
  } catch (const NonContractionError& e) {
    std::cerr << "non-contraction: " << e.what() << "\n";
    return RuntimeError;
  } catch (const DomainError& e) {
    std::cerr << "singularity: " << e.what() << "\n";
    return RuntimeError;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return IoFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for smooth maps, tangent bundles and vector fields"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool summary_only = false;
  auto* run_cmd = app.add_subcommand("run", "Integrate a scenario and emit a CSV trace");
  run_cmd->add_option("config", config_path, "Scenario file")->required();
  run_cmd->add_option("--out", out_path, "Write the CSV here instead of stdout");
  run_cmd->add_flag("--summary-only", summary_only, "Print only the diagnostic summary");

  std::uint64_t seed = 0;
  bool serial = false;
  auto* check_cmd = app.add_subcommand("check", "Run the invariant battery and print a report");
  check_cmd->add_option("--seed", seed, "Base seed for the randomized suites");
  check_cmd->add_flag("--serial", serial, "Run suites one after another");

  auto* presets_cmd = app.add_subcommand("presets", "List the built-in presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? Ok : ConfigError;
  }

  if (*run_cmd) return run(config_path, out_path, summary_only);
  if (*check_cmd) {
    const auto results = functorad::checks::run_battery(seed, !serial);
    std::cout << functorad::checks::format_report(results);
    for (const auto& r : results)
      if (!r.passed) return CheckFailed;
    return Ok;
  }
  if (*presets_cmd) {
    for (const auto& info : functorad::scenario::presets())
      std::printf("%-18s %s\n", functorad::scenario::preset_name(info.preset),
                  info.description.c_str());
    return Ok;
  }
  return ConfigError;
}
