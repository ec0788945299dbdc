// openchain: command-line front end.
//
// Exit codes: 0 success, 2 invalid configuration or input, 3 numerical
// instability (or a failed oracle), 4 I/O error.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "openchain/csv.hpp"
#include "openchain/errors.hpp"
#include "openchain/experiment.hpp"
#include "openchain/oracles.hpp"
#include "openchain/plot.hpp"

namespace fs = std::filesystem;
using namespace openchain;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitIo = 4;

double parse_value(const std::string& s) {
  if (s == "inf" || s == "markov" || s == "Markov") return kMarkovLimit;
  double x = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw ConfigError("sweep value '" + s + "' is not a number");
  }
  return x;
}

void report(const RunManifest& m) {
  std::cout << "wrote " << (m.outdir / "manifest.json").string() << "\n";
  for (const auto& o : m.outputs) std::cout << "wrote " << (m.outdir / o).string() << "\n";
  if (m.sweep) std::cout << "wrote " << (m.outdir / m.summary).string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Non-Markovian spin chain scrambling simulator"};
  app.set_version_flag("--version", std::string(OPENCHAIN_VERSION));
  app.require_subcommand(1);

  // Shared override flags.
  std::string out;
  std::optional<double> dt;
  std::optional<double> tmax;
  std::uint64_t seed = 0;
  int jobs = 1;
  auto overrides = [&](CLI::App* sub) {
    sub->add_option("--out,-o", out, "Output directory");
    sub->add_option("--dt", dt, "Override the time step (sample interval is kept)");
    sub->add_option("--tmax", tmax, "Override the final time");
    sub->add_option("--seed", seed, "Seed recorded in the manifest");
    sub->add_option("--jobs,-j", jobs, "Worker threads for multi-run commands")
        ->check(CLI::PositiveNumber);
  };

  auto* run = app.add_subcommand("run", "Run a config file, or re-run a manifest.json");
  std::string input;
  run->add_option("input", input, "key=value config or manifest.json")->required();
  overrides(run);

  auto* preset = app.add_subcommand("preset", "Run a named figure preset");
  std::string preset_name;
  bool list = false;
  preset->add_option("name", preset_name, "Preset name (see --list)");
  preset->add_flag("--list", list, "List presets and exit");
  overrides(preset);

  auto* sw = app.add_subcommand("sweep", "Sweep one parameter of a base config");
  std::string base_file;
  std::string axis_name;
  std::vector<std::string> values;
  std::string stem = "sweep";
  sw->add_option("--config,-c", base_file, "Base config (defaults when omitted)");
  sw->add_option("--axis", axis_name, "gamma, Gamma, n, N or delta")->required();
  sw->add_option("--values", values, "Comma separated values; inf means Markov")
      ->required()
      ->delimiter(',');
  sw->add_option("--stem", stem, "File name prefix");
  overrides(sw);

  auto* plot = app.add_subcommand("plot", "Render CSV columns as an SVG line chart");
  std::vector<std::string> csvs;
  std::string quantity = "TMI";
  std::string svg;
  plot->add_option("csv", csvs, "Trajectory CSV files")->required();
  plot->add_option("--quantity,-q", quantity, "Column to plot");
  plot->add_option("--out,-o", svg, "SVG path")->required();

  auto* verify = app.add_subcommand("verify", "Run the oracle suite");
  bool quick = false;
  std::uint64_t verify_seed = 12345;
  verify->add_flag("--quick", quick, "Smaller chains and horizons");
  verify->add_option("--seed", verify_seed, "Seed of the stochastic oracle");
  verify->add_option("--jobs,-j", jobs, "Threads for the stochastic oracle")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    RunOptions options;
    options.dt = dt;
    options.t_max = tmax;
    options.seed = seed;
    options.jobs = jobs;

    if (*run) {
      const fs::path in(input);
      const std::string text = read_text(in);
      if (in.extension() == ".json") {
        RunManifest m = manifest_from_json(text);
        if (dt || tmax) throw ConfigError("--dt / --tmax cannot be combined with a manifest");
        report(rerun_manifest(m, out.empty() ? m.outdir : fs::path(out), jobs));
      } else {
        report(run_config(parse_config(text), out.empty() ? "out" : out, options,
                          in.stem().string()));
      }
    } else if (*preset) {
      if (list) {
        for (const auto& p : preset_catalog()) {
          std::cout << p.name << "\t" << p.description << "\n";
        }
        return 0;
      }
      if (preset_name.empty()) throw ConfigError("preset: missing name (try --list)");
      report(run_preset(preset_name, out.empty() ? fs::path("out") / preset_name : fs::path(out),
                        options));
    } else if (*sw) {
      const ChainConfig base = base_file.empty() ? ChainConfig{} : parse_config(read_text(base_file));
      std::vector<double> v;
      for (const auto& s : values) v.push_back(parse_value(s));
      report(sweep(base, parse_axis(axis_name), v, out.empty() ? "out" : out, options, stem));
    } else if (*plot) {
      std::vector<fs::path> paths(csvs.begin(), csvs.end());
      emit_plot(paths, svg, quantity);
      std::cout << "wrote " << svg << "\n";
    } else if (*verify) {
      OracleSuiteOptions o;
      o.quick = quick;
      o.seed = verify_seed;
      o.jobs = jobs;
      bool ok = true;
      for (const auto& r : run_oracle_suite(o)) {
        std::printf("%-4s %-48s max|dev| = %.3e  (tol %.1e)\n", r.passed ? "PASS" : "FAIL",
                    r.name.c_str(), r.max_abs_deviation, r.tolerance);
        ok = ok && r.passed;
      }
      return ok ? 0 : kExitNumeric;
    }
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const NumericError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
