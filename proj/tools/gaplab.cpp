#include <CLI11.hpp>
#include <fmt/core.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "gaplab/eigensolver.hpp"
#include "gaplab/experiment.hpp"

namespace {

constexpr int kExitInvalidConfig = 2;
constexpr int kExitInvalidRun = 3;

void print_summary(const gaplab::ExperimentRun& run) {
  fmt::print("trials: {}  failed: {}  valid: {}  wall clock: {:.2f} s\n", run.config.trials, run.failed,
             run.valid ? "yes" : "no", run.wall_clock_seconds);
  for (const auto& r : run.summary) {
    fmt::print("  {:<32} stat={:<12.6g}", r.name, r.statistic);
    if (r.p_value) fmt::print(" p={:<10.4g}", *r.p_value);
    if (r.pass) fmt::print(" {}", *r.pass ? "pass" : "fail");
    fmt::print("  n={} target={}\n", r.sample_size, r.target);
  }
}

}  // namespace

int main(int argc, char** argv) {
  gaplab::pin_blas_threads();
  CLI::App app{"Smallest eigenvalue gap experiments for random matrix ensembles"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Run a Monte Carlo experiment from a JSON config");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> trials;
  std::optional<std::string> out;
  std::optional<int> jobs;
  run_cmd->add_option("--config", config_path, "Experiment config (JSON)")->required();
  run_cmd->add_option("--seed", seed, "Override master_seed");
  run_cmd->add_option("--trials", trials, "Override trials");
  run_cmd->add_option("--out", out, "Override output directory");
  run_cmd->add_option("--jobs", jobs, "Override parallelism");

  auto* verify_cmd = app.add_subcommand("verify-kernels", "Run the deterministic kernel checks");
  std::string verify_out = "verify";
  verify_cmd->add_option("--out", verify_out, "Output directory");

  auto* report_cmd = app.add_subcommand("report", "Merge finished runs into summary and histogram CSVs");
  std::vector<std::string> run_dirs;
  std::string report_out;
  report_cmd->add_option("runs", run_dirs, "Run directories")->required();
  report_cmd->add_option("--out", report_out, "Output directory")->required();

  CLI11_PARSE(app, argc, argv);

  if (*run_cmd) {
    gaplab::ExperimentConfig config;
    try {
      config = gaplab::load_config(config_path);
      if (seed) config.master_seed = *seed;
      if (trials) config.trials = *trials;
      if (out) config.output_dir = *out;
      if (jobs) config.parallelism = *jobs;
      if (config.output_dir.empty()) config.output_dir = "run";
      config.validate();
    } catch (const gaplab::config_error& e) {
      fmt::print(stderr, "invalid config: {}\n", e.what());
      return kExitInvalidConfig;
    }
    const auto run = gaplab::run_experiment(config);
    gaplab::write_run(run, config.output_dir);
    print_summary(run);
    fmt::print("wrote {}\n", config.output_dir);
    return run.valid ? 0 : kExitInvalidRun;
  }

  if (*verify_cmd) {
    const auto verdicts = gaplab::verify_kernels();
    bool all = true;
    for (const auto& v : verdicts) {
      fmt::print("{:<44} {}  value={:.6g} threshold={:.6g}  {}\n", v.name, v.pass ? "PASS" : "FAIL", v.value,
                 v.threshold, v.detail);
      all = all && v.pass;
    }
    gaplab::write_verification(verdicts, verify_out);
    return all ? 0 : 1;
  }

  if (*report_cmd) {
    std::vector<std::filesystem::path> dirs(run_dirs.begin(), run_dirs.end());
    try {
      const auto res = gaplab::report(dirs, report_out);
      for (const auto& s : res.skipped) fmt::print("skipped incomplete run {}\n", s.string());
      for (const auto& [g, n] : res.merged_samples) fmt::print("{}: {} samples\n", g, n);
    } catch (const gaplab::report_error& e) {
      fmt::print(stderr, "report failed: {}\n", e.what());
      return 1;
    }
  }
  return 0;
}
