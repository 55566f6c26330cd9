// Experiment harness: success-rate grids, θ scaling and label-complexity
// sweeps. Each subcommand writes a CSV table plus a JSON run manifest.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "activedt/experiments.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using namespace activedt;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned jobs = 1;
  bool overwrite = false;
};

void add_common(CLI::App* cmd, Options& opt) {
  cmd->add_option("--config", opt.config, "Experiment config (JSON)")->required()->check(
      CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "Master seed; overrides the config");
  cmd->add_option("--out", opt.out, "Output CSV path; overrides the config");
  cmd->add_option("--jobs", opt.jobs, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--overwrite", opt.overwrite, "Replace existing outputs");
}

ExperimentConfig load(const Options& opt, ExperimentKind expected) {
  std::ifstream in(opt.config);
  if (!in) throw std::runtime_error("cannot open config " + opt.config);
  nlohmann::json j = nlohmann::json::parse(in);
  if (!j.contains("experiment")) j["experiment"] = to_string(expected);
  ExperimentConfig cfg = experiment_config_from_json(j);
  if (cfg.kind != expected) {
    throw std::runtime_error("config describes " + to_string(cfg.kind) + ", not " +
                             to_string(expected));
  }
  if (opt.seed) cfg.master_seed = *opt.seed;
  if (!opt.out.empty()) cfg.output = opt.out;
  if (cfg.output.empty()) throw std::runtime_error("no output path (set --out or \"output\")");
  return cfg;
}

template <typename Rows>
int emit(const ExperimentConfig& cfg, const Options& opt, Rows (*run)(const ExperimentConfig&, unsigned)) {
  const fs::path out(cfg.output);
  const fs::path manifest = fs::path(cfg.output + ".manifest.json");
  for (const fs::path& p : {out, manifest}) {
    if (fs::exists(p) && !opt.overwrite) {
      std::cerr << "error: " << p.string() << " exists; pass --overwrite to replace it\n";
      return 2;
    }
  }
  if (out.has_parent_path()) fs::create_directories(out.parent_path());

  const auto start = std::chrono::steady_clock::now();
  const Rows rows = run(cfg, opt.jobs);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  {
    std::ofstream csv(out, std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write " + out.string());
    write_csv(csv, rows);
  }
  nlohmann::json m{{"config", to_json(cfg)},
                   {"master_seed", cfg.master_seed},
                   {"jobs", opt.jobs},
                   {"rows", rows.size()},
                   {"output", out.string()},
                   {"wall_time_seconds", seconds},
                   {"versions", {{"activedt", kVersion}, {"compiler", __VERSION__}}}};
  std::ofstream(manifest, std::ios::trunc) << m.dump(2) << '\n';
  std::cout << "wrote " << rows.size() << " rows to " << out.string() << " in " << seconds
            << " s\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Active learning of stumps and decision trees: experiment harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Options grid_opt, theta_opt, complexity_opt;
  auto* grid = app.add_subcommand("success-grid", "Success rate over a (c1,b1,c2,b2) grid");
  add_common(grid, grid_opt);
  auto* theta = app.add_subcommand("theta-scaling", "Disagreement coefficient versus n");
  add_common(theta, theta_opt);
  auto* complexity = app.add_subcommand("label-complexity", "Query counts versus n and epsilon");
  add_common(complexity, complexity_opt);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*grid) {
      return emit(load(grid_opt, ExperimentKind::success_grid), grid_opt, &run_success_grid);
    }
    if (*theta) {
      return emit(load(theta_opt, ExperimentKind::theta_scaling), theta_opt, &run_theta_scaling);
    }
    return emit(load(complexity_opt, ExperimentKind::label_complexity), complexity_opt,
                &run_label_complexity);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
