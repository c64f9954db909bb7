#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "radshift/cli/commands.hpp"
#include "radshift/errors.hpp"
#include "radshift/io/config.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string format;
  std::vector<std::string> sets;
  int workers = -1;
  long long seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path,
                  "scenario/config file (key = value)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--workers", args.workers,
                  "worker threads (0 = auto, results identical either way)");
  cmd->add_option("--format", args.format, "output formats, e.g. csv,json");
  cmd->add_option("--seed", args.seed, "seed for randomized probe points");
  cmd->add_option("--set", args.sets,
                  "override a config key, KEY=VALUE (repeatable)")
      ->take_all();
}

radshift::io::RunConfig build_config(const CommonArgs& args) {
  radshift::io::RunConfig cfg;
  if (!args.config_path.empty())
    radshift::io::load_config_file(cfg, args.config_path);
  for (const std::string& kv : args.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw radshift::ConfigError("--set expects KEY=VALUE, got '" + kv +
                                  "'");
    radshift::io::apply_key_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (!args.format.empty()) cfg.format = args.format;
  if (args.seed >= 0) cfg.seed = static_cast<unsigned long long>(args.seed);
  if (args.workers >= 0) cfg.workers = args.workers;
  if (cfg.workers <= 0) {
    const unsigned hw = std::thread::hardware_concurrency();
    cfg.workers = static_cast<int>(std::min(hw == 0 ? 1u : hw, 8u));
  }
  cfg.particle.validate();
  cfg.sim.validate();
  return cfg;
}

std::vector<double> parse_values(const std::string& csv) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const auto comma = csv.find(',', pos);
    const std::string tok =
        csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                   : comma - pos);
    if (!tok.empty()) out.push_back(std::stod(tok));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "radshift: radiation-reaction position shift of a linearly "
      "accelerated relativistic charge, computed by independent classical "
      "and emission-amplitude routes"};
  app.require_subcommand(1);

  CommonArgs args;
  radshift::cli::AmplitudeGrid grid;
  std::string sweep_param;
  std::string sweep_values;

  CLI::App* c_traj =
      app.add_subcommand("trajectory", "worldline samples and summary");
  add_common(c_traj, args);

  CLI::App* c_shift =
      app.add_subcommand("shift", "all position-shift routes and diffs");
  add_common(c_shift, args);

  CLI::App* c_amp = app.add_subcommand(
      "amplitude", "emission amplitude spectrum over a (k, cos theta) grid");
  add_common(c_amp, args);
  c_amp->add_option("--k-min", grid.k_min, "smallest wave number");
  c_amp->add_option("--k-max", grid.k_max, "largest wave number");
  c_amp->add_option("--k-count", grid.k_count, "number of k grid points");
  c_amp->add_flag("--k-log", grid.k_log, "logarithmic k spacing");
  c_amp->add_option("--cos-min", grid.cos_min, "smallest direction cosine");
  c_amp->add_option("--cos-max", grid.cos_max, "largest direction cosine");
  c_amp->add_option("--cos-count", grid.cos_count,
                    "number of cos theta grid points");

  CLI::App* c_verify =
      app.add_subcommand("verify", "run every module invariant");
  add_common(c_verify, args);

  CLI::App* c_sweep =
      app.add_subcommand("sweep", "shift reports over a parameter sweep");
  add_common(c_sweep, args);
  c_sweep->add_option("--param", sweep_param, "p|V0|Z1|Z2|alpha_c")
      ->required();
  c_sweep->add_option("--values", sweep_values,
                      "comma-separated parameter values")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const radshift::io::RunConfig cfg = build_config(args);
    if (c_traj->parsed()) return radshift::cli::cmd_trajectory(cfg);
    if (c_shift->parsed()) return radshift::cli::cmd_shift(cfg);
    if (c_amp->parsed()) return radshift::cli::cmd_amplitude(cfg, grid);
    if (c_verify->parsed()) return radshift::cli::cmd_verify(cfg);
    if (c_sweep->parsed())
      return radshift::cli::cmd_sweep(cfg, sweep_param,
                                      parse_values(sweep_values));
    std::cerr << "no subcommand\n";
    return 2;
  } catch (const radshift::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const radshift::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
