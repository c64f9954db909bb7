#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "radshift/io/config.hpp"
#include "radshift/io/csv.hpp"
#include "radshift/io/json_writer.hpp"
#include "radshift/numerics/parallel.hpp"
#include "radshift/report.hpp"
#include "radshift/verify.hpp"

namespace radshift::cli {

namespace fs = std::filesystem;

inline void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << content;
}

inline io::Json value_with_error_json(const ValueWithError& v) {
  io::Json j = io::Json::object();
  j.set("value", io::Json::number(v.value));
  j.set("error", io::Json::number(v.error));
  return j;
}

inline io::Json shift_report_json(const io::RunConfig& cfg,
                                  const ShiftReport& r) {
  io::Json j = io::Json::object();
  j.set("config", io::effective_config_json(cfg));
  io::Json shifts = io::Json::object();
  shifts.set("dz_classical_closed",
             value_with_error_json(r.dz_classical_closed));
  shifts.set("dz_classical_green",
             value_with_error_json(r.dz_classical_green));
  shifts.set("dz_oracle_linear_response",
             value_with_error_json(r.dz_oracle_linear_response));
  shifts.set("dp_oracle_linear_response",
             value_with_error_json(r.dp_oracle_linear_response));
  shifts.set("dzq_reduced", value_with_error_json(r.dzq_reduced));
  shifts.set("dzq_angular", value_with_error_json(r.dzq_angular));
  shifts.set("dzq_angular_fd", value_with_error_json(r.dzq_angular_fd));
  j.set("shifts", std::move(shifts));
  io::Json pairs = io::Json::array();
  for (const auto& d : r.pairwise) {
    io::Json pj = io::Json::object();
    pj.set("a", io::Json::string(d.a));
    pj.set("b", io::Json::string(d.b));
    pj.set("abs_diff", io::Json::number(d.abs));
    pj.set("rel_diff", io::Json::number(d.rel));
    pairs.push(std::move(pj));
  }
  j.set("pairwise", std::move(pairs));
  j.set("max_rel_diff_core", io::Json::number(r.max_rel_core));
  j.set("rel_diff_fd", io::Json::number(r.rel_fd));
  j.set("budget_core", io::Json::number(ShiftReport::budget_core));
  j.set("budget_fd", io::Json::number(ShiftReport::budget_fd));
  j.set("pass", io::Json::boolean(r.pass));
  return j;
}

inline std::vector<std::string> shift_csv_header() {
  return {"param",
          "value",
          "dz_classical_closed",
          "dz_classical_closed_err",
          "dz_classical_green",
          "dz_classical_green_err",
          "dz_oracle_linear_response",
          "dz_oracle_linear_response_err",
          "dp_oracle_linear_response",
          "dp_oracle_linear_response_err",
          "dzq_reduced",
          "dzq_reduced_err",
          "dzq_angular",
          "dzq_angular_err",
          "dzq_angular_fd",
          "dzq_angular_fd_err",
          "max_rel_diff_core",
          "rel_diff_fd",
          "pass"};
}

inline void shift_csv_row(io::CsvWriter& csv, const std::string& param,
                          double value, const ShiftReport& r) {
  csv.cell(param).cell(value);
  for (const ValueWithError* v :
       {&r.dz_classical_closed, &r.dz_classical_green,
        &r.dz_oracle_linear_response, &r.dp_oracle_linear_response,
        &r.dzq_reduced, &r.dzq_angular, &r.dzq_angular_fd})
    csv.cell(v->value).cell(v->error);
  csv.cell(r.max_rel_core).cell(r.rel_fd).cell(r.pass);
  csv.end_row();
}

// trajectory: dense CSV plus a summary of the derived quantities.
inline int cmd_trajectory(const io::RunConfig& cfg) {
  const PotentialProfile profile = cfg.make_profile();
  const Trajectory traj = Trajectory::build(profile, cfg.particle, cfg.sim);
  const int rows = cfg.sim.trajectory_csv_rows;

  std::ostringstream os;
  io::CsvWriter csv(os, {"t", "z", "zdot", "zddot", "zdddot", "gamma",
                         "f_ld", "F_t", "F_z"});
  for (int i = 0; i < rows; ++i) {
    const double t = traj.t_min() + (0.0 - traj.t_min()) * i / (rows - 1);
    const TrajectoryPoint pt = traj.point_at(t);
    const auto f = f_ld_at(pt, cfg.particle.alpha_c);
    const auto F = four_force(pt, cfg.particle.alpha_c);
    csv.cell(pt.t)
        .cell(pt.z)
        .cell(pt.zdot)
        .cell(pt.zddot)
        .cell(pt.zdddot)
        .cell(pt.gamma)
        .cell(f.f_ld)
        .cell(F[0])
        .cell(F[1]);
    csv.end_row();
  }
  write_file(fs::path(cfg.out_dir) / "trajectory.csv", os.str());

  if (cfg.wants("json")) {
    io::Json j = io::Json::object();
    j.set("config", io::effective_config_json(cfg));
    j.set("E", io::Json::number(traj.energy()));
    j.set("zdot_final", io::Json::number(traj.zdot_out()));
    j.set("zdot_initial", io::Json::number(traj.zdot_in()));
    j.set("t_entry", io::Json::number(traj.t_entry()));
    j.set("t_exit", io::Json::number(traj.t_exit()));
    j.set("support_t_lo", io::Json::number(traj.support_t_lo()));
    j.set("support_t_hi", io::Json::number(traj.support_t_hi()));
    j.set("t_min", io::Json::number(traj.t_min()));
    j.set("rows", io::Json::integer(rows));
    write_file(fs::path(cfg.out_dir) / "trajectory_summary.json", j.dump());
  }
  std::cout << "trajectory: " << rows << " rows, t_entry = " << traj.t_entry()
            << ", t_exit = " << traj.t_exit() << "\n";
  return 0;
}

// shift: all routes, pairwise differences, pass/fail against the budget.
inline int cmd_shift(const io::RunConfig& cfg) {
  const PotentialProfile profile = cfg.make_profile();
  const Trajectory traj = Trajectory::build(profile, cfg.particle, cfg.sim);
  const ShiftReport r = compute_shift_report(traj, cfg.sim, cfg.workers);
  write_file(fs::path(cfg.out_dir) / "shift_report.json",
             shift_report_json(cfg, r).dump());
  if (cfg.wants("csv")) {
    std::ostringstream os;
    io::CsvWriter csv(os, shift_csv_header());
    shift_csv_row(csv, "-", 0.0, r);
    write_file(fs::path(cfg.out_dir) / "shift_report.csv", os.str());
  }
  std::cout << "shift: dz = " << r.dz_oracle_linear_response.value
            << ", max core rel diff = " << r.max_rel_core
            << ", fd rel diff = " << r.rel_fd << ", "
            << (r.pass ? "pass" : "FAIL") << "\n";
  return 0;
}

struct AmplitudeGrid {
  double k_min = 0.5;
  double k_max = 8.0;
  int k_count = 10;
  bool k_log = false;
  double cos_min = -0.9;
  double cos_max = 0.9;
  int cos_count = 10;
};

// amplitude: both evaluation routes over a (k, cos theta) grid.
inline int cmd_amplitude(const io::RunConfig& cfg,
                         const AmplitudeGrid& grid) {
  if (!(grid.k_min > 0.0 && grid.k_max >= grid.k_min && grid.k_count >= 1 &&
        grid.cos_count >= 1 && grid.cos_min >= -1.0 &&
        grid.cos_max <= 1.0 && grid.cos_max >= grid.cos_min))
    throw ConfigError("amplitude: malformed k/cos grid");
  const PotentialProfile profile = cfg.make_profile();
  const Trajectory traj = Trajectory::build(profile, cfg.particle, cfg.sim);

  std::vector<double> ks, cs;
  for (int i = 0; i < grid.k_count; ++i) {
    const double f =
        grid.k_count == 1 ? 0.0 : static_cast<double>(i) / (grid.k_count - 1);
    ks.push_back(grid.k_log ? grid.k_min *
                                  std::pow(grid.k_max / grid.k_min, f)
                            : grid.k_min + (grid.k_max - grid.k_min) * f);
  }
  for (int i = 0; i < grid.cos_count; ++i) {
    const double f = grid.cos_count == 1
                         ? 0.0
                         : static_cast<double>(i) / (grid.cos_count - 1);
    cs.push_back(grid.cos_min + (grid.cos_max - grid.cos_min) * f);
  }

  struct Row {
    double k, c;
    EmissionAmplitude amp;
    double form_rel_diff;
  };
  std::vector<Row> rowdata(ks.size() * cs.size());
  num::parallel_for(rowdata.size(), cfg.workers, [&](std::size_t idx) {
    const double k = ks[idx / cs.size()];
    const double c = cs[idx % cs.size()];
    const XiFrame frame(traj, c);
    const auto window = WindowFunction::around(frame, cfg.sim.window_pad,
                                               cfg.sim.window_rolloff);
    const auto ad = amplitude_direct(traj, k, c, window, cfg.sim);
    const auto ai = amplitude_ibp(traj, k, c, window, cfg.sim);
    const double scale =
        std::max({std::abs(ad.A_t), std::abs(ad.A_z), 1e-300});
    rowdata[idx] = {k, c, ad,
                    std::max(std::abs(ad.A_t - ai.A_t),
                             std::abs(ad.A_z - ai.A_z)) /
                        scale};
  });

  std::ostringstream os;
  io::CsvWriter csv(os, {"k", "cos_theta", "re_A_t", "im_A_t", "re_A_z",
                         "im_A_z", "spectral_density", "form_rel_diff"});
  double max_form = 0.0;
  for (const Row& r : rowdata) {
    csv.cell(r.k)
        .cell(r.c)
        .cell(r.amp.A_t.real())
        .cell(r.amp.A_t.imag())
        .cell(r.amp.A_z.real())
        .cell(r.amp.A_z.imag())
        .cell(spectral_density(r.amp))
        .cell(r.form_rel_diff);
    csv.end_row();
    max_form = std::max(max_form, r.form_rel_diff);
  }
  write_file(fs::path(cfg.out_dir) / "spectrum.csv", os.str());
  if (cfg.wants("json")) {
    io::Json j = io::Json::object();
    j.set("config", io::effective_config_json(cfg));
    j.set("k_count", io::Json::integer(grid.k_count));
    j.set("cos_count", io::Json::integer(grid.cos_count));
    j.set("max_form_rel_diff", io::Json::number(max_form));
    write_file(fs::path(cfg.out_dir) / "spectrum_summary.json", j.dump());
  }
  std::cout << "amplitude: " << rowdata.size()
            << " grid points, max form rel diff = " << max_form << "\n";
  return 0;
}

// verify: run every module invariant, write the report, exit 1 on any
// failure.
inline int cmd_verify(const io::RunConfig& cfg) {
  const PotentialProfile profile = cfg.make_profile();
  const auto checks = run_verification(profile, cfg.particle, cfg.sim,
                                       cfg.seed, cfg.workers);
  bool all_pass = true;
  io::Json arr = io::Json::array();
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass;
    io::Json j = io::Json::object();
    j.set("name", io::Json::string(c.name));
    j.set("measured", io::Json::number(c.measured));
    j.set("tolerance", io::Json::number(c.tolerance));
    j.set("pass", io::Json::boolean(c.pass));
    arr.push(std::move(j));
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name
              << "  measured=" << c.measured << " tol=" << c.tolerance
              << "\n";
  }
  io::Json j = io::Json::object();
  j.set("config", io::effective_config_json(cfg));
  j.set("checks", std::move(arr));
  j.set("pass", io::Json::boolean(all_pass));
  write_file(fs::path(cfg.out_dir) / "verify_report.json", j.dump());
  std::cout << (all_pass ? "verify: all checks passed"
                         : "verify: FAILURES present")
            << "\n";
  return all_pass ? 0 : 1;
}

// sweep: one shift report per parameter value, rows in input order,
// parameter values run as independent jobs.
inline int cmd_sweep(const io::RunConfig& cfg, const std::string& param,
                     const std::vector<double>& values) {
  static const std::vector<std::string> allowed = {"p", "V0", "Z1", "Z2",
                                                   "alpha_c"};
  if (std::find(allowed.begin(), allowed.end(), param) == allowed.end())
    throw ConfigError("sweep: unknown parameter '" + param +
                      "' (p|V0|Z1|Z2|alpha_c)");
  if (values.empty()) throw ConfigError("sweep: no values given");

  auto with_value = [&](double v) {
    io::RunConfig local = cfg;
    if (param == "p") local.particle.p = v;
    else if (param == "alpha_c") local.particle.alpha_c = v;
    else if (param == "V0") local.scenario.V0 = v;
    else if (param == "Z1") local.scenario.Z1 = v;
    else if (param == "Z2") local.scenario.Z2 = v;
    return local;
  };
  std::vector<ShiftReport> reports(values.size());
  num::parallel_for(values.size(), cfg.workers, [&](std::size_t i) {
    const io::RunConfig local = with_value(values[i]);
    const PotentialProfile profile = local.make_profile();
    const Trajectory traj =
        Trajectory::build(profile, local.particle, local.sim);
    reports[i] = compute_shift_report(traj, local.sim, 1);
  });

  std::ostringstream os;
  io::CsvWriter csv(os, shift_csv_header());
  bool all_pass = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    shift_csv_row(csv, param, values[i], reports[i]);
    all_pass = all_pass && reports[i].pass;
  }
  write_file(fs::path(cfg.out_dir) / "sweep.csv", os.str());
  if (cfg.wants("json")) {
    io::Json arr = io::Json::array();
    for (std::size_t i = 0; i < values.size(); ++i) {
      io::Json row = io::Json::object();
      row.set("param", io::Json::string(param));
      row.set("value", io::Json::number(values[i]));
      row.set("report", shift_report_json(with_value(values[i]), reports[i]));
      arr.push(std::move(row));
    }
    io::Json j = io::Json::object();
    j.set("config", io::effective_config_json(cfg));
    j.set("rows", std::move(arr));
    write_file(fs::path(cfg.out_dir) / "sweep.json", j.dump());
  }
  std::cout << "sweep: " << values.size() << " values of " << param << ", "
            << (all_pass ? "all pass" : "FAILURES present") << "\n";
  return 0;
}

}  // namespace radshift::cli
