#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "radshift/jacobi.hpp"
#include "radshift/qshift.hpp"

namespace radshift {

inline double rel_diff(double a, double b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  if (scale == 0.0) return 0.0;
  return std::abs(a - b) / scale;
}

// Every computed shift with its numerical error estimate, plus the
// pairwise agreement table. The pass flag compares the same-trajectory
// routes at budget_core and the finite-difference angular route at
// budget_fd.
struct ShiftReport {
  static constexpr double budget_core = 1e-5;
  static constexpr double budget_fd = 1e-4;

  ValueWithError dz_classical_closed;
  ValueWithError dz_classical_green;
  ValueWithError dz_oracle_linear_response;
  ValueWithError dp_oracle_linear_response;
  ValueWithError dzq_reduced;
  ValueWithError dzq_angular;
  ValueWithError dzq_angular_fd;

  struct PairDiff {
    std::string a, b;
    double abs = 0.0;
    double rel = 0.0;
  };
  std::vector<PairDiff> pairwise;
  double max_rel_core = 0.0;
  double rel_fd = 0.0;
  bool pass = false;
};

inline ShiftReport compute_shift_report(const Trajectory& traj,
                                        const SimulationConfig& sim,
                                        int workers = 1) {
  ShiftReport r;
  r.dz_classical_closed = classical_shift_closed(traj, sim);
  r.dz_classical_green = classical_shift_green(traj, sim);
  const LinearResponse oracle = oracle_linear_response(traj, sim);
  r.dz_oracle_linear_response = oracle.dz0;
  r.dp_oracle_linear_response = oracle.dP0;
  r.dzq_reduced = quantum_shift_reduced(traj, sim);
  r.dzq_angular =
      quantum_shift_angular(traj, sim, DpMode::analytic, workers);
  r.dzq_angular_fd =
      quantum_shift_angular(traj, sim, DpMode::finite_difference, workers);

  struct Entry {
    const char* name;
    double value;
  };
  const Entry core[] = {
      {"dz_classical_closed", r.dz_classical_closed.value},
      {"dz_classical_green", r.dz_classical_green.value},
      {"dz_oracle_linear_response", r.dz_oracle_linear_response.value},
      {"dzq_reduced", r.dzq_reduced.value},
      {"dzq_angular", r.dzq_angular.value},
  };
  for (std::size_t i = 0; i < std::size(core); ++i)
    for (std::size_t j = i + 1; j < std::size(core); ++j) {
      ShiftReport::PairDiff d;
      d.a = core[i].name;
      d.b = core[j].name;
      d.abs = std::abs(core[i].value - core[j].value);
      d.rel = rel_diff(core[i].value, core[j].value);
      r.max_rel_core = std::max(r.max_rel_core, d.rel);
      r.pairwise.push_back(d);
    }
  {
    ShiftReport::PairDiff d;
    d.a = "dzq_angular_fd";
    d.b = "dzq_angular";
    d.abs = std::abs(r.dzq_angular_fd.value - r.dzq_angular.value);
    d.rel = rel_diff(r.dzq_angular_fd.value, r.dzq_angular.value);
    r.rel_fd = d.rel;
    r.pairwise.push_back(d);
  }
  r.pass = r.max_rel_core <= ShiftReport::budget_core &&
           r.rel_fd <= ShiftReport::budget_fd;
  return r;
}

}  // namespace radshift
