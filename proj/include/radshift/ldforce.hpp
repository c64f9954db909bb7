#pragma once

#include <Eigen/Dense>

#include "radshift/trajectory.hpp"

namespace radshift {

// Radiation-reaction force for linear motion, evaluated on the
// unperturbed trajectory (it is never fed back into the equation of
// motion). Two algebraically equivalent groupings are kept so their
// agreement can be asserted:
//   form_a = (2 alpha_c/3) gamma [gamma^3 zdddot + 3 gamma^5 zdot zddot^2]
//   form_b = (2 alpha_c/3) [gamma^4 zdddot + 3 gamma^6 zdot zddot^2]
struct LDForceSample {
  double t = 0.0;
  double f_ld = 0.0;
  double form_a = 0.0;
  double form_b = 0.0;
};

inline LDForceSample f_ld_at(const TrajectoryPoint& pt, double alpha_c) {
  const double g = pt.gamma;
  const double g2 = g * g;
  const double g3 = g2 * g;
  const double g4 = g2 * g2;
  const double pre = 2.0 * alpha_c / 3.0;
  const double bracket = g3 * pt.zdddot + 3.0 * g2 * g3 * pt.zdot *
                                              pt.zddot * pt.zddot;
  LDForceSample s;
  s.t = pt.t;
  s.form_a = pre * g * bracket;
  s.form_b = pre * (g4 * pt.zdddot +
                    3.0 * g3 * g3 * pt.zdot * pt.zddot * pt.zddot);
  s.f_ld = s.form_b;
  return s;
}

inline double f_ld_value(const Trajectory& traj, double t) {
  return f_ld_at(traj.point_at(t), traj.particle().alpha_c).f_ld;
}

// 4-force components (F^t, F^z) = f_ld gamma (zdot, 1); the transverse
// components vanish for linear motion.
inline Eigen::Vector2d four_force(const TrajectoryPoint& pt, double alpha_c) {
  const double f = f_ld_at(pt, alpha_c).f_ld;
  return {f * pt.gamma * pt.zdot, f * pt.gamma};
}

// Instantaneous radiated power (2 alpha_c / 3) gamma^6 zddot^2.
inline double larmor_power(const TrajectoryPoint& pt, double alpha_c) {
  const double g2 = pt.gamma * pt.gamma;
  return (2.0 * alpha_c / 3.0) * g2 * g2 * g2 * pt.zddot * pt.zddot;
}

}  // namespace radshift
