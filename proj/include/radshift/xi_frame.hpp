#pragma once

#include <cmath>

#include <Eigen/Dense>

#include "radshift/errors.hpp"
#include "radshift/trajectory.hpp"

namespace radshift {

// Reparameterization of a worldline by the retarded coordinate
// xi = t - z cos(theta) of radiation emitted toward direction cosine
// cos(theta). Monotone in t because |zdot| < 1. Components of 4-vectors
// are ordered (t, z) throughout.
class XiFrame {
 public:
  XiFrame(const Trajectory& traj, double cos_theta)
      : traj_(&traj), c_(cos_theta) {
    if (!(std::abs(cos_theta) <= 1.0))
      throw ValidationError("xi frame: |cos_theta| must be <= 1");
    xi_lo_ = xi_of_t(traj.transition_t_lo());
    xi_hi_ = xi_of_t(traj.transition_t_hi());
    xi_support_lo_ = xi_of_t(traj.support_t_lo());
    xi_support_hi_ = xi_of_t(traj.support_t_hi());
  }

  double cos_theta() const { return c_; }
  const Trajectory& trajectory() const { return *traj_; }

  double xi_of_t(double t) const { return t - c_ * traj_->z_of_t(t); }

  // Image of the force support under xi.
  double xi_support_lo() const { return xi_support_lo_; }
  double xi_support_hi() const { return xi_support_hi_; }

  double t_of_xi(double xi) const {
    if (xi <= xi_lo_)
      return traj_->transition_t_lo() +
             (xi - xi_lo_) / (1.0 - c_ * traj_->zdot_in());
    if (xi >= xi_hi_)
      return traj_->transition_t_hi() +
             (xi - xi_hi_) / (1.0 - c_ * traj_->zdot_out());
    // Safeguarded Newton: g(t) = t - c z(t) - xi, g' = 1 - c zdot >= 1-|c|.
    double lo = traj_->transition_t_lo(), hi = traj_->transition_t_hi();
    double t = lo + (hi - lo) * (xi - xi_lo_) / (xi_hi_ - xi_lo_);
    for (int it = 0; it < 100; ++it) {
      const TrajectoryPoint pt = traj_->point_at(t);
      const double g = t - c_ * pt.z - xi;
      const double gp = 1.0 - c_ * pt.zdot;
      (g > 0.0 ? hi : lo) = t;
      double t_new = t - g / gp;
      if (!(t_new > lo && t_new < hi)) t_new = 0.5 * (lo + hi);
      if (std::abs(t_new - t) <= 1e-15 * (1.0 + std::abs(t_new))) return t_new;
      t = t_new;
    }
    return t;
  }

  // dX/dxi = (1, zdot)/(1 - zdot cos(theta)).
  Eigen::Vector2d dX_dxi(double t) const {
    const TrajectoryPoint pt = traj_->point_at(t);
    const double denom = 1.0 - c_ * pt.zdot;
    return {1.0 / denom, pt.zdot / denom};
  }

  // d2X/dxi2 = (cos(theta), 1) * zddot/(1 - zdot cos(theta))^3.
  Eigen::Vector2d d2X_dxi2(double t) const {
    const TrajectoryPoint pt = traj_->point_at(t);
    const double denom = 1.0 - c_ * pt.zdot;
    const double q = pt.zddot / (denom * denom * denom);
    return {c_ * q, q};
  }

  // (dz/dp) at fixed xi = (dz/dp)_t / (1 - zdot cos(theta)).
  double dzdp_xi(double t) const {
    const TrajectoryPoint pt = traj_->point_at(t);
    return traj_->dzdp_fixed_t(t) / (1.0 - c_ * pt.zdot);
  }

  // (dt/dp) at fixed xi.
  double dtdp_xi(double t) const { return c_ * dzdp_xi(t); }

  // d/dt of (dz/dp)_xi, all closed form. Uses d/dt (dz/dp)_t = A dP/dp.
  double ddt_dzdp_xi(double t) const {
    const TrajectoryPoint pt = traj_->point_at(t);
    const double denom = 1.0 - c_ * pt.zdot;
    const double g3 = pt.gamma * pt.gamma * pt.gamma;
    const double ddt_dzdp =
        traj_->dPdp_fixed_t(t) / (traj_->particle().m * g3);
    return (ddt_dzdp * denom + traj_->dzdp_fixed_t(t) * c_ * pt.zddot) /
           (denom * denom);
  }

  // d/dp (dX/dxi) at fixed xi, via (dt/dxi) d/dt of (dX/dp)_xi.
  Eigen::Vector2d dp_dX_dxi(double t) const {
    const TrajectoryPoint pt = traj_->point_at(t);
    const double dtdxi = 1.0 / (1.0 - c_ * pt.zdot);
    const double dd = ddt_dzdp_xi(t);
    return {dtdxi * c_ * dd, dtdxi * dd};
  }

 private:
  const Trajectory* traj_;
  double c_;
  double xi_lo_ = 0.0, xi_hi_ = 0.0;
  double xi_support_lo_ = 0.0, xi_support_hi_ = 0.0;
};

}  // namespace radshift
