#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "radshift/errors.hpp"
#include "radshift/model.hpp"
#include "radshift/numerics/quadrature.hpp"

namespace radshift {

struct TrajectoryPoint {
  double t = std::numeric_limits<double>::quiet_NaN();
  double z = 0.0;
  double zdot = 0.0;
  double zddot = 0.0;
  double zdddot = 0.0;
  double gamma = 1.0;
};

// zdot = sqrt(1 - m^2/(E-V)^2), valid only above the turning point.
inline double velocity_from_energy(double E, double V, double m) {
  const double g = (E - V) / m;
  if (!(g > 1.0))
    throw TurningPointError(
        std::numeric_limits<double>::quiet_NaN(),
        "velocity_from_energy: E - V <= m (turning point)");
  return std::sqrt((g - 1.0) * (g + 1.0)) / g;
}

// All kinematic derivatives in closed form from energy conservation; no
// numerical differentiation. The t field is left unset.
inline TrajectoryPoint kinematics_at(const PotentialProfile& profile,
                                     const ParticleParams& particle,
                                     double z) {
  const auto pv = profile.value(z);
  const double E = particle.energy();
  const double m = particle.m;
  TrajectoryPoint pt;
  pt.z = z;
  pt.gamma = (E - pv.V) / m;
  pt.zdot = velocity_from_energy(E, pv.V, m);
  const double g3 = pt.gamma * pt.gamma * pt.gamma;
  pt.zddot = -pv.Vp / (m * g3);
  pt.zdddot = -pv.Vpp * pt.zdot / (m * g3) +
              3.0 * pv.Vp * pt.zdot * pt.zddot / (m * pt.gamma);
  return pt;
}

// Local z-momentum of the e = 0 particle: {[p0 - V(z)]^2 - m^2 - p_perp^2}^{1/2}.
inline double kappa(const PotentialProfile& profile, double m, double p0,
                    const Eigen::Vector2d& p_perp, double z) {
  const double w = p0 - profile.value(z).V;
  const double arg = w * w - m * m - p_perp.squaredNorm();
  if (!(arg > 0.0))
    throw RangeError("kappa: classically forbidden region at z = " +
                     std::to_string(z));
  return std::sqrt(arg);
}

// The unperturbed worldline through z(0) = 0 with final momentum p.
// Built by quadrature of 1/zdot(z) backwards from the origin; the
// transition region is stored as a certified quintic Hermite interpolant
// in t, both flat regions are exact straight lines.
class Trajectory {
 public:
  static Trajectory build(const PotentialProfile& profile,
                          const ParticleParams& particle,
                          const SimulationConfig& sim,
                          double t_min_request =
                              std::numeric_limits<double>::quiet_NaN()) {
    sim.validate();
    validate_scenario(profile, particle, sim.delta_min);
    Trajectory traj(profile, particle, sim);
    traj.construct();
    double t_min = traj.support_t_lo_ - sim.t_margin;
    if (std::isfinite(t_min_request))
      t_min = std::min(t_min, t_min_request);  // auto-extends, never shrinks
    traj.t_min_ = t_min;
    return traj;
  }

  const ParticleParams& particle() const { return particle_; }
  const PotentialProfile& profile() const { return profile_; }
  const SimulationConfig& sim() const { return sim_; }

  double energy() const { return E_; }
  double zdot_out() const { return zdot_out_; }
  double zdot_in() const { return zdot_in_; }
  double t_entry() const { return t_entry_; }   // z = -Z1 crossing
  double t_exit() const { return t_exit_; }     // z = -Z2 crossing
  double support_t_lo() const { return support_t_lo_; }
  double support_t_hi() const { return support_t_hi_; }
  double t_min() const { return t_min_; }

  double z_of_t(double t) const {
    if (t >= t_hi_) return zdot_out_ * t;
    if (t <= t_lo_) return z_lo_ + zdot_in_ * (t - t_lo_);
    const std::size_t i = segment_of_t(t);
    return hermite_z(i, t);
  }

  TrajectoryPoint point_at(double t) const {
    TrajectoryPoint pt = kinematics_at(profile_, particle_, z_of_t(t));
    pt.t = t;
    return pt;
  }

  // Forward map t(z) evaluated from the stored cumulative quadrature.
  double t_of_z(double z) const {
    if (z >= z_hi_) return z / zdot_out_;
    if (z <= z_lo_) return t_lo_ + (z - z_lo_) / zdot_in_;
    const std::size_t i = segment_of_z(z);
    return t_[i] + seg_quad(z_[i], z)[0];
  }

  // (dz/dp) at fixed t for the family of worldlines pinned to z(0) = 0:
  //   (dz/dp)_t = zdot(t) (zdot_out / m) * Int_0^t dt'/(gamma^3 zdot^2).
  double dzdp_fixed_t(double t) const {
    return point_at(t).zdot * (zdot_out_ / particle_.m) * time_integral(t);
  }

  // (dP/dp) at fixed t, P = m gamma zdot.
  double dPdp_fixed_t(double t) const {
    const TrajectoryPoint pt = point_at(t);
    const double Vp = profile_.value(pt.z).Vp;
    return zdot_out_ / pt.zdot - (Vp / pt.zdot) * dzdp_fixed_t(t);
  }

  // Q(t) = Int_0^t dt'/(gamma^3 zdot^2), evaluated from the nearest grid
  // node with a fixed 7-point Gauss rule on the remainder.
  double time_integral(double t) const {
    if (t >= t_hi_) return g_out_ * t;
    if (t <= t_lo_) return Q_lo_ + g_in_ * (t - t_lo_);
    const std::size_t i = segment_of_t(t);
    double q = Q_[i];
    q += gl7_time(t_[i], t, i);
    return q;
  }

  // Same integral from the precomputed cumulative grid via cubic Hermite
  // interpolation (the dense-grid route used by the closed-form shift).
  double time_integral_grid(double t) const {
    if (t >= t_hi_) return g_out_ * t;
    if (t <= t_lo_) return Q_lo_ + g_in_ * (t - t_lo_);
    const std::size_t i = segment_of_t(t);
    const double h = t_[i + 1] - t_[i];
    const double s = (t - t_[i]) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double g0 = gq_[i], g1 = gq_[i + 1];
    return (2 * s3 - 3 * s2 + 1) * Q_[i] + (s3 - 2 * s2 + s) * h * g0 +
           (-2 * s3 + 3 * s2) * Q_[i + 1] + (s3 - s2) * h * g1;
  }

  // Interpolant-side derivatives, for fidelity checks against the closed
  // forms.
  double interp_zdot(double t) const {
    if (t >= t_hi_) return zdot_out_;
    if (t <= t_lo_) return zdot_in_;
    const std::size_t i = segment_of_t(t);
    return hermite_z_d1(i, t);
  }
  double interp_zddot(double t) const {
    if (t >= t_hi_ || t <= t_lo_) return 0.0;
    const std::size_t i = segment_of_t(t);
    return hermite_z_d2(i, t);
  }

  // Transition-region grid (ascending t).
  const std::vector<double>& grid_t() const { return t_; }
  const std::vector<double>& grid_z() const { return z_; }

  double transition_t_lo() const { return t_lo_; }
  double transition_t_hi() const { return t_hi_; }

 private:
  Trajectory(const PotentialProfile& profile, const ParticleParams& particle,
             const SimulationConfig& sim)
      : profile_(profile), particle_(particle), sim_(sim) {}

  // Integrand pair for the cumulative maps: d t/d z = 1/zdot and
  // d Q/d z = 1/(gamma^3 zdot^3).
  Eigen::Vector2d map_integrand(double z) const {
    const auto pv = profile_.value(z);
    const double g = (E_ - pv.V) / particle_.m;
    const double v = velocity_from_energy(E_, pv.V, particle_.m);
    return {1.0 / v, 1.0 / (g * g * g * v * v * v)};
  }

  Eigen::Vector2d seg_quad(double za, double zb) const {
    if (za == zb) return Eigen::Vector2d::Zero();
    return num::gk15_panel([this](double z) { return map_integrand(z); }, za,
                           zb)
        .value;
  }

  void construct() {
    E_ = particle_.energy();
    zdot_out_ = velocity_from_energy(E_, 0.0, particle_.m);
    zdot_in_ = velocity_from_energy(E_, profile_.V0(), particle_.m);
    const double g_out = E_ / particle_.m;
    g_out_ = 1.0 / (g_out * g_out * g_out * zdot_out_ * zdot_out_);
    const double gin = (E_ - profile_.V0()) / particle_.m;
    g_in_ = 1.0 / (gin * gin * gin * zdot_in_ * zdot_in_);

    z_lo_ = profile_.support_lo();
    z_hi_ = profile_.support_hi();
    t_hi_ = z_hi_ / zdot_out_;

    // Refine the z-grid until each segment's quadrature error and quintic
    // Hermite residual pass. Knots come out ordered by construction.
    struct Seg {
      double za, zb;
      Eigen::Vector2d delta;
    };
    std::vector<Seg> done;
    std::vector<std::pair<double, double>> stack;
    const int n0 = 16;
    for (int i = n0 - 1; i >= 0; --i) {
      const double za = z_lo_ + (z_hi_ - z_lo_) * i / n0;
      const double zb = z_lo_ + (z_hi_ - z_lo_) * (i + 1) / n0;
      stack.emplace_back(za, zb);
    }
    const double interp_tol = std::min(sim_.ode_rel_tol, 1e-12);
    long guard = 0;
    while (!stack.empty()) {
      if (++guard > 2000000)
        throw ConvergenceError("trajectory grid refinement did not converge");
      auto [za, zb] = stack.back();
      stack.pop_back();
      const double zm = 0.5 * (za + zb);
      auto full = num::gk15_panel(
          [this](double z) { return map_integrand(z); }, za, zb);
      auto left = num::gk15_panel(
          [this](double z) { return map_integrand(z); }, za, zm);
      auto right = num::gk15_panel(
          [this](double z) { return map_integrand(z); }, zm, zb);
      const Eigen::Vector2d sum = left.value + right.value;
      const double qerr =
          (full.value - sum).cwiseAbs().maxCoeff() + left.error + right.error;
      bool ok = qerr <= 1e-13 * sum.cwiseAbs().maxCoeff();
      if (ok) {
        // Certify the quintic Hermite against the midpoint.
        const double dt_l = left.value[0], dt_r = right.value[0];
        const double dt = dt_l + dt_r;
        const TrajectoryPoint pa = kinematics_at(profile_, particle_, za);
        const TrajectoryPoint pb = kinematics_at(profile_, particle_, zb);
        const double zh = quintic_eval(0.0, dt, za, pa.zdot, pa.zddot, zb,
                                       pb.zdot, pb.zddot, dt_l, 0);
        const double vh = quintic_eval(0.0, dt, za, pa.zdot, pa.zddot, zb,
                                       pb.zdot, pb.zddot, dt_l, 1);
        const TrajectoryPoint pm = kinematics_at(profile_, particle_, zm);
        const double z_scale = std::max(1.0, std::abs(zm));
        ok = std::abs(zh - zm) <= interp_tol * z_scale &&
             std::abs(vh - pm.zdot) <= sim_.ode_rel_tol *
                                           std::max(pm.zdot, 1e-3);
      }
      if (ok) {
        done.push_back({za, zm, left.value});
        done.push_back({zm, zb, right.value});
      } else {
        stack.emplace_back(zm, zb);
        stack.emplace_back(za, zm);
      }
    }
    std::sort(done.begin(), done.end(),
              [](const Seg& l, const Seg& r) { return l.za < r.za; });

    const std::size_t n = done.size() + 1;
    z_.resize(n);
    t_.resize(n);
    Q_.resize(n);
    v_.resize(n);
    a_.resize(n);
    gq_.resize(n);
    z_[n - 1] = z_hi_;
    t_[n - 1] = t_hi_;
    Q_[n - 1] = g_out_ * t_hi_;
    for (std::size_t i = done.size(); i-- > 0;) {
      z_[i] = done[i].za;
      t_[i] = t_[i + 1] - done[i].delta[0];
      Q_[i] = Q_[i + 1] - done[i].delta[1];
    }
    for (std::size_t i = 0; i < n; ++i) {
      const TrajectoryPoint pt = kinematics_at(profile_, particle_, z_[i]);
      v_[i] = pt.zdot;
      a_[i] = pt.zddot;
      const double g = pt.gamma;
      gq_[i] = 1.0 / (g * g * g * pt.zdot * pt.zdot);
    }
    t_lo_ = t_[0];
    Q_lo_ = Q_[0];

    // Monotonicity is structural here; a violation means the quadrature
    // produced inconsistent data.
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!(t_[i] < t_[i + 1] && z_[i] < z_[i + 1]))
        throw ConvergenceError("trajectory: non-monotone sample grid");

    t_entry_ = t_of_z(-profile_.Z1());
    t_exit_ = t_of_z(-profile_.Z2());
    support_t_lo_ = t_lo_;
    support_t_hi_ = t_hi_;
  }

  std::size_t segment_of_t(double t) const {
    const std::size_t i = static_cast<std::size_t>(
        std::upper_bound(t_.begin(), t_.end(), t) - t_.begin());
    return std::clamp<std::size_t>(i, 1, t_.size() - 1) - 1;
  }
  std::size_t segment_of_z(double z) const {
    const std::size_t i = static_cast<std::size_t>(
        std::upper_bound(z_.begin(), z_.end(), z) - z_.begin());
    return std::clamp<std::size_t>(i, 1, z_.size() - 1) - 1;
  }

  // Quintic Hermite with endpoint (value, d1, d2); deriv = 0,1,2 selects
  // the value or a derivative at t.
  static double quintic_eval(double t0, double t1, double f0, double d0,
                             double s0, double f1, double d1, double s1,
                             double t, int deriv) {
    const double h = t1 - t0;
    const double u = (t - t0) / h;
    // Basis via the local Taylor form around u.
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double H0 = 1 - 10 * u3 + 15 * u4 - 6 * u5;
    const double H1 = u - 6 * u3 + 8 * u4 - 3 * u5;
    const double H2 = 0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5;
    const double H3 = 0.5 * u3 - u4 + 0.5 * u5;
    const double H4 = -4 * u3 + 7 * u4 - 3 * u5;
    const double H5 = 10 * u3 - 15 * u4 + 6 * u5;
    const double dH0 = (-30 * u2 + 60 * u3 - 30 * u4);
    const double dH1 = (1 - 18 * u2 + 32 * u3 - 15 * u4);
    const double dH2 = (u - 4.5 * u2 + 6 * u3 - 2.5 * u4);
    const double dH3 = (1.5 * u2 - 4 * u3 + 2.5 * u4);
    const double dH4 = (-12 * u2 + 28 * u3 - 15 * u4);
    const double dH5 = (30 * u2 - 60 * u3 + 30 * u4);
    const double ddH0 = (-60 * u + 180 * u2 - 120 * u3);
    const double ddH1 = (-36 * u + 96 * u2 - 60 * u3);
    const double ddH2 = (1 - 9 * u + 18 * u2 - 10 * u3);
    const double ddH3 = (3 * u - 12 * u2 + 10 * u3);
    const double ddH4 = (-24 * u + 84 * u2 - 60 * u3);
    const double ddH5 = (60 * u - 180 * u2 + 120 * u3);
    switch (deriv) {
      case 0:
        return H0 * f0 + H5 * f1 + h * (H1 * d0 + H4 * d1) +
               h * h * (H2 * s0 + H3 * s1);
      case 1:
        return (dH0 * f0 + dH5 * f1) / h + (dH1 * d0 + dH4 * d1) +
               h * (dH2 * s0 + dH3 * s1);
      default:
        return (ddH0 * f0 + ddH5 * f1) / (h * h) +
               (ddH1 * d0 + ddH4 * d1) / h + (ddH2 * s0 + ddH3 * s1);
    }
  }

  double hermite_z(std::size_t i, double t) const {
    return quintic_eval(t_[i], t_[i + 1], z_[i], v_[i], a_[i], z_[i + 1],
                        v_[i + 1], a_[i + 1], t, 0);
  }
  double hermite_z_d1(std::size_t i, double t) const {
    return quintic_eval(t_[i], t_[i + 1], z_[i], v_[i], a_[i], z_[i + 1],
                        v_[i + 1], a_[i + 1], t, 1);
  }
  double hermite_z_d2(std::size_t i, double t) const {
    return quintic_eval(t_[i], t_[i + 1], z_[i], v_[i], a_[i], z_[i + 1],
                        v_[i + 1], a_[i + 1], t, 2);
  }

  // 7-point Gauss rule for Q between a grid node and t.
  double gl7_time(double ta, double tb, std::size_t seg) const {
    if (ta == tb) return 0.0;
    static constexpr double x[7] = {
        -0.949107912342758524526189684047851,
        -0.741531185599394439863864773280788,
        -0.405845151377397166906606412076961,
        0.0,
        0.405845151377397166906606412076961,
        0.741531185599394439863864773280788,
        0.949107912342758524526189684047851};
    static constexpr double w[7] = {
        0.129484966168869693270611432679082,
        0.279705391489276667901467771423780,
        0.381830050505118944950369775488975,
        0.417959183673469387755102040816327,
        0.381830050505118944950369775488975,
        0.279705391489276667901467771423780,
        0.129484966168869693270611432679082};
    const double c = 0.5 * (ta + tb), h = 0.5 * (tb - ta);
    double s = 0.0;
    for (int j = 0; j < 7; ++j) {
      const double tj = c + h * x[j];
      const double zj = hermite_z(seg, tj);
      const auto pv = profile_.value(zj);
      const double g = (E_ - pv.V) / particle_.m;
      const double v = velocity_from_energy(E_, pv.V, particle_.m);
      s += w[j] / (g * g * g * v * v);
    }
    return s * h;
  }

  PotentialProfile profile_;
  ParticleParams particle_;
  SimulationConfig sim_;

  double E_ = 0.0, zdot_out_ = 0.0, zdot_in_ = 0.0;
  double g_out_ = 0.0, g_in_ = 0.0;  // 1/(gamma^3 zdot^2) in the flats
  double z_lo_ = 0.0, z_hi_ = 0.0;
  double t_lo_ = 0.0, t_hi_ = 0.0, Q_lo_ = 0.0;
  double t_entry_ = 0.0, t_exit_ = 0.0;
  double support_t_lo_ = 0.0, support_t_hi_ = 0.0;
  double t_min_ = 0.0;

  std::vector<double> z_, t_, Q_, v_, a_, gq_;
};

}  // namespace radshift
