#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "radshift/errors.hpp"
#include "radshift/numerics/smoothstep.hpp"

namespace radshift {

// Units: c = 1, energies and masses in the same unit, lengths in its
// inverse. alpha_c is the coupling e^2/(4 pi).
struct ParticleParams {
  double m = 1.0;
  double alpha_c = 0.01;
  double p = 1.0;  // final z-momentum, particle moves toward +z

  double energy() const { return std::hypot(m, p); }
  double charge() const { return std::sqrt(4.0 * M_PI * alpha_c); }

  void validate() const {
    if (!(m > 0.0)) throw ValidationError("particle: m must be > 0");
    if (!(alpha_c >= 0.0))
      throw ValidationError("particle: alpha_c must be >= 0");
    if (!(p > 0.0)) throw ValidationError("particle: p must be > 0");
  }
};

enum class ProfileShape { quintic, tanh_step, tabulated };

inline std::string to_string(ProfileShape s) {
  switch (s) {
    case ProfileShape::quintic: return "quintic";
    case ProfileShape::tanh_step: return "tanh";
    case ProfileShape::tabulated: return "tabulated";
  }
  return "?";
}

struct PotentialValue {
  double V = 0.0;
  double Vp = 0.0;   // dV/dz
  double Vpp = 0.0;  // d2V/dz2
};

// Static step potential: V = V0 for z <= -Z1, V = 0 for z >= -Z2, C2
// monotone transition in between. The quintic shape has exactly compact
// derivative support; the tanh shape is truncated where the tails fall
// below 1e-15 of |V0|; tabulated shapes use a clamped cubic spline over
// the supplied knots and refuse to extrapolate.
class PotentialProfile {
 public:
  static PotentialProfile quintic(double V0, double Z1, double Z2,
                                  double eps_profile = 1e-9) {
    PotentialProfile p(ProfileShape::quintic, V0, Z1, Z2, eps_profile);
    p.support_lo_ = -Z1;
    p.support_hi_ = -Z2;
    return p;
  }

  static PotentialProfile tanh_step(double V0, double Z1, double Z2,
                                    double eps_profile = 1e-9) {
    PotentialProfile p(ProfileShape::tanh_step, V0, Z1, Z2, eps_profile);
    p.center_ = -0.5 * (Z1 + Z2);
    const double half = 0.5 * (Z1 - Z2);
    const double eps_rel =
        std::clamp(eps_profile / std::max(std::abs(V0), 1e-300), 1e-14, 1e-3);
    // (1 - tanh u)/2 = 1/(1 + e^{2u}); steepness chosen so the residual at
    // the nominal boundaries is eps_rel, tails cut at 1e-15 relative.
    const double u_boundary = 0.5 * std::log(1.0 / eps_rel - 1.0);
    p.steepness_ = u_boundary / half;
    const double u_cut = 0.5 * std::log(1e15 - 1.0);
    p.support_lo_ = p.center_ - u_cut / p.steepness_;
    p.support_hi_ = p.center_ + u_cut / p.steepness_;
    return p;
  }

  // Knots must be strictly increasing; the endpoint values have to match
  // the asymptotes (V0 on the left, 0 on the right) within eps_profile.
  static PotentialProfile tabulated(std::vector<double> z,
                                    std::vector<double> V, double V0,
                                    double Z1, double Z2,
                                    double eps_profile = 1e-9) {
    PotentialProfile p(ProfileShape::tabulated, V0, Z1, Z2, eps_profile);
    if (z.size() != V.size() || z.size() < 4)
      throw ValidationError("tabulated profile: need >= 4 matching knots");
    for (std::size_t i = 1; i < z.size(); ++i)
      if (!(z[i] > z[i - 1]))
        throw ValidationError(
            "tabulated profile: knots must be strictly increasing");
    if (std::abs(V.front() - V0) > eps_profile ||
        std::abs(V.back()) > eps_profile)
      throw ValidationError(
          "tabulated profile: endpoint values do not match the asymptotes");
    p.knots_ = std::move(z);
    p.values_ = std::move(V);
    p.build_spline();
    p.support_lo_ = -Z1;
    p.support_hi_ = -Z2;
    return p;
  }

  ProfileShape shape() const { return shape_; }
  double V0() const { return V0_; }
  double Z1() const { return Z1_; }
  double Z2() const { return Z2_; }
  double eps_profile() const { return eps_profile_; }

  // Interval outside which V', V'' are identically zero in this
  // implementation (equals [-Z1,-Z2] for the quintic shape, slightly wider
  // for the truncated tanh, the nominal interval for tables).
  double support_lo() const { return support_lo_; }
  double support_hi() const { return support_hi_; }

  PotentialValue value(double z) const {
    switch (shape_) {
      case ProfileShape::quintic: {
        if (z <= -Z1_) return {V0_, 0.0, 0.0};
        if (z >= -Z2_) return {0.0, 0.0, 0.0};
        const double L = Z1_ - Z2_;
        const double u = (-Z2_ - z) / L;
        return {V0_ * num::smoothstep5(u), -V0_ * num::smoothstep5_d1(u) / L,
                V0_ * num::smoothstep5_d2(u) / (L * L)};
      }
      case ProfileShape::tanh_step: {
        if (z <= support_lo_) return {V0_, 0.0, 0.0};
        if (z >= support_hi_) return {0.0, 0.0, 0.0};
        const double x = steepness_ * (z - center_);
        const double th = std::tanh(x);
        const double sech2 = 1.0 - th * th;
        return {0.5 * V0_ * (1.0 - th),
                -0.5 * V0_ * steepness_ * sech2,
                V0_ * steepness_ * steepness_ * sech2 * th};
      }
      case ProfileShape::tabulated:
        return spline_value(z);
    }
    throw Error("unreachable profile shape");
  }

 private:
  PotentialProfile(ProfileShape shape, double V0, double Z1, double Z2,
                   double eps_profile)
      : shape_(shape), V0_(V0), Z1_(Z1), Z2_(Z2), eps_profile_(eps_profile) {
    if (!(Z1 > Z2 && Z2 > 0.0))
      throw ValidationError("profile: need Z1 > Z2 > 0");
    if (!(eps_profile > 0.0))
      throw ValidationError("profile: eps_profile must be > 0");
  }

  // Clamped cubic spline (zero slope at both ends, matching the flat
  // asymptotes), Thomas solve for the moments.
  void build_spline() {
    const std::size_t n = knots_.size();
    Eigen::VectorXd a(n), b(n), c(n), d(n);
    for (std::size_t i = 0; i < n; ++i) a[i] = b[i] = c[i] = d[i] = 0.0;
    auto h = [&](std::size_t i) { return knots_[i + 1] - knots_[i]; };
    b[0] = 2.0 * h(0);
    c[0] = h(0);
    d[0] = 6.0 * ((values_[1] - values_[0]) / h(0) - 0.0);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      a[i] = h(i - 1);
      b[i] = 2.0 * (h(i - 1) + h(i));
      c[i] = h(i);
      d[i] = 6.0 * ((values_[i + 1] - values_[i]) / h(i) -
                    (values_[i] - values_[i - 1]) / h(i - 1));
    }
    a[n - 1] = h(n - 2);
    b[n - 1] = 2.0 * h(n - 2);
    d[n - 1] = 6.0 * (0.0 - (values_[n - 1] - values_[n - 2]) / h(n - 2));
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    moments_.resize(static_cast<long>(n));
    moments_[static_cast<long>(n) - 1] = d[n - 1] / b[n - 1];
    for (long i = static_cast<long>(n) - 2; i >= 0; --i)
      moments_[i] = (d[static_cast<std::size_t>(i)] -
                     c[static_cast<std::size_t>(i)] * moments_[i + 1]) /
                    b[static_cast<std::size_t>(i)];
  }

  PotentialValue spline_value(double z) const {
    if (z < knots_.front() || z > knots_.back())
      throw RangeError("tabulated profile: z outside table range");
    std::size_t i =
        static_cast<std::size_t>(std::upper_bound(knots_.begin(),
                                                  knots_.end(), z) -
                                 knots_.begin());
    i = std::clamp<std::size_t>(i, 1, knots_.size() - 1) - 1;
    const double h = knots_[i + 1] - knots_[i];
    const double A = (knots_[i + 1] - z) / h;
    const double B = (z - knots_[i]) / h;
    const double M0 = moments_[static_cast<long>(i)];
    const double M1 = moments_[static_cast<long>(i) + 1];
    PotentialValue out;
    out.V = A * values_[i] + B * values_[i + 1] +
            ((A * A * A - A) * M0 + (B * B * B - B) * M1) * h * h / 6.0;
    out.Vp = (values_[i + 1] - values_[i]) / h +
             h * (-(3 * A * A - 1) * M0 + (3 * B * B - 1) * M1) / 6.0;
    out.Vpp = A * M0 + B * M1;
    return out;
  }

  ProfileShape shape_;
  double V0_, Z1_, Z2_, eps_profile_;
  double support_lo_ = 0.0, support_hi_ = 0.0;
  double center_ = 0.0, steepness_ = 0.0;  // tanh shape
  std::vector<double> knots_, values_;     // tabulated shape
  Eigen::VectorXd moments_;
};

inline PotentialValue potential_eval(const PotentialProfile& profile,
                                     double z) {
  return profile.value(z);
}

// Everything that tunes the numerics, with defaults good for the
// verification tolerances used throughout.
struct SimulationConfig {
  double ode_rel_tol = 1e-12;
  double ode_abs_tol = 1e-14;
  double quad_rel_tol = 1e-9;
  int quad_order_angle = 64;
  double fd_step_rel = 1e-4;
  double t_margin = 1.0;
  double delta_min = 1e-6;       // no-turning-point margin, in units of m
  double window_pad = 0.5;       // plateau padding beyond the xi image
  double window_rolloff = 200.0; // chi roll-off width
  double spectrum_rel_tol = 1e-3;  // spectral energy tail / panel target
  double spectrum_k_max = 512.0;   // hard budget for the photon spectrum
  int max_quad_panels = 20000;
  int trajectory_csv_rows = 1000;

  void validate() const {
    auto pos = [](double v, const char* name) {
      if (!(v > 0.0))
        throw ValidationError(std::string("config: ") + name +
                              " must be > 0");
    };
    pos(ode_rel_tol, "ode_rel_tol");
    pos(ode_abs_tol, "ode_abs_tol");
    pos(quad_rel_tol, "quad_rel_tol");
    pos(fd_step_rel, "fd_step_rel");
    pos(t_margin, "t_margin");
    pos(delta_min, "delta_min");
    pos(window_rolloff, "window_rolloff");
    pos(spectrum_rel_tol, "spectrum_rel_tol");
    pos(spectrum_k_max, "spectrum_k_max");
    if (window_pad < 0.0)
      throw ValidationError("config: window_pad must be >= 0");
    if (quad_order_angle < 2)
      throw ValidationError("config: quad_order_angle must be >= 2");
    if (max_quad_panels < 16)
      throw ValidationError("config: max_quad_panels must be >= 16");
    if (trajectory_csv_rows < 2)
      throw ValidationError("config: trajectory_csv_rows must be >= 2");
  }
};

struct ScenarioValidation {
  double E = 0.0;           // total energy sqrt(p^2 + m^2)
  double min_margin = 0.0;  // min over scan of (E - V)/m - 1
  double z_min_margin = 0.0;
};

// The motion must stay strictly forward: E - V(z) >= m (1 + delta_min)
// everywhere, otherwise 1/zdot^2 factors blow up at a turning point.
inline ScenarioValidation validate_scenario(const PotentialProfile& profile,
                                            const ParticleParams& particle,
                                            double delta_min = 1e-6,
                                            int scan_points = 4001) {
  particle.validate();
  if (!(profile.support_hi() < 0.0))
    throw ValidationError(
        "profile: transition region must lie strictly left of z = 0");
  const double E = particle.energy();
  const double lo = profile.support_lo() - 0.5;
  const double hi = 0.0;
  ScenarioValidation out;
  out.E = E;
  out.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < scan_points; ++i) {
    const double z = lo + (hi - lo) * i / (scan_points - 1);
    const double margin = (E - profile.value(z).V) / particle.m - 1.0;
    if (margin < out.min_margin) {
      out.min_margin = margin;
      out.z_min_margin = z;
    }
  }
  if (!(out.min_margin >= delta_min))
    throw TurningPointError(
        out.z_min_margin,
        "turning point: E - V(z) <= m (1 + delta_min) at z = " +
            std::to_string(out.z_min_margin) +
            " (margin = " + std::to_string(out.min_margin) + ")");
  return out;
}

}  // namespace radshift
