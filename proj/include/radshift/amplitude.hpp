#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "radshift/numerics/quadrature.hpp"
#include "radshift/window.hpp"
#include "radshift/xi_frame.hpp"

namespace radshift {

// Photon-emission amplitude components A^t, A^z at wave number k and
// direction cosine cos_theta, with the regulating window chi that was used.
// Transverse components vanish identically for linear motion.
struct EmissionAmplitude {
  double k = 0.0;
  double cos_theta = 0.0;
  std::complex<double> A_t{0.0, 0.0};
  std::complex<double> A_z{0.0, 0.0};
  WindowFunction window;
};

struct AmplitudeOptions {
  // The window roll-offs and the flat stretches of the worldline have
  // polynomial-times-phase integrands with machine-accurate closed forms;
  // set to false to force plain oscillatory quadrature everywhere
  // (testing hook).
  bool closed_form_flat = true;
};

namespace detail {

struct AmpContext {
  const XiFrame& frame;
  const WindowFunction& window;
  double k;
  Eigen::Vector2d v_in_xi, v_out_xi;  // constant dX/dxi in the flats
  double xi_en, xi_ex;                // image of the force support
};

inline AmpContext make_context(const XiFrame& frame,
                               const WindowFunction& window, double k) {
  const Trajectory& traj = frame.trajectory();
  AmpContext ctx{frame, window, k, {}, {}, frame.xi_support_lo(),
                 frame.xi_support_hi()};
  if (!(k > 0.0))
    throw ValidationError("amplitude: k must be > 0");
  if (!window.covers(ctx.xi_en, ctx.xi_ex))
    throw ValidationError(
        "amplitude: window plateau must cover the xi image of the force "
        "support");
  const double c = frame.cos_theta();
  const double vin = traj.zdot_in(), vout = traj.zdot_out();
  ctx.v_in_xi = {1.0 / (1.0 - c * vin), vin / (1.0 - c * vin)};
  ctx.v_out_xi = {1.0 / (1.0 - c * vout), vout / (1.0 - c * vout)};
  return ctx;
}

// Sum closed-form flat pieces (constant velocity times a polynomial chi
// factor) into acc.
inline void add_flat_closed(Eigen::Vector2cd& acc, const Eigen::Vector2d& v,
                            const std::vector<double>& poly, double a,
                            double b, double k) {
  if (!(b > a)) return;
  const std::complex<double> seg = num::fourier_poly_segment(poly, a, b, k);
  acc[0] += v[0] * seg;
  acc[1] += v[1] * seg;
}

inline std::vector<double> coeffs_one() { return {1.0}; }
inline std::vector<double> coeffs_rise() {
  return {0, 0, 0, 10, -15, 6};
}
inline std::vector<double> coeffs_fall() {
  return {1, 0, 0, -10, 15, -6};
}
inline std::vector<double> coeffs_rise_d(double w) {
  return {0, 0, 30 / w, -60 / w, 30 / w};
}
inline std::vector<double> coeffs_fall_d(double w) {
  return {0, 0, -30 / w, 60 / w, -30 / w};
}

template <class F>
Eigen::Vector2cd oscillatory_vec2(F&& f, double a, double b, double k,
                                  const SimulationConfig& sim,
                                  std::vector<double> extra_breaks = {}) {
  if (!(b > a)) return Eigen::Vector2cd::Zero();
  num::QuadOptions q;
  q.rel_tol = sim.quad_rel_tol;
  q.max_panels = sim.max_quad_panels;
  q.breakpoints = num::oscillatory_breakpoints(a, b, k, sim.max_quad_panels);
  q.breakpoints.insert(q.breakpoints.end(), extra_breaks.begin(),
                       extra_breaks.end());
  auto g = [&](double xi) -> Eigen::Vector2cd {
    return f(xi) * std::polar(1.0, k * xi);
  };
  return num::integrate_adaptive(g, a, b, q).value;
}

}  // namespace detail

// Direct form: A^mu = -e Int dxi (dX^mu/dxi) e^{i k xi} chi(xi).
inline EmissionAmplitude amplitude_direct(const Trajectory& traj, double k,
                                          double cos_theta,
                                          const WindowFunction& window,
                                          const SimulationConfig& sim,
                                          const AmplitudeOptions& opts = {}) {
  const XiFrame frame(traj, cos_theta);
  const auto ctx = detail::make_context(frame, window, k);
  const double e = traj.particle().charge();
  EmissionAmplitude out;
  out.k = k;
  out.cos_theta = cos_theta;
  out.window = window;
  if (e == 0.0) return out;

  Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
  if (opts.closed_form_flat) {
    using namespace detail;
    add_flat_closed(acc, ctx.v_in_xi, coeffs_rise(), window.support_lo(),
                    window.plateau_lo, k);
    add_flat_closed(acc, ctx.v_in_xi, coeffs_one(), window.plateau_lo,
                    ctx.xi_en, k);
    acc += detail::oscillatory_vec2(
        [&](double xi) -> Eigen::Vector2cd {
          return frame.dX_dxi(frame.t_of_xi(xi)).cast<std::complex<double>>();
        },
        ctx.xi_en, ctx.xi_ex, k, sim);
    add_flat_closed(acc, ctx.v_out_xi, coeffs_one(), ctx.xi_ex,
                    window.plateau_hi, k);
    add_flat_closed(acc, ctx.v_out_xi, coeffs_fall(), window.plateau_hi,
                    window.support_hi(), k);
  } else {
    acc = detail::oscillatory_vec2(
        [&](double xi) -> Eigen::Vector2cd {
          return (frame.dX_dxi(frame.t_of_xi(xi)) * window.chi(xi))
              .cast<std::complex<double>>();
        },
        window.support_lo(), window.support_hi(), k, sim,
        {window.plateau_lo, ctx.xi_en, ctx.xi_ex, window.plateau_hi});
  }
  out.A_t = -e * acc[0];
  out.A_z = -e * acc[1];
  return out;
}

// Integrated-by-parts form:
//   A^mu = (e/ik) Int dxi d/dxi[(dX^mu/dxi) chi] e^{i k xi},
// equal to the direct form because chi has compact support.
inline EmissionAmplitude amplitude_ibp(const Trajectory& traj, double k,
                                       double cos_theta,
                                       const WindowFunction& window,
                                       const SimulationConfig& sim,
                                       const AmplitudeOptions& opts = {}) {
  const XiFrame frame(traj, cos_theta);
  const auto ctx = detail::make_context(frame, window, k);
  const double e = traj.particle().charge();
  EmissionAmplitude out;
  out.k = k;
  out.cos_theta = cos_theta;
  out.window = window;
  if (e == 0.0) return out;

  Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
  if (opts.closed_form_flat) {
    using namespace detail;
    add_flat_closed(acc, ctx.v_in_xi, coeffs_rise_d(window.rolloff),
                    window.support_lo(), window.plateau_lo, k);
    acc += detail::oscillatory_vec2(
        [&](double xi) -> Eigen::Vector2cd {
          return frame.d2X_dxi2(frame.t_of_xi(xi))
              .cast<std::complex<double>>();
        },
        ctx.xi_en, ctx.xi_ex, k, sim);
    add_flat_closed(acc, ctx.v_out_xi, coeffs_fall_d(window.rolloff),
                    window.plateau_hi, window.support_hi(), k);
  } else {
    acc = detail::oscillatory_vec2(
        [&](double xi) -> Eigen::Vector2cd {
          const double t = frame.t_of_xi(xi);
          return (frame.d2X_dxi2(t) * window.chi(xi) +
                  frame.dX_dxi(t) * window.chi_prime(xi))
              .cast<std::complex<double>>();
        },
        window.support_lo(), window.support_hi(), k, sim,
        {window.plateau_lo, ctx.xi_en, ctx.xi_ex, window.plateau_hi});
  }
  const std::complex<double> pref = e / std::complex<double>(0.0, k);
  out.A_t = pref * acc[0];
  out.A_z = pref * acc[1];
  return out;
}

// Soft factor e [ (dX/dxi)|out - (dX/dxi)|in ] from the asymptotic
// velocities; k A^mu(k) -> -i (this) for k far below the inverse image
// width but above the inverse roll-off width.
inline Eigen::Vector2cd soft_limit(const Trajectory& traj, double cos_theta) {
  const double e = traj.particle().charge();
  const double c = cos_theta;
  const double vin = traj.zdot_in(), vout = traj.zdot_out();
  const Eigen::Vector2d diff(
      1.0 / (1.0 - c * vout) - 1.0 / (1.0 - c * vin),
      vout / (1.0 - c * vout) - vin / (1.0 - c * vin));
  return (e * diff).cast<std::complex<double>>();
}

// Richardson extrapolation of k A^mu(k) toward k -> 0 using k and 2k,
// which removes the overall O(k) phase drift of the finite-k evaluation.
inline Eigen::Vector2cd k_amplitude_extrapolated(const Trajectory& traj,
                                                 double k, double cos_theta,
                                                 const WindowFunction& window,
                                                 const SimulationConfig& sim) {
  const EmissionAmplitude a1 = amplitude_ibp(traj, k, cos_theta, window, sim);
  const EmissionAmplitude a2 =
      amplitude_ibp(traj, 2.0 * k, cos_theta, window, sim);
  Eigen::Vector2cd f1, f2;
  f1 << k * a1.A_t, k * a1.A_z;
  f2 << 2.0 * k * a2.A_t, 2.0 * k * a2.A_z;
  return 2.0 * f1 - f2;
}

// d^2 E / (dk dcos_theta) = k^2 sin^2(theta) |A^z|^2 / (8 pi^2), the
// physical (polarization-summed) spectral density.
inline double spectral_density(const EmissionAmplitude& amp) {
  const double s2 = (1.0 - amp.cos_theta) * (1.0 + amp.cos_theta);
  return amp.k * amp.k * s2 * std::norm(amp.A_z) / (8.0 * M_PI * M_PI);
}

}  // namespace radshift
