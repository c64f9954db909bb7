#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "radshift/amplitude.hpp"
#include "radshift/jacobi.hpp"
#include "radshift/ldforce.hpp"
#include "radshift/numerics/finite_difference.hpp"
#include "radshift/numerics/legendre.hpp"
#include "radshift/numerics/ode.hpp"
#include "radshift/qshift.hpp"
#include "radshift/report.hpp"
#include "radshift/trajectory.hpp"

namespace radshift {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

// Independent worldline reference: time-steps dz/dt = zdot(z) with the
// adaptive Runge-Kutta integrator instead of building t(z) by quadrature.
inline num::OdeSolution<Eigen::Matrix<double, 1, 1>> rk_trajectory_oracle(
    const PotentialProfile& profile, const ParticleParams& particle,
    double t_end, double rel_tol = 1e-12) {
  using State = Eigen::Matrix<double, 1, 1>;
  auto rhs = [&](double, const State& y) -> State {
    State d;
    d[0] = velocity_from_energy(particle.energy(), profile.value(y[0]).V,
                                particle.m);
    return d;
  };
  num::OdeOptions opts;
  opts.rel_tol = rel_tol;
  opts.abs_tol = 1e-14;
  opts.h_max = std::abs(t_end) / 64.0;
  State y0;
  y0[0] = 0.0;
  return num::integrate_dopri5(rhs, 0.0, t_end, y0, opts);
}

namespace detail {

inline void add(std::vector<CheckResult>& out, const std::string& name,
                double measured, double tolerance) {
  out.push_back({name, measured, tolerance, measured <= tolerance});
}

}  // namespace detail

// Runs every module invariant against one scenario and reports the
// measured value next to its tolerance. Randomized probes draw from the
// given seed, so reports are reproducible.
inline std::vector<CheckResult> run_verification(
    const PotentialProfile& profile, const ParticleParams& particle,
    const SimulationConfig& sim, unsigned long long seed, int workers = 1) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(seed);
  const Trajectory traj = Trajectory::build(profile, particle, sim);
  const double alpha = particle.alpha_c;
  const bool analytic_shape = profile.shape() != ProfileShape::tabulated;

  // --- model ---
  {
    double dev = 0.0;
    if (analytic_shape) {
      for (int i = 0; i < 40; ++i) {
        const double zl =
            profile.support_lo() - 3.0 * (i + 1) / 40.0;
        const auto l = profile.value(zl);
        dev = std::max({dev, std::abs(l.V - profile.V0()), std::abs(l.Vp),
                        std::abs(l.Vpp)});
        const double zr = profile.support_hi() * (1.0 - (i + 1.0) / 40.0);
        const auto r = profile.value(zr);
        dev = std::max({dev, std::abs(r.V), std::abs(r.Vp),
                        std::abs(r.Vpp)});
      }
    }
    detail::add(out, "model.flat_region_exact", dev,
                analytic_shape ? 0.0 : 10.0 * profile.eps_profile());
  }
  {
    // C2 joins: one ulp inside the transition against the flat constants.
    double dev = 0.0;
    const double scale = std::max(std::abs(profile.V0()), 1.0);
    if (analytic_shape) {
      const double bl = profile.support_lo();
      const auto l =
          profile.value(std::nextafter(bl, profile.support_hi()));
      dev = std::max({dev, std::abs(l.V - profile.V0()) / scale,
                      std::abs(l.Vp) / scale, std::abs(l.Vpp) / scale});
      const double br = profile.support_hi();
      const auto r = profile.value(std::nextafter(br, bl));
      dev = std::max({dev, std::abs(r.V) / scale, std::abs(r.Vp) / scale,
                      std::abs(r.Vpp) / scale});
    }
    detail::add(out, "model.c2_continuity", dev, 1e-12);
  }
  {
    std::uniform_real_distribution<double> uz(profile.support_lo(),
                                              profile.support_hi());
    const double L = profile.support_hi() - profile.support_lo();
    const double h = 1e-3 * L;
    const double global = std::max(std::abs(profile.V0()) / L, 1e-300);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      double z = uz(rng);
      z = std::clamp(z, profile.support_lo() + 3 * h,
                     profile.support_hi() - 3 * h);
      auto V = [&](double x) { return profile.value(x).V; };
      const auto pv = profile.value(z);
      const double d1 = num::fd5_first(V, z, h);
      const double d2 = num::fd5_second(V, z, h);
      worst = std::max(
          worst, std::abs(d1 - pv.Vp) /
                     std::max(std::abs(pv.Vp), 1e-3 * global));
      worst = std::max(
          worst, std::abs(d2 - pv.Vpp) /
                     std::max(std::abs(pv.Vpp), 1e-3 * global / L));
    }
    detail::add(out, "model.derivative_consistency", worst, 1e-6);
  }

  // --- trajectory ---
  const double t_lo = traj.support_t_lo(), t_hi = traj.support_t_hi();
  {
    double worst = 0.0;
    for (int i = 0; i <= 500; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / 500.0;
      const double v = traj.interp_zdot(t);
      const double gamma_itp = 1.0 / std::sqrt((1.0 - v) * (1.0 + v));
      const double z = traj.z_of_t(t);
      worst = std::max(worst,
                       std::abs(particle.m * gamma_itp +
                                profile.value(z).V - traj.energy()) /
                           traj.energy());
    }
    detail::add(out, "trajectory.energy_conservation", worst, 1e-10);
  }
  {
    const auto [xc, wc] = num::gauss_legendre(sim.quad_order_angle);
    double min_margin = 1.0;
    for (int i = 0; i <= 200; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / 200.0;
      const double v = traj.point_at(t).zdot;
      for (int j = 0; j < xc.size(); ++j)
        min_margin = std::min(min_margin, 1.0 - v * xc[j]);
      min_margin = std::min({min_margin, 1.0 - v, 1.0 + v});
    }
    detail::add(out, "trajectory.monotone_xi", -min_margin, 0.0);
  }
  {
    std::uniform_real_distribution<double> uz(profile.support_lo(), 0.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double z = uz(rng);
      const TrajectoryPoint pt = kinematics_at(profile, particle, z);
      const double expect = particle.m * pt.gamma * pt.zdot;
      const double got = kappa(profile, particle.m, traj.energy(),
                               Eigen::Vector2d::Zero(), z);
      worst = std::max(worst, std::abs(got - expect) / expect);
    }
    detail::add(out, "trajectory.kappa_velocity_identity", worst, 1e-12);
  }
  {
    double worst = 0.0;
    for (double c : {-0.9, -0.3, 0.4, 0.8}) {
      const XiFrame frame(traj, c);
      for (int i = 0; i <= 50; ++i) {
        const double t = t_lo + (0.0 - t_lo) * i / 50.0;
        const double lhs = frame.dtdp_xi(t);
        const double rhs = c * frame.dzdp_xi(t);
        worst = std::max(worst, std::abs(lhs - rhs) /
                                    std::max(std::abs(rhs), 1e-300));
      }
    }
    detail::add(out, "trajectory.chain_rule_xi", worst, 1e-14);
  }
  {
    const auto rk = rk_trajectory_oracle(profile, particle,
                                         traj.t_min(), 1e-12);
    double worst = 0.0;
    const double z_scale = std::abs(traj.z_of_t(traj.t_min()));
    for (int i = 1; i <= 50; ++i) {
      const double t = traj.t_min() * i / 50.0;
      const double z_rk = rk.eval(t)[0];
      worst = std::max(worst, std::abs(traj.z_of_t(t) - z_rk) /
                                  std::max(std::abs(z_rk), 0.01 * z_scale));
    }
    detail::add(out, "trajectory.quadrature_vs_rk", worst, 1e-8);
  }

  // --- ldforce ---
  {
    double worst = 0.0;
    const double floor = std::max(alpha * particle.m, 1e-300);
    for (int i = 0; i <= 1000; ++i) {
      const double t = t_lo + (t_hi - t_lo) * i / 1000.0;
      const auto s = f_ld_at(traj.point_at(t), alpha);
      worst = std::max(worst, std::abs(s.form_a - s.form_b) /
                                  std::max(std::abs(s.form_b), floor));
    }
    detail::add(out, "ldforce.form_equivalence", worst, 1e-10);
  }
  {
    double dev = 0.0;
    if (analytic_shape) {
      for (int i = 1; i <= 20; ++i) {
        dev = std::max(dev, std::abs(f_ld_value(
                                traj, t_lo - sim.t_margin * i / 20.0)));
        dev = std::max(
            dev, std::abs(f_ld_value(traj, t_hi + (0.0 - t_hi) * i / 21.0)));
      }
    }
    detail::add(out, "ldforce.support_exact", dev,
                analytic_shape ? 0.0 : 1e-10 * alpha * particle.m);
  }
  {
    // Mirror scenario: same bump climbed the other way. The radiated work
    // integral must be invariant.
    double rel = 0.0;
    if (alpha > 0.0 && profile.V0() != 0.0) {
      const double E_B = traj.energy() - profile.V0();
      const double p_B = std::sqrt(E_B * E_B - particle.m * particle.m);
      ParticleParams partner = particle;
      partner.p = p_B;
      PotentialProfile mirrored =
          profile.shape() == ProfileShape::quintic
              ? PotentialProfile::quintic(-profile.V0(), profile.Z1(),
                                          profile.Z2(),
                                          profile.eps_profile())
              : PotentialProfile::tanh_step(-profile.V0(), profile.Z1(),
                                            profile.Z2(),
                                            profile.eps_profile());
      const Trajectory traj_B = Trajectory::build(mirrored, partner, sim);
      auto work = [&](const Trajectory& tr) {
        num::QuadOptions q;
        q.rel_tol = sim.quad_rel_tol;
        q.max_panels = sim.max_quad_panels;
        return num::integrate_adaptive(
                   [&](double t) {
                     const auto pt = tr.point_at(t);
                     return f_ld_at(pt, alpha).f_ld * pt.zdot;
                   },
                   tr.support_t_lo(), tr.support_t_hi(), q)
            .value;
      };
      const double wA = work(traj), wB = work(traj_B);
      rel = std::abs(wA - wB) / std::max({std::abs(wA), std::abs(wB),
                                          1e-300});
    }
    detail::add(out, "ldforce.work_reflection_invariance", rel, 1e-7);
  }

  // --- jacobi ---
  {
    const JacobiBasis basis(traj, sim);
    double drift = 0.0;
    const double s_ref = symplectic(basis.u(traj.support_t_hi()),
                                    basis.v(traj.support_t_hi()));
    for (int i = 0; i <= 400; ++i) {
      const double t = t_lo + (0.0 - t_lo) * i / 400.0;
      drift = std::max(drift, std::abs(symplectic(basis.u(t), basis.v(t)) -
                                       s_ref) /
                                  std::abs(s_ref));
    }
    detail::add(out, "jacobi.symplectic_drift", drift, 1e-10);
  }
  {
    std::uniform_real_distribution<double> ut(t_lo, 0.0);
    const double A_max = 1.0 / particle.m;  // A = 1/(m gamma^3) <= 1/m
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const double s = ut(rng), t = ut(rng);
      const double a = propagate(traj, s, t, sim)[0];
      const double b = propagate(traj, t, s, sim)[0];
      worst = std::max(worst,
                       std::abs(a + b) /
                           std::max(std::abs(a),
                                    A_max * std::max(std::abs(t - s),
                                                     1e-6)));
    }
    detail::add(out, "jacobi.antisymmetry", worst, 1e-8);
  }
  const ValueWithError dz_closed = classical_shift_closed(traj, sim);
  const ValueWithError dz_green = classical_shift_green(traj, sim);
  const LinearResponse oracle = oracle_linear_response(traj, sim);
  {
    const double worst =
        std::max({rel_diff(dz_closed.value, dz_green.value),
                  rel_diff(dz_closed.value, oracle.dz0.value),
                  rel_diff(dz_green.value, oracle.dz0.value)});
    detail::add(out, "jacobi.route_equivalence", worst, 1e-5);
  }
  {
    double rel = 0.0;
    if (alpha > 0.0) {
      ParticleParams doubled = particle;
      doubled.alpha_c = 2.0 * alpha;
      const Trajectory traj2 = Trajectory::build(profile, doubled, sim);
      rel = std::max(
          rel_diff(classical_shift_closed(traj2, sim).value,
                   2.0 * dz_closed.value),
          rel_diff(classical_shift_green(traj2, sim).value,
                   2.0 * dz_green.value));
    }
    detail::add(out, "jacobi.alpha_linearity", rel, 1e-12);
  }

  // --- qshift ---
  const ValueWithError dzq_red = quantum_shift_reduced(traj, sim);
  const ValueWithError dzq_ang =
      quantum_shift_angular(traj, sim, DpMode::analytic, workers);
  {
    const double worst =
        std::max({rel_diff(dzq_red.value, dz_closed.value),
                  rel_diff(dzq_ang.value, dz_closed.value),
                  rel_diff(dzq_ang.value, dzq_red.value)});
    detail::add(out, "qshift.route_equality", worst, 1e-5);
  }
  detail::add(out, "qshift.window_independence_structural", 0.0, 0.0);
  {
    double rel = 0.0;
    if (alpha > 0.0) {
      ParticleParams doubled = particle;
      doubled.alpha_c = 2.0 * alpha;
      const Trajectory traj2 = Trajectory::build(profile, doubled, sim);
      rel = std::max(
          rel_diff(quantum_shift_reduced(traj2, sim).value,
                   2.0 * dzq_red.value),
          rel_diff(
              quantum_shift_angular(traj2, sim, DpMode::analytic, workers)
                  .value,
              2.0 * dzq_ang.value));
    }
    detail::add(out, "qshift.alpha_linearity", rel, 1e-12);
  }
  {
    double mismatch = 0.0;
    const double vals[] = {dz_closed.value, dz_green.value,
                           oracle.dz0.value, dzq_red.value, dzq_ang.value};
    for (double a : vals)
      for (double b : vals)
        if (a * b < 0.0) mismatch = 1.0;
    detail::add(out, "qshift.sign_consistency", mismatch, 0.0);
  }
  {
    double worst = 0.0;
    if (alpha > 0.0) {
      std::uniform_real_distribution<double> uk(std::log(0.3), std::log(8.0));
      std::uniform_real_distribution<double> uc(-0.95, 0.95);
      for (int i = 0; i < 20; ++i) {
        const double k = std::exp(uk(rng));
        const double c = uc(rng);
        const XiFrame frame(traj, c);
        const auto window = WindowFunction::around(frame, sim.window_pad,
                                                   sim.window_rolloff);
        const auto ad = amplitude_direct(traj, k, c, window, sim);
        const auto ai = amplitude_ibp(traj, k, c, window, sim);
        const double scale =
            std::max({std::abs(ad.A_t), std::abs(ad.A_z), 1e-300});
        worst = std::max(worst, std::abs(ad.A_t - ai.A_t) / scale);
        worst = std::max(worst, std::abs(ad.A_z - ai.A_z) / scale);
      }
    }
    detail::add(out, "qshift.ibp_identity", worst, 1e-6);
  }

  return out;
}

}  // namespace radshift
