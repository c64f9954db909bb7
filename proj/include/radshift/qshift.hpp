#pragma once

#include <cmath>
#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "radshift/amplitude.hpp"
#include "radshift/jacobi.hpp"
#include "radshift/ldforce.hpp"
#include "radshift/numerics/legendre.hpp"
#include "radshift/numerics/parallel.hpp"
#include "radshift/numerics/summation.hpp"
#include "radshift/trajectory.hpp"
#include "radshift/xi_frame.hpp"

namespace radshift {

// Reduced one-dimensional form: dz_Q = -Int dt F_LD (dz/dp)_t over the
// force support.
inline ValueWithError quantum_shift_reduced(const Trajectory& traj,
                                            const SimulationConfig& sim) {
  const double alpha = traj.particle().alpha_c;
  auto integrand = [&](double t) {
    return f_ld_at(traj.point_at(t), alpha).f_ld * traj.dzdp_fixed_t(t);
  };
  num::QuadOptions q;
  q.rel_tol = sim.quad_rel_tol;
  q.max_panels = sim.max_quad_panels;
  auto r = num::integrate_adaptive(integrand, traj.support_t_lo(),
                                   traj.support_t_hi(), q);
  return {-r.value, r.error, r.evaluations};
}

enum class DpMode { analytic, finite_difference };

// Solid-angle double integral
//   dz_Q = -(alpha_c/4pi) Int dOmega Int dxi (d2X^mu/dxi2) d/dp (dX_mu/dxi),
// azimuthal integral done analytically, cos(theta) by Gauss-Legendre with
// an order-doubling error check, xi adaptively over the image of the force
// support. Contraction uses the (+,-,-,-) signature: time product minus z
// product. No window enters anywhere. The p-derivative at fixed xi comes
// either from the chain-rule closed forms on the single trajectory or from
// re-built trajectories at p +/- h resampled at common xi.
inline ValueWithError quantum_shift_angular(const Trajectory& traj,
                                            const SimulationConfig& sim,
                                            DpMode mode, int workers = 1) {
  std::unique_ptr<Trajectory> up, dn;
  double step = 0.0;
  if (mode == DpMode::finite_difference) {
    step = sim.fd_step_rel * traj.particle().p;
    ParticleParams pp = traj.particle();
    pp.p += step;
    ParticleParams pm = traj.particle();
    pm.p -= step;
    up = std::make_unique<Trajectory>(
        Trajectory::build(traj.profile(), pp, sim));
    dn = std::make_unique<Trajectory>(
        Trajectory::build(traj.profile(), pm, sim));
  }

  auto inner = [&](double c) -> ValueWithError {
    const XiFrame frame(traj, c);
    std::unique_ptr<XiFrame> frame_up, frame_dn;
    if (mode == DpMode::finite_difference) {
      frame_up = std::make_unique<XiFrame>(*up, c);
      frame_dn = std::make_unique<XiFrame>(*dn, c);
    }
    auto integrand = [&](double xi) {
      const double t = frame.t_of_xi(xi);
      const Eigen::Vector2d d2 = frame.d2X_dxi2(t);
      Eigen::Vector2d dp;
      if (mode == DpMode::analytic) {
        dp = frame.dp_dX_dxi(t);
      } else {
        const double tu = frame_up->t_of_xi(xi);
        const double td = frame_dn->t_of_xi(xi);
        if (!std::isfinite(tu) || !std::isfinite(td) ||
            tu < up->t_min() - sim.t_margin ||
            td < dn->t_min() - sim.t_margin)
          throw SpanError(
              "fd-dp resampling outside the common stencil span");
        dp = (frame_up->dX_dxi(tu) - frame_dn->dX_dxi(td)) / (2.0 * step);
      }
      return d2[0] * dp[0] - d2[1] * dp[1];
    };
    num::QuadOptions q;
    q.rel_tol = sim.quad_rel_tol;
    q.max_panels = sim.max_quad_panels;
    return num::integrate_adaptive(integrand, frame.xi_support_lo(),
                                   frame.xi_support_hi(), q);
  };

  const int n = sim.quad_order_angle;
  const auto [x1, w1] = num::gauss_legendre(n);
  const auto [x2, w2] = num::gauss_legendre(2 * n);
  std::vector<ValueWithError> vals(static_cast<std::size_t>(3 * n));
  num::parallel_for(
      vals.size(), workers, [&](std::size_t i) {
        const double c = i < static_cast<std::size_t>(n)
                             ? x1[static_cast<long>(i)]
                             : x2[static_cast<long>(i) - n];
        vals[i] = inner(c);
      });

  std::vector<double> fine(static_cast<std::size_t>(2 * n));
  std::vector<double> coarse(static_cast<std::size_t>(n));
  double node_err = 0.0;
  for (int i = 0; i < n; ++i) {
    coarse[static_cast<std::size_t>(i)] =
        w1[i] * vals[static_cast<std::size_t>(i)].value;
  }
  for (int i = 0; i < 2 * n; ++i) {
    const auto& v = vals[static_cast<std::size_t>(n + i)];
    fine[static_cast<std::size_t>(i)] = w2[i] * v.value;
    node_err += w2[i] * v.error;
  }
  const double I_coarse = num::pairwise_sum(coarse);
  const double I_fine = num::pairwise_sum(fine);
  const double alpha = traj.particle().alpha_c;
  ValueWithError out;
  out.value = -0.5 * alpha * I_fine;
  out.error = 0.5 * alpha * (std::abs(I_fine - I_coarse) + node_err);
  return out;
}

struct RadiatedEnergy {
  ValueWithError time_domain;  // Int (2 alpha_c/3) gamma^6 zddot^2 dt
  ValueWithError spectral;     // Int dk dcos spectral density
  double k_max = 0.0;          // where the spectral integral was cut
  double tail_fraction = 0.0;  // estimated relative remainder beyond k_max
};

// Radiated energy by two routes: the time-domain power integral, and the
// windowed amplitude-squared spectrum integrated over k and angle. The
// k-integral marches over geometric blocks until the estimated tail drops
// below spectrum_rel_tol of the running total.
inline RadiatedEnergy radiated_energy(const Trajectory& traj,
                                      const SimulationConfig& sim,
                                      int workers = 1) {
  RadiatedEnergy out;
  const double alpha = traj.particle().alpha_c;
  {
    num::QuadOptions q;
    q.rel_tol = std::min(sim.quad_rel_tol, 1e-10);
    q.max_panels = sim.max_quad_panels;
    out.time_domain = num::integrate_adaptive(
        [&](double t) { return larmor_power(traj.point_at(t), alpha); },
        traj.support_t_lo(), traj.support_t_hi(), q);
  }
  if (alpha == 0.0) {
    out.k_max = 0.0;
    return out;
  }

  const int n = sim.quad_order_angle;
  const auto [xc, wc] = num::gauss_legendre(n);
  std::vector<std::unique_ptr<XiFrame>> frames;
  std::vector<WindowFunction> windows;
  frames.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    frames.push_back(std::make_unique<XiFrame>(traj, xc[i]));
    windows.push_back(WindowFunction::around(*frames.back(), sim.window_pad,
                                             sim.window_rolloff));
  }

  auto density = [&](double k) -> double {
    if (k <= 0.0) return 0.0;
    std::vector<double> node(static_cast<std::size_t>(n));
    num::parallel_for(node.size(), workers, [&](std::size_t i) {
      const auto amp = amplitude_direct(traj, k, xc[static_cast<long>(i)],
                                        windows[i], sim);
      node[i] = wc[static_cast<long>(i)] * spectral_density(amp);
    });
    return num::pairwise_sum(node);
  };

  double total = 0.0, err = 0.0;
  double edge = 0.0, width = 2.0;
  double prev_block = -1.0;
  bool converged = false;
  while (edge < sim.spectrum_k_max) {
    const double next = std::min(edge + width, sim.spectrum_k_max);
    num::QuadOptions q;
    q.rel_tol = sim.spectrum_rel_tol;
    q.abs_tol = 0.25 * sim.spectrum_rel_tol * total;
    q.max_panels = sim.max_quad_panels;
    auto block = num::integrate_adaptive(density, edge, next, q);
    total += block.value;
    err += block.error;
    edge = next;
    width *= 2.0;
    if (prev_block > 0.0 && block.value < prev_block) {
      const double r = block.value / prev_block;
      const double tail = block.value * r / (1.0 - r);
      if (block.value + tail <= sim.spectrum_rel_tol * total) {
        out.tail_fraction = tail / std::max(total, 1e-300);
        err += tail;
        converged = true;
        break;
      }
    }
    prev_block = block.value;
  }
  if (!converged)
    throw ConvergenceError(
        "radiated_energy: spectral tail not converged at k_max = " +
        std::to_string(edge) + "; remaining block fraction " +
        std::to_string(prev_block / std::max(total, 1e-300)));
  out.spectral = {total, err, 0};
  out.k_max = edge;
  return out;
}

}  // namespace radshift
