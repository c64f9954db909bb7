#pragma once

#include <cmath>
#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "radshift/ldforce.hpp"
#include "radshift/numerics/ode.hpp"
#include "radshift/numerics/quadrature.hpp"
#include "radshift/trajectory.hpp"

namespace radshift {

using num::ValueWithError;

// Coefficients of the flow linearized about the unperturbed trajectory:
//   d(dz)/dt = A(t) dP,  d(dP)/dt = B(t) dz,
// with A = (1 - zdot^2)^{3/2}/m and B = dF_ext/dz = -V''(z(t)).
struct LinearizedCoeffs {
  double A = 0.0;
  double B = 0.0;
};

inline LinearizedCoeffs coeffs(const Trajectory& traj, double t) {
  const TrajectoryPoint pt = traj.point_at(t);
  const double one_minus_v2 = (1.0 - pt.zdot) * (1.0 + pt.zdot);
  LinearizedCoeffs c;
  c.A = one_minus_v2 * std::sqrt(one_minus_v2) / traj.particle().m;
  c.B = -traj.profile().value(pt.z).Vpp;
  return c;
}

// Antisymmetric bilinear form dz1 dP2 - dP1 dz2, conserved along the flow.
inline double symplectic(const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
  return a[0] * b[1] - a[1] * b[0];
}

namespace detail {

inline auto homogeneous_rhs(const Trajectory& traj) {
  return [&traj](double t, const Eigen::Vector2d& y) -> Eigen::Vector2d {
    const LinearizedCoeffs c = coeffs(traj, t);
    return {c.A * y[1], c.B * y[0]};
  };
}

}  // namespace detail

// A dense solution of the homogeneous linearized flow covering
// [t_lo, t_hi], seeded with an arbitrary state at seed_time.
class LinearFlowSolution {
 public:
  LinearFlowSolution(const Trajectory& traj, double seed_time,
                     const Eigen::Vector2d& seed, double t_lo, double t_hi,
                     const SimulationConfig& sim)
      : seed_time_(seed_time), seed_(seed) {
    num::OdeOptions opts;
    opts.rel_tol = sim.ode_rel_tol;
    opts.abs_tol = sim.ode_abs_tol;
    // Dense output is cubic Hermite between accepted steps; a step cap
    // keeps its interpolation error below the solver tolerance.
    opts.h_max = std::max((t_hi - t_lo) / 1024.0, 1e-12);
    auto rhs = detail::homogeneous_rhs(traj);
    if (seed_time > t_lo)
      down_ = num::integrate_dopri5(rhs, seed_time, t_lo, seed, opts);
    if (seed_time < t_hi)
      up_ = num::integrate_dopri5(rhs, seed_time, t_hi, seed, opts);
  }

  double seed_time() const { return seed_time_; }

  Eigen::Vector2d at(double t) const {
    if (t == seed_time_) return seed_;
    if (t < seed_time_) {
      if (!down_ || t < down_->t_back() - 1e-12)
        throw RangeError("linear flow: t below covered span");
      return down_->eval(std::max(t, down_->t_back()));
    }
    if (!up_ || t > up_->t_back() + 1e-12)
      throw RangeError("linear flow: t above covered span");
    return up_->eval(std::min(t, up_->t_back()));
  }

 private:
  double seed_time_;
  Eigen::Vector2d seed_;
  std::optional<num::OdeSolution<Eigen::Vector2d>> down_, up_;
};

// The spec'd Jacobi pair: (dz_s, dP_s) with (dz_s(s), dP_s(s)) = (0, 1).
class JacobiPair {
 public:
  JacobiPair(const Trajectory& traj, double s, double t_lo, double t_hi,
             const SimulationConfig& sim)
      : flow_(traj, s, Eigen::Vector2d(0.0, 1.0), std::min(t_lo, s),
              std::max(t_hi, s), sim) {}

  double seed_time() const { return flow_.seed_time(); }
  Eigen::Vector2d at(double t) const { return flow_.at(t); }
  double dz(double t) const { return at(t)[0]; }
  double dP(double t) const { return at(t)[1]; }

 private:
  LinearFlowSolution flow_;
};

// Single-shot propagation of the (0,1)-seeded pair from s to t, in either
// time direction.
inline Eigen::Vector2d propagate(const Trajectory& traj, double s, double t,
                                 const SimulationConfig& sim) {
  if (s == t) return {0.0, 1.0};
  num::OdeOptions opts;
  opts.rel_tol = sim.ode_rel_tol;
  opts.abs_tol = sim.ode_abs_tol;
  auto sol = num::integrate_dopri5(detail::homogeneous_rhs(traj), s, t,
                                   Eigen::Vector2d(0.0, 1.0), opts);
  return sol.eval(t);
}

// Two fundamental solutions seeded at the end of the force support. Any
// (0,1)-seeded pair follows from them through the constancy of the
// symplectic product, so the Green's-function shift needs O(1) ODE solves
// instead of one per quadrature node.
class JacobiBasis {
 public:
  JacobiBasis(const Trajectory& traj, const SimulationConfig& sim)
      : u_(traj, traj.support_t_hi(), Eigen::Vector2d(1.0, 0.0),
           traj.support_t_lo(), 0.0, sim),
        v_(traj, traj.support_t_hi(), Eigen::Vector2d(0.0, 1.0),
           traj.support_t_lo(), 0.0, sim) {}

  Eigen::Vector2d u(double t) const { return u_.at(t); }
  Eigen::Vector2d v(double t) const { return v_.at(t); }

  // (dz_s(t), dP_s(t)) assembled from the basis.
  Eigen::Vector2d pair_from_basis(double s, double t) const {
    const Eigen::Vector2d us = u_.at(s), vs = v_.at(s);
    const Eigen::Vector2d ut = u_.at(t), vt = v_.at(t);
    return us[0] * vt - vs[0] * ut;
  }

  double dz_to(double s, double t) const { return pair_from_basis(s, t)[0]; }

 private:
  LinearFlowSolution u_, v_;
};

// Green's-function route: dz = Int dt F_LD(t) dz_t(0) over the force
// support.
inline ValueWithError classical_shift_green(const Trajectory& traj,
                                            const SimulationConfig& sim) {
  const JacobiBasis basis(traj, sim);
  const double alpha = traj.particle().alpha_c;
  const Eigen::Vector2d u0 = basis.u(0.0), v0 = basis.v(0.0);
  auto integrand = [&](double t) {
    const Eigen::Vector2d ut = basis.u(t), vt = basis.v(t);
    const double dz_t0 = ut[0] * v0[0] - vt[0] * u0[0];
    return f_ld_at(traj.point_at(t), alpha).f_ld * dz_t0;
  };
  num::QuadOptions q;
  q.rel_tol = sim.quad_rel_tol;
  q.max_panels = sim.max_quad_panels;
  return num::integrate_adaptive(integrand, traj.support_t_lo(),
                                 traj.support_t_hi(), q);
}

// dP(t) = Int_{-inf}^t ds F_LD(s) dP_s(t).
inline ValueWithError momentum_shift(const Trajectory& traj, double t,
                                     const SimulationConfig& sim) {
  const double lo = traj.support_t_lo();
  if (t <= lo) return {};
  if (t > 0.0)
    throw RangeError("momentum_shift: t must lie in [support, 0]");
  const JacobiBasis basis(traj, sim);
  const double alpha = traj.particle().alpha_c;
  const Eigen::Vector2d ut = basis.u(t), vt = basis.v(t);
  const double hi = std::min(t, traj.support_t_hi());
  auto integrand = [&](double s) {
    const Eigen::Vector2d us = basis.u(s), vs = basis.v(s);
    const double dP_st = us[0] * vt[1] - vs[0] * ut[1];
    return f_ld_at(traj.point_at(s), alpha).f_ld * dP_st;
  };
  num::QuadOptions q;
  q.rel_tol = sim.quad_rel_tol;
  q.max_panels = sim.max_quad_panels;
  return num::integrate_adaptive(integrand, lo, hi, q);
}

struct LinearResponse {
  ValueWithError dz0;
  ValueWithError dP0;
};

// Direct integration of the driven linearized system
//   d(dz)/dt = A dP, d(dP)/dt = B dz + F(t),
// from rest at the start of the force support to t = 0. This is the
// module's brute-force reference, independent of the Green's-function
// machinery.
inline LinearResponse forced_linear_response(
    const Trajectory& traj, const std::function<double(double)>& forcing,
    const SimulationConfig& sim) {
  const double lo = traj.support_t_lo();
  const double span = 0.0 - lo;
  // Deterministic forcing scale for the absolute-error floor.
  double f_scale = 0.0;
  for (int i = 0; i <= 200; ++i)
    f_scale = std::max(f_scale,
                       std::abs(forcing(lo + span * i / 200.0)));
  auto rhs = [&](double t, const Eigen::Vector2d& y) -> Eigen::Vector2d {
    const LinearizedCoeffs c = coeffs(traj, t);
    return {c.A * y[1], c.B * y[0] + forcing(t)};
  };
  auto solve = [&](double rel) {
    num::OdeOptions opts;
    opts.rel_tol = rel;
    opts.abs_tol = sim.ode_abs_tol * std::max(f_scale * span, 1e-300);
    opts.h_max = span / 64.0;
    auto sol = num::integrate_dopri5(rhs, lo, 0.0,
                                     Eigen::Vector2d(0.0, 0.0), opts);
    return sol.eval(0.0);
  };
  const Eigen::Vector2d tight = solve(sim.ode_rel_tol);
  const Eigen::Vector2d loose = solve(sim.ode_rel_tol * 10.0);
  LinearResponse r;
  r.dz0 = {tight[0], std::abs(tight[0] - loose[0]), 0};
  r.dP0 = {tight[1], std::abs(tight[1] - loose[1]), 0};
  return r;
}

inline LinearResponse oracle_linear_response(const Trajectory& traj,
                                             const SimulationConfig& sim) {
  const double alpha = traj.particle().alpha_c;
  return forced_linear_response(
      traj,
      [&traj, alpha](double t) {
        return f_ld_at(traj.point_at(t), alpha).f_ld;
      },
      sim);
}

// Closed double-integral route:
//   dz = -(zdot|_0 / m) Int dt (Int_0^t dt'/(gamma^3 zdot^2)) F_LD zdot,
// with the inner integral taken from the precomputed cumulative grid.
inline ValueWithError classical_shift_closed(const Trajectory& traj,
                                             const SimulationConfig& sim) {
  const double alpha = traj.particle().alpha_c;
  const double pref = -traj.zdot_out() / traj.particle().m;
  auto integrand = [&](double t) {
    const TrajectoryPoint pt = traj.point_at(t);
    return traj.time_integral_grid(t) * f_ld_at(pt, alpha).f_ld * pt.zdot;
  };
  num::QuadOptions q;
  q.rel_tol = sim.quad_rel_tol;
  q.max_panels = sim.max_quad_panels;
  auto r = num::integrate_adaptive(integrand, traj.support_t_lo(),
                                   traj.support_t_hi(), q);
  return {pref * r.value, std::abs(pref) * r.error, r.evaluations};
}

}  // namespace radshift
