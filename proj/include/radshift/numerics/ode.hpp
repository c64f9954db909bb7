#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "radshift/errors.hpp"

namespace radshift::num {

struct OdeOptions {
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;   // scalar floor, same for all components
  double h_max = 0.0;       // 0: no cap beyond the span
  double h_init = 0.0;      // 0: span/100
  long max_steps = 2000000;
};

// Dense solution of an ODE integration: accepted steps plus the stored
// derivatives, evaluated in between with cubic Hermite interpolation.
template <class State>
class OdeSolution {
 public:
  void reserve(std::size_t n) {
    t_.reserve(n);
    y_.reserve(n);
    f_.reserve(n);
  }
  void push(double t, const State& y, const State& f) {
    t_.push_back(t);
    y_.push_back(y);
    f_.push_back(f);
  }
  bool forward() const { return t_.back() >= t_.front(); }
  double t_front() const { return t_.front(); }
  double t_back() const { return t_.back(); }
  std::size_t size() const { return t_.size(); }
  double time_at(std::size_t i) const { return t_[i]; }
  const State& state_at(std::size_t i) const { return y_[i]; }

  State eval(double t) const {
    const std::size_t i = locate(t);
    const double t0 = t_[i], t1 = t_[i + 1];
    const double h = t1 - t0;
    if (h == 0.0) return y_[i];
    const double s = (t - t0) / h;
    const double s2 = s * s, s3 = s2 * s;
    const double h00 = 2 * s3 - 3 * s2 + 1;
    const double h10 = s3 - 2 * s2 + s;
    const double h01 = -2 * s3 + 3 * s2;
    const double h11 = s3 - s2;
    return h00 * y_[i] + (h10 * h) * f_[i] + h01 * y_[i + 1] +
           (h11 * h) * f_[i + 1];
  }

 private:
  std::size_t locate(double t) const {
    const bool fwd = forward();
    std::size_t lo = 0, hi = t_.size() - 1;
    while (hi - lo > 1) {
      const std::size_t mid = (lo + hi) / 2;
      const bool left = fwd ? (t < t_[mid]) : (t > t_[mid]);
      (left ? hi : lo) = mid;
    }
    return lo;
  }

  std::vector<double> t_;
  std::vector<State> y_;
  std::vector<State> f_;
};

// Dormand-Prince 5(4) with the usual PI-free step controller. Integrates
// from t0 to t1 in either direction; rhs has signature State(double, State).
template <class State, class Rhs>
OdeSolution<State> integrate_dopri5(Rhs&& rhs, double t0, double t1,
                                    const State& y0, const OdeOptions& opts) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113,
                          b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 35.0 / 384 - 5179.0 / 57600,
                          e3 = 500.0 / 1113 - 7571.0 / 16695,
                          e4 = 125.0 / 192 - 393.0 / 640,
                          e5 = -2187.0 / 6784 + 92097.0 / 339200,
                          e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5,
                          c5 = 8.0 / 9;

  OdeSolution<State> sol;
  const double span = t1 - t0;
  if (span == 0.0) {
    const State f0 = rhs(t0, y0);
    sol.push(t0, y0, f0);
    sol.push(t0, y0, f0);
    return sol;
  }
  const double dir = span > 0 ? 1.0 : -1.0;
  double h_cap = std::abs(span);
  if (opts.h_max > 0.0) h_cap = std::min(h_cap, opts.h_max);
  double h = (opts.h_init > 0.0 ? std::min(opts.h_init, h_cap)
                                : std::abs(span) / 100.0);
  h = std::min(h, h_cap);

  double t = t0;
  State y = y0;
  State k1 = rhs(t, y);
  sol.reserve(256);
  sol.push(t, y, k1);

  long steps = 0;
  while (dir * (t1 - t) > 0.0) {
    if (++steps > opts.max_steps)
      throw ConvergenceError("dopri5: step budget exhausted");
    h = std::min(h, h_cap);
    if (dir * (t + dir * h - t1) > 0.0) h = std::abs(t1 - t);
    const double hs = dir * h;

    const State k2 = rhs(t + c2 * hs, State(y + hs * (a21 * k1)));
    const State k3 = rhs(t + c3 * hs, State(y + hs * (a31 * k1 + a32 * k2)));
    const State k4 =
        rhs(t + c4 * hs, State(y + hs * (a41 * k1 + a42 * k2 + a43 * k3)));
    const State k5 = rhs(
        t + c5 * hs,
        State(y + hs * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)));
    const State k6 =
        rhs(t + hs, State(y + hs * (a61 * k1 + a62 * k2 + a63 * k3 +
                                    a64 * k4 + a65 * k5)));
    const State y_new =
        y + hs * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const State k7 = rhs(t + hs, y_new);
    const State err = hs * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 +
                            e6 * k6 + e7 * k7);

    double errn = 0.0;
    for (int i = 0; i < y.size(); ++i) {
      const double scale =
          opts.abs_tol +
          opts.rel_tol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      errn = std::max(errn, std::abs(err[i]) / scale);
    }

    if (errn <= 1.0) {
      t += hs;
      y = y_new;
      k1 = k7;
      sol.push(t, y, k1);
    }
    const double factor =
        (errn == 0.0) ? 5.0
                      : std::clamp(0.9 * std::pow(errn, -0.2), 0.2, 5.0);
    h *= factor;
    if (!(h > 0.0) || t + dir * h == t)
      throw ConvergenceError("dopri5: step size underflow");
  }
  return sol;
}

}  // namespace radshift::num
