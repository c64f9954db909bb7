#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <queue>
#include <type_traits>
#include <vector>

#include <Eigen/Dense>

#include "radshift/errors.hpp"
#include "radshift/numerics/summation.hpp"

namespace radshift::num {

inline double qnorm(double x) { return std::abs(x); }
inline double qnorm(const std::complex<double>& x) { return std::abs(x); }
template <class Derived>
double qnorm(const Eigen::MatrixBase<Derived>& x) {
  return x.template lpNorm<Eigen::Infinity>();
}

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;   // estimated absolute error
  long evaluations = 0;
};

using ValueWithError = QuadResult<double>;

namespace detail {

// Gauss-Kronrod 7-15 abscissae/weights on [-1,1], positive half.
inline constexpr double kGk15X[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr double kGk15Wk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double kGk15Wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

}  // namespace detail

// One Gauss-Kronrod 7-15 panel. The error estimate is the usual
// QUADPACK-style sharpened |K15 - G7| difference.
template <class F>
auto gk15_panel(F&& f, double a, double b)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);

  const T fc = f(c);
  T resk = detail::kGk15Wk[7] * fc;
  T resg = detail::kGk15Wg[0] * fc;
  double resabs = detail::kGk15Wk[7] * qnorm(fc);
  for (int i = 0; i < 7; ++i) {
    const double dx = h * detail::kGk15X[i];
    const T f1 = f(c - dx);
    const T f2 = f(c + dx);
    resk += detail::kGk15Wk[i] * (f1 + f2);
    resabs += detail::kGk15Wk[i] * (qnorm(f1) + qnorm(f2));
    if (i % 2 == 1) resg += detail::kGk15Wg[(i + 1) / 2] * (f1 + f2);
  }

  QuadResult<T> r;
  r.value = h * resk;
  r.evaluations = 15;
  const double diff = qnorm(T(resk - resg)) * std::abs(h);
  resabs *= std::abs(h);
  // Sharpen the raw difference as QUADPACK does.
  r.error = diff;
  if (resabs > 0.0 && diff > 0.0)
    r.error = resabs * std::min(1.0, std::pow(200.0 * diff / resabs, 1.5));
  return r;
}

struct QuadOptions {
  double rel_tol = 1e-9;
  double abs_tol = 0.0;      // 0 means purely relative control
  int max_panels = 20000;
  std::vector<double> breakpoints;  // forced initial subdivision points
};

// Globally adaptive Gauss-Kronrod integration. Panels are bisected worst
// error first; the final value is a pairwise sum over panels ordered left
// to right, so results are reproducible for a fixed configuration.
template <class F>
auto integrate_adaptive(F&& f, double a, double b, const QuadOptions& opts)
    -> QuadResult<std::decay_t<decltype(f(a))>> {
  using T = std::decay_t<decltype(f(a))>;
  struct Panel {
    double a, b, error;
    T value;
  };
  if (!(b > a)) {
    if (a == b) return {};
    throw std::invalid_argument("integrate_adaptive: b < a");
  }

  std::vector<double> knots{a};
  for (double x : opts.breakpoints)
    if (x > a && x < b) knots.push_back(x);
  knots.push_back(b);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  // Worst-first ordering with a position tie-break keeps refinement
  // deterministic.
  auto worse = [](const Panel& l, const Panel& r) {
    if (l.error != r.error) return l.error < r.error;
    return l.a > r.a;
  };
  std::priority_queue<Panel, std::vector<Panel>, decltype(worse)> heap(worse);

  long evals = 0;
  double err_sum = 0.0;
  T running{};  // incremental total, used only for the stopping test
  bool have_running = false;
  auto make_panel = [&](double x0, double x1) {
    auto r = gk15_panel(f, x0, x1);
    evals += r.evaluations;
    err_sum += r.error;
    if (have_running) {
      running += r.value;
    } else {
      running = r.value;
      have_running = true;
    }
    heap.push(Panel{x0, x1, r.error, r.value});
  };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i)
    make_panel(knots[i], knots[i + 1]);

  while (true) {
    const double target =
        std::max(opts.abs_tol, opts.rel_tol * qnorm(running));
    if (err_sum <= target || err_sum == 0.0) break;
    if (static_cast<int>(heap.size()) + 1 > opts.max_panels)
      throw ConvergenceError(
          "adaptive quadrature: panel budget exhausted before reaching "
          "tolerance");
    Panel p = heap.top();
    heap.pop();
    err_sum -= p.error;
    running -= p.value;
    const double mid = 0.5 * (p.a + p.b);
    if (!(mid > p.a && mid < p.b))
      throw ConvergenceError(
          "adaptive quadrature: interval too small to bisect");
    make_panel(p.a, mid);
    make_panel(mid, p.b);
  }

  // Final reduction: left-to-right pairwise sum over the surviving panels.
  std::vector<Panel> panels;
  panels.reserve(heap.size());
  while (!heap.empty()) {
    panels.push_back(heap.top());
    heap.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& l, const Panel& r) { return l.a < r.a; });
  std::vector<T> vals;
  vals.reserve(panels.size());
  double err_final = 0.0;
  for (const auto& p : panels) {
    vals.push_back(p.value);
    err_final += p.error;
  }
  QuadResult<T> r;
  r.value = pairwise_sum(vals);
  r.error = err_final;
  r.evaluations = evals;
  return r;
}

template <class F>
auto integrate_adaptive(F&& f, double a, double b, double rel_tol,
                        double abs_tol = 0.0) {
  QuadOptions o;
  o.rel_tol = rel_tol;
  o.abs_tol = abs_tol;
  return integrate_adaptive(std::forward<F>(f), a, b, o);
}

// Initial partition for integrands carrying a phase e^{i k x}: every panel
// stays under an eighth of the oscillation period. Throws ResolutionError
// when that alone would blow the panel budget.
inline std::vector<double> oscillatory_breakpoints(double a, double b,
                                                   double k, int max_panels) {
  std::vector<double> bps;
  if (a >= b) return bps;
  const double period = 2.0 * M_PI / std::max(std::abs(k), 1e-300);
  const int n_osc = static_cast<int>(
      std::min(1e9, std::ceil((b - a) / (period / 8.0))));
  const int n0 = std::max(2, n_osc);
  if (n0 > max_panels / 2) {
    const double k_max = (max_panels / 2) * (2.0 * M_PI / 8.0) / (b - a);
    throw ResolutionError(
        k_max, "oscillatory quadrature: wave number too large for panel "
               "budget; maximum resolvable k is about " +
                   std::to_string(k_max));
  }
  bps.reserve(static_cast<std::size_t>(n0) - 1);
  for (int i = 1; i < n0; ++i) bps.push_back(a + (b - a) * i / n0);
  return bps;
}

// Adaptive quadrature of f(x) e^{i k x} for scalar f.
template <class F>
auto integrate_oscillatory(F&& f, double a, double b, double k,
                           const QuadOptions& opts)
    -> QuadResult<std::complex<double>> {
  if (a >= b) return {};
  QuadOptions o = opts;
  auto bps = oscillatory_breakpoints(a, b, k, opts.max_panels);
  o.breakpoints.insert(o.breakpoints.end(), bps.begin(), bps.end());
  auto g = [&](double x) -> std::complex<double> {
    return f(x) * std::polar(1.0, k * x);
  };
  return integrate_adaptive(g, a, b, o);
}

// Exact \int_a^b P(u) e^{i k x} dx for a polynomial given in the local
// variable u = (x - a)/(b - a). Uses the integration-by-parts recursion
// when the phase advance is large and a Taylor series otherwise, which
// avoids the cancellation that kills the recursion at small k(b-a).
inline std::complex<double> fourier_poly_segment(
    const std::vector<double>& coeff, double a, double b, double k) {
  using C = std::complex<double>;
  const double L = b - a;
  if (L <= 0.0) return {0.0, 0.0};
  const int deg = static_cast<int>(coeff.size()) - 1;
  if (deg < 0) return {0.0, 0.0};
  const double kappa = k * L;
  const C phase_a = std::polar(1.0, k * a);

  if (std::abs(kappa) < 4.0) {
    // I_n = int_0^1 u^n e^{i kappa u} du as a series in (i kappa).
    // Terms: (i kappa)^j / (j! (n + j + 1)).
    C total{0.0, 0.0};
    for (int n = 0; n <= deg; ++n) {
      if (coeff[static_cast<std::size_t>(n)] == 0.0) continue;
      C in{0.0, 0.0};
      C term{1.0, 0.0};
      for (int j = 0; j < 64; ++j) {
        const C add = term / double(n + j + 1);
        in += add;
        if (std::abs(add) < 1e-18 * (1.0 + std::abs(in))) break;
        term *= C(0.0, kappa) / double(j + 1);
      }
      total += coeff[static_cast<std::size_t>(n)] * in;
    }
    return phase_a * L * total;
  }

  // Stable upward evaluation: I_0 = (e^{i kappa} - 1)/(i kappa),
  // I_n = (e^{i kappa} - n I_{n-1})/(i kappa).
  const C ik(0.0, kappa);
  const C eik = std::polar(1.0, kappa);
  std::vector<C> I(static_cast<std::size_t>(deg) + 1);
  I[0] = (eik - 1.0) / ik;
  for (int n = 1; n <= deg; ++n)
    I[static_cast<std::size_t>(n)] =
        (eik - double(n) * I[static_cast<std::size_t>(n - 1)]) / ik;
  C total{0.0, 0.0};
  for (int n = deg; n >= 0; --n)
    total += coeff[static_cast<std::size_t>(n)] * I[static_cast<std::size_t>(n)];
  return phase_a * L * total;
}

}  // namespace radshift::num
