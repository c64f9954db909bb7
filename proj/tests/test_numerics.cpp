#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include <Eigen/Dense>

#include "radshift/numerics/finite_difference.hpp"
#include "radshift/numerics/legendre.hpp"
#include "radshift/numerics/ode.hpp"
#include "radshift/numerics/quadrature.hpp"
#include "radshift/numerics/summation.hpp"

using namespace radshift;

TEST_CASE("gk15 panel integrates low-degree polynomials exactly") {
  auto r = num::gk15_panel([](double x) { return 3 * x * x - 2 * x + 1; },
                           -1.5, 2.5);
  // antiderivative x^3 - x^2 + x
  const double expect = (std::pow(2.5, 3) - 2.5 * 2.5 + 2.5) -
                        (std::pow(-1.5, 3) - 2.25 - 1.5);
  CHECK(r.value == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("adaptive quadrature on smooth and peaked integrands") {
  auto sine = num::integrate_adaptive([](double x) { return std::sin(x); },
                                      0.0, M_PI, 1e-12);
  CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-12));

  // Narrow Lorentzian, exact arctan value.
  const double w = 1e-3;
  auto peak = num::integrate_adaptive(
      [&](double x) { return w / (x * x + w * w); }, -1.0, 2.0, 1e-10);
  const double expect = std::atan(1.0 / w) + std::atan(2.0 / w);
  CHECK(peak.value == doctest::Approx(expect).epsilon(1e-9));
  CHECK(peak.error <= 1e-8 * std::abs(peak.value));
}

TEST_CASE("adaptive quadrature of zero integrand terminates") {
  auto r = num::integrate_adaptive([](double) { return 0.0; }, 0.0, 1.0,
                                   1e-12);
  CHECK(r.value == 0.0);
  CHECK(r.error == 0.0);
}

TEST_CASE("quadrature panel budget raises ConvergenceError") {
  num::QuadOptions q;
  q.rel_tol = 1e-16;
  q.max_panels = 8;
  CHECK_THROWS_AS(num::integrate_adaptive(
                      [](double x) { return 1.0 / std::sqrt(x + 1e-12); },
                      0.0, 1.0, q),
                  ConvergenceError);
}

TEST_CASE("oscillatory quadrature matches closed form of e^{ikx}") {
  const double k = 37.0, a = -2.0, b = 3.0;
  num::QuadOptions q;
  q.rel_tol = 1e-12;
  auto r = num::integrate_oscillatory([](double) { return 1.0; }, a, b, k, q);
  const std::complex<double> ik(0.0, k);
  const std::complex<double> expect =
      (std::polar(1.0, k * b) - std::polar(1.0, k * a)) / ik;
  CHECK(std::abs(r.value - expect) <= 1e-10 * std::abs(expect));
}

TEST_CASE("oscillatory breakpoints refuse absurd wave numbers") {
  CHECK_THROWS_AS(num::oscillatory_breakpoints(0.0, 1.0, 1e9, 1000),
                  ResolutionError);
  try {
    num::oscillatory_breakpoints(0.0, 1.0, 1e9, 1000);
  } catch (const ResolutionError& e) {
    CHECK(e.suggested_k_max > 0.0);
    CHECK(e.suggested_k_max < 1e9);
  }
}

TEST_CASE("fourier_poly_segment equals numeric quadrature on random data") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uc(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<double> coeff(6);
    for (auto& c : coeff) c = uc(rng);
    const double a = uc(rng);
    const double b = a + 0.3 + std::abs(uc(rng));
    // covers both the series branch (small k L) and the recursion branch
    const double k = std::pow(10.0, -2.0 + 4.0 * trial / 39.0);
    auto poly = [&](double x) {
      const double u = (x - a) / (b - a);
      double s = 0.0, un = 1.0;
      for (double c : coeff) {
        s += c * un;
        un *= u;
      }
      return s;
    };
    num::QuadOptions q;
    q.rel_tol = 1e-13;
    q.max_panels = 200000;
    auto numeric = num::integrate_oscillatory(poly, a, b, k, q);
    auto closed = num::fourier_poly_segment(coeff, a, b, k);
    CHECK(std::abs(numeric.value - closed) <=
          1e-10 * (std::abs(closed) + 1.0));
  }
}

TEST_CASE("dopri5 integrates the harmonic oscillator both ways") {
  using State = Eigen::Vector2d;
  auto rhs = [](double, const State& y) { return State(y[1], -y[0]); };
  num::OdeOptions opts;
  opts.rel_tol = 1e-12;
  opts.abs_tol = 1e-14;
  auto fwd = num::integrate_dopri5(rhs, 0.0, 10.0, State(1.0, 0.0), opts);
  CHECK(fwd.eval(10.0)[0] == doctest::Approx(std::cos(10.0)).epsilon(1e-10));
  CHECK(fwd.eval(10.0)[1] == doctest::Approx(-std::sin(10.0)).epsilon(1e-10));
  // dense output in the middle
  CHECK(fwd.eval(3.7)[0] == doctest::Approx(std::cos(3.7)).epsilon(1e-8));

  auto bwd = num::integrate_dopri5(rhs, 0.0, -5.0, State(1.0, 0.0), opts);
  CHECK(bwd.eval(-5.0)[0] == doctest::Approx(std::cos(5.0)).epsilon(1e-10));
  CHECK(bwd.eval(-5.0)[1] == doctest::Approx(std::sin(5.0)).epsilon(1e-10));
}

TEST_CASE("dopri5 dense output stays accurate with capped steps") {
  using State = Eigen::Matrix<double, 1, 1>;
  auto rhs = [](double t, const State&) {
    State d;
    d[0] = std::cos(t);
    return d;
  };
  num::OdeOptions opts;
  opts.rel_tol = 1e-12;
  opts.h_max = 0.05;
  State y0;
  y0[0] = 0.0;
  auto sol = num::integrate_dopri5(rhs, 0.0, 6.0, y0, opts);
  for (double t = 0.1; t < 6.0; t += 0.37)
    CHECK(sol.eval(t)[0] == doctest::Approx(std::sin(t)).epsilon(1e-9));
}

TEST_CASE("gauss_legendre nodes integrate high polynomials") {
  for (int n : {2, 8, 64}) {
    auto [x, w] = num::gauss_legendre(n);
    CHECK(w.sum() == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2n-1
    const int d = 2 * n - 2;
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], d);
    CHECK(s == doctest::Approx(2.0 / (d + 1)).epsilon(1e-12));
  }
}

TEST_CASE("pairwise sum is order-stable and accurate") {
  std::vector<double> v(10001);
  for (std::size_t i = 0; i < v.size(); ++i)
    v[i] = (i % 2 ? 1.0 : -1.0) / (1.0 + static_cast<double>(i));
  const double s1 = num::pairwise_sum(v);
  const double s2 = num::pairwise_sum(v);
  CHECK(s1 == s2);
  long double ref = 0.0L;
  for (double x : v) ref += static_cast<long double>(x);
  CHECK(std::abs(s1 - static_cast<double>(ref)) < 1e-14);
}

TEST_CASE("five point stencils differentiate exactly up to quartics") {
  auto f = [](double x) { return ((2 * x - 3) * x + 5) * x * x - 7 * x; };
  auto d1 = [](double x) { return ((8 * x - 9) * x + 10) * x - 7; };
  auto d2 = [](double x) { return (24 * x - 18) * x + 10; };
  for (double x : {-1.3, 0.2, 2.7}) {
    CHECK(num::fd5_first(f, x, 0.1) == doctest::Approx(d1(x)).epsilon(1e-12));
    CHECK(num::fd5_second(f, x, 0.1) ==
          doctest::Approx(d2(x)).epsilon(1e-10));
  }
}
