#pragma once

namespace radshift::num {

// Five-point central stencils, O(h^4).
template <class F>
double fd5_first(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) /
         (12 * h);
}

template <class F>
double fd5_second(F&& f, double x, double h) {
  return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) -
          f(x - 2 * h)) /
         (12 * h * h);
}

// Plain central difference, optionally with one Richardson step (h, h/2).
template <class F>
double central_diff(F&& f, double x, double h, bool richardson = false) {
  const double d_h = (f(x + h) - f(x - h)) / (2 * h);
  if (!richardson) return d_h;
  const double d_h2 = (f(x + 0.5 * h) - f(x - 0.5 * h)) / h;
  return (4.0 * d_h2 - d_h) / 3.0;
}

}  // namespace radshift::num
