#pragma once

#include <cmath>

#include "radshift/errors.hpp"
#include "radshift/numerics/smoothstep.hpp"
#include "radshift/xi_frame.hpp"

namespace radshift {

// C2 regulator chi(xi): identically 1 on the plateau, quintic roll-offs of
// the given width on both sides, identically 0 beyond them.
struct WindowFunction {
  double plateau_lo = 0.0;
  double plateau_hi = 0.0;
  double rolloff = 1.0;

  WindowFunction() = default;
  WindowFunction(double lo, double hi, double width)
      : plateau_lo(lo), plateau_hi(hi), rolloff(width) {
    if (!(hi >= lo) || !(width > 0.0))
      throw ValidationError("window: need plateau_hi >= plateau_lo, width > 0");
  }

  static WindowFunction around(const XiFrame& frame, double pad,
                               double width) {
    return WindowFunction(frame.xi_support_lo() - pad,
                          frame.xi_support_hi() + pad, width);
  }

  double support_lo() const { return plateau_lo - rolloff; }
  double support_hi() const { return plateau_hi + rolloff; }
  bool covers(double lo, double hi) const {
    return plateau_lo <= lo && hi <= plateau_hi;
  }

  double chi(double xi) const {
    if (xi >= plateau_lo && xi <= plateau_hi) return 1.0;
    if (xi <= support_lo() || xi >= support_hi()) return 0.0;
    if (xi < plateau_lo)
      return num::smoothstep5((xi - support_lo()) / rolloff);
    return num::smoothstep5((support_hi() - xi) / rolloff);
  }

  double chi_prime(double xi) const {
    if (xi >= plateau_lo && xi <= plateau_hi) return 0.0;
    if (xi <= support_lo() || xi >= support_hi()) return 0.0;
    if (xi < plateau_lo)
      return num::smoothstep5_d1((xi - support_lo()) / rolloff) / rolloff;
    return -num::smoothstep5_d1((support_hi() - xi) / rolloff) / rolloff;
  }
};

}  // namespace radshift
