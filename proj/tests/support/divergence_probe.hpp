#pragma once

// Brute-force divergence probe: grows the cutoff R over decades and watches
// how the partial absolute moments grow. Independent of the library's
// declared-exponent logic and of its quadrature.

#include <algorithm>
#include <cmath>
#include <variant>

#include "parastep/measure.hpp"

namespace probe {

// Partial absolute moment over |t| in [lo, hi) on one side (sign = +-1).
inline double decade_increment(const parastep::MeasureSpec& m, int k, double sign, double lo, double hi) {
  double sum = 0.0;
  for (const auto& c : m.components()) {
    if (const auto* a = std::get_if<parastep::Atom>(&c)) {
      const double s = sign * a->t;
      if (s >= lo && s < hi) sum += a->w * std::pow(s, k);
    } else if (const auto* tr = std::get_if<parastep::AtomTrain>(&c)) {
      for (double side : {1.0, -1.0}) {
        if (side < 0 && !tr->mirrored) continue;
        const std::size_t n = tr->count ? *tr->count : static_cast<std::size_t>(-1);
        for (std::size_t j = 0; j < n; ++j) {
          const double base = tr->location(double(j));
          const double s = sign * side * base;
          // Locations are monotone; stop once the train has left the band.
          if (tr->step * side * sign > 0 ? s >= hi : s < lo) break;
          if (s >= lo && s < hi) sum += tr->weight(base) * std::pow(s, k);
        }
      }
    } else {
      const auto& d = std::get<parastep::Density>(c);
      // Band on this side, clipped to the support.
      double a = lo;
      double b = hi;
      if (sign > 0) {
        a = std::max(a, d.lower);
        b = std::min(b, d.upper);
      } else {
        a = std::max(a, -d.upper);
        b = std::min(b, -d.lower);
      }
      if (!(b > a)) continue;
      // Composite Simpson in s = log t.
      const int n = 4000;
      const double sa = std::log(a);
      const double sb = std::log(b);
      const double h = (sb - sa) / n;
      double acc = 0.0;
      for (int i = 0; i <= n; ++i) {
        const double t = std::exp(sa + i * h);
        const double f = d.rho(sign * t) * std::pow(t, k + 1);
        acc += f * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
      }
      sum += acc * h / 3.0;
    }
  }
  return sum;
}

/// True when the partial moments over decades [1e3, 1e6] level off.
inline bool looks_finite(const parastep::MeasureSpec& m, int k, parastep::Region region) {
  auto side_finite = [&](double sign) {
    const double d3 = decade_increment(m, k, sign, 1e3, 1e4);
    const double d5 = decade_increment(m, k, sign, 1e5, 1e6);
    if (d5 == 0.0) return true;
    if (d3 == 0.0) return false;
    const double slope = (std::log10(d5) - std::log10(d3)) / 2.0;
    return slope < -0.25;
  };
  const bool pos = region == parastep::Region::Negative || side_finite(1.0);
  const bool neg = region == parastep::Region::Positive || side_finite(-1.0);
  return pos && neg;
}

}  // namespace probe
