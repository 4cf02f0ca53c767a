#include "parastep/halfplane.hpp"

#include <cmath>
#include <string>

#include "parastep/errors.hpp"

namespace parastep {

namespace {
constexpr double kMinImag = 1e-300;
}

HPoint::HPoint(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("HPoint: non-finite coordinate");
  }
  if (!(y > kMinImag)) {
    throw DomainError("HPoint: imaginary part " + std::to_string(y) + " is not in the upper half-plane");
  }
}

double HPoint::arg() const noexcept { return std::atan2(y_, x_); }

double pseudo_hyperbolic(const HPoint& z, const HPoint& w) {
  const Complex a = z.z();
  const Complex b = w.z();
  return std::abs(a - b) / std::abs(a - std::conj(b));
}

double hyperbolic_distance(const HPoint& z, const HPoint& w) { return std::atanh(pseudo_hyperbolic(z, w)); }

Complex cayley_to_disk(const HPoint& z) {
  const Complex i(0.0, 1.0);
  return (z.z() - i) / (z.z() + i);
}

double pseudo_hyperbolic_disk(Complex a, Complex b) {
  return std::abs(a - b) / std::abs(1.0 - std::conj(a) * b);
}

}  // namespace parastep
