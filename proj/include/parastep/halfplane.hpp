#pragma once

#include <complex>

namespace parastep {

using Complex = std::complex<double>;

/// A point of the open upper half-plane.
class HPoint {
 public:
  /// Throws DomainError unless `y` is finite and above 1e-300 and `x` is finite.
  HPoint(double x, double y);
  explicit HPoint(Complex z) : HPoint(z.real(), z.imag()) {}

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  Complex z() const noexcept { return {x_, y_}; }
  /// Argument in (0, pi).
  double arg() const noexcept;

  friend bool operator==(const HPoint&, const HPoint&) = default;

 private:
  double x_;
  double y_;
};

/// rho(z, w) = |z - w| / |z - conj(w)|, in [0, 1).
double pseudo_hyperbolic(const HPoint& z, const HPoint& w);

/// artanh(rho(z, w)).
double hyperbolic_distance(const HPoint& z, const HPoint& w);

/// (z - i) / (z + i).
Complex cayley_to_disk(const HPoint& z);

/// |a - b| / |1 - conj(a) b| for a, b in the unit disk.
double pseudo_hyperbolic_disk(Complex a, Complex b);

}  // namespace parastep
