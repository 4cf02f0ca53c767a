#pragma once

#include "parastep/halfplane.hpp"
#include "parastep/measure.hpp"

namespace parastep {

inline constexpr double kDefaultEvalTol = 1e-10;

/// Parabolic self-map of the upper half-plane with Denjoy-Wolff point at
/// infinity, f(z) = z + beta + integral of (1 + t z) / (t - z) dmu(t).
class ParabolicMap {
 public:
  /// Throws IdentityMap when beta = 0 and mu = 0.
  ParabolicMap(double beta, MeasureSpec mu);

  double beta() const noexcept { return beta_; }
  const MeasureSpec& mu() const noexcept { return mu_; }

  friend bool operator==(const ParabolicMap&, const ParabolicMap&) = default;

 private:
  double beta_;
  MeasureSpec mu_;
};

struct EvalResult {
  Complex value;
  double error_bound = 0.0;
};

/// (1 + t z) / (t - z) with real and imaginary parts in closed form; the
/// imaginary part y (1 + t^2) / |t - z|^2 is positive by construction.
inline Complex cauchy_kernel(double t, double x, double y) {
  const double dx = t - x;
  const double den = dx * dx + y * y;
  return {((1.0 + t * x) * dx - t * y * y) / den, y * (1.0 + t * t) / den};
}

/// Integral of (1 + t z) / (t - z) dmu(t) with |value - exact| <= error_bound <= tol.
EvalResult herglotz_integral(const MeasureSpec& m, const HPoint& z, double tol = kDefaultEvalTol,
                             const NumericOptions& opts = {});

EvalResult eval_with_error(const ParabolicMap& f, const HPoint& z, double tol = kDefaultEvalTol,
                           const NumericOptions& opts = {});

HPoint eval(const ParabolicMap& f, const HPoint& z, double tol = kDefaultEvalTol,
            const NumericOptions& opts = {});

/// beta - integral of t dmu; throws NotL1 when |t| is not mu-integrable.
double tilde_beta(const ParabolicMap& f, const NumericOptions& opts = {});

/// x + beta + p(x) for real x beyond the support, whose least upper bound
/// must be finite. Throws NotHalfLine otherwise.
double real_trace_eval(const ParabolicMap& f, double x, double tol = kDefaultEvalTol,
                       const NumericOptions& opts = {});

/// Some b beyond the support with p(b) + beta >= margin, so that the real
/// trace maps (b, inf) into itself. Throws NotHalfLine or SearchFailure.
double find_invariant_abscissa(const ParabolicMap& f, double margin, const NumericOptions& opts = {});

}  // namespace parastep
