#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "parastep/herglotz.hpp"

namespace parastep {

enum class TraceStatus { Complete, QuadratureFailure, Overflow };

/// Forward orbit z_0, ..., z_N of a parabolic map with its derived sequences.
/// steps, b_seq and y_ratio have N entries; args has N + 1.
struct OrbitTrace {
  std::vector<HPoint> points;
  std::vector<double> steps;    // d_n = rho(z_{n+1}, z_n)
  std::vector<double> b_seq;    // (x_{n+1} - x_n) / y_n
  std::vector<double> y_ratio;  // y_{n+1} / y_n
  std::vector<double> args;     // arg z_n in (0, pi)
  /// Tolerance requested for each evaluation of f.
  double eval_tol = 0.0;
  TraceStatus status = TraceStatus::Complete;
  /// Why the orbit stopped early; empty when complete.
  std::string message;

  bool valid() const noexcept { return status == TraceStatus::Complete; }
  std::size_t length() const noexcept { return steps.size(); }
};

/// n steps from z0. Each evaluation uses tolerance tol / n so the accumulated
/// evaluation error stays within tol. A quadrature failure or |z| > 1e300
/// stops the orbit and marks the partial trace invalid.
OrbitTrace orbit(const ParabolicMap& f, const HPoint& z0, std::size_t n, double tol = kDefaultEvalTol,
                 const NumericOptions& opts = {});

struct PommerenkeEstimate {
  double estimate = 0.0;
  /// Standard deviation of b_n over the averaging window.
  double dispersion = 0.0;
  bool converged = false;
};

/// Mean of b_n over the last 10% of a valid trace of length >= 100.
/// Throws InvalidTrace.
PommerenkeEstimate pommerenke_b(const OrbitTrace& t, double abs_threshold = 1e-3);

enum class StepVerdict { ZeroHS, PositiveHS, Inconclusive };
enum class Tangency { TowardZero, TowardPi };

struct EmpiricalVerdict {
  StepVerdict verdict = StepVerdict::Inconclusive;
  double d_tail = 0.0;
  double b_estimate = 0.0;
  double y_final = 0.0;
  bool y_diverging = false;
  std::optional<Tangency> tangential;
};

struct StepOptions {
  double zero_threshold = 1e-3;
  /// Number of trailing steps inspected; 0 means length / 10.
  std::size_t plateau_window = 0;
  /// Demand a non-diverging y before declaring PositiveHS.
  bool require_bounded_y = false;
};

/// Empirical hyperbolic-step decision from the tail of a valid trace.
/// Throws InvalidTrace.
EmpiricalVerdict empirical_step(const OrbitTrace& t, const StepOptions& opts = {});

/// Slope of log y_n against n over the last `window` points.
double log_y_slope(const OrbitTrace& t, std::size_t window);

/// iy * (f(iy) - iy) for each y of the grid.
std::vector<Complex> angular_probe(const ParabolicMap& f, const std::vector<double>& y_grid,
                                   double tol = kDefaultEvalTol, const NumericOptions& opts = {});

/// f(iy) - iy for each y of the grid.
std::vector<Complex> drift_probe(const ParabolicMap& f, const std::vector<double>& y_grid,
                                 double tol = kDefaultEvalTol, const NumericOptions& opts = {});

/// r_k = |h_k(f(z)) - h_k(z) - 1| for k = 0..n, where
/// h_k(w) = (f^k(w) - z_k) / (z_{k+1} - z_k) along the orbit of z0.
/// Throws DegenerateStep when |z_{k+1} - z_k| < 1e-14.
std::vector<double> abel_residual(const ParabolicMap& f, const HPoint& z, const HPoint& z0, std::size_t n,
                                  double tol = kDefaultEvalTol, const NumericOptions& opts = {});

/// CSV with header n,x,y,d,b,y_ratio,arg. The last row has no step data.
void write_csv(std::ostream& os, const OrbitTrace& t);

const char* to_string(StepVerdict v) noexcept;
const char* to_string(Tangency t) noexcept;
const char* to_string(TraceStatus s) noexcept;

}  // namespace parastep
