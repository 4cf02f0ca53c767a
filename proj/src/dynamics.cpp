#include "parastep/dynamics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <numeric>

#include "parastep/errors.hpp"

namespace parastep {

namespace {

constexpr double kOverflow = 1e300;
constexpr double kDivergingSlope = 1e-6;
constexpr double kPlateau = 1e-4;
constexpr double kMinStep = 1e-14;

void require_valid(const OrbitTrace& t) {
  if (!t.valid()) throw InvalidTrace("orbit stopped early: " + t.message);
  if (t.points.size() != t.steps.size() + 1 || t.args.size() != t.points.size()) {
    throw InvalidTrace("orbit sequences have inconsistent lengths");
  }
}

void append_number(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, r.ptr);
}

Complex probe_value(const ParabolicMap& f, double y, double tol, const NumericOptions& opts) {
  if (!(y > 0.0) || !std::isfinite(y)) throw DomainError("probe heights must be positive and finite");
  // Evaluate beta + p(iy) directly instead of f(iy) - iy to avoid cancellation.
  const double scaled = tol / std::max(1.0, y);
  return f.beta() + herglotz_integral(f.mu(), HPoint(0.0, y), scaled, opts).value;
}

}  // namespace

OrbitTrace orbit(const ParabolicMap& f, const HPoint& z0, std::size_t n, double tol,
                 const NumericOptions& opts) {
  if (n < 1) throw DomainError("an orbit needs at least one step");
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  OrbitTrace t;
  t.eval_tol = tol / static_cast<double>(n);
  t.points.reserve(n + 1);
  t.points.push_back(z0);
  for (std::size_t k = 0; k < n; ++k) {
    Complex w;
    try {
      w = eval_with_error(f, t.points.back(), t.eval_tol, opts).value;
    } catch (const QuadratureFailure& e) {
      t.status = TraceStatus::QuadratureFailure;
      t.message = "step " + std::to_string(k) + ": " + e.what();
      break;
    }
    if (!(std::abs(w) <= kOverflow)) {
      t.status = TraceStatus::Overflow;
      t.message = "step " + std::to_string(k) + ": |z| exceeds 1e300";
      break;
    }
    t.points.emplace_back(w);
  }
  const std::size_t m = t.points.size() - 1;
  t.steps.resize(m);
  t.b_seq.resize(m);
  t.y_ratio.resize(m);
  for (std::size_t k = 0; k < m; ++k) {
    const HPoint& a = t.points[k];
    const HPoint& b = t.points[k + 1];
    t.steps[k] = pseudo_hyperbolic(b, a);
    t.b_seq[k] = (b.x() - a.x()) / a.y();
    t.y_ratio[k] = b.y() / a.y();
  }
  t.args.resize(m + 1);
  std::transform(t.points.begin(), t.points.end(), t.args.begin(), [](const HPoint& p) { return p.arg(); });
  return t;
}

PommerenkeEstimate pommerenke_b(const OrbitTrace& t, double abs_threshold) {
  require_valid(t);
  if (t.length() < 100) throw InvalidTrace("Pommerenke estimate needs at least 100 steps");
  const std::size_t w = t.length() / 10;
  const auto first = t.b_seq.end() - static_cast<std::ptrdiff_t>(w);
  const double mean = std::accumulate(first, t.b_seq.end(), 0.0) / static_cast<double>(w);
  double var = 0.0;
  for (auto it = first; it != t.b_seq.end(); ++it) var += (*it - mean) * (*it - mean);
  PommerenkeEstimate out;
  out.estimate = mean;
  out.dispersion = std::sqrt(var / static_cast<double>(w));
  out.converged = out.dispersion < 0.1 * std::abs(mean) || std::abs(mean) < abs_threshold;
  return out;
}

double log_y_slope(const OrbitTrace& t, std::size_t window) {
  const std::size_t last = t.points.size() - 1;
  window = std::min(window, last);
  if (window == 0) return 0.0;
  // Least-squares slope of log y_k on k over k = last - window .. last.
  const double mid = 0.5 * static_cast<double>(window);
  double num = 0.0;
  double den = 0.0;
  const double y0 = std::log(t.points[last - window].y());
  for (std::size_t i = 0; i <= window; ++i) {
    const double u = static_cast<double>(i) - mid;
    num += u * (std::log(t.points[last - window + i].y()) - y0);
    den += u * u;
  }
  return num / den;
}

EmpiricalVerdict empirical_step(const OrbitTrace& t, const StepOptions& opts) {
  require_valid(t);
  const std::size_t n = t.length();
  const std::size_t w = opts.plateau_window ? opts.plateau_window : std::max<std::size_t>(1, n / 10);
  if (n < w) throw InvalidTrace("trace shorter than the plateau window");

  EmpiricalVerdict v;
  v.d_tail = t.steps.back();
  const double d_start = t.steps[n - w];
  v.b_estimate = std::accumulate(t.b_seq.end() - static_cast<std::ptrdiff_t>(w), t.b_seq.end(), 0.0) /
                 static_cast<double>(w);
  v.y_final = t.points.back().y();
  v.y_diverging = log_y_slope(t, w) > kDivergingSlope;

  const double arg_end = t.args.back();
  const double arg_start = t.args[n - w];
  if (arg_end < std::numbers::pi / 4 && arg_end < arg_start) {
    v.tangential = Tangency::TowardZero;
  } else if (arg_end > 3 * std::numbers::pi / 4 && arg_end > arg_start) {
    v.tangential = Tangency::TowardPi;
  }

  const double rel_decrease = d_start > 0.0 ? (d_start - v.d_tail) / d_start : 0.0;
  if (v.d_tail < opts.zero_threshold && v.d_tail < d_start) {
    v.verdict = StepVerdict::ZeroHS;
  } else if (rel_decrease < kPlateau && v.d_tail > opts.zero_threshold &&
             !(opts.require_bounded_y && v.y_diverging) && v.tangential) {
    v.verdict = StepVerdict::PositiveHS;
  }
  return v;
}

std::vector<Complex> angular_probe(const ParabolicMap& f, const std::vector<double>& y_grid, double tol,
                                   const NumericOptions& opts) {
  if (y_grid.empty()) throw DomainError("probe grid is empty");
  std::vector<Complex> out;
  out.reserve(y_grid.size());
  for (double y : y_grid) out.push_back(Complex(0.0, y) * probe_value(f, y, tol, opts));
  return out;
}

std::vector<Complex> drift_probe(const ParabolicMap& f, const std::vector<double>& y_grid, double tol,
                                 const NumericOptions& opts) {
  if (y_grid.empty()) throw DomainError("probe grid is empty");
  std::vector<Complex> out;
  out.reserve(y_grid.size());
  for (double y : y_grid) out.push_back(probe_value(f, y, tol, opts));
  return out;
}

std::vector<double> abel_residual(const ParabolicMap& f, const HPoint& z, const HPoint& z0, std::size_t n,
                                  double tol, const NumericOptions& opts) {
  if (z == z0) throw DomainError("Abel residual needs z != z0");
  if (n < 2) throw DomainError("Abel residual needs n >= 2");
  const OrbitTrace base = orbit(f, z0, n + 1, tol, opts);
  const OrbitTrace other = orbit(f, z, n + 1, tol, opts);
  for (const auto* t : {&base, &other}) {
    if (!t->valid()) throw QuadratureFailure("Abel residual orbit stopped early: " + t->message);
  }
  std::vector<double> r(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const Complex dz = base.points[k + 1].z() - base.points[k].z();
    if (std::abs(dz) < kMinStep) throw DegenerateStep("orbit step " + std::to_string(k) + " is below 1e-14");
    const Complex dw = other.points[k + 1].z() - other.points[k].z();
    r[k] = std::abs(dw / dz - 1.0);
  }
  return r;
}

void write_csv(std::ostream& os, const OrbitTrace& t) {
  std::string out = "n,x,y,d,b,y_ratio,arg\n";
  for (std::size_t k = 0; k < t.points.size(); ++k) {
    out += std::to_string(k);
    for (double v : {t.points[k].x(), t.points[k].y()}) {
      out += ',';
      append_number(out, v);
    }
    if (k < t.steps.size()) {
      for (double v : {t.steps[k], t.b_seq[k], t.y_ratio[k]}) {
        out += ',';
        append_number(out, v);
      }
    } else {
      out += ",,,";
    }
    out += ',';
    append_number(out, t.args[k]);
    out += '\n';
  }
  os << out;
}

const char* to_string(StepVerdict v) noexcept {
  switch (v) {
    case StepVerdict::ZeroHS:
      return "ZeroHS";
    case StepVerdict::PositiveHS:
      return "PositiveHS";
    case StepVerdict::Inconclusive:
      break;
  }
  return "Inconclusive";
}

const char* to_string(Tangency t) noexcept { return t == Tangency::TowardZero ? "toward_0" : "toward_pi"; }

const char* to_string(TraceStatus s) noexcept {
  switch (s) {
    case TraceStatus::Complete:
      return "complete";
    case TraceStatus::QuadratureFailure:
      return "quadrature_failure";
    case TraceStatus::Overflow:
      break;
  }
  return "overflow";
}

}  // namespace parastep
