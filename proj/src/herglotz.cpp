#include "parastep/herglotz.hpp"

#include <cmath>
#include <string>

#include "parastep/detail/component_sums.hpp"
#include "parastep/errors.hpp"

namespace parastep {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

int numeric_components(const MeasureSpec& m) {
  int n = 0;
  for (const auto& c : m.components()) n += std::holds_alternative<Atom>(c) ? 0 : 1;
  return n;
}

// Integral of kernel dmu; atoms are exact, every other component receives an
// equal share of the tolerance.
template <class Scalar, class Kernel>
QuadResult<Scalar> integrate_measure(const MeasureSpec& m, Kernel&& kernel, detail::Feature feature,
                                     double tol, const NumericOptions& opts) {
  QuadOptions q;
  q.abs_tol = tol / std::max(1, numeric_components(m));
  q.max_evals = opts.max_evals;
  const detail::Feature features[] = {feature};
  QuadResult<Scalar> out;
  for (const auto& c : m.components()) {
    const auto part = std::visit(
        Overloaded{[&](const Atom& a) { return QuadResult<Scalar>{a.w * kernel(a.t), 0.0, 1}; },
                   [&](const AtomTrain& tr) {
                     return detail::sum_train<Scalar>(tr, kernel, detail::Window{}, 0.0, features, q);
                   },
                   [&](const Density& d) {
                     return detail::integrate_density<Scalar>(d, kernel, detail::Window{}, 0.0, features, q);
                   }},
        c);
    out.value += part.value;
    out.error += part.error;
    out.evals += part.evals;
  }
  return out;
}

// p(x) on the real axis beyond the support.
QuadResult<double> real_cauchy(const MeasureSpec& m, double x, double support_top, double tol,
                               const NumericOptions& opts) {
  auto kernel = [x](double t) { return (1.0 + t * x) / (t - x); };
  return integrate_measure<double>(m, kernel, {x, x - support_top}, tol, opts);
}

double half_line_top(const ParabolicMap& f) {
  const auto top = support_upper(f.mu());
  if (!top) throw NotHalfLine("the support of mu is not bounded above");
  return *top;
}

}  // namespace

ParabolicMap::ParabolicMap(double beta, MeasureSpec mu) : beta_(beta), mu_(std::move(mu)) {
  if (!std::isfinite(beta)) throw DomainError("beta must be finite");
  if (beta == 0.0 && mu_.empty()) throw IdentityMap("beta = 0 and mu = 0 give the identity map");
}

EvalResult herglotz_integral(const MeasureSpec& m, const HPoint& z, double tol, const NumericOptions& opts) {
  if (!(tol > 0.0)) throw DomainError("tolerance must be positive");
  const double x = z.x();
  const double y = z.y();
  auto kernel = [x, y](double t) { return cauchy_kernel(t, x, y); };
  const auto r = integrate_measure<Complex>(m, kernel, {x, y}, tol, opts);
  return {r.value, r.error};
}

EvalResult eval_with_error(const ParabolicMap& f, const HPoint& z, double tol, const NumericOptions& opts) {
  const EvalResult p = herglotz_integral(f.mu(), z, tol, opts);
  return {z.z() + f.beta() + p.value, p.error_bound};
}

HPoint eval(const ParabolicMap& f, const HPoint& z, double tol, const NumericOptions& opts) {
  return HPoint(eval_with_error(f, z, tol, opts).value);
}

double tilde_beta(const ParabolicMap& f, const NumericOptions& opts) {
  const FirstMoment m1 = first_moment(f.mu(), opts);
  if (!m1.value.is_finite()) throw NotL1("integral of |t| dmu diverges");
  return f.beta() - m1.value.value();
}

double real_trace_eval(const ParabolicMap& f, double x, double tol, const NumericOptions& opts) {
  const double top = half_line_top(f);
  if (!(x > top)) {
    throw DomainError("real trace evaluated at " + std::to_string(x) + ", not beyond the support top " +
                      std::to_string(top));
  }
  return x + f.beta() + real_cauchy(f.mu(), x, top, tol, opts).value;
}

double find_invariant_abscissa(const ParabolicMap& f, double margin, const NumericOptions& opts) {
  if (!(margin > 0.0)) throw DomainError("margin must be positive");
  const double top = half_line_top(f);
  // beta + p(top + d) is increasing in d; certify with the error bound.
  auto clears = [&](double d) {
    const auto r = real_cauchy(f.mu(), top + d, top, kDefaultEvalTol, opts);
    return f.beta() + r.value - r.error >= margin;
  };
  double good = 1.0;
  if (clears(good)) {
    const double floor = 1e-12 * std::max(1.0, std::abs(top));
    while (0.5 * good > floor && clears(0.5 * good)) good *= 0.5;
  } else {
    do {
      good *= 2.0;
      if (top + good > 1e300) {
        throw SearchFailure("no invariant abscissa below 1e300");
      }
    } while (!clears(good));
  }
  double bad = 0.5 * good;
  for (int i = 0; i < 200 && good - bad > 1e-13 * (std::abs(top) + good); ++i) {
    const double mid = 0.5 * (bad + good);
    (clears(mid) ? good : bad) = mid;
  }
  return top + good;
}

}  // namespace parastep
