#include "parastep/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>

#include "parastep/detail/component_sums.hpp"
#include "parastep/errors.hpp"

namespace parastep {

namespace {

using detail::Window;

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSupportSamples = 1000;
constexpr double kMaxTailDrift = 0.1;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};

[[noreturn]] void reject(const std::string& what) { throw DomainError(what); }

double eval_or_reject(const Expr& e, double t, const char* what) {
  try {
    return e(t);
  } catch (const EvalError& err) {
    reject(std::string(what) + " cannot be evaluated at t = " + std::to_string(t) + ": " + err.what());
  }
}

// Least-squares slope of ys against xs.
double fitted_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxy / sxx;
}

// Sample abscissae spread over [a, b], either end possibly infinite.
std::vector<double> support_samples(double a, double b) {
  std::vector<double> out;
  out.reserve(kSupportSamples);
  for (int i = 0; i < kSupportSamples; ++i) {
    const double u = (i + 0.5) / kSupportSamples;
    double t;
    if (std::isfinite(a) && std::isfinite(b)) {
      t = a + (b - a) * u;
    } else if (std::isfinite(a)) {
      t = a + u / (1.0 - u);
    } else if (std::isfinite(b)) {
      t = b - (1.0 - u) / u;
    } else {
      t = std::tan(std::numbers::pi * (u - 0.5));
    }
    out.push_back(t);
  }
  return out;
}

// Checks that value(t) * |t|^exponent neither drifts nor vanishes over the
// sampled abscissae.
template <class F>
void check_power_law(F&& value, std::span<const double> ts, double exponent, const std::string& what) {
  std::vector<double> lx;
  std::vector<double> ly;
  for (double t : ts) {
    const double v = value(t) * std::pow(std::abs(t), exponent);
    if (!(v > 0.0) || !std::isfinite(v)) {
      reject(what + ": declared exponent " + std::to_string(exponent) +
             " inconsistent with value at t = " + std::to_string(t));
    }
    lx.push_back(std::log(std::abs(t)));
    ly.push_back(std::log(v));
  }
  const double slope = fitted_slope(lx, ly);
  if (std::abs(slope) > kMaxTailDrift) {
    reject(what + ": declared exponent " + std::to_string(exponent) + " is off by about " +
           std::to_string(-slope));
  }
}

void validate(const Atom& a) {
  if (!std::isfinite(a.t)) reject("atom location must be finite");
  if (!(a.w > 0.0) || !std::isfinite(a.w)) reject("atom mass must be positive and finite");
}

void validate(const AtomTrain& tr) {
  if (!std::isfinite(tr.t0) || !std::isfinite(tr.step) || tr.step == 0.0) {
    reject("atom train needs finite t0 and a finite non-zero step");
  }
  if (tr.count) {
    if (*tr.count == 0) reject("atom train count must be at least 1");
    for (std::size_t k = 0; k < *tr.count; ++k) {
      const double w = eval_or_reject(tr.weight, tr.location(double(k)), "train weight");
      if (!(w > 0.0))
        reject("train weight must be positive at t = " + std::to_string(tr.location(double(k))));
    }
    return;
  }
  if (!(tr.decay > 1.0) || !std::isfinite(tr.decay)) {
    reject("infinite atom train needs decay exponent r > 1 for finite mass");
  }
  for (int k = 0; k <= 10000; ++k) {
    const double w = eval_or_reject(tr.weight, tr.location(k), "train weight");
    if (!(w > 0.0)) reject("train weight must be positive at t = " + std::to_string(tr.location(k)));
  }
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) {
    const double k = std::round(100.0 * std::pow(100.0, i / 40.0));
    if (tr.location(k) != 0.0) ts.push_back(tr.location(k));
  }
  check_power_law([&](double t) { return tr.weight(t); }, ts, tr.decay, "atom train");
}

void validate(const Density& d, const NumericOptions& opts) {
  if (std::isnan(d.lower) || std::isnan(d.upper) || !(d.upper > d.lower) || d.lower == kInf ||
      d.upper == -kInf) {
    reject("density support must be a non-empty interval");
  }
  const bool up_inf = std::isinf(d.upper);
  const bool lo_inf = std::isinf(d.lower);
  if (up_inf != d.tail_pos.has_value()) {
    reject(up_inf ? "density unbounded above needs tail_pos" : "tail_pos given for a support bounded above");
  }
  if (lo_inf != d.tail_neg.has_value()) {
    reject(lo_inf ? "density unbounded below needs tail_neg" : "tail_neg given for a support bounded below");
  }
  if (d.tail_pos && !(*d.tail_pos > 1.0)) reject("tail_pos must exceed 1 for finite mass");
  if (d.tail_neg && !(*d.tail_neg > 1.0)) reject("tail_neg must exceed 1 for finite mass");

  for (double t : support_samples(d.lower, d.upper)) {
    const double v = eval_or_reject(d.rho, t, "density");
    if (v < 0.0) reject("density is negative at t = " + std::to_string(t));
  }
  auto tail_grid = [](double start) {
    std::vector<double> ts;
    for (int i = 0; i <= 30; ++i) ts.push_back(start * std::pow(1e3, i / 30.0));
    return ts;
  };
  auto rho = [&](double t) { return eval_or_reject(d.rho, t, "density"); };
  if (up_inf) {
    const double start = std::max(1e3, std::isfinite(d.lower) ? 2.0 * std::abs(d.lower) : 0.0);
    check_power_law(rho, tail_grid(start), *d.tail_pos, "density upper tail");
  }
  if (lo_inf) {
    const double start = std::max(1e3, std::isfinite(d.upper) ? 2.0 * std::abs(d.upper) : 0.0);
    auto ts = tail_grid(start);
    for (double& t : ts) t = -t;
    check_power_law(rho, ts, *d.tail_neg, "density lower tail");
  }
  if (d.moment1) {
    if (d.moment1->uses_variable()) reject("declared moment1 must be a constant expression");
    if (!moment_finite(Component(d), 1, Region::All)) {
      reject("declared moment1 for a density without a finite first absolute moment");
    }
    const double declared = eval_or_reject(*d.moment1, 0.0, "moment1");
    Density plain = d;
    plain.moment1.reset();
    const MeasureSpec single({plain}, false, opts);
    const double numeric = moment(single, 1, Region::All, false, opts).value();
    const double scale = moment(single, 1, Region::All, true, opts).value();
    if (std::abs(declared - numeric) > 1e-8 * std::max(scale, 1e-300)) {
      reject("declared moment1 " + std::to_string(declared) + " disagrees with quadrature " +
             std::to_string(numeric));
    }
  }
}

bool density_is_even(const Density& d) {
  if (d.lower != -d.upper || d.tail_pos != d.tail_neg) return false;
  for (double t : support_samples(0.0, d.upper)) {
    const double a = d.rho(t);
    const double b = d.rho(-t);
    if (std::abs(a - b) > 1e-9 * std::max(std::abs(a), std::abs(b))) return false;
  }
  return true;
}

bool self_symmetric(const Component& c) {
  return std::visit(
      Overloaded{[](const Atom& a) { return a.t == 0.0; }, [](const AtomTrain& tr) { return tr.mirrored; },
                 [](const Density& d) { return density_is_even(d); }},
      c);
}

bool mirror_partners(const Component& c, const Component& other) {
  const Component r = reflect(c);
  if (const auto* a = std::get_if<Atom>(&r)) {
    const auto* b = std::get_if<Atom>(&other);
    auto close = [](double x, double y) {
      return std::abs(x - y) <= 1e-12 * std::max(std::abs(x), std::abs(y));
    };
    return b && close(a->t, b->t) && close(a->w, b->w);
  }
  return r == other;
}

void check_symmetry(const std::vector<Component>& cs) {
  std::vector<bool> used(cs.size(), false);
  for (std::size_t i = 0; i < cs.size(); ++i) {
    if (used[i]) continue;
    if (self_symmetric(cs[i])) {
      used[i] = true;
      continue;
    }
    bool found = false;
    for (std::size_t j = i + 1; j < cs.size() && !found; ++j) {
      if (!used[j] && mirror_partners(cs[i], cs[j])) {
        used[i] = used[j] = true;
        found = true;
      }
    }
    if (!found) {
      reject("measure declared symmetric but component " + std::to_string(i) + " has no mirror image");
    }
  }
}

QuadOptions relative(double rel, const NumericOptions& opts) {
  QuadOptions q;
  q.abs_tol = 0.0;
  q.rel_tol = rel;
  q.max_evals = opts.max_evals;
  return q;
}

// Integral of |t|^k over the window for one component.
double component_abs_moment(const Component& c, int k, Window win, const QuadOptions& q) {
  auto kernel = [k](double t) { return k == 0 ? 1.0 : std::pow(std::abs(t), k); };
  return std::visit(Overloaded{[&](const Atom& a) { return win.contains(a.t) ? a.w * kernel(a.t) : 0.0; },
                               [&](const AtomTrain& tr) {
                                 return detail::sum_train<double>(tr, kernel, win, k, {}, q).value;
                               },
                               [&](const Density& d) {
                                 return detail::integrate_density<double>(d, kernel, win, k, {}, q).value;
                               }},
                    c);
}

double abs_moment(const MeasureSpec& m, int k, Window win, double rel, const NumericOptions& opts) {
  const QuadOptions q = relative(rel, opts);
  double sum = 0.0;
  for (const auto& c : m.components()) sum += component_abs_moment(c, k, win, q);
  return sum;
}

}  // namespace

ExtendedReal ExtendedReal::finite(double v) {
  if (!std::isfinite(v)) throw DomainError("ExtendedReal::finite given a non-finite value");
  return ExtendedReal(v);
}

double ExtendedReal::value() const {
  if (!finite_) throw DomainError("ExtendedReal: value of +infinity requested");
  return value_;
}

MeasureSpec::MeasureSpec(std::vector<Component> components, bool declared_symmetric,
                         const NumericOptions& opts)
    : components_(std::move(components)), symmetric_(declared_symmetric) {
  for (const auto& c : components_) {
    std::visit(Overloaded{[](const Atom& a) { validate(a); }, [](const AtomTrain& tr) { validate(tr); },
                          [&](const Density& d) { validate(d, opts); }},
               c);
  }
  if (symmetric_) check_symmetry(components_);
  try {
    const double mass = total_mass(*this, opts);
    if (!std::isfinite(mass)) reject("total mass is not finite");
  } catch (const QuadratureFailure& e) {
    reject(std::string("total mass could not be established: ") + e.what());
  } catch (const EvalError& e) {
    reject(std::string("total mass could not be established: ") + e.what());
  }
}

bool moment_finite(const Component& c, int k, Region region) {
  const bool want_pos = region != Region::Negative;
  const bool want_neg = region != Region::Positive;
  return std::visit(Overloaded{[](const Atom&) { return true; },
                               [&](const AtomTrain& tr) {
                                 if (tr.count) return true;
                                 const bool reaches_pos = tr.step > 0 || tr.mirrored;
                                 const bool reaches_neg = tr.step < 0 || tr.mirrored;
                                 const bool relevant = (want_pos && reaches_pos) || (want_neg && reaches_neg);
                                 return !relevant || tr.decay - k > 1.0;
                               },
                               [&](const Density& d) {
                                 if (want_pos && d.tail_pos && !(*d.tail_pos > k + 1.0)) return false;
                                 if (want_neg && d.tail_neg && !(*d.tail_neg > k + 1.0)) return false;
                                 return true;
                               }},
                    c);
}

double total_mass(const MeasureSpec& m, const NumericOptions& opts) {
  return abs_moment(m, 0, Window{}, 1e-11, opts);
}

ExtendedReal moment(const MeasureSpec& m, int k, Region region, bool absolute, const NumericOptions& opts) {
  if (k < 0 || k > 2) throw DomainError("moment order must be 0, 1 or 2");
  for (const auto& c : m.components()) {
    if (!moment_finite(c, k, region)) return ExtendedReal::positive_infinity();
  }
  constexpr double rel = 1e-10;
  if (absolute || k % 2 == 0)
    return ExtendedReal::finite(abs_moment(m, k, detail::window_of(region), rel, opts));
  const double pos =
      region == Region::Negative ? 0.0 : abs_moment(m, k, detail::window_of(Region::Positive), rel, opts);
  const double neg =
      region == Region::Positive ? 0.0 : abs_moment(m, k, detail::window_of(Region::Negative), rel, opts);
  return ExtendedReal::finite(pos - neg);
}

FirstMoment first_moment(const MeasureSpec& m, const NumericOptions& opts) {
  FirstMoment out;
  for (const auto& c : m.components()) {
    if (!moment_finite(c, 1, Region::All)) return out;
  }
  if (m.declared_symmetric()) return {ExtendedReal::finite(0.0), true};
  bool closed = true;
  double sum = 0.0;
  for (const auto& c : m.components()) {
    if (const auto* a = std::get_if<Atom>(&c)) {
      sum += a->w * a->t;
      continue;
    }
    if (const auto* tr = std::get_if<AtomTrain>(&c)) {
      if (tr->count) {
        for (std::size_t k = 0; k < *tr->count; ++k) {
          const double t = tr->location(double(k));
          sum += tr->weight(t) * (tr->mirrored ? 0.0 : t);
        }
        continue;
      }
      if (tr->mirrored) continue;
    }
    if (const auto* d = std::get_if<Density>(&c)) {
      if (d->moment1) {
        sum += (*d->moment1)(0.0);
        continue;
      }
      if (density_is_even(*d)) continue;
    }
    closed = false;
    const MeasureSpec single({c}, false, opts);
    sum += moment(single, 1, Region::All, false, opts).value();
  }
  return {ExtendedReal::finite(sum), closed};
}

namespace {

// Support hull; (+inf, -inf) for the zero measure.
std::pair<double, double> support_hull(const MeasureSpec& m) {
  double hi = -kInf;
  double lo = kInf;
  for (const auto& c : m.components()) {
    std::visit(Overloaded{[&](const Atom& a) {
                            hi = std::max(hi, a.t);
                            lo = std::min(lo, a.t);
                          },
                          [&](const AtomTrain& tr) {
                            double first = tr.t0;
                            double last =
                                tr.count ? tr.location(double(*tr.count - 1)) : std::copysign(kInf, tr.step);
                            double c_hi = std::max(first, last);
                            double c_lo = std::min(first, last);
                            if (tr.mirrored) {
                              const double m_hi = std::max(c_hi, -c_lo);
                              c_lo = std::min(c_lo, -c_hi);
                              c_hi = m_hi;
                            }
                            hi = std::max(hi, c_hi);
                            lo = std::min(lo, c_lo);
                          },
                          [&](const Density& d) {
                            hi = std::max(hi, d.upper);
                            lo = std::min(lo, d.lower);
                          }},
               c);
  }
  return {lo, hi};
}

}  // namespace

std::optional<double> support_upper(const MeasureSpec& m) {
  const double hi = support_hull(m).second;
  if (std::isfinite(hi)) return hi;
  return std::nullopt;
}

std::optional<double> support_lower(const MeasureSpec& m) {
  const double lo = support_hull(m).first;
  if (std::isfinite(lo)) return lo;
  return std::nullopt;
}

IntegrabilityProfile integrability_profile(const MeasureSpec& m, const NumericOptions& opts) {
  IntegrabilityProfile p;
  p.mass = total_mass(m, opts);
  auto all_finite = [&](int k, Region r) {
    return std::all_of(m.components().begin(), m.components().end(),
                       [&](const Component& c) { return moment_finite(c, k, r); });
  };
  p.abs_t_neg_finite = all_finite(1, Region::Negative);
  p.abs_t_pos_finite = all_finite(1, Region::Positive);
  p.t2_neg_finite = all_finite(2, Region::Negative);
  p.t2_pos_finite = all_finite(2, Region::Positive);
  p.t_L1 = p.abs_t_neg_finite && p.abs_t_pos_finite;
  if (p.t_L1) {
    const FirstMoment fm = first_moment(m, opts);
    p.moment1 = fm.value.value();
    p.moment1_closed_form = fm.closed_form;
  }
  p.symmetric = m.declared_symmetric();

  p.support_upper = support_upper(m);
  p.support_lower = support_lower(m);
  return p;
}

Component reflect(const Component& c) {
  auto negate = [](const Expr& e) {
    if (e.root().op == Expr::Op::Neg) return e.operand(0);
    return Expr::unary(Expr::Op::Neg, e);
  };
  return std::visit(Overloaded{[](const Atom& a) -> Component { return Atom{0.0 - a.t, a.w}; },
                               [](const AtomTrain& tr) -> Component {
                                 AtomTrain r = tr;
                                 r.t0 = 0.0 - tr.t0;
                                 r.step = -tr.step;
                                 r.weight = tr.weight.reflected();
                                 return r;
                               },
                               [&](const Density& d) -> Component {
                                 Density r;
                                 r.rho = d.rho.reflected();
                                 r.lower = -d.upper;
                                 r.upper = -d.lower;
                                 r.tail_pos = d.tail_neg;
                                 r.tail_neg = d.tail_pos;
                                 if (d.moment1) r.moment1 = negate(*d.moment1);
                                 return r;
                               }},
                    c);
}

MeasureSpec reflect(const MeasureSpec& m) {
  std::vector<Component> cs;
  cs.reserve(m.components().size());
  for (const auto& c : m.components()) cs.push_back(reflect(c));
  return MeasureSpec(std::move(cs), m.declared_symmetric());
}

}  // namespace parastep
