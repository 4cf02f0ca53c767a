#pragma once

// Integration of kernels against single measure components. Shared by the
// moment computations and by the evaluation of the map.

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "parastep/errors.hpp"
#include "parastep/measure.hpp"
#include "parastep/quadrature.hpp"

namespace parastep::detail {

/// A near-singularity of the kernel at center + i*width (a pole of the
/// Cauchy kernel sits Im z above the real axis).
struct Feature {
  double center;
  double width;
};

/// Open interval restricting the integration domain.
struct Window {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double t) const noexcept { return t > lo && t < hi; }
};

inline Window window_of(Region r) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (r) {
    case Region::Negative:
      return {-inf, 0.0};
    case Region::Positive:
      return {0.0, inf};
    case Region::All:
      break;
  }
  return {};
}

// Beyond this |t| tail integrands are frozen at their power-law limit.
inline constexpr double kFreezeAbscissa = 1e50;
// Minimum distance, in index units, between the start of an Euler-Maclaurin
// tail and any singularity of the summand.
inline constexpr double kTailClearance = 32.0;
inline constexpr double kMinDirectTerms = 64.0;
inline constexpr double kMaxDirectTerms = 5e7;

/// Substitution exponent p for t = R u^-p, which makes an integrand decaying
/// like t^-(excess + 1) bounded as u -> 0.
inline double tail_power(double excess) { return 1.0 / std::max(excess, 0.05); }

/// Integral over u in (0, 1] of f(R u^-p) * |dt/du|, i.e. of f over [R, inf)
/// when sign = +1 and over (-inf, -R] when sign = -1.
template <class Scalar, class F>
QuadResult<Scalar> integrate_power_tail(F& f, double R, double p, double sign, const QuadOptions& opt) {
  const double u_freeze = std::pow(R / kFreezeAbscissa, 1.0 / p);
  auto g = [&](double u) -> Scalar {
    const double uu = std::max(u, u_freeze);
    const double t = R * std::pow(uu, -p);
    return f(sign * t) * (p * t / uu);
  };
  static constexpr double kPts[] = {0.0, 1e-6, 1e-3, 0.05, 0.25, 0.5, 1.0};
  return integrate<Scalar>(g, std::span<const double>(kPts), opt);
}

/// Integral of kernel(t) * rho(t) dt over the density's support cut to the
/// window. `growth` is the power of |t| the kernel grows like at infinity.
template <class Scalar, class Kernel>
QuadResult<Scalar> integrate_density(const Density& d, Kernel&& kernel, Window win, double growth,
                                     std::span<const Feature> features, const QuadOptions& opt) {
  const double a = std::max(d.lower, win.lo);
  const double b = std::min(d.upper, win.hi);
  QuadResult<Scalar> total;
  if (!(b > a)) return total;

  double R = 1e3;
  if (std::isfinite(a)) R = std::max(R, 2.0 * std::abs(a));
  if (std::isfinite(b)) R = std::max(R, 2.0 * std::abs(b));
  for (const auto& f : features) R = std::max(R, 2.0 * std::abs(f.center) + 40.0 * f.width);

  auto integrand = [&](double t) -> Scalar { return kernel(t) * d.rho(t); };
  const bool upper_tail = !std::isfinite(b);
  const bool lower_tail = !std::isfinite(a);
  const int pieces = 1 + int(upper_tail) + int(lower_tail);
  QuadOptions piece_opt = opt;
  piece_opt.abs_tol = opt.abs_tol / pieces;

  const double ca = std::max(a, -R);
  const double cb = std::min(b, R);
  if (cb > ca) {
    std::vector<double> pts = {ca, cb, 0.0};
    for (double v = 1e-2; v < R; v *= 10.0) {
      pts.push_back(v);
      pts.push_back(-v);
    }
    for (const auto& f : features) {
      pts.push_back(f.center);
      for (double w = f.width; w < R; w *= 4.0) {
        pts.push_back(f.center - w);
        pts.push_back(f.center + w);
      }
    }
    std::erase_if(pts, [&](double v) { return !(v >= ca && v <= cb); });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    auto core = integrate<Scalar>(integrand, std::span<const double>(pts), piece_opt);
    total.value += core.value;
    total.error += core.error;
    total.evals += core.evals;
  }
  auto add_tail = [&](double alpha, double sign) {
    auto tail = integrate_power_tail<Scalar>(integrand, R, tail_power(alpha - growth - 1.0), sign, piece_opt);
    total.value += tail.value;
    total.error += tail.error;
    total.evals += tail.evals;
  };
  if (upper_tail) add_tail(*d.tail_pos, 1.0);
  if (lower_tail) add_tail(*d.tail_neg, -1.0);
  return total;
}

/// Sum over one half of a train: masses weight(t0 + k step) located at
/// sign * (t0 + k step). `term(t)` is the kernel at the location, growing
/// like |t|^growth. Infinite trains are summed directly up to an index K
/// clear of every singularity and completed with an Euler-Maclaurin tail.
template <class Scalar, class Term>
QuadResult<Scalar> sum_train_half(const AtomTrain& tr, double sign, Term&& term, Window win, double growth,
                                  std::span<const Feature> features, const QuadOptions& opt) {
  QuadResult<Scalar> out;
  auto summand = [&](double s) -> Scalar {
    const double base = tr.location(s);
    return term(sign * base) * tr.weight(base);
  };
  if (tr.count) {
    for (std::size_t k = 0; k < *tr.count; ++k) {
      if (win.contains(sign * tr.location(double(k)))) out.value += summand(double(k));
    }
    return out;
  }

  const double dir = sign * tr.step;
  const bool tail_inside = dir > 0 ? std::isinf(win.hi) : std::isinf(win.lo);
  if (!tail_inside) {
    for (std::size_t k = 0;; ++k) {
      const double loc = sign * tr.location(double(k));
      if (dir > 0 ? loc >= win.hi : loc <= win.lo) break;
      if (win.contains(loc)) out.value += summand(double(k));
    }
    return out;
  }

  double K = kMinDirectTerms;
  const double s_zero = -tr.t0 / tr.step;
  K = std::max(K, s_zero + kTailClearance);
  for (const auto& f : features) {
    const double s_re = (sign * f.center - tr.t0) / tr.step;
    const double s_im = f.width / std::abs(tr.step);
    if (s_im < kTailClearance) K = std::max(K, s_re + kTailClearance);
  }
  K = std::ceil(K);
  if (K > kMaxDirectTerms) {
    throw QuadratureFailure("atom train tail starts beyond the direct summation limit");
  }
  const auto k_end = static_cast<std::size_t>(K);
  for (std::size_t k = 0; k < k_end; ++k) {
    if (win.contains(sign * tr.location(double(k)))) out.value += summand(double(k));
  }

  // sum_{k >= K} F(k) = int_K^inf F + F(K)/2 - F'(K)/12 + F'''(K)/720 + ...
  QuadOptions tail_opt = opt;
  tail_opt.abs_tol = 0.5 * opt.abs_tol;
  const double p = tail_power(tr.decay - growth - 1.0);
  const double s_freeze = kFreezeAbscissa / std::abs(tr.step);
  auto g = [&](double u) -> Scalar {
    const double uu = std::max(u, std::pow(K / s_freeze, 1.0 / p));
    const double s = K * std::pow(uu, -p);
    return summand(s) * (p * s / uu);
  };
  static constexpr double kPts[] = {0.0, 1e-6, 1e-3, 0.05, 0.25, 0.5, 1.0};
  auto integral = integrate<Scalar>(g, std::span<const double>(kPts), tail_opt);
  const Scalar fm2 = summand(K - 2.0);
  const Scalar fm1 = summand(K - 1.0);
  const Scalar f0 = summand(K);
  const Scalar fp1 = summand(K + 1.0);
  const Scalar fp2 = summand(K + 2.0);
  const Scalar d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / 12.0;
  const Scalar d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / 2.0;
  out.value += integral.value + 0.5 * f0 - d1 / 12.0 + d3 / 720.0;
  out.error += integral.error + std::abs(d3) / 720.0;
  out.evals += integral.evals + k_end + 5;
  return out;
}

/// Both halves of a train (the mirrored half only when present).
template <class Scalar, class Term>
QuadResult<Scalar> sum_train(const AtomTrain& tr, Term&& term, Window win, double growth,
                             std::span<const Feature> features, const QuadOptions& opt) {
  QuadOptions half = opt;
  if (tr.mirrored) half.abs_tol = 0.5 * opt.abs_tol;
  auto out = sum_train_half<Scalar>(tr, 1.0, term, win, growth, features, half);
  if (tr.mirrored) {
    auto m = sum_train_half<Scalar>(tr, -1.0, term, win, growth, features, half);
    out.value += m.value;
    out.error += m.error;
    out.evals += m.evals;
  }
  return out;
}

}  // namespace parastep::detail
