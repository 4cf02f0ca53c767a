#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "parastep/errors.hpp"

namespace parastep {

inline constexpr std::size_t kDefaultEvalBudget = 1'000'000;

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  std::size_t max_evals = kDefaultEvalBudget;
};

template <class Scalar>
struct QuadResult {
  Scalar value{};
  double error = 0.0;
  std::size_t evals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class Scalar>
struct Segment {
  double a;
  double b;
  Scalar value;
  double error;
  double abs_integral;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class Scalar, class F>
Segment<Scalar> gauss_kronrod15(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const Scalar fc = f(center);
  Scalar resk = fc * kWgk[7];
  Scalar resg = fc * kWg[3];
  double resabs = std::abs(fc) * kWgk[7];
  std::array<Scalar, 7> f1{};
  std::array<Scalar, 7> f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    resk += (f1[j] + f2[j]) * kWgk[j];
    resabs += (std::abs(f1[j]) + std::abs(f2[j])) * kWgk[j];
    if (j % 2 == 1) resg += (f1[j] + f2[j]) * kWg[j / 2];
  }
  const Scalar mean = resk * 0.5;
  double resasc = kWgk[7] * std::abs(fc - mean);
  for (int j = 0; j < 7; ++j) {
    resasc += kWgk[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  }
  const double w = std::abs(half);
  resasc *= w;
  resabs *= w;
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  }
  return {a, b, resk * half, err, resabs};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) quadrature of `f` over the
/// consecutive pieces delimited by `breakpoints` (sorted, at least two).
///
/// Stops once the summed error estimate drops below
/// max(abs_tol, rel_tol * |I|) or below the roundoff floor of the rule;
/// throws QuadratureFailure when `max_evals` integrand calls do not suffice.
template <class Scalar, class F>
QuadResult<Scalar> integrate(F&& f, std::span<const double> breakpoints, const QuadOptions& opt) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  std::priority_queue<detail::Segment<Scalar>> heap;
  QuadResult<Scalar> out;
  double abs_total = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) continue;
    auto seg = detail::gauss_kronrod15<Scalar>(f, a, b);
    out.evals += 15;
    out.value += seg.value;
    out.error += seg.error;
    abs_total += seg.abs_integral;
    heap.push(seg);
  }
  std::vector<detail::Segment<Scalar>> frozen;
  auto target = [&] {
    return std::max({opt.abs_tol, opt.rel_tol * std::abs(out.value), 100.0 * eps * abs_total});
  };
  while (!heap.empty() && out.error > target()) {
    if (out.evals + 30 > opt.max_evals) {
      throw QuadratureFailure("quadrature budget of " + std::to_string(opt.max_evals) +
                              " evaluations exhausted (error estimate " + std::to_string(out.error) + ")");
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) <= 8.0 * eps * std::max(std::abs(worst.a), std::abs(worst.b))) {
      frozen.push_back(worst);
      continue;
    }
    auto left = detail::gauss_kronrod15<Scalar>(f, worst.a, mid);
    auto right = detail::gauss_kronrod15<Scalar>(f, mid, worst.b);
    out.evals += 30;
    out.value += left.value + right.value - worst.value;
    out.error += left.error + right.error - worst.error;
    abs_total += left.abs_integral + right.abs_integral - worst.abs_integral;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift of the incremental updates.
  Scalar value{};
  double error = 0.0;
  for (; !heap.empty(); heap.pop()) {
    value += heap.top().value;
    error += heap.top().error;
  }
  for (const auto& s : frozen) {
    value += s.value;
    error += s.error;
  }
  out.value = value;
  out.error = error;
  if (!(out.error <= target()) && !frozen.empty()) {
    throw QuadratureFailure("quadrature cannot resolve the integrand: error estimate " +
                            std::to_string(out.error));
  }
  return out;
}

template <class Scalar, class F>
QuadResult<Scalar> integrate(F&& f, double a, double b, const QuadOptions& opt) {
  const std::array<double, 2> pts = {a, b};
  return integrate<Scalar>(std::forward<F>(f), std::span<const double>(pts), opt);
}

}  // namespace parastep
