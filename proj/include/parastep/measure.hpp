#pragma once

#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "parastep/expr.hpp"
#include "parastep/quadrature.hpp"

namespace parastep {

/// A real number or +infinity; used for moments that may diverge.
class ExtendedReal {
 public:
  /// Throws DomainError on NaN or infinite input.
  static ExtendedReal finite(double v);
  static ExtendedReal positive_infinity() { return ExtendedReal(); }

  bool is_finite() const noexcept { return finite_; }
  /// Throws DomainError when infinite.
  double value() const;

  friend bool operator==(const ExtendedReal&, const ExtendedReal&) = default;

 private:
  ExtendedReal() = default;
  explicit ExtendedReal(double v) : finite_(true), value_(v) {}
  bool finite_ = false;
  double value_ = 0.0;
};

enum class Region { Negative, Positive, All };

struct Atom {
  double t = 0.0;
  double w = 0.0;
  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Point masses at t_k = t0 + k*step, k = 0, 1, ..., with weight(t_k).
/// `count` empty means the train is infinite; `decay` is the declared r in
/// weight(t_k) ~ |t_k|^-r. A mirrored train also carries mass weight(t_k)
/// at -t_k.
struct AtomTrain {
  double t0 = 0.0;
  double step = 1.0;
  std::optional<std::size_t> count;
  Expr weight;
  double decay = 0.0;
  bool mirrored = false;

  double location(double k) const noexcept { return t0 + k * step; }
  friend bool operator==(const AtomTrain&, const AtomTrain&) = default;
};

/// Absolutely continuous component rho(t) dt on [lower, upper]; infinite
/// ends need a declared tail exponent alpha with rho(t) ~ |t|^-alpha.
/// `moment1` optionally declares the closed form of the integral of t*rho.
struct Density {
  Expr rho;
  double lower = 0.0;
  double upper = 0.0;
  std::optional<double> tail_pos;
  std::optional<double> tail_neg;
  std::optional<Expr> moment1;
  friend bool operator==(const Density&, const Density&) = default;
};

using Component = std::variant<Atom, AtomTrain, Density>;

struct NumericOptions {
  std::size_t max_evals = kDefaultEvalBudget;
};

/// Finite positive measure on the real line. Validated on construction and
/// immutable afterwards.
class MeasureSpec {
 public:
  /// The zero measure.
  MeasureSpec() = default;
  /// Throws DomainError when a component violates its invariants, a declared
  /// tail exponent is numerically implausible, or the symmetry claim fails.
  MeasureSpec(std::vector<Component> components, bool declared_symmetric, const NumericOptions& opts = {});

  const std::vector<Component>& components() const noexcept { return components_; }
  bool declared_symmetric() const noexcept { return symmetric_; }
  bool empty() const noexcept { return components_.empty(); }

  friend bool operator==(const MeasureSpec&, const MeasureSpec&) = default;

 private:
  std::vector<Component> components_;
  bool symmetric_ = false;
};

struct IntegrabilityProfile {
  double mass = 0.0;
  bool t_L1 = false;
  /// Integral of t dmu, present iff t_L1.
  std::optional<double> moment1;
  /// moment1 is assembled from closed forms only (atoms, symmetric parts,
  /// declared densities), so an exact cancellation against beta is real.
  bool moment1_closed_form = false;
  bool t2_pos_finite = false;
  bool t2_neg_finite = false;
  bool abs_t_neg_finite = false;
  bool abs_t_pos_finite = false;
  bool symmetric = false;
  /// Absent when the support is unbounded on that side (or empty).
  std::optional<double> support_upper;
  std::optional<double> support_lower;
};

struct FirstMoment {
  ExtendedReal value = ExtendedReal::positive_infinity();
  bool closed_form = false;
};

double total_mass(const MeasureSpec& m, const NumericOptions& opts = {});

/// Integral of t^k (or |t|^k when `absolute`) over the region, k in {0, 1, 2}.
/// Divergence is decided from the declared tail data; finite values are
/// computed to relative accuracy 1e-8 of the corresponding absolute moment.
ExtendedReal moment(const MeasureSpec& m, int k, Region region, bool absolute,
                    const NumericOptions& opts = {});

FirstMoment first_moment(const MeasureSpec& m, const NumericOptions& opts = {});

IntegrabilityProfile integrability_profile(const MeasureSpec& m, const NumericOptions& opts = {});

/// Least upper / greatest lower bound of the support; empty when the support
/// is unbounded on that side or the measure is zero.
std::optional<double> support_upper(const MeasureSpec& m);
std::optional<double> support_lower(const MeasureSpec& m);

/// Image of the measure under t -> -t.
MeasureSpec reflect(const MeasureSpec& m);
Component reflect(const Component& c);

/// Analytic finiteness of the k-th absolute moment of a single component.
bool moment_finite(const Component& c, int k, Region region);

}  // namespace parastep
