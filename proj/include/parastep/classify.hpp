#pragma once

#include <optional>
#include <string>

#include "parastep/dynamics.hpp"
#include "parastep/herglotz.hpp"

namespace parastep {

enum class Verdict { ZeroHS, PositiveHS, Unknown };

enum class Rule {
  L1_BalancedBeta,
  L1_PosBeta_T2Finite,
  L1_PosBeta_T2Infinite,
  L1_NegBeta_T2Finite,
  L1_NegBeta_T2Infinite,
  Symmetric_ZeroBeta,
  Symmetric_NotL1,
  HalfLine_PHS,
  Perturbed_HalfLine_PHS,
  Translation,
  OutsideTheorems,
};

inline constexpr double kDefaultEpsBeta = 1e-9;

struct Classification {
  Verdict verdict = Verdict::Unknown;
  Rule rule = Rule::OutsideTheorems;
  /// beta - integral of t dmu, present whenever t is mu-integrable.
  std::optional<double> beta_tilde;
  /// The half-line criterion was applied to the mirrored map z -> -conj(f(-conj z)).
  bool reflected = false;
  std::string notes;
};

/// Analytic hyperbolic-step decision. Never throws on a valid map; numeric
/// trouble while profiling the measure yields Unknown.
Classification classify(const ParabolicMap& f, double eps_beta = kDefaultEpsBeta,
                        const NumericOptions& opts = {});

enum class Agreement { Yes, No, NotComparable };

struct ValidationReport {
  Classification analytic;
  EmpiricalVerdict empirical;
  Agreement agree = Agreement::NotComparable;
};

struct ValidateOptions {
  double eps_beta = kDefaultEpsBeta;
  double tol = kDefaultEvalTol;
  double zero_threshold = 1e-3;
  std::size_t plateau_window = 0;
  NumericOptions numeric;
};

Agreement agreement(const Classification& a, const EmpiricalVerdict& e) noexcept;

/// Classifies f and compares with the empirical verdict of a fresh n-step
/// orbit from z0. Orbit errors propagate.
ValidationReport cross_validate(const ParabolicMap& f, const HPoint& z0, std::size_t n,
                                const ValidateOptions& opts = {});

/// Same comparison against an orbit computed by the caller.
ValidationReport cross_validate(const ParabolicMap& f, const OrbitTrace& trace,
                                const ValidateOptions& opts = {});

const char* to_string(Verdict v) noexcept;
const char* to_string(Rule r) noexcept;
const char* to_string(Agreement a) noexcept;

}  // namespace parastep
