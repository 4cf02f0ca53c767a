#include "parastep/classify.hpp"

#include <cmath>

#include "parastep/errors.hpp"

namespace parastep {

namespace {

Classification make(Verdict v, Rule r, std::string notes) {
  Classification c;
  c.verdict = v;
  c.rule = r;
  c.notes = std::move(notes);
  return c;
}

Classification classify_l1(const ParabolicMap& f, const IntegrabilityProfile& p, double eps_beta) {
  const double bt = f.beta() - *p.moment1;
  Classification c;
  if (std::abs(bt) <= eps_beta) {
    if (p.moment1_closed_form) {
      c = make(Verdict::ZeroHS, Rule::L1_BalancedBeta, "beta equals the first moment of mu");
    } else {
      c = make(
          Verdict::Unknown, Rule::OutsideTheorems,
          "numerically ambiguous beta_tilde: within eps_beta of 0 but the first moment has no closed form");
    }
  } else if (bt > 0.0) {
    c = p.t2_pos_finite ? make(Verdict::PositiveHS, Rule::L1_PosBeta_T2Finite,
                               "beta_tilde > 0 and t^2 is integrable on (0, inf)")
                        : make(Verdict::ZeroHS, Rule::L1_PosBeta_T2Infinite,
                               "beta_tilde > 0 and t^2 is not integrable on (0, inf)");
  } else {
    c = p.t2_neg_finite ? make(Verdict::PositiveHS, Rule::L1_NegBeta_T2Finite,
                               "beta_tilde < 0 and t^2 is integrable on (-inf, 0)")
                        : make(Verdict::ZeroHS, Rule::L1_NegBeta_T2Infinite,
                               "beta_tilde < 0 and t^2 is not integrable on (-inf, 0)");
  }
  c.beta_tilde = bt;
  return c;
}

}  // namespace

Classification classify(const ParabolicMap& f, double eps_beta, const NumericOptions& opts) {
  if (f.mu().empty()) {
    return make(Verdict::PositiveHS, Rule::Translation,
                "mu = 0: the map is a translation with constant step");
  }
  IntegrabilityProfile p;
  try {
    p = integrability_profile(f.mu(), opts);
  } catch (const Error& e) {
    return make(Verdict::Unknown, Rule::OutsideTheorems,
                std::string("profiling the measure failed: ") + e.what());
  }
  if (p.t_L1) return classify_l1(f, p, eps_beta);
  if (p.symmetric) {
    return make(Verdict::ZeroHS, Rule::Symmetric_NotL1, "mu is symmetric and t is not integrable");
  }
  if (!p.abs_t_neg_finite && p.t2_pos_finite) {
    return p.support_upper
               ? make(Verdict::PositiveHS, Rule::HalfLine_PHS, "mu lives on a half-line bounded above")
               : make(Verdict::PositiveHS, Rule::Perturbed_HalfLine_PHS,
                      "|t| diverges on (-inf, 0) while t^2 is integrable on (0, inf)");
  }
  if (!p.abs_t_pos_finite && p.t2_neg_finite) {
    Classification c =
        p.support_lower
            ? make(Verdict::PositiveHS, Rule::HalfLine_PHS, "mirrored: mu lives on a half-line bounded below")
            : make(Verdict::PositiveHS, Rule::Perturbed_HalfLine_PHS,
                   "mirrored: |t| diverges on (0, inf) while t^2 is integrable on (-inf, 0)");
    c.reflected = true;
    return c;
  }
  return make(Verdict::Unknown, Rule::OutsideTheorems,
              "t is not integrable, mu is not symmetric and neither half-line criterion applies");
}

Agreement agreement(const Classification& a, const EmpiricalVerdict& e) noexcept {
  if (a.verdict == Verdict::Unknown || e.verdict == StepVerdict::Inconclusive)
    return Agreement::NotComparable;
  const bool same = (a.verdict == Verdict::ZeroHS) == (e.verdict == StepVerdict::ZeroHS);
  return same ? Agreement::Yes : Agreement::No;
}

ValidationReport cross_validate(const ParabolicMap& f, const HPoint& z0, std::size_t n,
                                const ValidateOptions& opts) {
  return cross_validate(f, orbit(f, z0, n, opts.tol, opts.numeric), opts);
}

ValidationReport cross_validate(const ParabolicMap& f, const OrbitTrace& trace, const ValidateOptions& opts) {
  ValidationReport r;
  r.analytic = classify(f, opts.eps_beta, opts.numeric);
  StepOptions so;
  so.zero_threshold = opts.zero_threshold;
  so.plateau_window = opts.plateau_window;
  // y stays bounded for positive step exactly when t is integrable.
  try {
    so.require_bounded_y = !f.mu().empty() && integrability_profile(f.mu(), opts.numeric).t_L1;
  } catch (const Error&) {
    so.require_bounded_y = false;
  }
  r.empirical = empirical_step(trace, so);
  r.agree = agreement(r.analytic, r.empirical);
  return r;
}

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::ZeroHS:
      return "ZeroHS";
    case Verdict::PositiveHS:
      return "PositiveHS";
    case Verdict::Unknown:
      break;
  }
  return "Unknown";
}

const char* to_string(Rule r) noexcept {
  switch (r) {
    case Rule::L1_BalancedBeta:
      return "L1_BalancedBeta";
    case Rule::L1_PosBeta_T2Finite:
      return "L1_PosBeta_T2Finite";
    case Rule::L1_PosBeta_T2Infinite:
      return "L1_PosBeta_T2Infinite";
    case Rule::L1_NegBeta_T2Finite:
      return "L1_NegBeta_T2Finite";
    case Rule::L1_NegBeta_T2Infinite:
      return "L1_NegBeta_T2Infinite";
    case Rule::Symmetric_ZeroBeta:
      return "Symmetric_ZeroBeta";
    case Rule::Symmetric_NotL1:
      return "Symmetric_NotL1";
    case Rule::HalfLine_PHS:
      return "HalfLine_PHS";
    case Rule::Perturbed_HalfLine_PHS:
      return "Perturbed_HalfLine_PHS";
    case Rule::Translation:
      return "Translation";
    case Rule::OutsideTheorems:
      break;
  }
  return "OutsideTheorems";
}

const char* to_string(Agreement a) noexcept {
  switch (a) {
    case Agreement::Yes:
      return "yes";
    case Agreement::No:
      return "no";
    case Agreement::NotComparable:
      break;
  }
  return "not_comparable";
}

}  // namespace parastep
