// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Orbits for the golden pairs are computed once and shared by criteria 3-6 and 10.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "measure_corpus.hpp"
#include "parastep/classify.hpp"
#include "support/divergence_probe.hpp"
#include "support/golden.hpp"
#include "support/random_maps.hpp"

using namespace parastep;

namespace {

constexpr std::size_t kSteps = 100000;

using Clock = std::chrono::steady_clock;

int failures = 0;

struct Criterion {
  const char* id;
  const char* title;
  Clock::time_point start = Clock::now();
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& why) {
    if (!cond) {
      ok = false;
      std::printf("    %s: %s\n", id, why.c_str());
    }
  }

  void finish(const std::string& summary) {
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::printf("[%s] %s %s: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, title, summary.c_str(), secs);
    std::fflush(stdout);
    failures += ok ? 0 : 1;
  }
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

std::string label(const golden::Pair& p) { return fmt("Ex.%d beta=%g", p.example, p.beta); }

struct PairRun {
  golden::Pair pair;
  ParabolicMap map;
  Classification analytic;
  std::vector<OrbitTrace> traces;  // one per starting point
};

const HPoint kStarts[] = {HPoint(0.0, 1.0), HPoint(1.0, 2.0), HPoint(-3.0, 0.5)};

bool schwarz_pick(const OrbitTrace& t, double* worst) {
  for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) *worst = std::max(*worst, t.steps[k + 1] - t.steps[k]);
  return *worst <= 1e-9;
}

}  // namespace

int main() {
  std::vector<PairRun> runs;
  for (const auto& p : golden::pairs()) {
    const ParabolicMap f = golden::map(p.example, p.beta);
    runs.push_back({p, f, classify(f), {}});
  }

  {
    Criterion c{"AC1", "golden-corpus analytic classification"};
    int right = 0;
    for (const auto& r : runs) {
      const Verdict want = r.pair.zero_step ? Verdict::ZeroHS : Verdict::PositiveHS;
      c.require(r.analytic.verdict == want, label(r.pair) + " classified " + to_string(r.analytic.verdict) +
                                                ", expected " + to_string(want));
      right += r.analytic.verdict == want;
    }
    c.finish(fmt("%d/%zu pairs", right, runs.size()));
  }

  {
    Criterion c{"AC2", "evaluator vs closed forms"};
    double worst = 0.0;
    for (int which = 1; which <= 4; ++which) {
      const MeasureSpec m = golden::measure(which);
      for (int i = 0; i < 20; ++i) {
        for (int j = 0; j < 20; ++j) {
          const HPoint z(-10.0 + 20.0 * i / 19.0, 0.1 + 9.9 * j / 19.0);
          const double err =
              std::abs(herglotz_integral(m, z).value - golden::closed_form_integral(which, z.z()));
          worst = std::max(worst, err);
        }
      }
    }
    c.require(worst <= 1e-8, fmt("worst deviation %.3e", worst));
    c.finish(fmt("max |f - closed form| = %.2e over 4 x 400 points", worst));
  }

  std::fprintf(stderr, "computing %zu orbits of %zu steps...\n", runs.size() * 3, kSteps);
  const auto orbit_start = Clock::now();
  for (auto& r : runs) {
    for (const HPoint& z0 : kStarts) r.traces.push_back(orbit(r.map, z0, kSteps));
  }
  std::fprintf(stderr, "orbits done in %.1f s\n",
               std::chrono::duration<double>(Clock::now() - orbit_start).count());

  {
    Criterion c{"AC3", "empirical/analytic agreement"};
    int agree = 0;
    for (const auto& r : runs) {
      if (!r.traces[0].valid()) {
        c.require(false, label(r.pair) + " orbit failed: " + r.traces[0].message);
        continue;
      }
      const ValidationReport rep = cross_validate(r.map, r.traces[0]);
      c.require(rep.agree == Agreement::Yes, label(r.pair) + " agree=" + to_string(rep.agree) +
                                                 " (empirical " + to_string(rep.empirical.verdict) + ")");
      agree += rep.agree == Agreement::Yes;
    }
    c.finish(fmt("%d/%zu pairs agree (n=%zu, z0=i)", agree, runs.size(), kSteps));
  }

  {
    Criterion c{"AC4", "Pommerenke dichotomy"};
    int good = 0;
    for (const auto& r : runs) {
      if (!r.traces[0].valid()) continue;
      const PommerenkeEstimate b = pommerenke_b(r.traces[0]);
      const bool ok =
          r.pair.zero_step ? std::abs(b.estimate) < 1e-3 : std::abs(b.estimate) > 1e-2 && b.converged;
      c.require(ok, label(r.pair) + fmt(" b=%.4e converged=%d", b.estimate, b.converged));
      good += ok;
    }
    c.finish(fmt("%d/%zu pairs", good, runs.size()));
  }

  {
    Criterion c{"AC5", "Schwarz-Pick monotonicity"};
    double worst = -1.0;
    std::size_t checked = 0;
    for (const auto& r : runs) {
      for (const auto& t : r.traces) {
        c.require(schwarz_pick(t, &worst), label(r.pair) + fmt(" step increase %.3e", worst));
        ++checked;
      }
    }
    for (const auto& f : random_maps::maps(20)) {
      const OrbitTrace t = orbit(f, HPoint(0.0, 1.0), 10000);
      c.require(t.valid(), "random map orbit failed: " + t.message);
      c.require(schwarz_pick(t, &worst), fmt("random map step increase %.3e", worst));
      ++checked;
    }
    c.finish(fmt("%zu orbits, max d_{n+1} - d_n = %.2e", checked, worst));
  }

  {
    Criterion c{"AC6", "y-growth dichotomy"};
    int checked = 0;
    for (const auto& r : runs) {
      const OrbitTrace& t = r.traces[0];
      if (!t.valid()) continue;
      const double y0 = t.points.front().y();
      const double yn = t.points.back().y();
      if (r.pair.zero_step) {
        c.require(yn > 100.0 * y0, label(r.pair) + fmt(" y_n/y_0 = %.4g", yn / y0));
        ++checked;
      } else if (integrability_profile(r.map.mu()).t_L1) {
        const double ratio = yn / t.points[kSteps / 10].y();
        c.require(ratio < 1.01, label(r.pair) + fmt(" y_{1e5}/y_{1e4} = %.6f", ratio));
        ++checked;
      }
    }
    c.finish(fmt("%d orbits checked", checked));
  }

  {
    Criterion c{"AC7", "angular probe"};
    const std::vector<double> grid{1e6};
    const Complex zero = angular_probe(golden::map(1, 0.0), grid).back();
    const Complex one = angular_probe(golden::map(1, 1.0), grid).back();
    c.require(std::abs(zero + 1.0) < 1e-3, fmt("beta=0: |value + 1| = %.3e", std::abs(zero + 1.0)));
    c.require(std::abs(one) > 1e3, fmt("beta=1: |value| = %.3e", std::abs(one)));
    c.finish(
        fmt("beta=0 gives %.9f%+.1ei, beta=1 gives |value| = %.3g", zero.real(), zero.imag(), std::abs(one)));
  }

  {
    Criterion c{"AC8", "Abel residual"};
    const auto r4 = abel_residual(golden::map(4, 0.0), HPoint(0.0, 2.0), HPoint(0.0, 1.0), 1000);
    const auto rt = abel_residual(ParabolicMap(1.0, MeasureSpec()), HPoint(0.0, 2.0), HPoint(0.0, 1.0), 1000);
    double worst_t = 0.0;
    for (double v : rt) worst_t = std::max(worst_t, v);
    c.require(r4[1000] * 10.0 <= r4[10], fmt("r_10 = %.3e, r_1000 = %.3e", r4[10], r4[1000]));
    c.require(worst_t <= 1e-15, fmt("translation residual %.3e", worst_t));
    c.finish(fmt("Ex.4 r_10/r_1000 = %.1f, translation max r = %.1e", r4[10] / r4[1000], worst_t));
  }

  {
    Criterion c{"AC9", "moment oracle equivalence"};
    int total = 0;
    int same = 0;
    const auto corpus_measures = corpus::measures();
    for (const auto& m : corpus_measures) {
      for (int k : {1, 2}) {
        for (Region reg : {Region::Negative, Region::Positive}) {
          const bool analytic = moment(m, k, reg, true).is_finite();
          const bool probe = probe::looks_finite(m, k, reg);
          c.require(analytic == probe,
                    fmt("measure %d, k=%d: analytic %d vs probe %d", total / 4, k, analytic, probe));
          same += analytic == probe;
          ++total;
        }
      }
    }
    c.finish(fmt("%d/%d decisions agree on %zu measures", same, total, corpus_measures.size()));
  }

  {
    Criterion c{"AC10", "orbit-start independence"};
    int same = 0;
    for (const auto& r : runs) {
      std::string verdicts;
      bool consistent = true;
      std::optional<StepVerdict> first;
      for (const auto& t : r.traces) {
        if (!t.valid()) {
          consistent = false;
          verdicts += " failed";
          continue;
        }
        StepOptions so;
        so.require_bounded_y = integrability_profile(r.map.mu()).t_L1;
        const StepVerdict v = empirical_step(t, so).verdict;
        verdicts += std::string(" ") + to_string(v);
        if (first && *first != v) consistent = false;
        first = first.value_or(v);
      }
      c.require(consistent, label(r.pair) + ":" + verdicts);
      same += consistent;
    }
    c.finish(fmt("%d/%zu pairs identical across z0 in {i, 1+2i, -3+0.5i}", same, runs.size()));
  }

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
