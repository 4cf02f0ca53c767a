#pragma once

// Twenty measures covering every component kind and both sides of each
// integrability threshold (kept away from the borderline exponents).

#include <vector>

#include "parastep/measure.hpp"
#include "support/golden.hpp"

namespace corpus {

using namespace parastep;

inline Density density(const char* rho, double lo, double hi, std::optional<double> tail_neg,
                       std::optional<double> tail_pos) {
  Density d;
  d.rho = parse(rho);
  d.lower = lo;
  d.upper = hi;
  d.tail_neg = tail_neg;
  d.tail_pos = tail_pos;
  return d;
}

inline AtomTrain train(double t0, double step, std::optional<std::size_t> count, const char* w, double r,
                       bool mirrored) {
  AtomTrain tr;
  tr.t0 = t0;
  tr.step = step;
  tr.count = count;
  tr.weight = parse(w);
  tr.decay = r;
  tr.mirrored = mirrored;
  return tr;
}

inline std::vector<MeasureSpec> measures() {
  constexpr double inf = golden::kInf;
  std::vector<MeasureSpec> out;
  out.push_back(golden::ex1_measure());
  out.push_back(golden::ex2_measure());
  out.push_back(golden::ex3_measure());
  out.push_back(golden::ex4_measure());
  out.push_back(reflect(golden::ex2_measure()));
  out.push_back(reflect(golden::ex4_measure()));
  out.push_back(MeasureSpec({density("(1+t^2)^-1.5", -inf, inf, 3.0, 3.0)}, true));
  out.push_back(MeasureSpec({density("1", -2, 3, std::nullopt, std::nullopt)}, false));
  out.push_back(MeasureSpec({density("(1+t^2)^-1.25", 0, inf, std::nullopt, 2.5)}, false));
  out.push_back(MeasureSpec({density("(1+abs(t))^-3.5", -inf, inf, 3.5, 3.5)}, true));
  out.push_back(MeasureSpec({Atom{-3, 1}, Atom{5, 2}}, false));
  out.push_back(MeasureSpec({train(1, 2, 50, "1/t", 1.0, false)}, false));
  out.push_back(MeasureSpec({train(1, 1, std::nullopt, "t^-2.5", 2.5, false)}, false));
  out.push_back(MeasureSpec({train(-1, -1, std::nullopt, "abs(t)^-4", 4.0, false)}, false));
  out.push_back(MeasureSpec({train(1, 2, std::nullopt, "(1+t^2)^-0.75", 1.5, true)}, true));
  out.push_back(MeasureSpec({golden::ex1_measure().components()[0], Atom{10, 0.5}}, false));
  out.push_back(MeasureSpec({density("1/((1+t^2)*log(2+t^2)^0.5)", -inf, inf, 2.0, 2.0)}, true));
  out.push_back(MeasureSpec({density("t^-1.8", 1, inf, std::nullopt, 1.8)}, false));
  out.push_back(MeasureSpec({train(2, 3, std::nullopt, "t^-3.6", 3.6, false)}, false));
  const Density half = density("(1+t)^-3", 0, inf, std::nullopt, 3.0);
  out.push_back(MeasureSpec({half, reflect(Component(half)), Atom{-1, 0.25}, Atom{1, 0.25}}, true));
  return out;
}

}  // namespace corpus
