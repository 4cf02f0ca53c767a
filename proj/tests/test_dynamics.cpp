#include <cmath>
#include <locale>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "parastep/dynamics.hpp"
#include "parastep/errors.hpp"
#include "support/golden.hpp"
#include "support/random_maps.hpp"

using namespace parastep;

namespace {

const HPoint kI(0.0, 1.0);

ParabolicMap translation(double beta = 1.0) { return {beta, MeasureSpec()}; }

// Orbit of the closed-form map z + beta + p(z).
std::vector<Complex> closed_form_orbit(int which, double beta, Complex z, std::size_t n) {
  std::vector<Complex> out{z};
  for (std::size_t k = 0; k < n; ++k) {
    z += beta + golden::closed_form_integral(which, z);
    out.push_back(z);
  }
  return out;
}

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

}  // namespace

TEST_CASE("orbit examples") {
  const OrbitTrace t = orbit(translation(), kI, 3);
  REQUIRE(t.valid());
  REQUIRE(t.points.size() == 4);
  for (int k = 0; k < 4; ++k) CHECK(t.points[k] == HPoint(k, 1.0));
  for (double d : t.steps) CHECK(d == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(t.eval_tol == doctest::Approx(kDefaultEvalTol / 3));

  const OrbitTrace e1 = orbit(golden::map(1, 0.0), kI, 2);
  CHECK(std::abs(e1.points[1].z() - Complex(0, 1.5)) <= 1e-12);
  CHECK(std::abs(e1.points[2].z() - Complex(0, 1.9)) <= 1e-12);
  CHECK(e1.args[2] == doctest::Approx(std::numbers::pi / 2));

  CHECK_THROWS_AS(orbit(translation(), kI, 0), DomainError);
}

TEST_CASE("orbits follow the closed-form iteration") {
  const std::size_t n = 10000;
  for (const auto& p : golden::pairs()) {
    const OrbitTrace t = orbit(golden::map(p.example, p.beta), kI, n);
    REQUIRE(t.valid());
    const auto ref = closed_form_orbit(p.example, p.beta, Complex(0, 1), n);
    double worst = 0.0;
    for (std::size_t k = 0; k <= n; ++k) {
      worst = std::max(worst, std::abs(t.points[k].z() - ref[k]) / std::abs(ref[k]));
    }
    INFO("example ", p.example, " beta ", p.beta);
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("overflow stops the orbit") {
  const OrbitTrace t = orbit(translation(1e299), kI, 50);
  CHECK(t.status == TraceStatus::Overflow);
  CHECK_FALSE(t.valid());
  CHECK(t.points.size() < 51);
  CHECK(t.steps.size() + 1 == t.points.size());
  CHECK_THROWS_AS(empirical_step(t), InvalidTrace);
  CHECK_THROWS_AS(pommerenke_b(t), InvalidTrace);
}

TEST_CASE("quadrature failure stops the orbit") {
  NumericOptions tiny;
  tiny.max_evals = 30;
  const OrbitTrace t = orbit(golden::map(1, 0.0), kI, 5, kDefaultEvalTol, tiny);
  CHECK(t.status == TraceStatus::QuadratureFailure);
  CHECK_FALSE(t.message.empty());
  CHECK_THROWS_AS(empirical_step(t), InvalidTrace);
}

TEST_CASE("Pommerenke estimate") {
  const auto tr = pommerenke_b(orbit(translation(), kI, 1000));
  CHECK(tr.estimate == 1.0);
  CHECK(tr.dispersion == 0.0);
  CHECK(tr.converged);

  const auto zero = pommerenke_b(orbit(golden::map(1, 0.0), kI, 10000));
  CHECK(std::abs(zero.estimate) < 1e-3);
  CHECK(zero.converged);

  // Oracle: tail mean of b_n along the closed-form orbit.
  const auto ref = closed_form_orbit(4, 0.0, Complex(0, 1), 10000);
  double mean = 0.0;
  for (std::size_t k = 9000; k < 10000; ++k) mean += (ref[k + 1].real() - ref[k].real()) / ref[k].imag();
  mean /= 1000.0;
  const auto pos = pommerenke_b(orbit(golden::map(4, 0.0), kI, 10000));
  CHECK(pos.estimate == doctest::Approx(mean).epsilon(1e-7));
  CHECK(pos.estimate > 0.2);
  CHECK(pos.converged);

  CHECK_THROWS_AS(pommerenke_b(orbit(translation(), kI, 99)), InvalidTrace);
}

TEST_CASE("empirical step examples") {
  const EmpiricalVerdict tv = empirical_step(orbit(translation(), kI, 1000));
  CHECK(tv.verdict == StepVerdict::PositiveHS);
  CHECK(tv.d_tail == doctest::Approx(1.0 / std::sqrt(5.0)).epsilon(1e-15));
  CHECK(tv.tangential == Tangency::TowardZero);
  CHECK_FALSE(tv.y_diverging);

  const EmpiricalVerdict back = empirical_step(orbit(translation(-1.0), kI, 1000));
  CHECK(back.verdict == StepVerdict::PositiveHS);
  CHECK(back.tangential == Tangency::TowardPi);

  const EmpiricalVerdict e3 = empirical_step(orbit(golden::map(3, 2.0), kI, 10000));
  CHECK(e3.verdict == StepVerdict::ZeroHS);
  CHECK(e3.y_diverging);

  StepOptions bounded;
  bounded.require_bounded_y = true;
  const EmpiricalVerdict e2 = empirical_step(orbit(golden::map(2, 0.0), kI, 10000), bounded);
  CHECK(e2.verdict == StepVerdict::PositiveHS);
  CHECK(e2.tangential == Tangency::TowardPi);
  CHECK(e2.d_tail > 1e-2);

  StepOptions window;
  window.plateau_window = 2000;
  CHECK_THROWS_AS(empirical_step(orbit(translation(), kI, 1000), window), InvalidTrace);
}

TEST_CASE("empirical verdict respects the zero threshold") {
  const OrbitTrace t = orbit(golden::map(1, 0.0), kI, 5000);
  for (double thr : {1e-2, 1e-3, 1e-4, 1e-5}) {
    StepOptions o;
    o.zero_threshold = thr;
    const EmpiricalVerdict v = empirical_step(t, o);
    if (v.verdict == StepVerdict::ZeroHS) CHECK(v.d_tail < thr);
  }
}

TEST_CASE("Schwarz-Pick monotonicity and growth of y") {
  std::vector<ParabolicMap> maps = random_maps::maps(20);
  for (const auto& p : golden::pairs()) maps.push_back(golden::map(p.example, p.beta));
  for (const auto& f : maps) {
    const OrbitTrace t = orbit(f, HPoint(0.3, 0.8), 2000);
    REQUIRE(t.valid());
    for (std::size_t k = 0; k + 1 < t.steps.size(); ++k) REQUIRE(t.steps[k + 1] <= t.steps[k] + 1e-9);
    for (std::size_t k = 0; k < t.steps.size(); ++k) REQUIRE(t.points[k + 1].y() > t.points[k].y());
  }
}

TEST_CASE("ratios of consecutive points tend to one") {
  const std::size_t n = 10000;
  for (const auto& p : golden::pairs()) {
    const OrbitTrace t = orbit(golden::map(p.example, p.beta), kI, n);
    double y_mean = 0.0;
    double z_dev = 0.0;
    for (std::size_t k = n - n / 10; k < n; ++k) {
      y_mean += t.y_ratio[k];
      z_dev = std::max(z_dev, std::abs(t.points[k + 1].z() / t.points[k].z() - 1.0));
    }
    y_mean /= static_cast<double>(n / 10);
    INFO("example ", p.example, " beta ", p.beta);
    CHECK(std::abs(y_mean - 1.0) < 1e-3);
    CHECK(z_dev < 1e-3);
  }
}

TEST_CASE("angular probe") {
  const std::vector<double> grid{10, 1e2, 1e3, 1e4, 1e5, 1e6};
  const auto zero = angular_probe(golden::map(1, 0.0), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    // Closed form: iy * (-1 / (iy + i)) = -y / (y + 1).
    CHECK(std::abs(zero[i] - Complex(-grid[i] / (grid[i] + 1.0), 0.0)) <= 1e-6);
  }
  CHECK(std::abs(zero.back() + 1.0) < 1e-3);

  const auto one = angular_probe(golden::map(1, 1.0), grid);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(std::abs(one[i]) > std::abs(one[i - 1]));
  CHECK(std::abs(one.back()) > 1e3);

  const auto tr = angular_probe(translation(), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(tr[i] == Complex(0.0, grid[i]));
  CHECK_THROWS_AS(angular_probe(translation(), {}), DomainError);
}

TEST_CASE("drift probe") {
  const std::vector<double> grid{10, 1e2, 1e3, 1e4, 1e5, 1e6};
  const auto e1 = drift_probe(golden::map(1, 0.7), grid);
  CHECK(std::abs(e1.back() - 0.7) < 1e-5);
  const auto e2 = drift_probe(golden::map(2, std::numbers::pi / 4), grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Complex z(0.0, grid[i]);
    CHECK(std::abs(e2[i] - (std::numbers::pi / 4 + golden::closed_form_integral(2, z))) <= 1e-9);
  }
  CHECK(std::abs(e2.back()) < 1e-4);
  for (const Complex& v : drift_probe(translation(), grid)) CHECK(v == Complex(1.0, 0.0));
}

TEST_CASE("Abel residual") {
  const auto tr = abel_residual(translation(), HPoint(0, 2), kI, 50);
  REQUIRE(tr.size() == 51);
  for (double r : tr) CHECK(r == 0.0);

  const auto r4 = abel_residual(golden::map(4, 0.0), HPoint(0, 2), kI, 1000);
  REQUIRE(r4.size() == 1001);
  CHECK(r4[1000] * 10.0 < r4[10]);

  const auto r1 = abel_residual(golden::map(1, 0.0), HPoint(0, 2), kI, 100);
  CHECK(r1.size() == 101);

  CHECK_THROWS_AS(abel_residual(translation(), kI, kI, 10), DomainError);
  CHECK_THROWS_AS(abel_residual(translation(), HPoint(0, 2), kI, 1), DomainError);
  CHECK_THROWS_AS(abel_residual(golden::map(1, 0.0), HPoint(1, 1e16), HPoint(0, 1e16), 5), DegenerateStep);
}

TEST_CASE("CSV output") {
  const OrbitTrace t = orbit(translation(), kI, 3);
  const std::locale old = std::locale::global(std::locale(std::locale::classic(), new CommaDecimal));
  std::ostringstream os;
  os.imbue(std::locale());
  write_csv(os, t);
  std::locale::global(old);
  const std::string csv = os.str();
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "n,x,y,d,b,y_ratio,arg");
  std::getline(in, line);
  CHECK(line.rfind("0,0,1,0.4472135954999579,1,1,1.5707963267948966", 0) == 0);
  std::getline(in, line);
  std::getline(in, line);
  std::getline(in, line);
  CHECK(line.rfind("3,3,1,,,,", 0) == 0);
  CHECK(csv.back() == '\n');
  CHECK(csv.find(';') == std::string::npos);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);
}
