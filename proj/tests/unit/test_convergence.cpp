#include <doctest.h>

#include <cmath>
#include <functional>

#include "pint/convergence.hpp"
#include "pint/errors.hpp"
#include "pint/tableau.hpp"

using namespace pint;

namespace {

struct Scan {
  double sup = 0.0;
  double at = 0.0;
};

// Plain log-grid maximum, no refinement.
Scan dense_scan(const std::function<double(double)>& psi, double lo, double hi, int n) {
  Scan best;
  for (int i = 0; i < n; ++i) {
    const double s = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    const double v = psi(s);
    if (v > best.sup) best = {v, s};
  }
  return best;
}

Scan kappa_scan(double alpha, int n = 1000000) {
  return dense_scan([alpha](double s) { return std::abs(((1.0 + s) * std::exp(-alpha * s) - 1.0) / s); },
                    1e-6, 60.0, n);
}

Scan factor_scan(const RationalFn& r, int J, int n) {
  return dense_scan(
      [&](double s) { return std::abs(((1.0 + s) * std::pow(r(-s / J), J) - 1.0) / s); }, 1e-8,
      std::max(1e4, 100.0 * J), n);
}

}  // namespace

TEST_CASE("kappa at alpha = 1") {
  const KappaValue k = kappa(1.0);
  CHECK(k.kappa == doctest::Approx(0.2984).epsilon(5e-4 / 0.2984));
  REQUIRE(k.argsup_s.has_value());
  CHECK(std::abs(*k.argsup_s - 1.793) < 5e-3);
  const Scan oracle = kappa_scan(1.0);
  CHECK(k.kappa >= oracle.sup - 1e-12);
  CHECK(k.kappa - oracle.sup < 1e-8);
}

TEST_CASE("kappa at alpha = 1.02") {
  const KappaValue k = kappa(1.02);
  CHECK(std::abs(k.kappa - 0.3078) < 5e-4);
  CHECK(k.kappa < 0.31);
  REQUIRE(k.argsup_s.has_value());
  CHECK(std::abs(*k.argsup_s - 1.715) < 5e-3);
  CHECK(std::abs(k.kappa - kappa_scan(1.02).sup) < 1e-8);
}

TEST_CASE("kappa endpoints are limits at zero") {
  const KappaValue k0 = kappa(0.0);
  CHECK(k0.kappa == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(k0.zero_limit());

  const KappaValue k2 = kappa(2.0);
  CHECK(k2.kappa == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(k2.zero_limit());
  const Scan oracle = kappa_scan(2.0);
  CHECK(oracle.sup <= 1.0 + 1e-9);
  CHECK(oracle.at < 1e-5);

  CHECK_THROWS_AS(kappa(-0.1), DomainError);
  CHECK_THROWS_AS(kappa(2.1), DomainError);
}

TEST_CASE("kappa curve") {
  const auto c = kappa_curve(3);
  REQUIRE(c.size() == 3);
  CHECK(c[0].alpha == 0.0);
  CHECK(c[1].alpha == 1.0);
  CHECK(c[2].alpha == 2.0);
  CHECK(c[0].kappa == doctest::Approx(1.0));
  CHECK(std::abs(c[1].kappa - 0.2984) < 5e-4);
  CHECK(c[2].kappa == doctest::Approx(1.0).epsilon(1e-9));
  CHECK_THROWS_AS(kappa_curve(1), DomainError);
}

TEST_CASE("property: kappa stays under its envelope") {
  for (int i = 0; i < 200; ++i) {
    const double alpha = 2.0 * (i + 0.5) / 200.0;
    const double bound = alpha >= 1.0 ? std::exp(alpha - 2.0) : std::max(std::exp(alpha - 2.0), 1.0 - alpha);
    CHECK(kappa(alpha).kappa <= bound + 1e-9);
    CHECK(kappa_envelope(alpha) == doctest::Approx(bound));
  }
}

TEST_CASE("property: kappa equals 1 - alpha on [0, 0.69]") {
  for (int i = 0; i <= 69; ++i) {
    const double alpha = i / 100.0;
    CHECK(std::abs(kappa(alpha).kappa - (1.0 - alpha)) <= 1e-6);
  }
}

TEST_CASE("backward euler factor at J = 2 has a closed form") {
  // ((1+s)/(1+s/2)^2 - 1)/s = -s/(4 (1+s/2)^2), maximal at s = 2 with value 1/8.
  const FactorReport f = parareal_factor(builtin("backward-euler").r, 2, "backward-euler");
  CHECK(f.phi == doctest::Approx(0.125).epsilon(1e-10));
  CHECK(f.argmax_s == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(f.J == 2);
  CHECK(f.grid_points == kFactorGridPoints);
}

TEST_CASE("two-stage factor") {
  const RationalFn r = builtin("lobatto3c-2").r;
  CHECK(parareal_factor(r, 2).phi <= 0.31);

  const FactorReport one = parareal_factor(r, 1, "lobatto3c-2");
  const Scan oracle = factor_scan(r, 1, 1000000);
  CHECK(std::abs(one.phi - oracle.sup) < 1e-8);
  CHECK(one.argmax_s > 0.0);
}

TEST_CASE("property: refinement never loses the grid maximum") {
  for (const auto& name : builtin_names()) {
    const RationalFn r = builtin(name).r;
    for (int J : {1, 2, 3, 5, 10, 40}) {
      CAPTURE(name);
      CAPTURE(J);
      const FactorReport f = parareal_factor(r, J);
      const Scan oracle = factor_scan(r, J, 100000);
      CHECK(f.phi >= oracle.sup - 1e-12);
      CHECK(f.argmax_s > 0.0);
    }
  }
}

TEST_CASE("divergent factor") {
  const RationalFn explicit_euler(Polynomial{1.0, 1.0});
  CHECK_THROWS_AS(parareal_factor(explicit_euler, 1), DivergentFactor);
}

TEST_CASE("thresholds") {
  for (const char* name : {"lobatto3c-2", "lobatto3c-3", "lobatto3c-4"}) {
    CAPTURE(name);
    const ThresholdReport t = find_threshold(builtin(name).r, 0.31, 64);
    CHECK(t.j_star == 2);
    CHECK(t.table.size() == 63);
  }
  const RationalFn cal = builtin("calahan").r;
  const ThresholdReport t = find_threshold(cal, 0.31, 64);
  int oracle = 0;
  for (int J = 64; J >= 2; --J) {
    if (factor_scan(cal, J, 40000).sup > 0.31) break;
    oracle = J;
  }
  CHECK(t.j_star == oracle);
  CHECK(t.j_star == 4);
  CHECK_THROWS_AS(find_threshold(cal, 0.31, 3), NoThreshold);
}

TEST_CASE("threaded factor table matches the serial one") {
  const RationalFn r = builtin("lobatto3c-3").r;
  const auto serial = factor_table(r, 2, 12, "lobatto3c-3", 1);
  const auto threaded = factor_table(r, 2, 12, "lobatto3c-3", 3);
  REQUIRE(serial.size() == threaded.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].J == threaded[i].J);
    CHECK(serial[i].phi == threaded[i].phi);
  }
}

TEST_CASE("property: two-stage factor approaches kappa_1") {
  const RationalFn r = builtin("lobatto3c-2").r;
  double prev = 1.0;
  for (int J : {8, 16, 32, 64, 128}) {
    const double gap = std::abs(parareal_factor(r, J).phi - 0.2984);
    CHECK((gap < prev || gap <= 1e-4));
    prev = gap;
  }
}

TEST_CASE("sandwich inequalities") {
  const double s_star[] = {3.2, 2.0, 6.8};
  for (int m = 2; m <= 4; ++m) {
    const SandwichReport rep = sandwich_check(builtin("lobatto3c-" + std::to_string(m)).r, 0.69, 1.02, s_star[m - 2]);
    CHECK(rep.pass);
    CHECK(rep.worst_margin >= 0.0);
  }
  CHECK_FALSE(sandwich_check(builtin("backward-euler").r, 0.69, 1.02, 10.0).pass);
  CHECK_THROWS_AS(sandwich_check(builtin("lobatto3c-2").r, 1.02, 0.69, 1.0), DomainError);
}

TEST_CASE("tail bounds") {
  CHECK(tail_sup(builtin("lobatto3c-2").r, 3.2).sup < 0.11);
  CHECK(tail_sup(builtin("lobatto3c-2").r, 3.2).sup == doctest::Approx(0.1073).epsilon(1e-3));
  CHECK(tail_sup(builtin("lobatto3c-3").r, 2.0).sup <= 0.15);
  CHECK(tail_sup(builtin("lobatto3c-4").r, 6.8).sup <= 0.02);
}

TEST_CASE("profile") {
  const auto prof = factor_profile(builtin("lobatto3c-2").r, 2, 101);
  REQUIRE(prof.size() == 101);
  CHECK(prof.front().first == doctest::Approx(1e-4));
  CHECK(prof.back().first == doctest::Approx(1e3));
  for (const auto& [s, v] : prof) CHECK(v <= parareal_factor(builtin("lobatto3c-2").r, 2).phi + 1e-12);
}
