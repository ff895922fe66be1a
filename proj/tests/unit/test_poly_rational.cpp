#include <doctest.h>

#include <cmath>
#include <complex>
#include <limits>
#include <random>

#include "pint/errors.hpp"
#include "pint/polynomial.hpp"
#include "pint/rational.hpp"
#include "pint/roots.hpp"

using namespace pint;
using cd = std::complex<double>;

namespace {

RationalFn lobatto2() { return RationalFn(Polynomial{2.0}, Polynomial{2.0, 2.0, 1.0}); }
RationalFn lobatto3() { return RationalFn(Polynomial{24.0, -6.0}, Polynomial{24.0, 18.0, 6.0, 1.0}); }

double rel(cd a, cd b) { return std::abs(a - b) / std::max(1e-300, std::abs(b)); }

Polynomial random_poly(std::mt19937& gen, int degree) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<double> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = u(gen);
  c.back() = 1.0 + std::abs(c.back());
  return Polynomial(c);
}

}  // namespace

TEST_CASE("polynomial is kept canonical") {
  Polynomial p{1.0, 2.0, 0.0, 0.0};
  CHECK(p.degree() == 1);
  CHECK(p.coeffs().size() == 2);
  CHECK(Polynomial{0.0, 0.0}.is_zero());
  CHECK(Polynomial{}.degree() == -1);
  CHECK(sub(p, p).is_zero());
  CHECK((Polynomial{1.0, 1.0} * Polynomial{1.0, 1.0}) == Polynomial{1.0, 2.0, 1.0});
  CHECK(Polynomial{3.0, 2.0, 1.0}.derivative() == Polynomial{2.0, 2.0});
}

TEST_CASE("horner evaluation") {
  const Polynomial p{1.0, -3.0, 0.0, 2.0};
  CHECK(p(2.0) == doctest::Approx(1.0 - 6.0 + 16.0));
  const cd z(0.5, -1.5);
  CHECK(std::abs(p(z) - (1.0 - 3.0 * z + 2.0 * z * z * z)) < 1e-14);
}

TEST_CASE("rational evaluation examples") {
  CHECK(lobatto2()(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  const double s = 3.2;
  CHECK(lobatto2()(s) == doctest::Approx(2.0 / (s * s + 2.0 * s + 2.0)).epsilon(1e-14));
  CHECK(lobatto2()(s) == doctest::Approx(0.1073).epsilon(1e-3));

  const double s5 = 7.235;
  const double direct = (24.0 - 6.0 * s5) / (s5 * s5 * s5 + 6.0 * s5 * s5 + 18.0 * s5 + 24.0);
  CHECK(lobatto3()(s5) == doctest::Approx(direct).epsilon(1e-14));
  CHECK(lobatto3()(s5) == doctest::Approx(-0.0229).epsilon(5e-3));
}

TEST_CASE("evaluation at a pole throws") {
  const RationalFn f(Polynomial{1.0}, Polynomial{0.0, 1.0});
  CHECK_THROWS_AS(f(0.0), PoleError);
  CHECK_THROWS_AS(f(cd(0.0, 0.0)), PoleError);
  CHECK_NOTHROW(f(1e-200));
  CHECK_THROWS_AS(RationalFn(Polynomial{1.0}, Polynomial{}), DomainError);
}

TEST_CASE("value at infinity") {
  CHECK(lobatto2().value_at_infinity() == 0.0);
  CHECK(RationalFn(Polynomial{1.0, 1.0}, Polynomial{1.0, 1.0}).value_at_infinity() == 1.0);
  CHECK(RationalFn(Polynomial{0.0, 0.0, 3.0}, Polynomial{1.0, 2.0}).value_at_infinity() ==
        std::numeric_limits<double>::infinity());
  CHECK(RationalFn(Polynomial{0.0, 0.0, -3.0}, Polynomial{1.0, 2.0}).value_at_infinity() ==
        -std::numeric_limits<double>::infinity());
}

TEST_CASE("arithmetic examples") {
  const RationalFn inv(Polynomial{1.0}, Polynomial{1.0, 1.0});
  const RationalFn twice = scale(inv, 2.0);
  CHECK(twice.num() == Polynomial{2.0});
  CHECK(twice.den() == Polynomial{1.0, 1.0});

  const RationalFn sq = mul(inv, inv);
  CHECK(sq.num() == Polynomial{1.0});
  CHECK(sq.den() == Polynomial{1.0, 2.0, 1.0});

  // r(-s) at s/J for J = 2: 2 / ((s/2)^2 + s + 2)
  const RationalFn half = lobatto2().compose_affine(0.5, 0.0);
  CHECK(half.num() == Polynomial{2.0});
  CHECK(half.den() == Polynomial{2.0, 1.0, 0.25});

  const RationalFn sum = add(inv, inv);
  CHECK(sum(3.0) == doctest::Approx(0.5));
}

TEST_CASE("degree cap") {
  const Polynomial x{0.0, 1.0};
  CHECK(pow(x, 64).degree() == 64);
  CHECK_THROWS_AS(pow(x, 65), DegreeOverflow);
  CHECK_THROWS_AS(mul(Polynomial::monomial(40), Polynomial::monomial(30)), DegreeOverflow);
  CHECK_NOTHROW(mul(Polynomial::monomial(40), Polynomial::monomial(30), 80));
}

TEST_CASE("real roots") {
  SUBCASE("cubic from the three-stage tail") {
    const Polynomial p{-48.0, -24.0, -3.0, 1.0};
    const auto roots = real_roots_in(p, 4.0, 20.0, 1e-12);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(7.235).epsilon(1e-4));
  }
  SUBCASE("s^2 - 1") {
    const auto roots = real_roots_in(Polynomial{-1.0, 0.0, 1.0}, 0.0, 2.0, 1e-13);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-13));
  }
  SUBCASE("quintic from the four-stage tail") {
    const Polynomial p{-5400.0, -1800.0, -60.0, 60.0, 9.0, -1.0};
    const auto roots = real_roots_in(p, 10.5, 20.0, 1e-12);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0] == doctest::Approx(12.28).epsilon(1e-3));
  }
  SUBCASE("several roots come back sorted") {
    const Polynomial p = Polynomial{-1.0, 1.0} * Polynomial{-2.0, 1.0} * Polynomial{-3.0, 1.0};
    const auto roots = real_roots_in(p, 0.0, 4.0, 1e-13);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(1.0));
    CHECK(roots[1] == doctest::Approx(2.0));
    CHECK(roots[2] == doctest::Approx(3.0));
  }
  SUBCASE("no roots") { CHECK(real_roots_in(Polynomial{1.0, 0.0, 1.0}, -5.0, 5.0, 1e-12).empty()); }
  SUBCASE("bad interval") { CHECK_THROWS_AS(real_roots_in(Polynomial{1.0, 1.0}, 1.0, 0.0, 1e-12), DomainError); }
}

TEST_CASE("property: roots satisfy the residual bound") {
  std::mt19937 gen(7);
  const double tol = 1e-10;
  for (int trial = 0; trial < 50; ++trial) {
    const Polynomial p = random_poly(gen, 2 + trial % 6);
    double scale = 1.0;
    for (double c : p.coeffs()) scale = std::max(scale, std::abs(c));
    for (double root : real_roots_in(p, -5.0, 5.0, tol)) {
      const bool residual_ok = std::abs(p(root)) <= tol * scale;
      const bool bracket_ok = p(root - tol) * p(root + tol) <= 0.0;
      CHECK((residual_ok || bracket_ok));
    }
  }
}

TEST_CASE("property: evaluation is multiplicative") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalFn f(random_poly(gen, 1 + trial % 4), random_poly(gen, 2 + trial % 3));
    const RationalFn g(random_poly(gen, trial % 3), random_poly(gen, 1 + trial % 5));
    const double radius = std::pow(10.0, 3.0 * std::abs(u(gen)));
    const cd z = radius * std::polar(1.0, 3.14159 * u(gen));
    cd fz, gz;
    try {
      fz = f(z);
      gz = g(z);
    } catch (const PoleError&) {
      continue;
    }
    CHECK(rel(mul(f, g)(z), fz * gz) < 1e-12);
  }
}

TEST_CASE("property: compose_affine matches evaluation at the mapped point") {
  std::mt19937 gen(13);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const RationalFn f(random_poly(gen, trial % 4), random_poly(gen, 1 + trial % 4));
    const double a = u(gen), b = u(gen);
    const cd z(u(gen), u(gen));
    cd expected;
    try {
      expected = f(a * z + b);
    } catch (const PoleError&) {
      continue;
    }
    CHECK(rel(f.compose_affine(a, b)(z), expected) < 1e-12);
  }
}

TEST_CASE("property: value at infinity matches large arguments") {
  std::mt19937 gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    const int dn = trial % 4;
    const RationalFn f(random_poly(gen, dn), random_poly(gen, dn + trial % 2));
    const double limit = f.value_at_infinity();
    REQUIRE(std::isfinite(limit));
    const double tol = 1e-4 * std::max(1.0, std::abs(limit));
    CHECK(std::abs(f(1e6) - limit) <= tol);
    CHECK(std::abs(f(1e8) - limit) <= tol);
  }
}
