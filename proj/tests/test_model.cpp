#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "npz/model.hpp"
#include "test_support.hpp"

using namespace npz;

TEST_CASE("parameter box: interior and closed boundary are admissible") {
  CHECK(is_valid({0.25, 0.5, 1.0, 0.75}));
  CHECK(is_valid({0.0, 0.0, 0.0, 0.0}));
  CHECK(is_valid({1.0, 1.0, 2.0, 0.0}));    // a=1 pins d to 0, c may reach 1+a
  CHECK(is_valid({0.0, 0.0, -1.0, -1.0}));  // lower corners c=-(1-a), d=-(1-b)
  CHECK(is_valid({0.3, 0.2, -0.7, 0.7}));   // c=-(1-a), d=1-a exactly

  const auto rep = validate_parameters({0.25, 0.5, 1.0, 0.75});
  CHECK(rep.valid);
  CHECK(rep.violations.empty());
}

TEST_CASE("parameter box: every violated bound is reported by name") {
  SUBCASE("a below zero") {
    const auto r = validate_parameters({-0.1, 0.5, 0.0, 0.0});
    CHECK_FALSE(r.valid);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("a >= 0") != std::string::npos);
  }
  SUBCASE("c above 1+a") {
    const auto r = validate_parameters({0.2, 0.5, 1.3, 0.0});
    CHECK_FALSE(r.valid);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("c <= 1+a") != std::string::npos);
  }
  SUBCASE("d above 1-a") {
    const auto r = validate_parameters({0.4, 0.5, 0.2, 0.7});
    CHECK_FALSE(r.valid);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("d <= 1-a") != std::string::npos);
  }
  SUBCASE("d below -(1-b)") {
    const auto r = validate_parameters({0.2, 0.4, 0.2, -0.7});
    CHECK_FALSE(r.valid);
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("d >= -(1-b)") != std::string::npos);
  }
  SUBCASE("several bounds at once") {
    const auto r = validate_parameters({-1.0, 2.0, 5.0, 5.0});
    CHECK_FALSE(r.valid);
    CHECK(r.violations.size() == 4);
  }
  SUBCASE("NaN never validates") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(is_valid({nan, 0.5, 0.0, 0.0}));
    CHECK_FALSE(validate_parameters({0.5, nan, 0.0, 0.0}).valid);
  }
  SUBCASE("require_valid throws std::invalid_argument with the bound in the message") {
    CHECK_NOTHROW(require_valid({0.25, 0.5, 1.0, 0.75}));
    try {
      require_valid({-0.1, 0.0, 0.0, 0.0});
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("a >= 0") != std::string::npos);
    }
  }
}

TEST_CASE("simplex-invariance region: wider uptake bound c <= (1+sqrt(a))^2") {
  // the whole stochastic box sits inside the invariance region
  CHECK(preserves_simplex({0.25, 0.5, 1.0, 0.75}));
  CHECK(preserves_simplex({1.0, 1.0, 2.0, 0.0}));
  CHECK(preserves_simplex({0.0, 0.0, -1.0, -1.0}));

  // the strong-uptake example: outside the box, inside the region
  const ModelParameters spiral{1.0 / 6.0, 1.0 / 3.0, 4.0 / 3.0, 2.0 / 3.0};
  CHECK_FALSE(is_valid(spiral));
  CHECK(validate_parameters(spiral).violations.size() == 1);
  CHECK(validate_parameters(spiral).violations[0].find("c <= 1+a") != std::string::npos);
  CHECK(preserves_simplex(spiral));
  CHECK(validate_invariance(spiral).valid);

  SUBCASE("the relaxed bound is exact") {
    const double a = 0.25;
    const double cmax = (1.0 + std::sqrt(a)) * (1.0 + std::sqrt(a));  // 2.25
    CHECK(preserves_simplex({a, 0.1, cmax, 0.0}));
    CHECK_FALSE(preserves_simplex({a, 0.1, cmax + 1e-9, 0.0}));
    const auto r = validate_invariance({a, 0.1, cmax + 1e-9, 0.0});
    REQUIRE(r.violations.size() == 1);
    CHECK(r.violations[0].find("c <= (1+sqrt(a))^2") != std::string::npos);
  }
  SUBCASE("all other bounds stay as in the box") {
    CHECK_FALSE(preserves_simplex({-0.1, 0.5, 0.0, 0.0}));
    CHECK_FALSE(preserves_simplex({0.4, 0.5, 0.2, 0.7}));    // d > 1-a
    CHECK_FALSE(preserves_simplex({0.2, 0.4, 0.2, -0.7}));   // d < -(1-b)
    CHECK_FALSE(preserves_simplex({0.2, 0.4, -0.9, 0.0}));   // c < -(1-a)
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(preserves_simplex({nan, 0.0, 0.0, 0.0}));
    CHECK_FALSE(preserves_simplex({0.0, 0.0, nan, 0.0}));
  }
  SUBCASE("require_simplex_preserving names the failed bound") {
    CHECK_NOTHROW(require_simplex_preserving(spiral));
    try {
      require_simplex_preserving({0.0, 0.0, 1.5, 0.0});  // (1+sqrt(0))^2 = 1
      FAIL("expected invalid_argument");
    } catch (const std::invalid_argument& e) {
      CHECK(std::string(e.what()).find("c <= (1+sqrt(a))^2") != std::string::npos);
    }
  }
  SUBCASE("the quadratic form stays box-gated: no stochastic tensor out there") {
    CHECK_THROWS_AS(derive_coefficients(spiral), std::invalid_argument);
  }
}

TEST_CASE("make_point: exact, clamped, renormalised, rejected") {
  SUBCASE("exact coordinates pass through unchanged") {
    const auto s = make_point(0.1, 0.6, 0.3);
    CHECK(s.x == 0.1);
    CHECK(s.y == 0.6);
    CHECK(s.z == 0.3);
  }
  SUBCASE("negative noise within 1e-12 clamps to zero") {
    const auto s = make_point(-1e-13, 0.5, 0.5);
    CHECK(s.x == 0.0);
    CHECK(s.y == 0.5);
    CHECK(s.z == 0.5);
  }
  SUBCASE("negative coordinate beyond the clamp band throws") {
    CHECK_THROWS_AS(make_point(-1e-6, 0.5, 0.5), std::invalid_argument);
  }
  SUBCASE("sum drift in (1e-12, 1e-9] renormalises to an exact unit sum") {
    const auto s = make_point(0.3, 0.3, 0.4 + 1e-10);
    CHECK(s.x + s.y + s.z == 1.0);
    CHECK(std::abs(s.x - 0.3) <= 1e-9);
    CHECK(std::abs(s.y - 0.3) <= 1e-9);
    CHECK(std::abs(s.z - 0.4) <= 1e-9);
  }
  SUBCASE("sum drift beyond 1e-9 throws") {
    CHECK_THROWS_AS(make_point(0.5, 0.5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(make_point(0.3, 0.3, 0.4 + 1e-7), std::invalid_argument);
  }
  SUBCASE("NaN coordinate throws") {
    CHECK_THROWS_AS(make_point(std::numeric_limits<double>::quiet_NaN(), 0.5, 0.5),
                    std::invalid_argument);
  }
  SUBCASE("coordinate above one throws") {
    CHECK_THROWS_AS(make_point(1.1, 0.0, 0.0), std::invalid_argument);
  }
}

TEST_CASE("distance is the max-norm on coordinates") {
  const auto p = make_point(0.1, 0.6, 0.3);
  const auto q = make_point(0.2, 0.45, 0.35);
  CHECK(distance(p, q) == doctest::Approx(0.15));  // the y gap dominates
  CHECK(distance(q, p) == distance(p, q));
  CHECK(distance(p, p) == 0.0);
}

TEST_CASE("heredity coefficients match the closed forms") {
  const ModelParameters p{0.25, 0.5, 1.0, 0.75};
  const auto t = derive_coefficients(p);

  // produced species 1: x' = x(1 - b + d y)
  CHECK(t.at(1, 1, 1) == 0.5);    // 1-b
  CHECK(t.at(1, 2, 1) == 0.625);  // (1-b+d)/2
  CHECK(t.at(1, 3, 1) == 0.25);   // (1-b)/2
  CHECK(t.at(2, 2, 1) == 0.0);
  CHECK(t.at(2, 3, 1) == 0.0);
  CHECK(t.at(3, 3, 1) == 0.0);
  // produced species 2: y' = y(1 - a - d x + c z)
  CHECK(t.at(2, 2, 2) == 0.75);   // 1-a
  CHECK(t.at(1, 2, 2) == 0.0);    // (1-a-d)/2
  CHECK(t.at(2, 3, 2) == 0.875);  // (1-a+c)/2
  CHECK(t.at(1, 1, 2) == 0.0);
  CHECK(t.at(1, 3, 2) == 0.0);
  CHECK(t.at(3, 3, 2) == 0.0);
  // produced species 3: z' = z(1 - c y) + a y + b x
  CHECK(t.at(1, 1, 3) == 0.5);    // b
  CHECK(t.at(1, 2, 3) == 0.375);  // (a+b)/2
  CHECK(t.at(1, 3, 3) == 0.75);   // (1+b)/2
  CHECK(t.at(2, 2, 3) == 0.25);   // a
  CHECK(t.at(2, 3, 3) == 0.125);  // (1+a-c)/2
  CHECK(t.at(3, 3, 3) == 1.0);

  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) CHECK(t.at(i, j, k) == t.at(j, i, k));

  CHECK_THROWS_AS(derive_coefficients({-0.1, 0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("stochastic conditions hold across the admissible box") {
  std::mt19937 rng(20260814);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = npz::testing::random_valid(rng);
    CAPTURE(p.a);
    CAPTURE(p.b);
    CAPTURE(p.c);
    CAPTURE(p.d);
    const auto rep = check_stochastic_conditions(derive_coefficients(p));
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
  }
}

TEST_CASE("stochastic checker reports negativity, asymmetry and bad row sums") {
  auto t = derive_coefficients({0.25, 0.5, 1.0, 0.75});
  t.at(1, 2, 1) = -0.1;  // negative, asymmetric against (2,1,1), breaks the row sum
  const auto rep = check_stochastic_conditions(t);
  CHECK_FALSE(rep.ok);
  CHECK(rep.violations.size() >= 3);
}

TEST_CASE("conservation order: both plankton coordinates iff recycling is active") {
  SUBCASE("a + b > 0 gives order exactly two") {
    const auto t = derive_coefficients({0.25, 0.5, 1.0, 0.75});
    CHECK(check_l_volterra(t, 2));
    CHECK_FALSE(check_l_volterra(t, 1));  // nitrogen feeds back into phytoplankton
    CHECK_FALSE(check_l_volterra(t, 3));  // recycling produces nitrogen from plankton
  }
  SUBCASE("a = b = 0 makes the whole map conservative") {
    const auto t = derive_coefficients({0.0, 0.0, 0.5, 0.3});
    CHECK(check_l_volterra(t, 3));
    CHECK_FALSE(check_l_volterra(t, 2));
    CHECK_FALSE(check_l_volterra(t, 1));
  }
  SUBCASE("order outside 1..3 throws") {
    const auto t = derive_coefficients({0.25, 0.5, 1.0, 0.75});
    CHECK_THROWS_AS(check_l_volterra(t, 0), std::invalid_argument);
    CHECK_THROWS_AS(check_l_volterra(t, 4), std::invalid_argument);
  }
}
