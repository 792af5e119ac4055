#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "oracles.hpp"
#include "sfebound/bound_engine.hpp"

using namespace sfebound;

TEST_CASE("bob_lower_bound") {
  // a = 1/|Y| leaves Bob needing certainty
  CHECK(bob_lower_bound(0.5, 2) == 1.0);
  CHECK(bob_lower_bound(1.0 / 3.0, 3) == 1.0);
  CHECK(bob_lower_bound(1.0 / 7.0, 7) == 1.0);
  // definition evaluated directly
  for (std::int64_t y : {2, 3, 5}) {
    for (double a : {0.6, 0.75, 0.9, 1.0}) {
      if (a * static_cast<double>(y) < 1.0) continue;
      const double t = 1.0 / (static_cast<double>(y) * a);
      const double expected = t - 2.0 * static_cast<double>(y - 1) * std::sqrt(1.0 - t);
      CHECK(bob_lower_bound(a, y) == doctest::Approx(expected).epsilon(1e-14));
    }
  }
  // vacuous values are returned as they are
  CHECK(bob_lower_bound(1.0, 3) < 0.0);
  CHECK_THROWS_AS(bob_lower_bound(0.2, 2), std::domain_error);
  CHECK_THROWS_AS(bob_lower_bound(0.5, 0), std::domain_error);
}

TEST_CASE("the curve in both parametrizations") {
  const Rational b(1, 4);
  CHECK(cb_from_ca(1.0, b, 3) == 4.0);
  for (double c : {1.0001, 1.01, 1.05, 1.2}) {
    CHECK(cb_from_ca(c, b, 3) == doctest::Approx(oracles::curve_value(c, 0.25, 3)).epsilon(1e-13));
    const double s = std::sqrt(1.0 - 1.0 / c);
    CHECK(cb_from_transformed(s, b, 3) == doctest::Approx(cb_from_ca(c, b, 3)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(cb_from_ca(0.99, b, 3), std::domain_error);
  CHECK_THROWS_AS(cb_from_transformed(1.0, b, 3), std::domain_error);
  CHECK_THROWS_AS(cb_from_ca(1.1, Rational(0), 3), std::domain_error);
}

TEST_CASE("fixed point matches high-precision references") {
  for (const auto& ref : oracles::reference_constants()) {
    CAPTURE(ref.name);
    const auto fp = solve_fixed_point(Rational(ref.b_num, ref.b_den), ref.y_size);
    CHECK(fp.c == doctest::Approx(ref.c).epsilon(1e-14));
    CHECK(fp.epsilon == doctest::Approx(ref.epsilon).epsilon(1e-12));
    CHECK(std::abs(fp.residual) <= 1e-14);
    CHECK(fp.warnings.empty());
  }
}

TEST_CASE("fixed point agrees with a direct solve in c") {
  for (std::int64_t den = 2; den <= 64; den *= 2) {
    for (std::int64_t y = 2; y <= 12; ++y) {
      const Rational b(1, den);
      const auto fp = solve_fixed_point(b, y);
      const long double direct = oracles::fixed_point_in_c(1.0L / static_cast<long double>(den), y);
      CAPTURE(den);
      CAPTURE(y);
      if (fp.epsilon >= 1e-6) {
        CHECK(static_cast<double>(direct - 1.0L) == doctest::Approx(fp.epsilon).epsilon(1e-9));
      }
      CHECK(fp.c == doctest::Approx(static_cast<double>(direct)).epsilon(1e-12));
    }
  }
}

TEST_CASE("the root is a fixed point of the curve") {
  for (const auto& ref : oracles::reference_constants()) {
    const Rational b(ref.b_num, ref.b_den);
    const auto fp = solve_fixed_point(b, ref.y_size);
    CAPTURE(ref.name);
    CHECK(cb_from_ca(fp.c, b, ref.y_size) == doctest::Approx(fp.c).epsilon(1e-12));
    CHECK(fp.c > 1.0);
    CHECK(fp.c < b.reciprocal_double());
  }
}

TEST_CASE("extreme scale: millionaire with n = 10^9") {
  const Rational b(2, 1'000'000'000);
  const std::int64_t y = 999'999'999;
  const auto fp = solve_fixed_point(b, y);
  CHECK(fp.epsilon == doctest::Approx(oracles::kMillionaireBillionEpsilon).epsilon(1e-9));
  CHECK(std::abs(fp.residual) <= 1e-14);
  // c itself rounds to 1, so the fixed-point property is checked in s
  CHECK(cb_from_transformed(fp.s, b, y) == doctest::Approx(1.0 + fp.epsilon).epsilon(1e-6));
}

TEST_CASE("epsilon never underflows to zero while 0 < b_rand < 1") {
  for (std::int64_t n : std::initializer_list<std::int64_t>{10, 1000, 100'000, 10'000'000, 1'000'000'000, 1'000'000'000'000}) {
    const auto fp = solve_fixed_point(Rational(2, n), n - 1);
    CAPTURE(n);
    CHECK(fp.epsilon > 0.0);
    CHECK(std::abs(fp.residual) <= 1e-14);
  }
}

TEST_CASE("solver domain") {
  CHECK_THROWS_AS(solve_fixed_point(Rational(1), 2), std::domain_error);
  CHECK_THROWS_AS(solve_fixed_point(Rational(0), 2), std::domain_error);
  CHECK_THROWS_AS(solve_fixed_point(Rational(1, 2), 0), std::domain_error);
  // |Y| = 1: the curve is (1/b)/c and the root is sqrt(1/b)
  const auto fp = solve_fixed_point(Rational(1, 4), 1);
  CHECK(fp.c == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("bound reports") {
  for (const auto& ref : oracles::reference_constants()) {
    const auto task = make_family(ref.params);
    const auto r = bound_report(task);
    CAPTURE(ref.name);
    CHECK(r.b_rand == Rational(ref.b_num, ref.b_den));
    CHECK(r.a_rand == Rational(1, ref.y_size));
    CHECK_FALSE(r.completely_insecure);
    CHECK(r.bob_bound == doctest::Approx(ref.bob_bound).epsilon(1e-13));
    CHECK(r.alice_bound == doctest::Approx(ref.alice_bound).epsilon(1e-13));
    CHECK(r.bob_excess == doctest::Approx(ref.epsilon * r.b_rand.to_double()).epsilon(1e-11));
  }
  SUBCASE("b_rand = 1 is completely insecure") {
    const auto r = bound_report(make_family({Family::kEquality, 2, 2, 1}));
    CHECK(r.completely_insecure);
    CHECK_FALSE(r.fixed_point.has_value());
  }
  SUBCASE("excess stays resolved at extreme scale") {
    const auto r = bound_report(make_family({Family::kMillionaire, 2, 1'000'000'000, 1}));
    CHECK(r.alice_excess > 0.0);
    CHECK(r.alice_excess == doctest::Approx(2.5e-19 / 999'999'999.0).epsilon(1e-6));
  }
}
