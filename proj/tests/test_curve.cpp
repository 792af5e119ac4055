#include <doctest.h>

#include <map>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "sfebound/curve.hpp"

using namespace sfebound;

TEST_CASE("curve endpoints and shape") {
  const auto task = make_family({Family::kKOfNOt, 2, 4, 2});
  const auto b = b_rand(task);
  const double hi = unit_crossing(b, task.y_size);
  const auto pts = emit_curve(b, task.y_size, 1.0, hi, 100);
  REQUIRE(pts.size() == 100);
  CHECK(pts.front().c_a == 1.0);
  CHECK(pts.front().c_b == 4.0);
  CHECK(pts.back().c_a == hi);
  for (std::size_t i = 1; i < pts.size(); ++i) {
    CHECK(pts[i].c_a > pts[i - 1].c_a);
    CHECK(pts[i].c_b < pts[i - 1].c_b);
    CHECK(pts[i].c_b == doctest::Approx(oracles::curve_value(pts[i].c_a, 0.25, 6)).epsilon(1e-12));
  }
}

TEST_CASE("unit crossing agrees with the quadratic") {
  for (const auto& t : figure_traces()) {
    const auto task = make_family(t.params);
    const auto b = b_rand(task);
    CAPTURE(task.name);
    const double x = unit_crossing(b, task.y_size);
    CHECK(x == doctest::Approx(oracles::unit_crossing_quadratic(b.to_double(), task.y_size)).epsilon(1e-12));
  }
  // 1-of-2 bit OT crosses at about 1.0532
  CHECK(unit_crossing(Rational(1, 2), 2) == doctest::Approx(1.0532).epsilon(1e-4));
}

TEST_CASE("clipping drops the part below c_B = 1") {
  const Rational b(1, 2);
  const auto all = emit_curve(b, 2, 1.0, 2.0, 50);
  const auto clipped = emit_curve(b, 2, 1.0, 2.0, 50, true);
  CHECK(clipped.size() < all.size());
  for (const auto& p : clipped) CHECK(p.c_b >= 1.0);
  // negative values are kept unclipped
  CHECK(all.back().c_b < 0.0);
}

TEST_CASE("range validation") {
  const Rational b(1, 2);
  CHECK_THROWS_AS(emit_curve(b, 2, 1.0, 1.5, 1), std::invalid_argument);
  CHECK_THROWS_AS(emit_curve(b, 2, 1.5, 1.2, 10), std::invalid_argument);
  CHECK_THROWS_AS(emit_curve(b, 2, 0.9, 1.2, 10), std::invalid_argument);
  CHECK_THROWS_AS(emit_curve(b, 2, 1.0, 2.5, 10), std::invalid_argument);
  CHECK_THROWS_AS(emit_curve(Rational(1), 2, 1.0, 1.0, 10), std::invalid_argument);
  CHECK_THROWS_AS(unit_crossing(Rational(1), 3), std::invalid_argument);
}

TEST_CASE("CSV output") {
  const auto csv = curve_csv({{1.0, 4.0}, {1.5, 0.1}});
  CHECK(csv == "c_A,c_B\n1,4\n1.5,0.1\n");
  // shortest decimals round-trip exactly
  const auto pts = emit_curve(Rational(1, 3), 2, 1.0, 1.07, 37);
  std::istringstream in(curve_csv(pts));
  std::string line;
  std::getline(in, line);
  for (const auto& p : pts) {
    REQUIRE(std::getline(in, line));
    const auto comma = line.find(',');
    CHECK(std::stod(line.substr(0, comma)) == p.c_a);
    CHECK(std::stod(line.substr(comma + 1)) == p.c_b);
  }
}

TEST_CASE("presentation rounding") {
  CHECK(format_rounded(1.04838, 4) == "1.0484");
  CHECK(format_rounded(0.25814, 4) == "0.2581");
  CHECK(format_rounded(0.5, 0) == "1");
  CHECK(format_rounded(-0.5, 0) == "-1");
  CHECK(round_half_away(2.5, 0) == 3.0);
  CHECK(format_shortest(0.1) == "0.1");
  CHECK(format_shortest(2.5e-19) == "2.5e-19");
}

TEST_CASE("figure traces") {
  const auto traces = figure_traces();
  std::set<std::string> figures;
  for (const auto& t : traces) {
    figures.insert(t.figure);
    const auto task = make_family(t.params);
    CHECK(b_rand(task) < Rational(1));
  }
  CHECK(figures == std::set<std::string>{"ot-w2", "ot-w3", "knot-k2", "knot-khalf", "xot", "eq", "ip", "mp"});
  CHECK(traces.size() == 33);
}

TEST_CASE("published plot windows end where c_B reaches 1") {
  // right ends of the plotted c_A domains, in trace order per figure
  const std::map<std::string, std::vector<double>> plotted{
      {"ot-w2", {1.0533, 1.0334, 1.0208, 1.0136, 1.0094}},
      {"ot-w3", {1.0926, 1.0467, 1.0252, 1.0151, 1.0099}},
      {"knot-k2", {1.015, 1.0057, 1.0025, 1.0012}},
      {"knot-khalf", {1.0532, 1.0056, 1.0006}},
      {"xot", {1.015, 1.0334, 1.0453, 1.052, 1.0555}},
      {"ip", {1.0149, 1.004, 1.0011}},
  };
  std::map<std::string, std::size_t> seen;
  for (const auto& t : figure_traces()) {
    const auto it = plotted.find(t.figure);
    if (it == plotted.end()) continue;
    const auto task = make_family(t.params);
    const double published = it->second.at(seen[t.figure]++);
    CAPTURE(task.name);
    CHECK(std::abs(unit_crossing(b_rand(task), task.y_size) - published) <= 1.5e-4);
  }
}
