#include "sfebound/curve.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sfebound/bound_engine.hpp"

namespace sfebound {

std::vector<CurvePoint> emit_curve(const Rational& b_rand, std::int64_t y_size, double c_lo, double c_hi,
                                   std::size_t samples, bool clip_below_one) {
  if (samples < 2) throw std::invalid_argument("a curve needs at least 2 samples");
  if (!(c_lo < c_hi)) throw std::invalid_argument("empty or inverted c_A range");
  if (!(c_lo >= 1.0)) throw std::invalid_argument("c_A range must start at or above 1");
  if (b_rand.num() <= 0 || b_rand >= Rational(1)) throw std::invalid_argument("curves need 0 < b_rand < 1");
  if (!(c_hi <= b_rand.reciprocal_double())) throw std::invalid_argument("c_A range must end at or below 1/b_rand");

  std::vector<CurvePoint> out;
  out.reserve(samples);
  const double span = c_hi - c_lo;
  for (std::size_t i = 0; i < samples; ++i) {
    const double c_a = i + 1 == samples ? c_hi : c_lo + span * static_cast<double>(i) / static_cast<double>(samples - 1);
    const double c_b = cb_from_ca(c_a, b_rand, y_size);
    if (clip_below_one && c_b < 1.0) continue;
    out.push_back({c_a, c_b});
  }
  return out;
}

double unit_crossing(const Rational& b_rand, std::int64_t y_size) {
  if (b_rand.num() <= 0 || b_rand >= Rational(1)) throw std::invalid_argument("unit crossing needs 0 < b_rand < 1");
  double lo = 1.0;  // c_B = 1/b_rand > 1
  double hi = b_rand.reciprocal_double();
  if (cb_from_ca(hi, b_rand, y_size) >= 1.0) return hi;  // only when |Y| = 1
  for (int i = 0; i < 200; ++i) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (cb_from_ca(mid, b_rand, y_size) >= 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::string curve_csv(const std::vector<CurvePoint>& points) {
  std::string out = "c_A,c_B\n";
  for (const auto& p : points) {
    out += format_shortest(p.c_a);
    out += ',';
    out += format_shortest(p.c_b);
    out += '\n';
  }
  return out;
}

double round_half_away(double v, int decimals) {
  const double scale = std::pow(10.0, decimals);
  return std::round(v * scale) / scale;
}

std::string format_rounded(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, round_half_away(v, decimals));
  return buf;
}

std::vector<FigureTrace> figure_traces() {
  std::vector<FigureTrace> out;
  auto add = [&](const char* fig, FamilyParams p) {
    std::string label = "n=" + std::to_string(p.n);
    if (p.family == Family::kKOfNOt) label += ",k=" + std::to_string(p.k);
    out.push_back({fig, label, p});
  };
  for (std::int64_t n = 2; n <= 6; ++n) add("ot-w2", {Family::kOneOfNOt, 2, n, 1});
  for (std::int64_t n = 2; n <= 6; ++n) add("ot-w3", {Family::kOneOfNOt, 3, n, 1});
  for (std::int64_t n = 3; n <= 6; ++n) add("knot-k2", {Family::kKOfNOt, 2, n, 2});
  for (std::int64_t n = 2; n <= 6; n += 2) add("knot-khalf", {Family::kKOfNOt, 2, n, n / 2});
  for (std::int64_t n = 1; n <= 5; ++n) add("xot", {Family::kXorOt, 2, n, 1});
  for (std::int64_t n = 3; n <= 6; ++n) add("eq", {Family::kEquality, 2, n, 1});
  for (std::int64_t n = 2; n <= 4; ++n) add("ip", {Family::kInnerProduct, 2, n, 1});
  for (std::int64_t n = 3; n <= 6; ++n) add("mp", {Family::kMillionaire, 2, n, 1});
  return out;
}

}  // namespace sfebound
