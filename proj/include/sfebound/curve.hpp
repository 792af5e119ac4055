#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sfebound/rational.hpp"
#include "sfebound/task_model.hpp"

namespace sfebound {

struct CurvePoint {
  double c_a = 1.0;
  double c_b = 0.0;
};

/// `samples` evenly spaced c_A values from `c_lo` to `c_hi` (both ends
/// included exactly) with their cb_from_ca values. With `clip_below_one`,
/// samples whose c_B falls under 1 are dropped. The range must satisfy
/// 1 <= c_lo < c_hi <= 1/b_rand.
std::vector<CurvePoint> emit_curve(const Rational& b_rand, std::int64_t y_size, double c_lo, double c_hi,
                                   std::size_t samples, bool clip_below_one = false);

/// The c_A at which cb_from_ca drops to 1 (where a trade-off curve leaves
/// the c_B >= 1 region). Bisection in c_A down to adjacent doubles.
double unit_crossing(const Rational& b_rand, std::int64_t y_size);

/// "c_A,c_B\n" followed by one LF-terminated row per point, shortest
/// round-trip decimals.
std::string curve_csv(const std::vector<CurvePoint>& points);

/// One plotted trace of a published trade-off figure.
struct FigureTrace {
  std::string figure;  ///< e.g. "ot-w2"
  std::string label;   ///< e.g. "n=3"
  FamilyParams params;
};

/// Every trace of the c_A vs c_B figures, grouped by figure id:
/// ot-w2, ot-w3, knot-k2, knot-khalf, xot, eq, ip, mp.
std::vector<FigureTrace> figure_traces();

/// Shortest decimal that parses back to exactly `v`.
std::string format_shortest(double v);

/// Round half away from zero to `decimals` places.
double round_half_away(double v, int decimals);

/// Fixed-point text with exactly `decimals` digits after rounding half away from zero.
std::string format_rounded(double v, int decimals);

}  // namespace sfebound
