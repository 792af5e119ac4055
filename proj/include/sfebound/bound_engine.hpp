#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sfebound/rational.hpp"
#include "sfebound/task_model.hpp"

namespace sfebound {

/// Lower bound on Bob's full-answer cheating probability given that Alice
/// cheats with probability `alice_cheat`:
///
///   1/(|Y| a) - 2(|Y|-1) sqrt(1 - 1/(|Y| a))
///
/// The value may be negative (vacuous) and is returned as is. Products
/// |Y| a within a few ulps of 1 are snapped to 1, so the boundary case
/// a = 1/|Y| yields exactly 1. Throws std::domain_error if a < 1/|Y|.
double bob_lower_bound(double alice_cheat, std::int64_t y_size);

/// Lower bound on Bob's gap factor c_B when Alice's gap factor is c_a:
///   (1/b_rand) (1/c_a - 2(|Y|-1) sqrt(1 - 1/c_a)).
/// Throws std::domain_error for c_a < 1.
double cb_from_ca(double c_a, const Rational& b_rand, std::int64_t y_size);

/// Same curve in the transformed variable s = sqrt(1 - 1/c_a), which stays
/// representable when c_a - 1 is far below machine epsilon.
double cb_from_transformed(double s, const Rational& b_rand, std::int64_t y_size);

struct FixedPointResult {
  double c = 1.0;
  double s = 0.0;        ///< sqrt(1 - 1/c)
  double epsilon = 0.0;  ///< c - 1, computed as s^2/(1 - s^2)
  /// b_rand - (1-s^2)(1-s^2-2(|Y|-1)s): the fixed-point residual scaled by
  /// b_rand so that it is O(ulp) for every b_rand.
  double residual = 0.0;
  int iterations = 0;
  std::vector<std::string> warnings;
};

/// Root c in (1, 1/b_rand) of c = (1/b_rand)(1/c - 2(|Y|-1) sqrt(1-1/c)).
///
/// Solved by bisection on s in [0, sqrt(1 - b_rand)] down to adjacent
/// doubles. A 1024-point scan looks for extra sign changes first; if any are
/// found the smallest root is returned with a warning attached.
/// Throws std::domain_error unless 0 < b_rand < 1 and y_size >= 1.
FixedPointResult solve_fixed_point(const Rational& b_rand, std::int64_t y_size);

struct BoundReport {
  std::string task_name;
  std::int64_t y_size = 0;
  Rational b_rand;
  Rational a_rand;
  /// b_rand == 1: a single query already reveals everything, no gap exists.
  bool completely_insecure = false;
  double c = 1.0;
  double epsilon = 0.0;
  double alice_bound = 0.0;  ///< c * a_rand
  double bob_bound = 0.0;    ///< c * b_rand
  double alice_excess = 0.0; ///< epsilon * a_rand, resolved even when alice_bound rounds to a_rand
  double bob_excess = 0.0;   ///< epsilon * b_rand
  std::optional<FixedPointResult> fixed_point;
};

BoundReport bound_report(const Rational& b_rand, std::int64_t y_size, std::string name = {});
BoundReport bound_report(const SfeTask& task);

}  // namespace sfebound
