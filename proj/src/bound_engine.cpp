#include "sfebound/bound_engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace sfebound {

double bob_lower_bound(double alice_cheat, std::int64_t y_size) {
  if (y_size < 1) throw std::domain_error("y_size must be positive");
  double p = static_cast<double>(y_size) * alice_cheat;
  constexpr double kEps = std::numeric_limits<double>::epsilon();
  if (!(p >= 1.0 - 4 * kEps)) throw std::domain_error("alice_cheat below the blind-guess value 1/|Y|");
  if (p <= 1.0 + 4 * kEps) p = 1.0;
  const double t = 1.0 / p;
  const double m = static_cast<double>(y_size - 1);
  return t - 2.0 * m * std::sqrt((p - 1.0) / p);
}

double cb_from_ca(double c_a, const Rational& b_rand, std::int64_t y_size) {
  if (!(c_a >= 1.0)) throw std::domain_error("c_A must be at least 1");
  if (b_rand.num() <= 0) throw std::domain_error("b_rand must be positive");
  const double m = static_cast<double>(y_size - 1);
  return b_rand.reciprocal_double() * (1.0 / c_a - 2.0 * m * std::sqrt((c_a - 1.0) / c_a));
}

double cb_from_transformed(double s, const Rational& b_rand, std::int64_t y_size) {
  if (!(s >= 0.0 && s < 1.0)) throw std::domain_error("s must lie in [0, 1)");
  if (b_rand.num() <= 0) throw std::domain_error("b_rand must be positive");
  const double m = static_cast<double>(y_size - 1);
  return b_rand.reciprocal_double() * ((1.0 - s * s) - 2.0 * m * s);
}

namespace {

// b * g(s) with g(s) = 1 - K(1-s^2)(1-s^2-2ms), K = 1/b. Negative at s = 0,
// positive at s = sqrt(1 - b).
double scaled_residual(double s, double b, double m) {
  const double t = 1.0 - s * s;
  return b - t * (t - 2.0 * m * s);
}

}  // namespace

FixedPointResult solve_fixed_point(const Rational& b_rand, std::int64_t y_size) {
  if (y_size < 1) throw std::domain_error("y_size must be positive");
  if (b_rand.num() <= 0) throw std::domain_error("b_rand must be positive");
  if (b_rand >= Rational(1)) throw std::domain_error("b_rand = 1: the task is completely insecure, no constant c > 1 exists");

  const double b = b_rand.to_double();
  const double m = static_cast<double>(y_size - 1);
  auto h = [&](double s) { return scaled_residual(s, b, m); };

  FixedPointResult out;
  double lo = 0.0;
  double hi = std::sqrt(1.0 - b);

  constexpr int kScan = 1024;
  int sign_changes = 0;
  double first_lo = lo;
  double first_hi = hi;
  double prev_s = lo;
  double prev_v = h(lo);
  for (int i = 1; i <= kScan; ++i) {
    const double s = i == kScan ? hi : hi * static_cast<double>(i) / kScan;
    const double v = h(s);
    if ((prev_v < 0) != (v < 0)) {
      if (sign_changes == 0) {
        first_lo = prev_s;
        first_hi = s;
      }
      ++sign_changes;
    }
    prev_s = s;
    prev_v = v;
  }
  if (sign_changes > 1) {
    out.warnings.push_back("fixed-point equation has " + std::to_string(sign_changes) +
                           " sign changes on the bracket; returning the smallest root");
  }
  lo = first_lo;
  hi = first_hi;

  for (out.iterations = 0; out.iterations < 200; ++out.iterations) {
    const double mid = lo + (hi - lo) / 2;
    if (mid <= lo || mid >= hi) break;
    if (h(mid) < 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_lo = scaled_residual(lo, b, m);
  const double r_hi = scaled_residual(hi, b, m);
  out.s = std::abs(r_lo) <= std::abs(r_hi) ? lo : hi;
  out.residual = std::abs(r_lo) <= std::abs(r_hi) ? r_lo : r_hi;
  const double s2 = out.s * out.s;
  out.c = 1.0 / (1.0 - s2);
  out.epsilon = s2 / (1.0 - s2);
  return out;
}

BoundReport bound_report(const Rational& b_rand, std::int64_t y_size, std::string name) {
  if (y_size < 1) throw std::domain_error("y_size must be positive");
  BoundReport r;
  r.task_name = std::move(name);
  r.y_size = y_size;
  r.b_rand = b_rand;
  r.a_rand = Rational(1, y_size);
  if (b_rand >= Rational(1)) {
    r.completely_insecure = true;
    r.alice_bound = r.a_rand.to_double();
    r.bob_bound = 1.0;
    return r;
  }
  auto fp = solve_fixed_point(b_rand, y_size);
  r.c = fp.c;
  r.epsilon = fp.epsilon;
  r.alice_bound = fp.c * r.a_rand.to_double();
  r.bob_bound = fp.c * b_rand.to_double();
  r.alice_excess = fp.epsilon * r.a_rand.to_double();
  r.bob_excess = fp.epsilon * b_rand.to_double();
  r.fixed_point = std::move(fp);
  return r;
}

BoundReport bound_report(const SfeTask& task) { return bound_report(b_rand(task), task.y_size, task.name); }

}  // namespace sfebound
