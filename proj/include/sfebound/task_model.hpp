#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sfebound/rational.hpp"

namespace sfebound {

/// Tables are materialized only up to this many cells.
inline constexpr std::int64_t kMaterializationCap = 1'000'000;

/// The six parametric families of secure function evaluation tasks.
enum class Family {
  kOneOfNOt,   ///< "ot":   x in W^n, y in {1..n}, f = x_y
  kKOfNOt,     ///< "knot": x in W^n, y a k-subset, f = (x_i)_{i in y}
  kXorOt,      ///< "xot":  x = (x1, x2) n-bit strings, y in {1, 2, xor}
  kEquality,   ///< "eq":   X = Y = {1..n}, f = [x == y]
  kInnerProduct,  ///< "ip": X = {0,1}^n, Y = {0,1}^n minus zero, f = x.y mod 2
  kMillionaire,   ///< "mp": X = {1..n}, Y = {1..n-1}, f = [y >= x]
};

std::string_view family_tag(Family f);
Family parse_family(std::string_view tag);

/// Parameters of a family instance. Unused fields stay at their defaults:
/// `alphabet` is |W| for the OT families, `k` only matters for k-of-n OT.
struct FamilyParams {
  Family family = Family::kOneOfNOt;
  std::int64_t alphabet = 2;
  std::int64_t n = 2;
  std::int64_t k = 1;

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

/// A finite SFE instance with uniformly distributed inputs.
///
/// Index conventions (all zero-based):
///  - OT families: x encodes (x_1..x_n) base |W| with x_1 least significant;
///    y index i is position i+1; k-subsets are listed in lexicographic order
///    and the output packs the selected digits base |W|, first element least
///    significant.
///  - XOR-OT: x = x1 + 2^n * x2; y = 0, 1, 2 for "1", "2", "xor".
///  - Equality and millionaire: index i stands for the value i+1.
///  - Inner product: x is the bit string itself; y index i stands for i+1.
///
/// `table` is row-major by x and may be ragged or hold out-of-range values
/// when ingested from a file; validate_task reports such defects.
struct SfeTask {
  std::string name;
  std::int64_t x_size = 0;
  std::int64_t y_size = 0;
  std::int64_t b_size = 0;
  std::optional<std::vector<std::vector<std::int64_t>>> table;
  std::optional<FamilyParams> family;

  bool materialized() const { return table.has_value(); }
  std::int64_t at(std::int64_t x, std::int64_t y) const { return (*table)[static_cast<std::size_t>(x)][static_cast<std::size_t>(y)]; }
};

/// The full answer (f(x, y))_y that a cheating Bob has to produce.
using AnswerVector = std::vector<std::int64_t>;

struct Violation {
  std::string message;
  std::int64_t x = -1;
  std::int64_t y = -1;
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::int64_t entries_checked = 0;
  bool ok() const { return violations.empty(); }
};

ValidationReport validate_task(const SfeTask& task);

/// Builds a family instance; the table is filled in when x_size * y_size is
/// within kMaterializationCap. Throws std::invalid_argument on bad parameters
/// and std::overflow_error when the input sets are not countable in 64 bits.
SfeTask make_family(const FamilyParams& params);

/// Explicit task; throws std::invalid_argument if the result does not validate.
SfeTask make_table_task(std::string name, std::int64_t b_size, std::vector<std::vector<std::int64_t>> table);

/// The family's defining formula evaluated at one point.
std::int64_t family_value(const FamilyParams& params, std::int64_t x, std::int64_t y);

/// Set sizes of a family instance, without building anything.
struct FamilyShape {
  std::int64_t x_size;
  std::int64_t y_size;
  std::int64_t b_size;
};
FamilyShape family_shape(const FamilyParams& params);

/// k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<std::int64_t>> k_subsets(std::int64_t n, std::int64_t k);

AnswerVector answer_vector(const SfeTask& task, std::int64_t x);

/// Blind guess of Bob's input: exactly 1/|Y|.
Rational a_rand(const SfeTask& task);

/// Best black-box success for Bob: one query y*, then the most frequent
/// answer vector among the inputs consistent with the observed output.
/// Requires a materialized, valid table.
Rational b_rand_bruteforce(const SfeTask& task);

/// Per-family closed form. Requires family parameters.
Rational b_rand_closed_form(const SfeTask& task);

/// Closed form when available, brute force otherwise.
Rational b_rand(const SfeTask& task);

}  // namespace sfebound
