#include "sfebound/task_model.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace sfebound {

namespace {
__extension__ using Int128 = __int128;
}  // namespace

std::string_view family_tag(Family f) {
  switch (f) {
    case Family::kOneOfNOt: return "ot";
    case Family::kKOfNOt: return "knot";
    case Family::kXorOt: return "xot";
    case Family::kEquality: return "eq";
    case Family::kInnerProduct: return "ip";
    case Family::kMillionaire: return "mp";
  }
  throw std::logic_error("unknown family");
}

Family parse_family(std::string_view tag) {
  for (auto f : {Family::kOneOfNOt, Family::kKOfNOt, Family::kXorOt, Family::kEquality, Family::kInnerProduct,
                 Family::kMillionaire}) {
    if (family_tag(f) == tag) return f;
  }
  throw std::invalid_argument("unknown family '" + std::string(tag) + "' (expected ot, knot, xot, eq, ip or mp)");
}

namespace {

void require(bool cond, const std::string& what) {
  if (!cond) throw std::invalid_argument(what);
}

void check_params(const FamilyParams& p) {
  switch (p.family) {
    case Family::kOneOfNOt:
      require(p.alphabet >= 1 && p.n >= 1, "ot needs alphabet >= 1 and n >= 1");
      break;
    case Family::kKOfNOt:
      require(p.alphabet >= 1, "knot needs alphabet >= 1");
      require(p.k >= 1 && p.k < p.n, "knot needs 1 <= k < n");
      break;
    case Family::kXorOt:
      require(p.n >= 1, "xot needs n >= 1");
      break;
    case Family::kEquality:
      require(p.n >= 2, "eq needs n >= 2");
      break;
    case Family::kInnerProduct:
      require(p.n >= 1, "ip needs n >= 1");
      break;
    case Family::kMillionaire:
      require(p.n >= 2, "mp needs n >= 2");
      break;
  }
}

// Lexicographic unranking of a k-subset of {0..n-1}.
std::vector<std::int64_t> unrank_subset(std::int64_t n, std::int64_t k, std::int64_t rank) {
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(k));
  std::int64_t next = 0;
  for (std::int64_t slot = 0; slot < k; ++slot) {
    for (std::int64_t v = next; v < n; ++v) {
      const std::int64_t with_v = checked_binomial(n - v - 1, k - slot - 1);
      if (rank < with_v) {
        out.push_back(v);
        next = v + 1;
        break;
      }
      rank -= with_v;
    }
  }
  return out;
}

std::int64_t digit(std::int64_t x, std::int64_t base, std::int64_t pos) {
  for (std::int64_t i = 0; i < pos; ++i) x /= base;
  return x % base;
}

bool within_cap(std::int64_t x_size, std::int64_t y_size) {
  return static_cast<Int128>(x_size) * y_size <= kMaterializationCap;
}

}  // namespace

FamilyShape family_shape(const FamilyParams& p) {
  check_params(p);
  switch (p.family) {
    case Family::kOneOfNOt: return {checked_pow(p.alphabet, p.n), p.n, p.alphabet};
    case Family::kKOfNOt:
      return {checked_pow(p.alphabet, p.n), checked_binomial(p.n, p.k), checked_pow(p.alphabet, p.k)};
    case Family::kXorOt: return {checked_pow(4, p.n), 3, checked_pow(2, p.n)};
    case Family::kEquality: return {p.n, p.n, 2};
    case Family::kInnerProduct: return {checked_pow(2, p.n), checked_pow(2, p.n) - 1, 2};
    case Family::kMillionaire: return {p.n, p.n - 1, 2};
  }
  throw std::logic_error("unknown family");
}

std::vector<std::vector<std::int64_t>> k_subsets(std::int64_t n, std::int64_t k) {
  std::vector<std::vector<std::int64_t>> out;
  std::vector<std::int64_t> cur(static_cast<std::size_t>(k));
  std::iota(cur.begin(), cur.end(), 0);
  if (k > n || k < 0) return out;
  while (true) {
    out.push_back(cur);
    std::int64_t i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (std::int64_t j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::int64_t family_value(const FamilyParams& p, std::int64_t x, std::int64_t y) {
  switch (p.family) {
    case Family::kOneOfNOt: return digit(x, p.alphabet, y);
    case Family::kKOfNOt: {
      std::int64_t out = 0;
      std::int64_t scale = 1;
      for (const auto pos : unrank_subset(p.n, p.k, y)) {
        out += digit(x, p.alphabet, pos) * scale;
        scale *= p.alphabet;
      }
      return out;
    }
    case Family::kXorOt: {
      const std::int64_t mask = (std::int64_t{1} << p.n) - 1;
      const std::int64_t x1 = x & mask;
      const std::int64_t x2 = x >> p.n;
      if (y == 0) return x1;
      if (y == 1) return x2;
      return x1 ^ x2;
    }
    case Family::kEquality: return x == y ? 1 : 0;
    case Family::kInnerProduct: return __builtin_popcountll(static_cast<unsigned long long>(x & (y + 1))) & 1;
    case Family::kMillionaire: return (y + 1) >= (x + 1) ? 1 : 0;
  }
  throw std::logic_error("unknown family");
}

SfeTask make_family(const FamilyParams& params) {
  const FamilyShape shape = family_shape(params);
  SfeTask task;
  task.name = std::string(family_tag(params.family));
  switch (params.family) {
    case Family::kOneOfNOt:
    case Family::kKOfNOt:
      task.name += "(W=" + std::to_string(params.alphabet) + ",n=" + std::to_string(params.n);
      if (params.family == Family::kKOfNOt) task.name += ",k=" + std::to_string(params.k);
      task.name += ")";
      break;
    default:
      task.name += "(n=" + std::to_string(params.n) + ")";
  }
  task.x_size = shape.x_size;
  task.y_size = shape.y_size;
  task.b_size = shape.b_size;
  task.family = params;
  if (!within_cap(shape.x_size, shape.y_size)) return task;

  std::vector<std::vector<std::int64_t>> subsets;
  if (params.family == Family::kKOfNOt) subsets = k_subsets(params.n, params.k);

  std::vector<std::vector<std::int64_t>> rows(static_cast<std::size_t>(shape.x_size),
                                              std::vector<std::int64_t>(static_cast<std::size_t>(shape.y_size)));
  for (std::int64_t x = 0; x < shape.x_size; ++x) {
    auto& row = rows[static_cast<std::size_t>(x)];
    for (std::int64_t y = 0; y < shape.y_size; ++y) {
      if (params.family == Family::kKOfNOt) {
        // same packing as family_value, without re-unranking per cell
        std::int64_t out = 0;
        std::int64_t scale = 1;
        for (const auto pos : subsets[static_cast<std::size_t>(y)]) {
          out += digit(x, params.alphabet, pos) * scale;
          scale *= params.alphabet;
        }
        row[static_cast<std::size_t>(y)] = out;
      } else {
        row[static_cast<std::size_t>(y)] = family_value(params, x, y);
      }
    }
  }
  task.table = std::move(rows);
  return task;
}

SfeTask make_table_task(std::string name, std::int64_t b_size, std::vector<std::vector<std::int64_t>> table) {
  SfeTask task;
  task.name = std::move(name);
  task.x_size = static_cast<std::int64_t>(table.size());
  task.y_size = table.empty() ? 0 : static_cast<std::int64_t>(table.front().size());
  task.b_size = b_size;
  task.table = std::move(table);
  const auto report = validate_task(task);
  if (!report.ok()) throw std::invalid_argument("invalid task '" + task.name + "': " + report.violations.front().message);
  return task;
}

ValidationReport validate_task(const SfeTask& task) {
  ValidationReport report;
  auto add = [&](std::string msg, std::int64_t x = -1, std::int64_t y = -1) {
    report.violations.push_back({std::move(msg), x, y});
  };
  if (task.x_size < 1) add("x_size must be positive");
  if (task.y_size < 1) add("y_size must be positive");
  if (task.b_size < 1) add("b_size must be positive");
  if (!report.ok()) return report;

  if (task.family) {
    try {
      const auto shape = family_shape(*task.family);
      if (shape.x_size != task.x_size || shape.y_size != task.y_size || shape.b_size != task.b_size)
        add("family/shape mismatch: set sizes disagree with family parameters");
    } catch (const std::exception& e) {
      add(std::string("invalid family parameters: ") + e.what());
    }
  }

  if (!task.table) {
    if (!task.family) add("task has neither a table nor family parameters");
    return report;
  }

  const auto& rows = *task.table;
  if (static_cast<std::int64_t>(rows.size()) != task.x_size) add("table has " + std::to_string(rows.size()) + " rows, expected x_size");
  const bool check_family = task.family && report.ok();
  for (std::int64_t x = 0; x < task.x_size; ++x) {
    if (x >= static_cast<std::int64_t>(rows.size())) {
      add("table not total at (" + std::to_string(x) + ",0)", x, 0);
      continue;
    }
    const auto& row = rows[static_cast<std::size_t>(x)];
    for (std::int64_t y = 0; y < task.y_size; ++y) {
      const std::string at = "(" + std::to_string(x) + "," + std::to_string(y) + ")";
      if (y >= static_cast<std::int64_t>(row.size())) {
        add("table not total at " + at, x, y);
        continue;
      }
      ++report.entries_checked;
      const std::int64_t b = row[static_cast<std::size_t>(y)];
      if (b < 0 || b >= task.b_size) {
        add("output out of range at " + at, x, y);
      } else if (check_family && family_value(*task.family, x, y) != b) {
        add("family/table mismatch at " + at, x, y);
      }
    }
    if (static_cast<std::int64_t>(row.size()) > task.y_size) add("row " + std::to_string(x) + " longer than y_size", x, task.y_size);
  }
  return report;
}

AnswerVector answer_vector(const SfeTask& task, std::int64_t x) {
  if (task.table) return (*task.table)[static_cast<std::size_t>(x)];
  if (!task.family) throw std::invalid_argument("task has no table and no family");
  AnswerVector out(static_cast<std::size_t>(task.y_size));
  for (std::int64_t y = 0; y < task.y_size; ++y) out[static_cast<std::size_t>(y)] = family_value(*task.family, x, y);
  return out;
}

Rational a_rand(const SfeTask& task) {
  if (task.y_size < 1) throw std::invalid_argument("y_size must be positive");
  return {1, task.y_size};
}

Rational b_rand_bruteforce(const SfeTask& task) {
  if (!task.table) throw std::invalid_argument("b_rand_bruteforce needs a materialized table (task '" + task.name + "')");
  const auto report = validate_task(task);
  if (!report.ok()) throw std::invalid_argument("invalid task '" + task.name + "': " + report.violations.front().message);

  // Group inputs by their full answer vector.
  std::map<AnswerVector, std::int64_t> class_ids;
  std::vector<std::int64_t> class_of(static_cast<std::size_t>(task.x_size));
  for (std::int64_t x = 0; x < task.x_size; ++x) {
    const auto [it, inserted] = class_ids.emplace((*task.table)[static_cast<std::size_t>(x)], 0);
    if (inserted) it->second = static_cast<std::int64_t>(class_ids.size()) - 1;
    class_of[static_cast<std::size_t>(x)] = it->second;
  }
  const auto n_classes = static_cast<std::int64_t>(class_ids.size());

  std::int64_t best = 0;
  std::unordered_map<std::int64_t, std::int64_t> counts;
  std::vector<std::int64_t> mode(static_cast<std::size_t>(task.b_size));
  for (std::int64_t y = 0; y < task.y_size; ++y) {
    counts.clear();
    std::fill(mode.begin(), mode.end(), 0);
    for (std::int64_t x = 0; x < task.x_size; ++x) {
      const std::int64_t b = task.at(x, y);
      const std::int64_t c = ++counts[b * n_classes + class_of[static_cast<std::size_t>(x)]];
      mode[static_cast<std::size_t>(b)] = std::max(mode[static_cast<std::size_t>(b)], c);
    }
    best = std::max(best, std::accumulate(mode.begin(), mode.end(), std::int64_t{0}));
  }
  return {best, task.x_size};
}

Rational b_rand_closed_form(const SfeTask& task) {
  if (!task.family) throw std::invalid_argument("b_rand_closed_form needs family parameters (task '" + task.name + "')");
  const auto& p = *task.family;
  check_params(p);
  switch (p.family) {
    case Family::kOneOfNOt: return {1, checked_pow(p.alphabet, p.n - 1)};
    case Family::kKOfNOt: return {1, checked_pow(p.alphabet, p.n - p.k)};
    case Family::kXorOt: return {1, checked_pow(2, p.n)};
    case Family::kEquality: return {2, p.n};
    case Family::kInnerProduct: return {2, checked_pow(2, p.n)};
    case Family::kMillionaire: return {2, p.n};
  }
  throw std::logic_error("unknown family");
}

Rational b_rand(const SfeTask& task) {
  return task.family ? b_rand_closed_form(task) : b_rand_bruteforce(task);
}

}  // namespace sfebound
