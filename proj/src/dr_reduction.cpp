#include "sfebound/dr_reduction.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

namespace sfebound::dr {

namespace {

std::int64_t uniform_index(SplitMix64& gen, std::int64_t n) {
  return std::uniform_int_distribution<std::int64_t>(0, n - 1)(gen);
}

void require_materialized(const SfeTask& task) {
  if (!task.materialized()) throw std::invalid_argument("die rolling needs a materialized task table ('" + task.name + "')");
  if (task.y_size < 1 || task.x_size < 1) throw std::invalid_argument("task has empty input sets");
}

std::int64_t shift_to_zero(std::int64_t y, std::int64_t n) { return (n - y % n) % n; }

}  // namespace

AliceStrategy blind_alice() {
  return {"blind", AliceLeak::kNone,
          [](const SfeTask& task, const AliceView&, SplitMix64& gen) { return uniform_index(gen, task.y_size); }};
}

AliceStrategy oracle_alice() {
  return {"oracle", AliceLeak::kInput,
          [](const SfeTask&, const AliceView& view, SplitMix64&) { return view.leaked_input.value(); }};
}

AliceStrategy posterior_alice(AliceLeak leak) {
  return {"posterior", leak, [](const SfeTask& task, const AliceView& view, SplitMix64&) -> std::int64_t {
            // Uniform prior on y: the posterior is uniform over the inputs
            // consistent with the view, so the smallest consistent y is an argmax.
            if (view.leaked_input) return *view.leaked_input;
            for (std::int64_t y = 0; y < task.y_size; ++y) {
              if (!view.leaked_output || task.at(view.x, y) == *view.leaked_output) return y;
            }
            return 0;
          }};
}

BobStrategy full_knowledge_bob() {
  return {"full",
          [](const SfeTask& task, SplitMix64& gen) { return uniform_index(gen, task.y_size); },
          [](const SfeTask& task, std::int64_t, std::int64_t) {
            std::vector<std::int64_t> all(static_cast<std::size_t>(task.y_size));
            for (std::int64_t y = 0; y < task.y_size; ++y) all[static_cast<std::size_t>(y)] = y;
            return all;
          }};
}

BobStrategy honest_entry_bob() {
  return {"honest-entry", [](const SfeTask& task, SplitMix64& gen) { return uniform_index(gen, task.y_size); },
          [](const SfeTask&, std::int64_t, std::int64_t y) { return std::vector<std::int64_t>{y}; }};
}

BobStrategy fixed_set_bob(std::vector<std::int64_t> known) {
  if (known.empty()) throw std::invalid_argument("fixed_set_bob needs a nonempty knowledge set");
  std::sort(known.begin(), known.end());
  known.erase(std::unique(known.begin(), known.end()), known.end());
  const std::int64_t first = known.front();
  return {"fixed-set", [first](const SfeTask&, SplitMix64&) { return first; },
          [known](const SfeTask&, std::int64_t, std::int64_t) { return known; }};
}

DrTranscript run_trial(const SfeTask& task, std::uint64_t seed, std::uint64_t index, const AliceStrategy* alice,
                       const BobStrategy* bob) {
  SplitMix64 gen(derive_seed(seed, index));
  const std::int64_t n = task.y_size;
  DrTranscript t;
  t.x = uniform_index(gen, task.x_size);
  const std::int64_t honest_y = uniform_index(gen, n);
  const std::int64_t honest_b = uniform_index(gen, n);

  t.y = bob ? bob->choose_input(task, gen) : honest_y;
  if (t.y < 0 || t.y >= n) throw std::out_of_range("Bob chose an SFE input outside Y");
  const std::int64_t sfe_output = task.at(t.x, t.y);

  if (alice) {
    AliceView view{t.x, {}, {}};
    if (alice->leak == AliceLeak::kOutput) view.leaked_output = sfe_output;
    if (alice->leak == AliceLeak::kInput) view.leaked_input = t.y;
    const std::int64_t guess = alice->guess(task, view, gen);
    t.b = shift_to_zero(guess, n);
  } else {
    t.b = honest_b;
  }

  if (bob) {
    const auto known = bob->known_entries(task, t.x, t.y);
    if (known.empty()) throw std::logic_error("Bob strategy declared no known entries");
    const std::int64_t target = shift_to_zero(t.b, n);
    t.revealed_y = std::find(known.begin(), known.end(), target) != known.end() ? target : known.front();
    t.revealed_f = task.at(t.x, t.revealed_y);
  } else {
    t.revealed_y = t.y;
    t.revealed_f = sfe_output;
  }

  t.aborted = t.revealed_f != task.at(t.x, t.revealed_y);
  if (!t.aborted) {
    t.outcome = (t.b + t.revealed_y) % n;
    // honest Bob outputs from his own input, a cheating one from what he revealed
    t.bob_outcome = (t.b + (bob ? t.revealed_y : t.y)) % n;
  }
  return t;
}

namespace {

DrStats run_many(const SfeTask& task, std::uint64_t trials, std::uint64_t seed, unsigned threads,
                 const AliceStrategy* alice, const BobStrategy* bob) {
  require_materialized(task);
  if (trials < 1) throw std::invalid_argument("need at least one trial");
  const auto n = static_cast<std::size_t>(task.y_size);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, trials));

  struct Partial {
    std::vector<std::uint64_t> histogram;
    std::uint64_t aborts = 0;
    std::uint64_t disagreements = 0;
  };
  std::vector<Partial> partials(threads, Partial{std::vector<std::uint64_t>(n, 0), 0, 0});
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (trials + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        auto& part = partials[t];
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(trials, begin + chunk);
        for (std::uint64_t i = begin; i < end; ++i) {
          const auto tr = run_trial(task, seed, i, alice, bob);
          if (tr.aborted) {
            ++part.aborts;
            continue;
          }
          ++part.histogram[static_cast<std::size_t>(*tr.outcome)];
          if (tr.outcome != tr.bob_outcome) ++part.disagreements;
        }
      });
    }
  }

  DrStats s;
  s.trials = trials;
  s.seed = seed;
  s.histogram.assign(n, 0);
  for (const auto& p : partials) {
    for (std::size_t k = 0; k < n; ++k) s.histogram[k] += p.histogram[k];
    s.abort_count += p.aborts;
    s.disagreements += p.disagreements;
  }
  const std::uint64_t completed = trials - s.abort_count;
  if (completed == 0) {
    s.tv_distance = 1.0;
  } else {
    double tv = 0;
    for (std::size_t k = 0; k < n; ++k) {
      tv += std::abs(static_cast<double>(s.histogram[k]) / static_cast<double>(completed) - 1.0 / static_cast<double>(n));
    }
    s.tv_distance = tv / 2.0;
  }
  s.forcing_rate = static_cast<double>(s.histogram[0]) / static_cast<double>(trials);
  return s;
}

}  // namespace

DrStats run_honest(const SfeTask& task, std::uint64_t trials, std::uint64_t seed, unsigned threads) {
  return run_many(task, trials, seed, threads, nullptr, nullptr);
}

DrStats run_cheating_alice(const SfeTask& task, const AliceStrategy& alice, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads) {
  return run_many(task, trials, seed, threads, &alice, nullptr);
}

DrStats run_cheating_bob(const SfeTask& task, const BobStrategy& bob, std::uint64_t trials, std::uint64_t seed,
                         unsigned threads) {
  return run_many(task, trials, seed, threads, nullptr, &bob);
}

KitaevBound kitaev_bound(std::int64_t n_outcomes) {
  if (n_outcomes < 2) throw std::invalid_argument("die rolling needs at least 2 outcomes");
  const auto n = static_cast<double>(n_outcomes);
  return {1.0 / n, 1.0 / std::sqrt(n)};
}

nlohmann::json to_json(const DrStats& stats) {
  return {{"trials", stats.trials},           {"histogram", stats.histogram},       {"aborts", stats.abort_count},
          {"disagreements", stats.disagreements}, {"tv_distance", stats.tv_distance}, {"forcing_rate", stats.forcing_rate},
          {"seed", stats.seed}};
}

}  // namespace sfebound::dr
