#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sfebound/rng.hpp"
#include "sfebound/task_model.hpp"

namespace sfebound::dr {

// Die rolling built from an SFE task, with the SFE step played by an ideal
// classical oracle that hands Bob f(x, y) and nothing else:
//   1. x, y uniform; Bob obtains f(x, y).
//   2. Alice sends a uniform shift b in Y.
//   3. Bob reveals y and f(x, y).
//   4. Alice aborts unless the revealed value equals f(x, revealed y).
//   5. Both output (b + y) mod |Y|.
// A cheating party aims for outcome 0.

struct DrTranscript {
  std::int64_t x = 0;
  std::int64_t y = 0;  ///< Bob's SFE input
  std::int64_t b = 0;  ///< Alice's shift
  std::int64_t revealed_y = 0;
  std::int64_t revealed_f = 0;
  bool aborted = false;
  std::optional<std::int64_t> outcome;      ///< Alice's output
  std::optional<std::int64_t> bob_outcome;  ///< Bob's output
};

struct DrStats {
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> histogram;  ///< Alice's outcomes over non-aborted trials
  std::uint64_t abort_count = 0;
  std::uint64_t disagreements = 0;  ///< non-aborted trials where the two outputs differ
  double tv_distance = 0;           ///< empirical outcome law vs uniform
  double forcing_rate = 0;          ///< fraction of trials ending in outcome 0
};

/// What cheating Alice sees besides her own x. kOutput and kInput model a
/// leaky SFE subroutine; the ideal oracle leaks nothing.
enum class AliceLeak { kNone, kOutput, kInput };

struct AliceView {
  std::int64_t x = 0;
  std::optional<std::int64_t> leaked_output;
  std::optional<std::int64_t> leaked_input;
};

/// Alice guesses y and sends the shift that maps her guess to outcome 0.
struct AliceStrategy {
  std::string name;
  AliceLeak leak = AliceLeak::kNone;
  std::function<std::int64_t(const SfeTask&, const AliceView&, SplitMix64&)> guess;
};

AliceStrategy blind_alice();
/// Handed y directly; always forces outcome 0.
AliceStrategy oracle_alice();
/// Most likely y given her view (ties to the smallest index).
AliceStrategy posterior_alice(AliceLeak leak = AliceLeak::kNone);

/// Bob picks his SFE input and declares which answer-vector entries he knows
/// for the resulting x. He reveals the target y = -b mod |Y| when he knows
/// that entry, and otherwise falls back to an entry he does know, so he
/// never triggers an abort.
struct BobStrategy {
  std::string name;
  std::function<std::int64_t(const SfeTask&, SplitMix64&)> choose_input;
  std::function<std::vector<std::int64_t>(const SfeTask&, std::int64_t x, std::int64_t y)> known_entries;
};

BobStrategy full_knowledge_bob();
/// Knows only f(x, y) for his own uniformly chosen y.
BobStrategy honest_entry_bob();
/// Knows the entries in `known` and uses known[0] as his SFE input.
BobStrategy fixed_set_bob(std::vector<std::int64_t> known);

/// One trial, seeded from (seed, index). Null strategies mean honest play.
DrTranscript run_trial(const SfeTask& task, std::uint64_t seed, std::uint64_t index, const AliceStrategy* alice,
                       const BobStrategy* bob);

DrStats run_honest(const SfeTask& task, std::uint64_t trials, std::uint64_t seed, unsigned threads = 0);
DrStats run_cheating_alice(const SfeTask& task, const AliceStrategy& alice, std::uint64_t trials, std::uint64_t seed,
                           unsigned threads = 0);
DrStats run_cheating_bob(const SfeTask& task, const BobStrategy& bob, std::uint64_t trials, std::uint64_t seed,
                         unsigned threads = 0);

/// Product and max forms of Kitaev's die-rolling bound for N outcomes:
/// A * B >= 1/N and max(A, B) >= 1/sqrt(N).
struct KitaevBound {
  double product = 0;
  double max = 0;
};
KitaevBound kitaev_bound(std::int64_t n_outcomes);

nlohmann::json to_json(const DrStats& stats);

}  // namespace sfebound::dr
