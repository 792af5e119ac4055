#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sfebound::lab {

/// One randomized instance. `achieved` is the measured side of the checked
/// inequality: the disturbance for the gentle lemma (must stay below
/// `bound`), the success probability for the sequential and learning
/// lemmas (must stay above `bound`).
struct CampaignRecord {
  std::string lemma;
  std::uint64_t seed = 0;
  std::vector<std::int64_t> dims;
  std::int64_t n = 1;
  std::vector<double> epsilons;
  double bound = 0;
  double achieved = 0;
  bool holds = false;
  std::string failure;  ///< first failed sub-check, empty when holds
};

struct CampaignSummary {
  std::string lemma;
  std::size_t violations = 0;
  std::vector<CampaignRecord> records;
};

struct CampaignOptions {
  std::size_t instances = 1000;
  std::int64_t min_dim = 2;
  std::int64_t max_dim = 8;
  std::int64_t max_n = 4;
  std::uint64_t seed = 0;
  /// 0 picks the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

/// Gentle measurement: ||rho - sqrt(L) rho sqrt(L)||_tr <= 2 sqrt(eps).
CampaignSummary run_gentle_campaign(const CampaignOptions& opts);

/// Sequential gentle measurement, plus two side checks per instance: the
/// bound still holds after permuting the operators, and the Hoelder step
/// |<rho - sqrt(L2) rho sqrt(L2), L1>| <= ||.||_tr ||L1||_op.
CampaignSummary run_sequential_campaign(const CampaignOptions& opts);

/// Combined-POVM learning strategy: every combined POVM is complete and
/// PSD, achieved >= p - 2(n-1) sqrt(1-p), achieved >= the averaged
/// sequential bound, each middle meets its own sequential bound, and the
/// Cauchy-Schwarz step sum sqrt(eps_i) <= sqrt(n) sqrt(sum eps_i) holds.
/// Half of the instances use nearly distinguishable encodings so that the
/// bound is not vacuous.
CampaignSummary run_learning_campaign(const CampaignOptions& opts);

nlohmann::json to_json(const CampaignRecord& record);

}  // namespace sfebound::lab
