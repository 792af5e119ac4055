#include "sfebound/campaigns.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <thread>

#include "sfebound/measurement_lab.hpp"
#include "sfebound/rng.hpp"

namespace sfebound::lab {

namespace {

std::int64_t uniform_int(SplitMix64& gen, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(gen);
}

double uniform_real(SplitMix64& gen, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }

Matrix random_psd_unit_trace(Eigen::Index dim, SplitMix64& gen) { return random_density(dim, dim, gen).matrix(); }

// A measurement operator of one of three shapes: a random POVM element, a
// near-identity (small epsilon) operator, or a noisy projector onto the
// dominant eigenvectors of rho.
MeasurementOperator random_measurement(const DensityMatrix& rho, SplitMix64& gen) {
  const Eigen::Index dim = rho.dim();
  const auto kind = uniform_int(gen, 0, 2);
  const Matrix noise = random_povm(dim, 2, gen)[0].matrix();
  if (kind == 0) return MeasurementOperator(noise);
  const double eta = uniform_real(gen, 0.0, 0.3);
  if (kind == 1) return MeasurementOperator((1.0 - eta) * Matrix::Identity(dim, dim) + eta * noise);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(rho.matrix());
  const auto keep = uniform_int(gen, 1, dim);
  const Matrix v = solver.eigenvectors().rightCols(keep);
  return MeasurementOperator((1.0 - eta) * v * v.adjoint() + eta * noise);
}

template <class Body>
CampaignSummary run_parallel(const std::string& lemma, const CampaignOptions& opts, Body body) {
  if (opts.min_dim < 1 || opts.max_dim < opts.min_dim) throw std::invalid_argument("invalid dimension range");
  CampaignSummary summary;
  summary.lemma = lemma;
  summary.records.resize(opts.instances);
  unsigned threads = opts.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opts.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, opts.instances)));
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < opts.instances; i += threads) {
          auto& rec = summary.records[i];
          rec.lemma = lemma;
          rec.seed = derive_seed(opts.seed, i);
          SplitMix64 gen(rec.seed);
          try {
            body(gen, rec);
          } catch (const std::exception& e) {
            rec.holds = false;
            rec.failure = e.what();
          }
        }
      });
    }
  }
  summary.violations = static_cast<std::size_t>(
      std::count_if(summary.records.begin(), summary.records.end(), [](const auto& r) { return !r.holds; }));
  return summary;
}

}  // namespace

CampaignSummary run_gentle_campaign(const CampaignOptions& opts) {
  return run_parallel("gentle", opts, [&](SplitMix64& gen, CampaignRecord& rec) {
    const auto dim = uniform_int(gen, opts.min_dim, opts.max_dim);
    const auto rank = uniform_int(gen, 1, dim);
    const auto rho = random_density(dim, rank, gen);
    const auto lam = random_measurement(rho, gen);
    const auto r = check_gentle(rho, lam);
    rec.dims = {dim};
    rec.n = 1;
    rec.epsilons = {r.epsilon};
    rec.bound = r.bound;
    rec.achieved = r.disturbance;
    rec.holds = r.holds;
    if (!r.holds) rec.failure = "disturbance exceeds 2 sqrt(eps)";
  });
}

CampaignSummary run_sequential_campaign(const CampaignOptions& opts) {
  if (opts.max_n < 2) throw std::invalid_argument("sequential campaign needs max_n >= 2");
  return run_parallel("sequential", opts, [&](SplitMix64& gen, CampaignRecord& rec) {
    const auto dim = uniform_int(gen, opts.min_dim, opts.max_dim);
    const auto n = uniform_int(gen, 2, opts.max_n);
    const auto rho = random_density(dim, uniform_int(gen, 1, dim), gen);
    std::vector<MeasurementOperator> lams;
    for (std::int64_t k = 0; k < n; ++k) lams.push_back(random_measurement(rho, gen));

    const auto r = check_sequential(rho, lams);
    rec.dims = {dim};
    rec.n = n;
    rec.epsilons = r.epsilons;
    rec.bound = r.bound;
    rec.achieved = r.expectation;
    rec.holds = r.holds;
    if (!r.holds) {
      rec.failure = "sequential bound violated";
      return;
    }

    auto permuted = lams;
    std::shuffle(permuted.begin(), permuted.end(), gen);
    if (!check_sequential(rho, permuted).holds) {
      rec.holds = false;
      rec.failure = "sequential bound violated after permutation";
      return;
    }

    const auto root = matrix_sqrt(lams[1]);
    const HermitianOperator diff(rho.matrix() - sandwich(root, rho).matrix());
    const double lhs = std::abs(hs_inner(diff, lams[0]));
    const double rhs = trace_norm(diff) * operator_norm(lams[0]);
    if (lhs > rhs + 1e-9) {
      rec.holds = false;
      rec.failure = "Hoelder step violated";
    }
  });
}

namespace {

struct LearningInstance {
  QuantumEncoding enc;
  std::vector<Povm> povms;
};

LearningInstance random_learning_instance(SplitMix64& gen, std::int64_t x_count, std::int64_t dim, std::int64_t n,
                                          std::int64_t b_size) {
  LearningInstance inst{random_encoding(static_cast<std::size_t>(x_count), dim, static_cast<std::size_t>(n), b_size, gen()), {}};
  for (std::int64_t i = 0; i < n; ++i) inst.povms.push_back(random_povm(dim, static_cast<std::size_t>(b_size), gen));
  return inst;
}

// States close to orthogonal basis states (in a random basis) and POVMs
// close to the projective measurement of each function, so p_i is near 1.
LearningInstance distinguishable_learning_instance(SplitMix64& gen, std::int64_t x_count, std::int64_t dim,
                                                   std::int64_t n, std::int64_t b_size) {
  const Matrix u = random_unitary(dim, gen);
  LearningInstance inst;
  auto& enc = inst.enc;
  enc.b_size = b_size;
  std::exponential_distribution<double> expo(1.0);
  double total = 0;
  for (std::int64_t x = 0; x < x_count; ++x) {
    enc.probs.push_back(expo(gen));
    total += enc.probs.back();
  }
  for (auto& p : enc.probs) p /= total;
  for (std::int64_t x = 0; x < x_count; ++x) {
    const double delta = uniform_real(gen, 0.0, 0.15);
    const Matrix basis = u.col(x) * u.col(x).adjoint();
    enc.states.emplace_back((1.0 - delta) * basis + delta * random_psd_unit_trace(dim, gen));
  }
  enc.functions.assign(static_cast<std::size_t>(n), std::vector<std::int64_t>(static_cast<std::size_t>(x_count)));
  for (auto& f : enc.functions) {
    for (auto& v : f) v = uniform_int(gen, 0, b_size - 1);
  }
  for (std::int64_t i = 0; i < n; ++i) {
    const double eta = uniform_real(gen, 0.0, 0.15);
    std::vector<Matrix> parts(static_cast<std::size_t>(b_size), Matrix::Zero(dim, dim));
    for (std::int64_t k = 0; k < dim; ++k) {
      const auto b = k < x_count ? enc.functions[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] : 0;
      parts[static_cast<std::size_t>(b)] += u.col(k) * u.col(k).adjoint();
    }
    for (auto& part : parts) part += eta * random_psd_unit_trace(dim, gen);
    inst.povms.push_back(normalize_to_povm(parts));
  }
  return inst;
}

}  // namespace

CampaignSummary run_learning_campaign(const CampaignOptions& opts) {
  if (opts.max_n < 1) throw std::invalid_argument("learning campaign needs max_n >= 1");
  return run_parallel("learning", opts, [&](SplitMix64& gen, CampaignRecord& rec) {
    const auto n = uniform_int(gen, 1, opts.max_n);
    const auto b_size = uniform_int(gen, 2, 3);
    const bool structured = uniform_int(gen, 0, 1) == 1;
    LearningInstance inst;
    std::int64_t dim = 0;
    if (structured) {
      const auto x_count = uniform_int(gen, 2, std::max<std::int64_t>(2, opts.max_dim));
      dim = uniform_int(gen, std::max(x_count, opts.min_dim), std::max(x_count, opts.max_dim));
      inst = distinguishable_learning_instance(gen, x_count, dim, n, b_size);
    } else {
      const auto x_count = uniform_int(gen, 2, 5);
      dim = uniform_int(gen, opts.min_dim, opts.max_dim);
      inst = random_learning_instance(gen, x_count, dim, n, b_size);
    }

    const auto r = averaged_strategy_success(inst.enc, inst.povms);
    rec.dims = {dim};
    rec.n = n;
    for (double p : r.individual_success) rec.epsilons.push_back(std::clamp(1.0 - p, 0.0, 1.0));
    rec.bound = r.bound;
    rec.achieved = r.achieved;
    rec.holds = r.holds;
    auto fail = [&](std::string why) {
      if (rec.holds) rec.failure = std::move(why);
      rec.holds = false;
    };
    if (!r.holds) fail("achieved success below p - 2(n-1)sqrt(1-p)");
    if (r.achieved < r.averaged_sequential_bound - kInequalityTol) fail("achieved success below averaged sequential bound");
    for (std::size_t j = 0; j < r.per_middle.size(); ++j) {
      if (r.per_middle[j] < r.per_middle_bound[j] - kInequalityTol) fail("middle " + std::to_string(j) + " below its sequential bound");
    }
    if (r.sum_sqrt_eps > r.cauchy_schwarz_rhs + 1e-12) fail("Cauchy-Schwarz step violated");
    for (std::size_t j = 0; j < inst.povms.size(); ++j) {
      const auto combined = combined_povm(inst.povms, j);
      if (combined.completeness_defect() > kCompletenessTol) fail("combined POVM incomplete");
      if (combined.min_eigenvalue() < -kPsdTol) fail("combined POVM element not PSD");
    }
  });
}

nlohmann::json to_json(const CampaignRecord& record) {
  nlohmann::json out = {{"lemma", record.lemma},       {"seed", record.seed},         {"dims", record.dims},
                        {"n", record.n},               {"epsilons", record.epsilons}, {"bound", record.bound},
                        {"achieved", record.achieved}, {"holds", record.holds}};
  if (!record.failure.empty()) out["failure"] = record.failure;
  return out;
}

}  // namespace sfebound::lab
