#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "sfebound/rng.hpp"

namespace sfebound::lab {

using Matrix = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;        ///< eigenvalues this far below 0 are roundoff
inline constexpr double kSqrtRejectTol = 1e-8;  ///< matrix_sqrt refuses anything more negative
inline constexpr double kCompletenessTol = 1e-10;
inline constexpr double kInequalityTol = 1e-8;  ///< slack for every verified inequality

/// Square complex matrix equal to its conjugate transpose. Construction
/// checks Hermiticity entrywise within kHermitianTol and stores the exactly
/// symmetrized matrix; throws std::invalid_argument otherwise.
class HermitianOperator {
 public:
  HermitianOperator() = default;
  explicit HermitianOperator(const Matrix& m);

  static HermitianOperator identity(Eigen::Index dim);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const;
  double trace() const { return m_.trace().real(); }

 protected:
  Matrix m_;
};

/// Positive semidefinite with unit trace (eigenvalues >= -kPsdTol, trace 1
/// within kPsdTol).
class DensityMatrix : public HermitianOperator {
 public:
  DensityMatrix() = default;
  explicit DensityMatrix(const Matrix& m);
};

/// 0 <= Lambda <= I within kPsdTol.
class MeasurementOperator : public HermitianOperator {
 public:
  MeasurementOperator() = default;
  explicit MeasurementOperator(const Matrix& m);
};

/// Outcome-labelled family of measurement operators summing to the identity
/// within kCompletenessTol. Labels are outcome tuples; a plain POVM uses
/// one-element labels {b}.
class Povm {
 public:
  Povm() = default;
  /// Labels default to {0}, {1}, ...
  explicit Povm(std::vector<MeasurementOperator> elements);
  Povm(std::vector<MeasurementOperator> elements, std::vector<std::vector<std::int64_t>> labels);

  std::size_t size() const { return elements_.size(); }
  Eigen::Index dim() const { return elements_.empty() ? 0 : elements_.front().dim(); }
  const MeasurementOperator& operator[](std::size_t i) const { return elements_[i]; }
  const std::vector<MeasurementOperator>& elements() const { return elements_; }
  const std::vector<std::vector<std::int64_t>>& labels() const { return labels_; }

  /// Operator norm of (sum of elements - I).
  double completeness_defect() const;
  /// Smallest eigenvalue over all elements.
  double min_eigenvalue() const;

 private:
  std::vector<MeasurementOperator> elements_;
  std::vector<std::vector<std::int64_t>> labels_;
};

/// Classical input x with probability probs[x], Bob's state states[x], and
/// the n functions f_i : x -> b he wants to learn.
struct QuantumEncoding {
  std::vector<double> probs;
  std::vector<DensityMatrix> states;
  std::vector<std::vector<std::int64_t>> functions;  ///< functions[i][x]
  std::int64_t b_size = 0;

  std::size_t x_count() const { return probs.size(); }
  Eigen::Index dim() const { return states.empty() ? 0 : states.front().dim(); }
  /// Throws std::invalid_argument if the encoding is malformed.
  void validate() const;
};

// --- norms and square roots -------------------------------------------------

/// PSD square root. Eigenvalues in [-kSqrtRejectTol, 0) are clamped to 0;
/// anything more negative throws std::domain_error.
HermitianOperator matrix_sqrt(const HermitianOperator& op);

/// Sum of singular values.
double trace_norm(const HermitianOperator& op);
/// Largest singular value.
double operator_norm(const HermitianOperator& op);
/// Tr(A* B).
Complex hs_inner(const HermitianOperator& a, const HermitianOperator& b);

/// sqrt(lam) rho sqrt(lam), sharing a precomputed root.
HermitianOperator sandwich(const HermitianOperator& root, const HermitianOperator& inner);

// --- gentle measurement -----------------------------------------------------

struct GentleReport {
  double epsilon = 0;      ///< 1 - <Lambda, rho>, clamped to [0, 1]
  double disturbance = 0;  ///< || rho - sqrt(Lambda) rho sqrt(Lambda) ||_tr
  double bound = 0;        ///< 2 sqrt(epsilon)
  bool holds = false;
};

GentleReport check_gentle(const DensityMatrix& rho, const MeasurementOperator& lam);

/// sqrt(L_n) ... sqrt(L_2) L_1 sqrt(L_2) ... sqrt(L_n), with lams[0] innermost.
HermitianOperator sequential_operator(std::span<const MeasurementOperator> lams);

struct SequentialReport {
  std::vector<double> epsilons;  ///< epsilon_k = 1 - <Lambda_k, rho>
  double expectation = 0;        ///< <rho, sequential_operator(lams)>
  double bound = 0;              ///< 1 - eps_1 - 2 sum_{i>=2} sqrt(eps_i)
  bool holds = false;
};

SequentialReport check_sequential(const DensityMatrix& rho, std::span<const MeasurementOperator> lams);

// --- combined measurement ---------------------------------------------------

/// Outcome-tuple POVM: element (b_1..b_n) is the nested sandwich with
/// povms[middle]'s element b_middle innermost and the remaining POVMs wrapped
/// around it in increasing index order (so the last index is outermost).
/// Tuples are enumerated lexicographically.
Povm combined_povm(std::span<const Povm> povms, std::size_t middle);

struct LearnReport {
  std::vector<double> individual_success;  ///< p_i
  double average = 0;                      ///< p
  double bound = 0;                        ///< p - 2(n-1) sqrt(1-p)
  double achieved = 0;                     ///< mean over middles of the all-correct probability
  double slack = 0;                        ///< achieved - bound
  std::vector<double> per_middle;          ///< all-correct probability with POVM j innermost
  std::vector<double> per_middle_bound;    ///< 1 - eps_j - 2 sum_{i != j} sqrt(eps_i)
  double averaged_sequential_bound = 0;    ///< 1 - sum(eps)/n - 2(n-1)/n sum sqrt(eps)
  double sum_sqrt_eps = 0;
  double cauchy_schwarz_rhs = 0;           ///< sqrt(n) sqrt(sum eps)
  bool holds = false;
};

/// Success of guessing every f_i(x) with the combined measurement, averaged
/// over a uniformly chosen middle POVM. The classical register is handled
/// blockwise: only the tuple (f_1(x)..f_n(x)) is ever evaluated for each x.
LearnReport averaged_strategy_success(const QuantumEncoding& enc, std::span<const Povm> povms);

// --- random instances -------------------------------------------------------

/// G G* / Tr(G G*) with G a dim x rank matrix of standard complex Gaussians.
DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, SplitMix64& gen);
DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed);

/// normalize_to_povm of `outcomes` random full-rank PSD operators.
Povm random_povm(Eigen::Index dim, std::size_t outcomes, SplitMix64& gen);
Povm random_povm(Eigen::Index dim, std::size_t outcomes, std::uint64_t seed);

/// Flat-Dirichlet prior, independent full-rank random states and uniformly
/// random functions.
QuantumEncoding random_encoding(std::size_t x_count, Eigen::Index dim, std::size_t n_functions, std::int64_t b_size,
                                std::uint64_t seed);

/// Haar-distributed unitary (QR of a complex Gaussian matrix, phases fixed).
Matrix random_unitary(Eigen::Index dim, SplitMix64& gen);

/// Normalizes PSD operators into a POVM: S^-1/2 A_i S^-1/2 with S = sum A_i,
/// where eigenvalues of S below `regularization` are raised to it before
/// inverting.
Povm normalize_to_povm(const std::vector<Matrix>& parts, double regularization = 1e-9);

nlohmann::json to_json(const HermitianOperator& op);
nlohmann::json to_json(const QuantumEncoding& enc);

}  // namespace sfebound::lab
