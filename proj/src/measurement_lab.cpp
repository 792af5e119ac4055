#include "sfebound/measurement_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace sfebound::lab {

namespace {

Eigen::SelfAdjointEigenSolver<Matrix> eigensolve(const Matrix& m, bool vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Hermitian eigensolver did not converge");
  return solver;
}

void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                                std::to_string(b) + ")");
  }
}

Complex standard_complex_gaussian(SplitMix64& gen) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double re = normal(gen);
  const double im = normal(gen);
  return {re, im};
}

Matrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, SplitMix64& gen) {
  Matrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = standard_complex_gaussian(gen);
  }
  return g;
}

// V diag(f(lambda)) V* for a Hermitian matrix.
template <class F>
Matrix spectral_map(const Matrix& m, F f) {
  const auto solver = eigensolve(m, true);
  Eigen::VectorXd mapped = solver.eigenvalues();
  for (Eigen::Index i = 0; i < mapped.size(); ++i) mapped(i) = f(mapped(i));
  const Matrix& v = solver.eigenvectors();
  return v * mapped.cast<Complex>().asDiagonal() * v.adjoint();
}

}  // namespace

// --- types ------------------------------------------------------------------

HermitianOperator::HermitianOperator(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) throw std::invalid_argument("operator must be a non-empty square matrix");
  const Matrix adj = m.adjoint();
  const double asym = (m - adj).cwiseAbs().maxCoeff();
  if (!(asym <= kHermitianTol)) {
    throw std::invalid_argument("operator is not Hermitian (max |A - A*| = " + std::to_string(asym) + ")");
  }
  m_ = (m + adj) / 2.0;
}

HermitianOperator HermitianOperator::identity(Eigen::Index dim) { return HermitianOperator(Matrix::Identity(dim, dim)); }

Eigen::VectorXd HermitianOperator::eigenvalues() const { return eigensolve(m_, false).eigenvalues(); }

DensityMatrix::DensityMatrix(const Matrix& m) : HermitianOperator(m) {
  const double min_ev = eigenvalues().minCoeff();
  if (min_ev < -kPsdTol) throw std::invalid_argument("density matrix has eigenvalue " + std::to_string(min_ev));
  if (std::abs(trace() - 1.0) > kPsdTol) throw std::invalid_argument("density matrix trace is " + std::to_string(trace()));
}

MeasurementOperator::MeasurementOperator(const Matrix& m) : HermitianOperator(m) {
  const auto ev = eigenvalues();
  if (ev.minCoeff() < -kPsdTol || ev.maxCoeff() > 1.0 + kPsdTol) {
    throw std::invalid_argument("measurement operator spectrum [" + std::to_string(ev.minCoeff()) + ", " +
                                std::to_string(ev.maxCoeff()) + "] not within [0, 1]");
  }
}

Povm::Povm(std::vector<MeasurementOperator> elements) : elements_(std::move(elements)) {
  labels_.reserve(elements_.size());
  for (std::size_t i = 0; i < elements_.size(); ++i) labels_.push_back({static_cast<std::int64_t>(i)});
  if (elements_.empty()) throw std::invalid_argument("POVM needs at least one outcome");
  for (const auto& e : elements_) require_same_dim(e.dim(), dim(), "POVM element");
  const double defect = completeness_defect();
  if (!(defect <= kCompletenessTol)) throw std::invalid_argument("POVM elements do not sum to identity (defect " + std::to_string(defect) + ")");
}

Povm::Povm(std::vector<MeasurementOperator> elements, std::vector<std::vector<std::int64_t>> labels)
    : Povm(std::move(elements)) {
  if (labels.size() != elements_.size()) throw std::invalid_argument("POVM label count differs from element count");
  labels_ = std::move(labels);
}

double Povm::completeness_defect() const {
  Matrix sum = Matrix::Zero(dim(), dim());
  for (const auto& e : elements_) sum += e.matrix();
  sum -= Matrix::Identity(dim(), dim());
  return operator_norm(HermitianOperator(sum));
}

double Povm::min_eigenvalue() const {
  double out = std::numeric_limits<double>::infinity();
  for (const auto& e : elements_) out = std::min(out, e.eigenvalues().minCoeff());
  return out;
}

void QuantumEncoding::validate() const {
  if (probs.empty()) throw std::invalid_argument("encoding has no inputs");
  if (states.size() != probs.size()) throw std::invalid_argument("encoding needs one state per input");
  double total = 0;
  for (double p : probs) {
    if (!(p >= 0)) throw std::invalid_argument("encoding probabilities must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw std::invalid_argument("encoding probabilities must sum to 1");
  for (const auto& s : states) require_same_dim(s.dim(), dim(), "encoding state");
  if (b_size < 1) throw std::invalid_argument("encoding b_size must be positive");
  for (const auto& f : functions) {
    if (f.size() != probs.size()) throw std::invalid_argument("encoding function is not total");
    for (auto b : f) {
      if (b < 0 || b >= b_size) throw std::invalid_argument("encoding function value out of range");
    }
  }
}

// --- norms ------------------------------------------------------------------

HermitianOperator matrix_sqrt(const HermitianOperator& op) {
  const auto solver = eigensolve(op.matrix(), true);
  const double min_ev = solver.eigenvalues().minCoeff();
  if (min_ev < -kSqrtRejectTol) throw std::domain_error("matrix_sqrt of an operator with eigenvalue " + std::to_string(min_ev));
  Eigen::VectorXd roots = solver.eigenvalues();
  for (Eigen::Index i = 0; i < roots.size(); ++i) roots(i) = std::sqrt(std::max(roots(i), 0.0));
  const Matrix& v = solver.eigenvectors();
  return HermitianOperator(v * roots.cast<Complex>().asDiagonal() * v.adjoint());
}

double trace_norm(const HermitianOperator& op) { return op.eigenvalues().cwiseAbs().sum(); }

double operator_norm(const HermitianOperator& op) { return op.eigenvalues().cwiseAbs().maxCoeff(); }

Complex hs_inner(const HermitianOperator& a, const HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "hs_inner");
  // Tr(A* B) = sum_ij conj(A_ij) B_ij
  return a.matrix().conjugate().cwiseProduct(b.matrix()).sum();
}

HermitianOperator sandwich(const HermitianOperator& root, const HermitianOperator& inner) {
  require_same_dim(root.dim(), inner.dim(), "sandwich");
  return HermitianOperator(root.matrix() * inner.matrix() * root.matrix());
}

// --- gentle measurement -----------------------------------------------------

GentleReport check_gentle(const DensityMatrix& rho, const MeasurementOperator& lam) {
  require_same_dim(rho.dim(), lam.dim(), "check_gentle");
  GentleReport r;
  r.epsilon = std::clamp(1.0 - hs_inner(lam, rho).real(), 0.0, 1.0);
  const auto root = matrix_sqrt(lam);
  const HermitianOperator diff(rho.matrix() - sandwich(root, rho).matrix());
  r.disturbance = trace_norm(diff);
  r.bound = 2.0 * std::sqrt(r.epsilon);
  r.holds = r.disturbance <= r.bound + kInequalityTol;
  return r;
}

HermitianOperator sequential_operator(std::span<const MeasurementOperator> lams) {
  if (lams.empty()) throw std::invalid_argument("sequential_operator needs at least one measurement operator");
  for (const auto& l : lams) require_same_dim(l.dim(), lams.front().dim(), "sequential_operator");
  HermitianOperator acc = lams.front();
  for (std::size_t k = 1; k < lams.size(); ++k) acc = sandwich(matrix_sqrt(lams[k]), acc);
  return acc;
}

SequentialReport check_sequential(const DensityMatrix& rho, std::span<const MeasurementOperator> lams) {
  if (lams.size() < 2) throw std::invalid_argument("check_sequential needs at least two measurement operators");
  for (const auto& l : lams) require_same_dim(l.dim(), rho.dim(), "check_sequential");
  SequentialReport r;
  for (const auto& l : lams) r.epsilons.push_back(std::clamp(1.0 - hs_inner(l, rho).real(), 0.0, 1.0));
  r.expectation = hs_inner(rho, sequential_operator(lams)).real();
  r.bound = 1.0 - r.epsilons.front();
  for (std::size_t i = 1; i < r.epsilons.size(); ++i) r.bound -= 2.0 * std::sqrt(r.epsilons[i]);
  r.holds = r.expectation >= r.bound - kInequalityTol;
  return r;
}

// --- combined measurement ---------------------------------------------------

namespace {

// Wrapping order around the middle POVM: every other index, ascending.
std::vector<std::size_t> wrap_order(std::size_t n, std::size_t middle) {
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < n; ++i) {
    if (i != middle) order.push_back(i);
  }
  return order;
}

Matrix nested_element(std::span<const Povm> povms, const std::vector<std::vector<Matrix>>& roots, std::size_t middle,
                      const std::vector<std::int64_t>& tuple) {
  Matrix acc = povms[middle][static_cast<std::size_t>(tuple[middle])].matrix();
  for (const auto i : wrap_order(povms.size(), middle)) {
    const Matrix& r = roots[i][static_cast<std::size_t>(tuple[i])];
    acc = r * acc * r;
  }
  return acc;
}

std::vector<std::vector<Matrix>> element_roots(std::span<const Povm> povms) {
  std::vector<std::vector<Matrix>> roots(povms.size());
  for (std::size_t i = 0; i < povms.size(); ++i) {
    for (const auto& e : povms[i].elements()) roots[i].push_back(matrix_sqrt(e).matrix());
  }
  return roots;
}

}  // namespace

Povm combined_povm(std::span<const Povm> povms, std::size_t middle) {
  if (povms.empty()) throw std::invalid_argument("combined_povm needs at least one POVM");
  if (middle >= povms.size()) throw std::invalid_argument("combined_povm: middle index out of range");
  for (const auto& p : povms) require_same_dim(p.dim(), povms.front().dim(), "combined_povm");
  if (povms.size() == 1) return povms.front();

  const auto roots = element_roots(povms);
  std::vector<MeasurementOperator> elements;
  std::vector<std::vector<std::int64_t>> labels;
  std::vector<std::int64_t> tuple(povms.size(), 0);
  while (true) {
    elements.emplace_back(nested_element(povms, roots, middle, tuple));
    labels.push_back(tuple);
    // odometer, last position fastest
    std::size_t pos = povms.size();
    while (pos > 0) {
      --pos;
      if (++tuple[pos] < static_cast<std::int64_t>(povms[pos].size())) break;
      tuple[pos] = 0;
      if (pos == 0) return Povm(std::move(elements), std::move(labels));
    }
  }
}

LearnReport averaged_strategy_success(const QuantumEncoding& enc, std::span<const Povm> povms) {
  enc.validate();
  const std::size_t n = povms.size();
  if (n == 0) throw std::invalid_argument("averaged_strategy_success needs at least one POVM");
  if (enc.functions.size() != n) throw std::invalid_argument("need exactly one POVM per function");
  for (std::size_t i = 0; i < n; ++i) {
    require_same_dim(povms[i].dim(), enc.dim(), "averaged_strategy_success");
    if (static_cast<std::int64_t>(povms[i].size()) < enc.b_size)
      throw std::invalid_argument("POVM " + std::to_string(i) + " has fewer outcomes than b_size");
  }

  LearnReport r;
  r.individual_success.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t x = 0; x < enc.x_count(); ++x) {
      const auto& m = povms[i][static_cast<std::size_t>(enc.functions[i][x])];
      r.individual_success[i] += enc.probs[x] * hs_inner(enc.states[x], m).real();
    }
  }
  r.average = std::accumulate(r.individual_success.begin(), r.individual_success.end(), 0.0) / static_cast<double>(n);

  std::vector<double> eps(n);
  double sum_eps = 0;
  for (std::size_t i = 0; i < n; ++i) {
    eps[i] = std::clamp(1.0 - r.individual_success[i], 0.0, 1.0);
    sum_eps += eps[i];
    r.sum_sqrt_eps += std::sqrt(eps[i]);
  }
  const double nd = static_cast<double>(n);
  r.cauchy_schwarz_rhs = std::sqrt(nd) * std::sqrt(sum_eps);
  r.bound = r.average - 2.0 * (nd - 1.0) * std::sqrt(std::max(0.0, 1.0 - r.average));
  r.averaged_sequential_bound = 1.0 - sum_eps / nd - 2.0 * (nd - 1.0) / nd * r.sum_sqrt_eps;

  const auto roots = element_roots(povms);
  std::vector<std::int64_t> tuple(n);
  for (std::size_t j = 0; j < n; ++j) {
    double success = 0;
    for (std::size_t x = 0; x < enc.x_count(); ++x) {
      for (std::size_t i = 0; i < n; ++i) tuple[i] = enc.functions[i][x];
      const Matrix element = nested_element(povms, roots, j, tuple);
      success += enc.probs[x] * enc.states[x].matrix().conjugate().cwiseProduct(element).sum().real();
    }
    r.per_middle.push_back(success);
    double b = 1.0 - eps[j];
    for (std::size_t i = 0; i < n; ++i) {
      if (i != j) b -= 2.0 * std::sqrt(eps[i]);
    }
    r.per_middle_bound.push_back(b);
  }
  r.achieved = std::accumulate(r.per_middle.begin(), r.per_middle.end(), 0.0) / nd;
  r.slack = r.achieved - r.bound;
  r.holds = r.achieved >= r.bound - kInequalityTol;
  return r;
}

// --- random instances -------------------------------------------------------

DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, SplitMix64& gen) {
  if (dim < 1 || rank < 1 || rank > dim) throw std::invalid_argument("random_density needs 1 <= rank <= dim");
  const Matrix g = gaussian_matrix(dim, rank, gen);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

DensityMatrix random_density(Eigen::Index dim, Eigen::Index rank, std::uint64_t seed) {
  SplitMix64 gen(seed);
  return random_density(dim, rank, gen);
}

Povm normalize_to_povm(const std::vector<Matrix>& parts, double regularization) {
  if (parts.empty()) throw std::invalid_argument("normalize_to_povm needs at least one operator");
  const Eigen::Index dim = parts.front().rows();
  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& a : parts) sum += a;
  sum = (sum + sum.adjoint()).eval() / 2.0;
  // The floor only touches numerically singular directions, so a full-rank
  // sum still yields an exact resolution of the identity.
  const Matrix inv_root = spectral_map(sum, [&](double v) { return 1.0 / std::sqrt(std::max(v, regularization)); });
  std::vector<MeasurementOperator> elements;
  elements.reserve(parts.size());
  for (const auto& a : parts) elements.emplace_back(inv_root * a * inv_root);
  return Povm(std::move(elements));
}

Povm random_povm(Eigen::Index dim, std::size_t outcomes, SplitMix64& gen) {
  if (dim < 1 || outcomes < 1) throw std::invalid_argument("random_povm needs positive dim and outcomes");
  std::vector<Matrix> parts;
  parts.reserve(outcomes);
  for (std::size_t i = 0; i < outcomes; ++i) {
    const Matrix g = gaussian_matrix(dim, dim, gen);
    parts.push_back(g * g.adjoint());
  }
  return normalize_to_povm(parts);
}

Povm random_povm(Eigen::Index dim, std::size_t outcomes, std::uint64_t seed) {
  SplitMix64 gen(seed);
  return random_povm(dim, outcomes, gen);
}

Matrix random_unitary(Eigen::Index dim, SplitMix64& gen) {
  const Matrix g = gaussian_matrix(dim, dim, gen);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

QuantumEncoding random_encoding(std::size_t x_count, Eigen::Index dim, std::size_t n_functions, std::int64_t b_size,
                                std::uint64_t seed) {
  if (x_count < 1 || dim < 1 || n_functions < 1 || b_size < 1) throw std::invalid_argument("random_encoding needs positive parameters");
  SplitMix64 gen(seed);
  QuantumEncoding enc;
  enc.b_size = b_size;
  std::exponential_distribution<double> expo(1.0);
  double total = 0;
  for (std::size_t x = 0; x < x_count; ++x) {
    enc.probs.push_back(expo(gen));
    total += enc.probs.back();
  }
  for (auto& p : enc.probs) p /= total;
  for (std::size_t x = 0; x < x_count; ++x) enc.states.push_back(random_density(dim, dim, gen));
  std::uniform_int_distribution<std::int64_t> pick(0, b_size - 1);
  enc.functions.assign(n_functions, std::vector<std::int64_t>(x_count));
  for (auto& f : enc.functions) {
    for (auto& v : f) v = pick(gen);
  }
  return enc;
}

nlohmann::json to_json(const HermitianOperator& op) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < op.dim(); ++j) row.push_back({op.matrix()(i, j).real(), op.matrix()(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const QuantumEncoding& enc) {
  nlohmann::json states = nlohmann::json::array();
  for (const auto& s : enc.states) states.push_back(to_json(s));
  return {{"probs", enc.probs}, {"states", states}, {"functions", enc.functions}, {"b_size", enc.b_size}};
}

}  // namespace sfebound::lab
