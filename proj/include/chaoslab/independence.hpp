#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "chaoslab/chaos.hpp"
#include "chaoslab/test_functions.hpp"

namespace chaoslab {

/// Default tolerance for the exact conditions.
inline constexpr double kDefaultTolerance = 1e-6;

/// Smallest sample count accepted by empirical_dependence.
inline constexpr std::size_t kMinDependenceSamples = 10000;

/// Width, in standard errors, of every statistical band.
inline constexpr double kStdErrorBand = 4.0;

/// d >= 2 groups of standardized chaos elements over one space; all elements
/// of a group share one order. Groups are stored with orders weakly
/// decreasing (stable sort at construction).
class ChaosVector {
 public:
  struct Group {
    int order;
    std::vector<ChaosElement> elements;
  };

  /// Throws ContractViolation for fewer than two groups, empty groups, mixed
  /// orders inside a group, mixed spaces, or non-standardized elements.
  explicit ChaosVector(std::vector<std::vector<ChaosElement>> groups);

  const std::vector<Group>& groups() const { return groups_; }
  std::size_t group_count() const { return groups_.size(); }
  std::size_t element_count() const { return elements_.size(); }
  HilbertSpace space() const { return elements_.front().space(); }

  /// All elements, group by group.
  const std::vector<ChaosElement>& elements() const { return elements_; }
  int group_of(std::size_t element) const { return group_of_[element]; }

 private:
  std::vector<Group> groups_;
  std::vector<ChaosElement> elements_;
  std::vector<int> group_of_;
};

/// Cov(F_i^2, F_j^2) for every pair of elements. Cross-group entries form
/// the criterion; within-group entries are informational.
struct SquaredCovMatrix {
  std::size_t size = 0;
  std::vector<double> values;  // row-major size x size, symmetric
  std::vector<int> group_of;

  double at(std::size_t i, std::size_t j) const { return values[i * size + j]; }
  bool cross_group(std::size_t i, std::size_t j) const { return group_of[i] != group_of[j]; }
};

SquaredCovMatrix squared_cov_matrix(const ChaosVector& v);

/// Contraction norms ||f_i ⊗_r f_j||, r = 1..q_i∧q_j, for one cross-group pair i < j.
struct PairContractions {
  std::size_t i = 0;
  std::size_t j = 0;
  double cov2 = 0.0;
  std::vector<double> norms;

  double max_norm() const;
  int argmax_r() const;  // 1-based r attaining max_norm (smallest on ties)
};

std::vector<PairContractions> contraction_table(const ChaosVector& v);

/// Verdicts for the squared-covariance and contraction conditions with the
/// largest witnessing value and the pair (and r) attaining it.
struct CriterionVerdict {
  double tol = kDefaultTolerance;
  bool covariance_pass = true;
  double covariance_witness = 0.0;
  std::pair<std::size_t, std::size_t> covariance_pair{0, 0};
  bool contraction_pass = true;
  double contraction_witness = 0.0;
  std::pair<std::size_t, std::size_t> contraction_pair{0, 0};
  int contraction_r = 0;
};

CriterionVerdict criterion_check(const ChaosVector& v, double tol = kDefaultTolerance);
CriterionVerdict criterion_check(const std::vector<PairContractions>& table, double tol);

/// One test-function list per group. On a group with m elements the
/// function psi acts as x -> prod_l psi(x_l).
using Dictionary = std::vector<std::vector<TestFunction>>;

/// The default dictionary repeated for each group of v.
Dictionary default_dictionary_for(const ChaosVector& v);

struct MonteCarloOptions {
  int threads = 1;
  std::size_t block_size = 0;  // 0: default_block_size(samples)
};

struct TupleGap {
  std::vector<int> choice;  // index into each group's list
  double gap = 0.0;         // signed E[prod] - prod E
  double std_error = 0.0;
};

struct DependenceEstimate {
  double gap = 0.0;  // max |gap| over tuples
  double std_error = 0.0;
  std::vector<int> argmax;
  std::vector<TupleGap> tuples;
  std::uint64_t seed = 0;
  std::size_t samples = 0;
  std::size_t block_size = 0;

  /// gap lies inside the kStdErrorBand band around 0.
  bool within_band() const { return gap <= kStdErrorBand * std_error; }
};

/// Estimates |E[prod_j psi_j(F_j)] - prod_j E[psi_j(F_j)]| for every tuple of
/// the dictionary product; standard errors by block means (delta method).
DependenceEstimate empirical_dependence(const ChaosVector& v, const Dictionary& dict,
                                        std::size_t samples, std::uint64_t seed,
                                        MonteCarloOptions options = {});

/// sup |d/dx_l Psi| summed over the group coordinates, for psi applied
/// coordinatewise to m elements.
double group_derivative_bound(const TestFunction& psi, int m);

/// ||Psi||_q for Psi(x) = prod_{l<=m} psi(x_l), from the univariate bounds.
double group_norm(const TestFunction& psi, int m, int q);

/// max over tuples of |gap_t| / (||psi_d'||_inf prod_{j<d} ||psi_j||_{q_1} sum_{j<l} Cov(F_j^2, F_l^2)).
/// Throws DegenerateInput if a cross-group squared covariance is zero.
double bound_ratio(const ChaosVector& v, const Dictionary& dict, const DependenceEstimate& estimate);
double bound_ratio(const ChaosVector& v, const Dictionary& dict, std::size_t samples,
                   std::uint64_t seed, MonteCarloOptions options = {});

struct IndependenceReport {
  SquaredCovMatrix matrix;
  std::vector<PairContractions> table;
  CriterionVerdict verdict;
  std::optional<DependenceEstimate> dependence;
  std::vector<std::string> dictionary_ids;  // flattened, group by group
};

/// Exact conditions at `tol`, plus the Monte Carlo estimate when samples > 0.
IndependenceReport build_report(const ChaosVector& v, double tol, const Dictionary& dict,
                                std::size_t samples, std::uint64_t seed,
                                MonteCarloOptions options = {});

/// Key/value lines echoed at the top of every output.
using RunHeader = std::vector<std::pair<std::string, std::string>>;

/// Flat CSV: pair_i,pair_j,cov2,max_contraction_norm,r_argmax (cross-group
/// pairs, 1-based element indices), preceded by '#' header lines.
std::string report_csv(const IndependenceReport& report, const RunHeader& header);

/// Structured summary (JSON): header, verdicts, tolerances, matrix,
/// contraction table and Monte Carlo estimate.
std::string report_json(const IndependenceReport& report, const RunHeader& header);

/// 17-significant-digit decimal ("%.17g"); parses back to the same double.
std::string format_double(double v);

}  // namespace chaoslab
