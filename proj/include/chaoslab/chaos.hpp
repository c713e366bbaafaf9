#pragma once

#include <map>
#include <span>
#include <vector>

#include "chaoslab/tensor.hpp"

namespace chaoslab {

/// Tolerance on |variance - 1| for an element to count as standardized.
inline constexpr double kStandardizedTolerance = 1e-10;

/// A multiple Wiener-Itô integral I_q(f) over the Gaussian coordinates
/// X(e_1)..X(e_N). Immutable.
class ChaosElement {
 public:
  /// Throws ContractViolation for order-0 kernels.
  explicit ChaosElement(SymmetricTensor kernel);

  int order() const { return kernel_.order(); }
  HilbertSpace space() const { return kernel_.space(); }
  const SymmetricTensor& kernel() const { return kernel_; }

  /// q! ||f||^2 equals 1 within kStandardizedTolerance.
  bool standardized() const { return standardized_; }

 private:
  SymmetricTensor kernel_;
  bool standardized_;
};

/// A finite sum of multiple integrals of different orders; the order-0
/// component is the mean.
class ChaosExpansion {
 public:
  explicit ChaosExpansion(HilbertSpace space) : space_(space) {}

  /// Adds `kernel` to the component of its order.
  void add(const SymmetricTensor& kernel);

  HilbertSpace space() const { return space_; }
  const std::map<int, SymmetricTensor>& components() const { return components_; }
  const SymmetricTensor* component(int order) const;

  double mean() const;
  /// sum_k k! ||h_k||^2, including the squared mean.
  double second_moment() const;
  double variance() const;
  double evaluate(std::span<const double> x) const;

 private:
  HilbertSpace space_;
  std::map<int, SymmetricTensor> components_;
};

/// I_q(f)(x) with X(e_i) = x_i:
///   sum over sorted m of q! f[m] prod_i H_{a_i(m)}(x_i).
double evaluate(const ChaosElement& element, std::span<const double> x);

/// q! ||f||^2.
double variance(const ChaosElement& element);

/// Rescales the kernel to unit variance. Standardized input is returned
/// unchanged. Throws DegenerateInput for a zero kernel.
ChaosElement normalize(const ChaosElement& element);

/// Product formula:
///   I_p(f) I_q(g) = sum_{r=0}^{p∧q} r! C(p,r) C(q,r) I_{p+q-2r}(f ⊗~_r g).
ChaosExpansion multiply(const ChaosElement& f, const ChaosElement& g);

/// Cov(F^2, G^2), computed exactly from the chaos expansions of F^2 and G^2.
double cov_squares(const ChaosElement& f, const ChaosElement& g);

/// ||f ⊗_r g|| for r = 1..min(p, q) (unsymmetrized contraction).
std::vector<double> contraction_norms(const ChaosElement& f, const ChaosElement& g);

/// Exact E[prod_k F_k] by expanding every element into raw monomials of the
/// coordinates and applying the Gaussian moment formula E[Z^{2m}] = (2m-1)!!.
/// Guarded to total order <= 12 and N <= 6 (ResourceLimit otherwise).
double isserlis_moment(std::span<const ChaosElement> elements);

/// Flattened form of a set of elements for fast repeated evaluation on
/// sample rows. Evaluation of one row is deterministic and allocation-free.
class EvaluationPlan {
 public:
  explicit EvaluationPlan(std::span<const ChaosElement> elements);

  std::size_t size() const { return element_begin_.size() - 1; }
  int dimension() const { return dimension_; }

  /// Writes the value of every element at coordinates x into out.
  /// `scratch` must hold at least scratch_size() doubles.
  void evaluate(std::span<const double> x, std::span<double> scratch,
                std::span<double> out) const;

  std::size_t scratch_size() const;

 private:
  struct Factor {
    int coordinate;  // 0-based
    int power;
  };
  int dimension_ = 0;
  int max_order_ = 1;
  std::vector<int> used_coordinates_;
  std::vector<std::size_t> element_begin_;  // into term_begin_
  std::vector<std::size_t> term_begin_;     // into factors_
  std::vector<double> term_weight_;         // q! f[m]
  std::vector<Factor> factors_;
};

}  // namespace chaoslab
