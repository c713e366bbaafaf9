#pragma once

#include <span>
#include <vector>

namespace chaoslab {

/// H_q(x) with leading coefficient 1/q!:
///   H_0 = 1, H_1 = x, H_{q+1} = (x H_q - H_{q-1}) / (q + 1).
/// The classical probabilists' polynomial is q! H_q; it is never used here.
double hermite(int q, double x);

/// Evaluates H_0..H_Q by the recurrence.
class HermiteEvaluator {
 public:
  explicit HermiteEvaluator(int max_order);

  int max_order() const { return max_order_; }

  /// Throws ContractViolation when q is outside 0..max_order.
  double operator()(int q, double x) const;

  /// Writes H_0(x)..H_Q(x) into out (out.size() must be Q + 1).
  void fill(double x, std::span<double> out) const;

 private:
  int max_order_;
};

/// Monomial coefficients of H_q in the same normalization: result[k] is the
/// coefficient of x^k. Used by the Gaussian moment oracle.
std::vector<double> hermite_coefficients(int q);

}  // namespace chaoslab
