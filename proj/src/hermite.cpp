#include "chaoslab/hermite.hpp"

#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

double hermite(int q, double x) {
  if (q < 0) throw ContractViolation("Hermite order must be non-negative");
  if (q == 0) return 1.0;
  double prev = 1.0;
  double cur = x;
  for (int k = 1; k < q; ++k) {
    const double next = (x * cur - prev) / static_cast<double>(k + 1);
    prev = cur;
    cur = next;
  }
  return cur;
}

HermiteEvaluator::HermiteEvaluator(int max_order) : max_order_(max_order) {
  if (max_order < 1) throw ContractViolation("HermiteEvaluator needs max_order >= 1");
}

double HermiteEvaluator::operator()(int q, double x) const {
  if (q < 0 || q > max_order_) {
    throw ContractViolation("Hermite order " + std::to_string(q) + " outside 0.." +
                            std::to_string(max_order_));
  }
  return hermite(q, x);
}

void HermiteEvaluator::fill(double x, std::span<double> out) const {
  if (out.size() != static_cast<std::size_t>(max_order_) + 1) {
    throw ContractViolation("HermiteEvaluator::fill: output span has the wrong size");
  }
  out[0] = 1.0;
  out[1] = x;
  for (int k = 1; k < max_order_; ++k) {
    out[k + 1] = (x * out[k] - out[k - 1]) / static_cast<double>(k + 1);
  }
}

std::vector<double> hermite_coefficients(int q) {
  if (q < 0) throw ContractViolation("Hermite order must be non-negative");
  std::vector<double> prev{1.0};
  if (q == 0) return prev;
  std::vector<double> cur{0.0, 1.0};
  for (int k = 1; k < q; ++k) {
    std::vector<double> next(k + 2, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) next[i + 1] += cur[i];
    for (std::size_t i = 0; i < prev.size(); ++i) next[i] -= prev[i];
    for (double& c : next) c /= static_cast<double>(k + 1);
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur;
}

}  // namespace chaoslab
