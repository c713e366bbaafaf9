#include "chaoslab/chaos.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaoslab/errors.hpp"
#include "chaoslab/hermite.hpp"

namespace chaoslab {

namespace {

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(out);
}

void require_same_space(const ChaosElement& f, const ChaosElement& g) {
  if (!(f.space() == g.space())) {
    throw ContractViolation("chaos elements live over different spaces (N=" +
                            std::to_string(f.space().dimension()) + " vs N=" +
                            std::to_string(g.space().dimension()) + ")");
  }
}

}  // namespace

ChaosElement::ChaosElement(SymmetricTensor kernel) : kernel_(std::move(kernel)) {
  if (kernel_.order() < 1) throw ContractViolation("chaos elements need order >= 1");
  standardized_ = std::abs(variance(*this) - 1.0) <= kStandardizedTolerance;
}

// ---------------------------------------------------------------------------
// ChaosExpansion

void ChaosExpansion::add(const SymmetricTensor& kernel) {
  if (!(kernel.space() == space_)) throw ContractViolation("expansion component over another space");
  auto it = components_.find(kernel.order());
  if (it == components_.end()) {
    if (!kernel.empty()) components_.emplace(kernel.order(), kernel);
    return;
  }
  it->second = linear_combination(1.0, it->second, 1.0, kernel);
  if (it->second.empty()) components_.erase(it);
}

const SymmetricTensor* ChaosExpansion::component(int order) const {
  auto it = components_.find(order);
  return it == components_.end() ? nullptr : &it->second;
}

double ChaosExpansion::mean() const {
  const SymmetricTensor* c = component(0);
  return c ? c->at({}) : 0.0;
}

double ChaosExpansion::second_moment() const {
  double sum = 0.0;
  for (const auto& [order, kernel] : components_) {
    sum += static_cast<double>(factorial(order)) * inner(kernel, kernel);
  }
  return sum;
}

double ChaosExpansion::variance() const {
  const double m = mean();
  return second_moment() - m * m;
}

double ChaosExpansion::evaluate(std::span<const double> x) const {
  double sum = 0.0;
  for (const auto& [order, kernel] : components_) {
    if (order == 0) {
      sum += kernel.at({});
    } else {
      sum += chaoslab::evaluate(ChaosElement(kernel), x);
    }
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Element operations

double evaluate(const ChaosElement& element, std::span<const double> x) {
  const int n = element.space().dimension();
  if (static_cast<int>(x.size()) != n) {
    throw ContractViolation("evaluate: sample has dimension " + std::to_string(x.size()) +
                            ", element lives in N=" + std::to_string(n));
  }
  const double qfact = static_cast<double>(factorial(element.order()));
  double sum = 0.0;
  for (const auto& [index, value] : element.kernel().entries()) {
    double term = qfact * value;
    std::size_t k = 0;
    while (k < index.size()) {
      std::size_t run = 1;
      while (k + run < index.size() && index[k + run] == index[k]) ++run;
      term *= hermite(static_cast<int>(run), x[index[k] - 1]);
      k += run;
    }
    sum += term;
  }
  return sum;
}

double variance(const ChaosElement& element) {
  return static_cast<double>(factorial(element.order())) *
         inner(element.kernel(), element.kernel());
}

ChaosElement normalize(const ChaosElement& element) {
  if (element.standardized()) return element;
  const double v = variance(element);
  if (!(v > 0.0)) throw DegenerateInput("cannot normalize a chaos element with a zero kernel");
  return ChaosElement(element.kernel().scaled(1.0 / std::sqrt(v)));
}

ChaosExpansion multiply(const ChaosElement& f, const ChaosElement& g) {
  require_same_space(f, g);
  const int p = f.order();
  const int q = g.order();
  ChaosExpansion out(f.space());
  for (int r = 0; r <= std::min(p, q); ++r) {
    const double weight = static_cast<double>(factorial(r)) * binomial(p, r) * binomial(q, r);
    out.add(contract_sym(f.kernel(), g.kernel(), r).scaled(weight));
  }
  return out;
}

double cov_squares(const ChaosElement& f, const ChaosElement& g) {
  require_same_space(f, g);
  const ChaosExpansion f2 = multiply(f, f);
  const ChaosExpansion g2 = multiply(g, g);
  // Orders of F^2 and G^2 pair up only when equal; walk the smaller set.
  const bool f_smaller = f2.components().size() <= g2.components().size();
  const ChaosExpansion& small = f_smaller ? f2 : g2;
  const ChaosExpansion& large = f_smaller ? g2 : f2;
  double sum = 0.0;
  for (const auto& [order, kernel] : small.components()) {
    if (order == 0) continue;
    const SymmetricTensor* other = large.component(order);
    if (!other) continue;
    sum += static_cast<double>(factorial(order)) * inner(kernel, *other);
  }
  return sum;
}

std::vector<double> contraction_norms(const ChaosElement& f, const ChaosElement& g) {
  require_same_space(f, g);
  std::vector<double> out;
  for (int r = 1; r <= std::min(f.order(), g.order()); ++r) {
    out.push_back(contraction_norm(f.kernel(), g.kernel(), r));
  }
  return out;
}

// ---------------------------------------------------------------------------
// EvaluationPlan

EvaluationPlan::EvaluationPlan(std::span<const ChaosElement> elements) {
  if (elements.empty()) throw ContractViolation("EvaluationPlan needs at least one element");
  dimension_ = elements.front().space().dimension();
  std::vector<bool> used(dimension_, false);
  element_begin_.push_back(0);
  term_begin_.push_back(0);
  for (const ChaosElement& e : elements) {
    if (e.space().dimension() != dimension_) {
      throw ContractViolation("EvaluationPlan: elements over different spaces");
    }
    max_order_ = std::max(max_order_, e.order());
    const double qfact = static_cast<double>(factorial(e.order()));
    for (const auto& [index, value] : e.kernel().entries()) {
      std::size_t k = 0;
      while (k < index.size()) {
        std::size_t run = 1;
        while (k + run < index.size() && index[k + run] == index[k]) ++run;
        factors_.push_back({index[k] - 1, static_cast<int>(run)});
        used[index[k] - 1] = true;
        k += run;
      }
      term_weight_.push_back(qfact * value);
      term_begin_.push_back(factors_.size());
    }
    element_begin_.push_back(term_weight_.size());
  }
  for (int i = 0; i < dimension_; ++i) {
    if (used[i]) used_coordinates_.push_back(i);
  }
}

std::size_t EvaluationPlan::scratch_size() const {
  return static_cast<std::size_t>(dimension_) * static_cast<std::size_t>(max_order_ + 1);
}

void EvaluationPlan::evaluate(std::span<const double> x, std::span<double> scratch,
                              std::span<double> out) const {
  const std::size_t stride = static_cast<std::size_t>(max_order_ + 1);
  for (int i : used_coordinates_) {
    double* h = scratch.data() + static_cast<std::size_t>(i) * stride;
    const double xi = x[i];
    h[0] = 1.0;
    h[1] = xi;
    for (int k = 1; k < max_order_; ++k) h[k + 1] = (xi * h[k] - h[k - 1]) / static_cast<double>(k + 1);
  }
  for (std::size_t e = 0; e + 1 < element_begin_.size(); ++e) {
    double sum = 0.0;
    for (std::size_t t = element_begin_[e]; t < element_begin_[e + 1]; ++t) {
      double term = term_weight_[t];
      for (std::size_t k = term_begin_[t]; k < term_begin_[t + 1]; ++k) {
        term *= scratch[static_cast<std::size_t>(factors_[k].coordinate) * stride + factors_[k].power];
      }
      sum += term;
    }
    out[e] = sum;
  }
}

}  // namespace chaoslab
