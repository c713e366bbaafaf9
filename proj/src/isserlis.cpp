// Brute-force Gaussian moment oracle. Independent of the product formula:
// every element is expanded into raw monomials of the coordinates and
// moments are taken coordinate by coordinate.

#include <map>
#include <string>
#include <vector>

#include "chaoslab/chaos.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/hermite.hpp"

namespace chaoslab {

namespace {

constexpr int kMaxTotalOrder = 12;
constexpr int kMaxDimension = 6;

using Exponents = std::vector<int>;
using Polynomial = std::map<Exponents, double>;

Polynomial to_polynomial(const ChaosElement& element) {
  const int n = element.space().dimension();
  const double qfact = static_cast<double>(factorial(element.order()));
  Polynomial out;
  for (const auto& [index, value] : element.kernel().entries()) {
    Polynomial term{{Exponents(n, 0), qfact * value}};
    std::size_t k = 0;
    while (k < index.size()) {
      std::size_t run = 1;
      while (k + run < index.size() && index[k + run] == index[k]) ++run;
      const int coord = index[k] - 1;
      const std::vector<double> coeffs = hermite_coefficients(static_cast<int>(run));
      Polynomial next;
      for (const auto& [exps, c] : term) {
        for (std::size_t power = 0; power < coeffs.size(); ++power) {
          if (coeffs[power] == 0.0) continue;
          Exponents e = exps;
          e[coord] += static_cast<int>(power);
          next[e] += c * coeffs[power];
        }
      }
      term = std::move(next);
      k += run;
    }
    for (const auto& [exps, c] : term) out[exps] += c;
  }
  return out;
}

Polynomial product(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ea, ca] : a) {
    for (const auto& [eb, cb] : b) {
      Exponents e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out[e] += ca * cb;
    }
  }
  return out;
}

/// E[Z^k] for a standard normal: 0 for odd k, (k-1)!! for even k, i.e. the
/// number of perfect pairings of k objects.
double gaussian_moment(int k) {
  if (k % 2 == 1) return 0.0;
  double out = 1.0;
  for (int j = k - 1; j > 1; j -= 2) out *= static_cast<double>(j);
  return out;
}

double expectation(const Polynomial& p) {
  double sum = 0.0;
  for (const auto& [exps, c] : p) {
    double m = c;
    for (int k : exps) {
      m *= gaussian_moment(k);
      if (m == 0.0) break;
    }
    sum += m;
  }
  return sum;
}

}  // namespace

double isserlis_moment(std::span<const ChaosElement> elements) {
  if (elements.empty()) return 1.0;
  const HilbertSpace space = elements.front().space();
  int total = 0;
  for (const ChaosElement& e : elements) {
    if (!(e.space() == space)) throw ContractViolation("isserlis_moment: mixed spaces");
    total += e.order();
  }
  if (total > kMaxTotalOrder || space.dimension() > kMaxDimension) {
    throw ResourceLimit("isserlis_moment guard: total order " + std::to_string(total) +
                        " (max " + std::to_string(kMaxTotalOrder) + "), N=" +
                        std::to_string(space.dimension()) + " (max " +
                        std::to_string(kMaxDimension) + ")");
  }
  // Multiply all but the last factor, then contract the final product
  // directly into the expectation.
  Polynomial acc = to_polynomial(elements.front());
  if (elements.size() == 1) return expectation(acc);
  for (std::size_t k = 1; k + 1 < elements.size(); ++k) {
    acc = product(acc, to_polynomial(elements[k]));
  }
  const Polynomial last = to_polynomial(elements.back());
  double sum = 0.0;
  Exponents e(space.dimension(), 0);
  for (const auto& [ea, ca] : acc) {
    for (const auto& [eb, cb] : last) {
      double m = ca * cb;
      for (std::size_t i = 0; i < e.size() && m != 0.0; ++i) m *= gaussian_moment(ea[i] + eb[i]);
      sum += m;
    }
  }
  return sum;
}

}  // namespace chaoslab
