#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chaoslab/errors.hpp"
#include "chaoslab/hermite.hpp"
#include "chaoslab/montecarlo.hpp"
#include "chaoslab/tensor.hpp"

namespace chaoslab {
namespace {

TEST(Hermite, LowOrders) {
  for (double x : {-2.0, 0.0, 1.0, 3.0}) {
    EXPECT_EQ(hermite(0, x), 1.0);
    EXPECT_EQ(hermite(1, x), x);
    EXPECT_DOUBLE_EQ(hermite(2, x), (x * x - 1.0) / 2.0);
  }
  EXPECT_DOUBLE_EQ(hermite(3, 2.0), 1.0 / 3.0);
}

TEST(Hermite, OrderChecked) {
  EXPECT_THROW(hermite(-1, 0.0), ContractViolation);
  const HermiteEvaluator h(4);
  EXPECT_THROW(h(5, 0.0), ContractViolation);
  EXPECT_DOUBLE_EQ(h(4, 1.0), hermite(4, 1.0));
}

TEST(Hermite, CoefficientsOfRodriguesForm) {
  // H_4 = (x^4 - 6x^2 + 3) / 24
  const std::vector<double> c = hermite_coefficients(4);
  ASSERT_EQ(c.size(), 5u);
  EXPECT_DOUBLE_EQ(c[0], 3.0 / 24.0);
  EXPECT_DOUBLE_EQ(c[1], 0.0);
  EXPECT_DOUBLE_EQ(c[2], -6.0 / 24.0);
  EXPECT_DOUBLE_EQ(c[3], 0.0);
  EXPECT_DOUBLE_EQ(c[4], 1.0 / 24.0);
}

// Probabilists' coefficients of He_q from the explicit sum
// He_q(x) = q! sum_m (-1)^m x^{q-2m} / (m! (q-2m)! 2^m), then divided by q!.
double explicit_hermite(int q, double x) {
  double s = 0.0;
  for (int m = 0; 2 * m <= q; ++m) {
    const double term = std::pow(-1.0, m) * std::pow(x, q - 2 * m) /
                        (static_cast<double>(factorial(m)) *
                         static_cast<double>(factorial(q - 2 * m)) * std::pow(2.0, m));
    s += term;
  }
  return s;
}

TEST(Hermite, RecurrenceMatchesExplicitExpansion) {
  const HermiteEvaluator h(10);
  std::vector<double> all(11);
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    h.fill(x, all);
    for (int q = 0; q <= 10; ++q) {
      const double expected = explicit_hermite(q, x);
      EXPECT_NEAR(all[q], expected, 1e-12 * std::max(1.0, std::abs(expected))) << q << " " << x;
      EXPECT_EQ(all[q], hermite(q, x));
    }
  }
}

TEST(Hermite, GaussianOrthogonality) {
  constexpr int kMax = 6;
  const SampleBatch batch = sample(2024, 1, 1000000);
  const HermiteEvaluator h(kMax);
  for (int p = 0; p <= kMax; ++p) {
    for (int q = p; q <= kMax; ++q) {
      const Estimate e = estimate(
          [&](std::span<const double> x) { return h(p, x[0]) * h(q, x[0]); }, batch);
      const double expected = p == q ? 1.0 / static_cast<double>(factorial(q)) : 0.0;
      EXPECT_LE(std::abs(e.mean - expected), 4.0 * e.std_error) << p << "," << q;
    }
  }
}

}  // namespace
}  // namespace chaoslab
