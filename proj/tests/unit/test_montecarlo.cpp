#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "chaoslab/chaos.hpp"
#include "chaoslab/errors.hpp"
#include "chaoslab/montecarlo.hpp"

namespace chaoslab {
namespace {

TEST(Philox, KnownAnswers) {
  using C = Philox4x32::Counter;
  using K = Philox4x32::Key;
  EXPECT_EQ(Philox4x32::generate(C{0, 0, 0, 0}, K{0, 0}),
            (C{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox4x32::generate(C{0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                                 K{0xffffffff, 0xffffffff}),
            (C{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox4x32::generate(C{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                                 K{0xa4093822, 0x299f31d0}),
            (C{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(NormalQuantile, Symmetric) {
  EXPECT_NEAR(normal_quantile(0.5), 0.0, 1e-15);
  EXPECT_NEAR(normal_quantile(0.975), 1.959963984540054, 1e-12);
  EXPECT_NEAR(normal_quantile(0.025), -1.959963984540054, 1e-12);
}

TEST(Sample, MomentsWithinClt) {
  constexpr std::size_t kCount = 200000;
  const SampleBatch batch = sample(99, 3, kCount);
  std::vector<double> sum(3, 0.0), sum2(3, 0.0);
  for (std::size_t b = 0; b < batch.num_blocks(); ++b) {
    const std::vector<double> rows = batch.block(b);
    for (std::size_t s = 0; s < batch.block_rows(b); ++s) {
      for (int k = 0; k < 3; ++k) {
        const double x = rows[s * 3 + k];
        sum[k] += x;
        sum2[k] += x * x;
      }
    }
  }
  const double n = static_cast<double>(kCount);
  for (int k = 0; k < 3; ++k) {
    EXPECT_LE(std::abs(sum[k] / n), 4.0 / std::sqrt(n));
    EXPECT_LE(std::abs(sum2[k] / n - 1.0), 4.0 * std::sqrt(2.0 / n));
  }
}

TEST(Sample, Deterministic) {
  const SampleBatch a = sample(7, 4, 1000, 50);
  const SampleBatch b = sample(7, 4, 1000, 50);
  const SampleBatch c = sample(8, 4, 1000, 50);
  for (std::size_t blk = 0; blk < a.num_blocks(); ++blk) EXPECT_EQ(a.block(blk), b.block(blk));
  EXPECT_NE(a.block(0)[0], c.block(0)[0]);
}

TEST(Sample, BlocksAreIndependentOfEachOther) {
  const SampleBatch a = sample(7, 2, 1000, 100);
  const SampleBatch b = sample(7, 2, 300, 100);
  EXPECT_EQ(a.block(2), b.block(2));
  EXPECT_EQ(b.block_rows(2), 100u);
  EXPECT_NE(a.block(0), a.block(1));
}

TEST(Sample, LastBlockShort) {
  const SampleBatch a = sample(1, 1, 1050, 100);
  EXPECT_EQ(a.num_blocks(), 11u);
  EXPECT_EQ(a.block_rows(10), 50u);
  EXPECT_EQ(a.block(10).size(), 50u);
}

TEST(DefaultBlockSize, Bounds) {
  EXPECT_EQ(default_block_size(10), 1u);
  EXPECT_EQ(default_block_size(6400), 100u);
  EXPECT_EQ(default_block_size(100000000), 4096u);
}

TEST(Estimate, Examples) {
  const SampleBatch batch = sample(3, 1, 200000);
  const Estimate z2 = estimate([](std::span<const double> x) { return x[0] * x[0]; }, batch);
  EXPECT_LE(std::abs(z2.mean - 1.0), 4.0 * z2.std_error);

  const ChaosElement w(SymmetricTensor::basis(HilbertSpace(1), {1, 1}, 1.0 / std::sqrt(2.0)));
  const Estimate w4 = estimate([&](std::span<const double> x) { return std::pow(evaluate(w, x), 4); },
                               sample(4, 1, 1000000));
  EXPECT_LE(std::abs(w4.mean - 15.0), 4.0 * w4.std_error);

  const Estimate constant = estimate([](std::span<const double>) { return 2.5; }, batch);
  EXPECT_EQ(constant.mean, 2.5);
  EXPECT_EQ(constant.std_error, 0.0);
}

TEST(Estimate, TooFewBlocks) {
  const SampleBatch batch = sample(3, 1, 100, 10);
  EXPECT_THROW(estimate([](std::span<const double> x) { return x[0]; }, batch), ContractViolation);
}

TEST(Estimate, ReproducibleAndThreadInvariant) {
  const SampleBatch batch = sample(12, 3, 50000);
  auto fn = [](std::span<const double> x) { return std::cos(x[0]) * x[1] + x[2] * x[2]; };
  const Estimate a = estimate(fn, batch, 1);
  const Estimate b = estimate(fn, batch, 1);
  const Estimate c = estimate(fn, batch, 4);
  EXPECT_EQ(a.mean, b.mean);
  EXPECT_EQ(a.std_error, b.std_error);
  EXPECT_EQ(a.mean, c.mean);
  EXPECT_EQ(a.std_error, c.std_error);
}

}  // namespace
}  // namespace chaoslab
