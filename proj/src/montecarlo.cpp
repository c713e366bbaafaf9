#include "chaoslab/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

// 53 random bits -> (0, 1), never hitting either endpoint.
inline double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = ((static_cast<std::uint64_t>(hi) << 32) | lo) >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace

Philox4x32::Counter Philox4x32::generate(Counter ctr, Key key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

double normal_quantile(double u) { return -std::sqrt(2.0) * boost::math::erfc_inv(2.0 * u); }

// ---------------------------------------------------------------------------

SampleBatch::SampleBatch(std::uint64_t seed, int dimension, std::size_t count,
                         std::size_t block_size)
    : seed_(seed), dimension_(dimension), count_(count), block_size_(block_size) {
  if (dimension < 1) throw ContractViolation("sample dimension must be >= 1");
  if (count < 1) throw ContractViolation("sample count must be >= 1");
  if (block_size < 1) throw ContractViolation("block size must be >= 1");
}

std::size_t SampleBatch::block_rows(std::size_t block) const {
  if (block >= num_blocks()) throw ContractViolation("block index out of range");
  return std::min(block_size_, count_ - block * block_size_);
}

void SampleBatch::fill_block(std::size_t block, std::span<double> out) const {
  const std::size_t n = block_rows(block) * static_cast<std::size_t>(dimension_);
  if (out.size() < n) throw ContractViolation("fill_block: output buffer too small");
  const Philox4x32::Key key{static_cast<std::uint32_t>(seed_),
                            static_cast<std::uint32_t>(seed_ >> 32)};
  const auto b = static_cast<std::uint64_t>(block);
  // Each Philox call yields two normals; draw k of the block uses call k/2.
  for (std::size_t k = 0; k < n; k += 2) {
    const auto call = static_cast<std::uint64_t>(k / 2);
    const Philox4x32::Counter ctr{static_cast<std::uint32_t>(call),
                                  static_cast<std::uint32_t>(call >> 32),
                                  static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    const Philox4x32::Counter bits = Philox4x32::generate(ctr, key);
    out[k] = normal_quantile(to_open_unit(bits[0], bits[1]));
    if (k + 1 < n) out[k + 1] = normal_quantile(to_open_unit(bits[2], bits[3]));
  }
}

std::vector<double> SampleBatch::block(std::size_t block) const {
  std::vector<double> out(block_rows(block) * static_cast<std::size_t>(dimension_));
  fill_block(block, out);
  return out;
}

std::size_t default_block_size(std::size_t count) {
  return std::clamp<std::size_t>(count / 64, 1, 4096);
}

SampleBatch sample(std::uint64_t seed, int dimension, std::size_t count, std::size_t block_size) {
  return SampleBatch(seed, dimension, count, block_size ? block_size : default_block_size(count));
}

// ---------------------------------------------------------------------------

Estimate block_means_estimate(std::span<const double> block_sums,
                              std::span<const std::size_t> block_counts) {
  const std::size_t blocks = block_sums.size();
  if (blocks != block_counts.size()) throw ContractViolation("block sums/counts size mismatch");
  if (blocks < kMinBlocks) {
    throw ContractViolation("block-means standard error needs at least " +
                            std::to_string(kMinBlocks) + " blocks, got " + std::to_string(blocks));
  }
  double total = 0.0;
  double n = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    total += block_sums[b];
    n += static_cast<double>(block_counts[b]);
  }
  const double mean = total / n;
  // Var(mean) ~ B/(B-1) * sum_b (n_b/n)^2 (m_b - m)^2
  double acc = 0.0;
  for (std::size_t b = 0; b < blocks; ++b) {
    const double nb = static_cast<double>(block_counts[b]);
    const double dev = (block_sums[b] / nb - mean) * (nb / n);
    acc += dev * dev;
  }
  const double var = acc * static_cast<double>(blocks) / static_cast<double>(blocks - 1);
  return {mean, std::sqrt(var)};
}

Estimate estimate(const std::function<double(std::span<const double>)>& fn,
                  const SampleBatch& batch, int threads) {
  if (batch.num_blocks() < kMinBlocks) {
    throw ContractViolation("estimate needs at least " + std::to_string(kMinBlocks) +
                            " blocks, batch has " + std::to_string(batch.num_blocks()));
  }
  const auto dim = static_cast<std::size_t>(batch.dimension());
  const std::vector<double> sums = map_blocks<double>(
      batch, threads, [&](std::size_t, std::span<const double> rows, std::size_t count) {
        double s = 0.0;
        for (std::size_t i = 0; i < count; ++i) s += fn(rows.subspan(i * dim, dim));
        return s;
      });
  std::vector<std::size_t> counts(batch.num_blocks());
  for (std::size_t b = 0; b < counts.size(); ++b) counts[b] = batch.block_rows(b);
  return block_means_estimate(sums, counts);
}

}  // namespace chaoslab
