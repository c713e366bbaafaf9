#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <thread>
#include <vector>

namespace chaoslab {

/// Embedded in every serialized output. Changing how normals are produced
/// from (seed, block, position) is a breaking change and must bump this tag.
inline constexpr std::string_view kGeneratorVersion = "philox4x32-10+erfc_inv/v1";

/// Minimum number of blocks for a block-means standard error.
inline constexpr std::size_t kMinBlocks = 30;

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key);
};

/// Standard normal from a uniform in (0, 1) by inverse CDF.
double normal_quantile(double u);

/// A lazily materialized matrix of i.i.d. standard normals, `count` rows by
/// `dimension` columns, split into blocks of `block_size` rows. Block b is
/// drawn from its own Philox substream keyed by the seed with b in the
/// counter, so any block can be produced independently of the others.
class SampleBatch {
 public:
  SampleBatch(std::uint64_t seed, int dimension, std::size_t count, std::size_t block_size);

  std::uint64_t seed() const { return seed_; }
  int dimension() const { return dimension_; }
  std::size_t count() const { return count_; }
  std::size_t block_size() const { return block_size_; }
  std::size_t num_blocks() const { return (count_ + block_size_ - 1) / block_size_; }
  std::size_t block_rows(std::size_t block) const;

  /// Writes block_rows(block) * dimension normals, row-major, into out.
  void fill_block(std::size_t block, std::span<double> out) const;
  std::vector<double> block(std::size_t block) const;

 private:
  std::uint64_t seed_;
  int dimension_;
  std::size_t count_;
  std::size_t block_size_;
};

/// Block size used when none is given: at least 64 blocks, at most 4096 rows.
std::size_t default_block_size(std::size_t count);

/// sample(seed, N, count) with the default block size.
SampleBatch sample(std::uint64_t seed, int dimension, std::size_t count,
                   std::size_t block_size = 0);

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

/// Mean and block-means standard error from per-block sums.
/// Throws ContractViolation with fewer than kMinBlocks blocks.
Estimate block_means_estimate(std::span<const double> block_sums,
                              std::span<const std::size_t> block_counts);

/// Runs fn(block_index, rows, row_count) for every block, `threads` workers
/// at a time, and returns the results indexed by block. The result does not
/// depend on the number of threads.
template <class Result, class Fn>
std::vector<Result> map_blocks(const SampleBatch& batch, int threads, Fn&& fn) {
  const std::size_t blocks = batch.num_blocks();
  std::vector<Result> results(blocks);
  auto worker = [&](std::size_t first, std::size_t stride) {
    std::vector<double> buffer;
    for (std::size_t b = first; b < blocks; b += stride) {
      buffer.resize(batch.block_rows(b) * static_cast<std::size_t>(batch.dimension()));
      batch.fill_block(b, buffer);
      results[b] = fn(b, std::span<const double>(buffer), batch.block_rows(b));
    }
  };
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(static_cast<std::size_t>(std::max(threads, 1)), blocks));
  if (workers == 1) {
    worker(0, 1);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker, w, workers);
  }
  return results;
}

/// Mean of fn over the batch with a block-means standard error.
Estimate estimate(const std::function<double(std::span<const double>)>& fn,
                  const SampleBatch& batch, int threads = 1);

}  // namespace chaoslab
