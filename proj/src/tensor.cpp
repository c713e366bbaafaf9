#include "chaoslab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "chaoslab/errors.hpp"

namespace chaoslab {

namespace {

std::string format_index(const MultiIndex& index) {
  std::ostringstream os;
  os << '[';
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (k) os << ',';
    os << index[k];
  }
  os << ']';
  return os.str();
}

void check_order(int order) {
  if (order < 0) throw ContractViolation("tensor order must be non-negative");
  if (order > kMaxOrder) {
    throw ResourceLimit("tensor order " + std::to_string(order) + " exceeds the supported maximum " +
                        std::to_string(kMaxOrder));
  }
}

void check_index(HilbertSpace space, int order, const MultiIndex& index) {
  if (static_cast<int>(index.size()) != order) {
    throw MalformedInput("index " + format_index(index) + " has length " +
                         std::to_string(index.size()) + ", expected " + std::to_string(order));
  }
  for (int i : index) {
    if (i < 1 || i > space.dimension()) {
      throw MalformedInput("index " + format_index(index) + " out of range 1.." +
                           std::to_string(space.dimension()));
    }
  }
}

template <class Map>
void drop_dust(Map& entries) {
  std::erase_if(entries, [](const auto& kv) { return std::abs(kv.second) < kDropTolerance; });
}

MultiIndex merge_sorted(const MultiIndex& a, const MultiIndex& b) {
  MultiIndex out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

/// Enumerates every distinct sub-multiset of size r of a sorted multi-index,
/// in lexicographic order of the sub-multiset, together with its complement.
template <class Fn>
void for_each_split(const MultiIndex& sorted, int r, Fn&& fn) {
  std::vector<std::pair<int, int>> runs;  // (value, count)
  for (int v : sorted) {
    if (!runs.empty() && runs.back().first == v) {
      ++runs.back().second;
    } else {
      runs.emplace_back(v, 1);
    }
  }
  std::vector<int> take(runs.size(), 0);
  // Depth-first over runs; larger takes from earlier runs first gives the
  // lexicographically smallest sub-multisets first.
  auto recurse = [&](auto& self, std::size_t pos, int remaining) -> void {
    if (pos == runs.size()) {
      if (remaining != 0) return;
      MultiIndex core, rest;
      for (std::size_t k = 0; k < runs.size(); ++k) {
        core.insert(core.end(), take[k], runs[k].first);
        rest.insert(rest.end(), runs[k].second - take[k], runs[k].first);
      }
      fn(core, rest);
      return;
    }
    const int hi = std::min(runs[pos].second, remaining);
    for (int t = hi; t >= 0; --t) {
      take[pos] = t;
      self(self, pos + 1, remaining - t);
    }
    take[pos] = 0;
  };
  recurse(recurse, 0, r);
}

using BlockKey = std::pair<MultiIndex, MultiIndex>;
using Blocks = std::map<BlockKey, double>;

/// f ⊗_r g as a sum of blocks: coefficient c at (A, B) stands for
/// c * (sum of all distinct orderings of A) ⊗ (sum of all distinct orderings of B).
/// The contraction is symmetric inside its first p-r and its last q-r slots,
/// so this representation is exact.
Blocks contraction_blocks(const SymmetricTensor& f, const SymmetricTensor& g, int r) {
  if (!(f.space() == g.space())) {
    throw ContractViolation("contraction of tensors over different spaces");
  }
  if (r < 0 || r > std::min(f.order(), g.order())) {
    throw ContractViolation("contraction index r=" + std::to_string(r) + " outside 0.." +
                            std::to_string(std::min(f.order(), g.order())));
  }
  check_order(f.order() + g.order() - 2 * r);

  std::map<MultiIndex, std::vector<std::pair<MultiIndex, double>>> g_by_core;
  for (const auto& [index, value] : g.entries()) {
    for_each_split(index, r, [&, value = value](const MultiIndex& core, const MultiIndex& rest) {
      g_by_core[core].emplace_back(rest, value);
    });
  }

  Blocks blocks;
  for (const auto& [index, fvalue] : f.entries()) {
    for_each_split(index, r, [&, fvalue = fvalue](const MultiIndex& core, const MultiIndex& rest) {
      auto it = g_by_core.find(core);
      if (it == g_by_core.end()) return;
      const double weight = static_cast<double>(multiplicity(core)) * fvalue;
      for (const auto& [grest, gvalue] : it->second) {
        blocks[BlockKey{rest, grest}] += weight * gvalue;
      }
    });
  }
  drop_dust(blocks);
  return blocks;
}

}  // namespace

class TensorAccess {
 public:
  static SymmetricTensor make(HilbertSpace space, int order, SymmetricTensor::Entries entries) {
    drop_dust(entries);
    return SymmetricTensor(space, order, std::move(entries));
  }
  static RawTensor make_raw(HilbertSpace space, int order, RawTensor::Entries entries) {
    drop_dust(entries);
    return RawTensor(space, order, std::move(entries), true);
  }
};

HilbertSpace::HilbertSpace(int dimension) : dimension_(dimension) {
  if (dimension < 1) throw ContractViolation("Hilbert space dimension must be >= 1");
}

std::uint64_t factorial(int q) {
  check_order(q);
  std::uint64_t out = 1;
  for (int k = 2; k <= q; ++k) out *= static_cast<std::uint64_t>(k);
  return out;
}

std::uint64_t multiplicity(const MultiIndex& sorted_index) {
  const int q = static_cast<int>(sorted_index.size());
  std::uint64_t out = factorial(q);
  std::size_t k = 0;
  while (k < sorted_index.size()) {
    std::size_t run = 1;
    while (k + run < sorted_index.size() && sorted_index[k + run] == sorted_index[k]) ++run;
    out /= factorial(static_cast<int>(run));
    k += run;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RawTensor

RawTensor::RawTensor(HilbertSpace space, int order) : space_(space), order_(order) {
  check_order(order);
}

RawTensor::RawTensor(HilbertSpace space, int order, Entries entries, bool)
    : space_(space), order_(order), entries_(std::move(entries)) {}

RawTensor::RawTensor(HilbertSpace space, int order,
                     std::vector<std::pair<MultiIndex, double>> entries)
    : space_(space), order_(order) {
  check_order(order);
  for (auto& [index, value] : entries) {
    check_index(space, order, index);
    entries_[index] += value;
  }
  std::erase_if(entries_, [](const auto& kv) { return kv.second == 0.0; });
}

RawTensor RawTensor::basis(HilbertSpace space, const MultiIndex& index, double value) {
  return RawTensor(space, static_cast<int>(index.size()), {{index, value}});
}

double RawTensor::at(const MultiIndex& index) const {
  auto it = entries_.find(index);
  return it == entries_.end() ? 0.0 : it->second;
}

double RawTensor::norm() const {
  double sum = 0.0;
  for (const auto& [index, value] : entries_) sum += value * value;
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// SymmetricTensor

SymmetricTensor::SymmetricTensor(HilbertSpace space, int order) : space_(space), order_(order) {
  check_order(order);
}

SymmetricTensor::SymmetricTensor(HilbertSpace space, int order, Entries entries)
    : space_(space), order_(order), entries_(std::move(entries)) {}

SymmetricTensor SymmetricTensor::from_entries(
    HilbertSpace space, int order, const std::vector<std::pair<MultiIndex, double>>& entries) {
  check_order(order);
  Entries out;
  for (const auto& [index, value] : entries) {
    check_index(space, order, index);
    if (!std::is_sorted(index.begin(), index.end())) {
      throw MalformedInput("index " + format_index(index) +
                           " is not sorted ascending; symmetric kernels store sorted indices only");
    }
    if (!std::isfinite(value)) {
      throw MalformedInput("non-finite coefficient at index " + format_index(index));
    }
    if (out.contains(index)) {
      throw MalformedInput("duplicate entry for index " + format_index(index));
    }
    if (value != 0.0) out.emplace(index, value);
  }
  return SymmetricTensor(space, order, std::move(out));
}

SymmetricTensor SymmetricTensor::scalar(HilbertSpace space, double value) {
  Entries e;
  if (value != 0.0) e.emplace(MultiIndex{}, value);
  return SymmetricTensor(space, 0, std::move(e));
}

SymmetricTensor SymmetricTensor::basis(HilbertSpace space, const MultiIndex& sorted_index,
                                       double value) {
  return from_entries(space, static_cast<int>(sorted_index.size()), {{sorted_index, value}});
}

double SymmetricTensor::at(const MultiIndex& index) const {
  MultiIndex key = index;
  std::sort(key.begin(), key.end());
  auto it = entries_.find(key);
  return it == entries_.end() ? 0.0 : it->second;
}

double SymmetricTensor::norm() const { return std::sqrt(inner(*this, *this)); }

SymmetricTensor SymmetricTensor::scaled(double factor) const {
  Entries out;
  for (const auto& [index, value] : entries_) out.emplace_hint(out.end(), index, value * factor);
  return TensorAccess::make(space_, order_, std::move(out));
}

// ---------------------------------------------------------------------------
// Operations

SymmetricTensor symmetrize(const RawTensor& raw) {
  std::map<MultiIndex, double> sums;
  for (const auto& [index, value] : raw.entries()) {
    MultiIndex key = index;
    std::sort(key.begin(), key.end());
    sums[key] += value;
  }
  for (auto& [index, value] : sums) value /= static_cast<double>(multiplicity(index));
  return TensorAccess::make(raw.space(), raw.order(), std::move(sums));
}

double inner(const SymmetricTensor& f, const SymmetricTensor& g) {
  if (f.order() != g.order()) throw ContractViolation("inner product of tensors of different order");
  if (!(f.space() == g.space())) {
    throw ContractViolation("inner product of tensors over different spaces");
  }
  // Merge-walk in lexicographic order so that inner(f, g) and inner(g, f)
  // perform the identical floating-point sum.
  double sum = 0.0;
  auto a = f.entries().begin();
  auto b = g.entries().begin();
  while (a != f.entries().end() && b != g.entries().end()) {
    if (a->first < b->first) {
      ++a;
    } else if (b->first < a->first) {
      ++b;
    } else {
      sum += static_cast<double>(multiplicity(a->first)) * (a->second * b->second);
      ++a;
      ++b;
    }
  }
  return sum;
}

SymmetricTensor linear_combination(double a, const SymmetricTensor& f, double b,
                                   const SymmetricTensor& g) {
  if (f.order() != g.order() || !(f.space() == g.space())) {
    throw ContractViolation("linear combination of incompatible tensors");
  }
  SymmetricTensor::Entries out;
  for (const auto& [index, value] : f.entries()) out.emplace_hint(out.end(), index, a * value);
  for (const auto& [index, value] : g.entries()) out[index] += b * value;
  return TensorAccess::make(f.space(), f.order(), std::move(out));
}

RawTensor contract(const SymmetricTensor& f, const SymmetricTensor& g, int r) {
  const Blocks blocks = contraction_blocks(f, g, r);
  RawTensor::Entries out;
  for (const auto& [key, value] : blocks) {
    MultiIndex left = key.first;
    do {
      MultiIndex right = key.second;
      do {
        MultiIndex full = left;
        full.insert(full.end(), right.begin(), right.end());
        out[full] += value;
      } while (std::next_permutation(right.begin(), right.end()));
    } while (std::next_permutation(left.begin(), left.end()));
  }
  return TensorAccess::make_raw(f.space(), f.order() + g.order() - 2 * r, std::move(out));
}

SymmetricTensor contract_sym(const SymmetricTensor& f, const SymmetricTensor& g, int r) {
  const Blocks blocks = contraction_blocks(f, g, r);
  std::map<MultiIndex, double> sums;
  for (const auto& [key, value] : blocks) {
    const double orderings =
        static_cast<double>(multiplicity(key.first)) * static_cast<double>(multiplicity(key.second));
    sums[merge_sorted(key.first, key.second)] += value * orderings;
  }
  for (auto& [index, value] : sums) value /= static_cast<double>(multiplicity(index));
  return TensorAccess::make(f.space(), f.order() + g.order() - 2 * r, std::move(sums));
}

double contraction_norm(const SymmetricTensor& f, const SymmetricTensor& g, int r) {
  const Blocks blocks = contraction_blocks(f, g, r);
  double sum = 0.0;
  for (const auto& [key, value] : blocks) {
    sum += static_cast<double>(multiplicity(key.first)) *
           static_cast<double>(multiplicity(key.second)) * value * value;
  }
  return std::sqrt(sum);
}

}  // namespace chaoslab
