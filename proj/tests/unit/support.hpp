#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "chaoslab/chaos.hpp"
#include "chaoslab/tensor.hpp"

namespace chaoslab::testing {

/// Dense order-q tensor over R^N, index (i_1..i_q) 0-based, row-major.
struct Dense {
  int dim = 1;
  int order = 0;
  std::vector<double> values;

  Dense(int n, int q) : dim(n), order(q), values(static_cast<std::size_t>(std::pow(n, q)), 0.0) {}

  std::size_t offset(const std::vector<int>& idx) const {
    std::size_t o = 0;
    for (int i : idx) o = o * dim + static_cast<std::size_t>(i);
    return o;
  }
  std::vector<int> unpack(std::size_t o) const {
    std::vector<int> idx(order);
    for (int k = order - 1; k >= 0; --k) {
      idx[k] = static_cast<int>(o % dim);
      o /= dim;
    }
    return idx;
  }
  double norm() const {
    double s = 0.0;
    for (double v : values) s += v * v;
    return std::sqrt(s);
  }
};

inline Dense dense(const SymmetricTensor& f) {
  Dense d(f.space().dimension(), f.order());
  for (std::size_t o = 0; o < d.values.size(); ++o) {
    MultiIndex idx;
    for (int i : d.unpack(o)) idx.push_back(i + 1);
    d.values[o] = f.at(idx);
  }
  return d;
}

inline Dense dense(const RawTensor& f) {
  Dense d(f.space().dimension(), f.order());
  for (const auto& [idx, v] : f.entries()) {
    std::vector<int> z;
    for (int i : idx) z.push_back(i - 1);
    d.values[d.offset(z)] = v;
  }
  return d;
}

/// Direct index summation of the r-th contraction over the last r slots.
inline Dense dense_contract(const Dense& f, const Dense& g, int r) {
  const int p = f.order, q = g.order, n = f.dim;
  Dense out(n, p + q - 2 * r);
  const auto shared = static_cast<std::size_t>(std::pow(n, r));
  for (std::size_t o = 0; o < out.values.size(); ++o) {
    const std::vector<int> idx = out.unpack(o);
    double s = 0.0;
    for (std::size_t t = 0; t < shared; ++t) {
      std::vector<int> tail(r);
      std::size_t u = t;
      for (int k = r - 1; k >= 0; --k) {
        tail[k] = static_cast<int>(u % n);
        u /= n;
      }
      std::vector<int> fi(idx.begin(), idx.begin() + (p - r));
      fi.insert(fi.end(), tail.begin(), tail.end());
      std::vector<int> gi(idx.begin() + (p - r), idx.end());
      gi.insert(gi.end(), tail.begin(), tail.end());
      s += f.values[f.offset(fi)] * g.values[g.offset(gi)];
    }
    out.values[o] = s;
  }
  return out;
}

/// Average over all q! slot permutations.
inline Dense dense_symmetrize(const Dense& f) {
  Dense out(f.dim, f.order);
  std::vector<int> perm(f.order);
  std::iota(perm.begin(), perm.end(), 0);
  double count = 0.0;
  do {
    count += 1.0;
    for (std::size_t o = 0; o < f.values.size(); ++o) {
      const std::vector<int> idx = f.unpack(o);
      std::vector<int> moved(f.order);
      for (int k = 0; k < f.order; ++k) moved[k] = idx[perm[k]];
      out.values[o] += f.values[f.offset(moved)];
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  for (double& v : out.values) v /= count;
  return out;
}

/// Random sparse symmetric kernel with roughly `density` of the sorted
/// index sets populated (at least one entry).
inline SymmetricTensor random_kernel(std::mt19937_64& rng, int n, int q, double density = 0.6) {
  std::normal_distribution<double> normal;
  std::bernoulli_distribution keep(density);
  std::vector<std::pair<MultiIndex, double>> entries;
  MultiIndex idx(q, 1);
  while (true) {
    if (keep(rng)) entries.emplace_back(idx, normal(rng));
    int k = q - 1;
    while (k >= 0 && idx[k] == n) --k;
    if (k < 0) break;
    ++idx[k];
    for (int l = k + 1; l < q; ++l) idx[l] = idx[k];
  }
  if (entries.empty()) entries.emplace_back(MultiIndex(q, 1), 1.0);
  return SymmetricTensor::from_entries(HilbertSpace(n), q, entries);
}

inline ChaosElement random_standardized(std::mt19937_64& rng, int n, int q, double density = 0.6) {
  return normalize(ChaosElement(random_kernel(rng, n, q, density)));
}

}  // namespace chaoslab::testing
