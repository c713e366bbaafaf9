#include "chaoslab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "chaoslab/errors.hpp"

namespace chaoslab {

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw ContractViolation("loglog_slope needs two equally long series of length >= 2");
  }
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw ContractViolation("loglog_slope needs positive values");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxy / sxx;
}

namespace {

/// Average ranks (1-based), ties share the mean rank.
std::vector<double> ranks(std::span<const double> y) {
  const std::size_t n = y.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return y[a] < y[b]; });
  std::vector<double> out(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && y[order[j + 1]] == y[order[i]]) ++j;
    const double r = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) out[order[k]] = r;
    i = j + 1;
  }
  return out;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  const double n = static_cast<double>(a.size());
  const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
  const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

SpearmanTest spearman_increasing(std::span<const double> y) {
  const std::size_t n = y.size();
  if (n < 3) throw ContractViolation("spearman_increasing needs at least 3 points");
  std::vector<double> position(n);
  std::iota(position.begin(), position.end(), 1.0);
  const std::vector<double> ry = ranks(y);
  SpearmanTest out;
  out.rho = pearson(position, ry);
  if (n <= 9) {
    std::vector<double> perm = ry;
    std::sort(perm.begin(), perm.end());
    std::size_t total = 0, at_least = 0;
    do {
      ++total;
      if (pearson(position, perm) >= out.rho - 1e-12) ++at_least;
    } while (std::next_permutation(perm.begin(), perm.end()));
    out.p_value = static_cast<double>(at_least) / static_cast<double>(total);
  } else {
    const double z = out.rho * std::sqrt(static_cast<double>(n - 1));
    out.p_value = 0.5 * std::erfc(z / std::sqrt(2.0));
  }
  return out;
}

}  // namespace chaoslab
