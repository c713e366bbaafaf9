#include "chaoslab/independence.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chaoslab/errors.hpp"
#include "chaoslab/montecarlo.hpp"

namespace chaoslab {

// ---------------------------------------------------------------------------
// ChaosVector

ChaosVector::ChaosVector(std::vector<std::vector<ChaosElement>> groups) {
  if (groups.size() < 2) throw ContractViolation("a chaos vector needs at least two groups");
  if (groups.front().empty()) throw ContractViolation("group 1 has no elements");
  const HilbertSpace space = groups.front().front().space();
  for (std::size_t j = 0; j < groups.size(); ++j) {
    if (groups[j].empty()) {
      throw ContractViolation("group " + std::to_string(j + 1) + " has no elements");
    }
    const int order = groups[j].front().order();
    for (const ChaosElement& e : groups[j]) {
      if (e.order() != order) {
        throw ContractViolation("group " + std::to_string(j + 1) + " mixes chaos orders " +
                                std::to_string(order) + " and " + std::to_string(e.order()));
      }
      if (!(e.space() == space)) {
        throw ContractViolation("chaos vector elements live over different spaces");
      }
      if (!e.standardized()) {
        throw ContractViolation("group " + std::to_string(j + 1) +
                                " contains an element that is not standardized (variance " +
                                std::to_string(variance(e)) + ")");
      }
    }
    groups_.push_back({order, std::move(groups[j])});
  }
  std::stable_sort(groups_.begin(), groups_.end(),
                   [](const Group& a, const Group& b) { return a.order > b.order; });
  for (std::size_t j = 0; j < groups_.size(); ++j) {
    for (const ChaosElement& e : groups_[j].elements) {
      elements_.push_back(e);
      group_of_.push_back(static_cast<int>(j));
    }
  }
}

// ---------------------------------------------------------------------------
// Exact conditions

SquaredCovMatrix squared_cov_matrix(const ChaosVector& v) {
  SquaredCovMatrix m;
  m.size = v.element_count();
  m.values.assign(m.size * m.size, 0.0);
  for (std::size_t i = 0; i < m.size; ++i) m.group_of.push_back(v.group_of(i));
  const auto& el = v.elements();
  for (std::size_t i = 0; i < m.size; ++i) {
    for (std::size_t j = i; j < m.size; ++j) {
      const double c = cov_squares(el[i], el[j]);
      m.values[i * m.size + j] = c;
      m.values[j * m.size + i] = c;
    }
  }
  return m;
}

double PairContractions::max_norm() const {
  return norms.empty() ? 0.0 : *std::max_element(norms.begin(), norms.end());
}

int PairContractions::argmax_r() const {
  if (norms.empty()) return 0;
  return static_cast<int>(std::max_element(norms.begin(), norms.end()) - norms.begin()) + 1;
}

std::vector<PairContractions> contraction_table(const ChaosVector& v) {
  std::vector<PairContractions> out;
  const auto& el = v.elements();
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      if (v.group_of(i) == v.group_of(j)) continue;
      out.push_back({i, j, cov_squares(el[i], el[j]), contraction_norms(el[i], el[j])});
    }
  }
  return out;
}

CriterionVerdict criterion_check(const std::vector<PairContractions>& table, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("criterion tolerance must be positive");
  CriterionVerdict out;
  out.tol = tol;
  bool first = true;
  for (const PairContractions& p : table) {
    if (first || p.cov2 > out.covariance_witness) {
      out.covariance_witness = p.cov2;
      out.covariance_pair = {p.i, p.j};
    }
    if (first || p.max_norm() > out.contraction_witness) {
      out.contraction_witness = p.max_norm();
      out.contraction_pair = {p.i, p.j};
      out.contraction_r = p.argmax_r();
    }
    first = false;
  }
  out.covariance_pass = out.covariance_witness < tol;
  out.contraction_pass = out.contraction_witness < tol;
  return out;
}

CriterionVerdict criterion_check(const ChaosVector& v, double tol) {
  return criterion_check(contraction_table(v), tol);
}

// ---------------------------------------------------------------------------
// Monte Carlo condition

Dictionary default_dictionary_for(const ChaosVector& v) {
  return Dictionary(v.group_count(), default_dictionary());
}

namespace {

struct BlockSums {
  std::vector<double> tuples;
  std::vector<double> marginals;
};

/// Mixed-radix enumeration of dictionary tuples.
std::vector<std::vector<int>> enumerate_tuples(const Dictionary& dict) {
  std::vector<std::vector<int>> out;
  std::vector<int> choice(dict.size(), 0);
  while (true) {
    out.push_back(choice);
    std::size_t j = dict.size();
    while (j > 0) {
      --j;
      if (++choice[j] < static_cast<int>(dict[j].size())) break;
      choice[j] = 0;
      if (j == 0) return out;
    }
  }
}

}  // namespace

DependenceEstimate empirical_dependence(const ChaosVector& v, const Dictionary& dict,
                                        std::size_t samples, std::uint64_t seed,
                                        MonteCarloOptions options) {
  const std::size_t d = v.group_count();
  if (dict.size() != d) {
    throw ContractViolation("dictionary has " + std::to_string(dict.size()) +
                            " lists for a vector with " + std::to_string(d) + " groups");
  }
  for (const auto& list : dict) {
    if (list.empty()) throw ContractViolation("empty test-function list in dictionary");
  }
  if (samples < kMinDependenceSamples) {
    throw ContractViolation("empirical_dependence needs at least " +
                            std::to_string(kMinDependenceSamples) + " samples");
  }

  const SampleBatch batch = sample(seed, v.space().dimension(), samples, options.block_size);
  const EvaluationPlan plan(v.elements());
  const auto tuples = enumerate_tuples(dict);

  std::vector<std::size_t> marginal_offset(d + 1, 0);
  for (std::size_t j = 0; j < d; ++j) marginal_offset[j + 1] = marginal_offset[j] + dict[j].size();
  std::vector<std::size_t> group_begin(d + 1, 0);
  for (std::size_t j = 0; j < d; ++j) {
    group_begin[j + 1] = group_begin[j] + v.groups()[j].elements.size();
  }

  const auto dim = static_cast<std::size_t>(batch.dimension());
  const std::vector<BlockSums> blocks = map_blocks<BlockSums>(
      batch, options.threads, [&](std::size_t, std::span<const double> rows, std::size_t count) {
        BlockSums sums{std::vector<double>(tuples.size(), 0.0),
                       std::vector<double>(marginal_offset[d], 0.0)};
        std::vector<double> scratch(plan.scratch_size());
        std::vector<double> values(plan.size());
        std::vector<double> phi(marginal_offset[d]);
        for (std::size_t s = 0; s < count; ++s) {
          plan.evaluate(rows.subspan(s * dim, dim), scratch, values);
          for (std::size_t j = 0; j < d; ++j) {
            for (std::size_t k = 0; k < dict[j].size(); ++k) {
              double p = 1.0;
              for (std::size_t e = group_begin[j]; e < group_begin[j + 1]; ++e) p *= dict[j][k](values[e]);
              phi[marginal_offset[j] + k] = p;
              sums.marginals[marginal_offset[j] + k] += p;
            }
          }
          for (std::size_t t = 0; t < tuples.size(); ++t) {
            double p = 1.0;
            for (std::size_t j = 0; j < d; ++j) p *= phi[marginal_offset[j] + tuples[t][j]];
            sums.tuples[t] += p;
          }
        }
        return sums;
      });

  const std::size_t nblocks = blocks.size();
  std::vector<std::size_t> counts(nblocks);
  for (std::size_t b = 0; b < nblocks; ++b) counts[b] = batch.block_rows(b);
  const double n = static_cast<double>(samples);

  std::vector<double> marginal_mean(marginal_offset[d], 0.0);
  for (std::size_t b = 0; b < nblocks; ++b) {
    for (std::size_t k = 0; k < marginal_mean.size(); ++k) marginal_mean[k] += blocks[b].marginals[k];
  }
  for (double& m : marginal_mean) m /= n;

  DependenceEstimate out;
  out.seed = seed;
  out.samples = samples;
  out.block_size = batch.block_size();
  std::vector<double> influence(nblocks);
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    double joint = 0.0;
    for (std::size_t b = 0; b < nblocks; ++b) joint += blocks[b].tuples[t];
    joint /= n;
    double product = 1.0;
    for (std::size_t j = 0; j < d; ++j) product *= marginal_mean[marginal_offset[j] + tuples[t][j]];

    // Delta method: the block sums of the linearized statistic
    //   prod-term - sum_j (prod_{i != j} m_i) psi_j-term.
    for (std::size_t b = 0; b < nblocks; ++b) {
      double z = blocks[b].tuples[t];
      for (std::size_t j = 0; j < d; ++j) {
        double others = 1.0;
        for (std::size_t i = 0; i < d; ++i) {
          if (i != j) others *= marginal_mean[marginal_offset[i] + tuples[t][i]];
        }
        z -= others * blocks[b].marginals[marginal_offset[j] + tuples[t][j]];
      }
      influence[b] = z;
    }
    const Estimate e = block_means_estimate(influence, counts);
    out.tuples.push_back({tuples[t], joint - product, e.std_error});
  }

  for (const TupleGap& t : out.tuples) {
    if (out.argmax.empty() || std::abs(t.gap) > out.gap) {
      out.gap = std::abs(t.gap);
      out.std_error = t.std_error;
      out.argmax = t.choice;
    }
  }
  return out;
}

double group_derivative_bound(const TestFunction& psi, int m) {
  if (m < 1) throw ContractViolation("group size must be >= 1");
  return static_cast<double>(m) * psi.derivative_bound(1) * std::pow(psi.derivative_bound(0), m - 1);
}

double group_norm(const TestFunction& psi, int m, int q) {
  if (m < 1) throw ContractViolation("group size must be >= 1");
  if (q < 0) throw ContractViolation("norm order must be non-negative");
  // Each coordinate contributes B_0 + sum_{k>=1} B_k t^k; multiply m copies,
  // truncate at total degree q, and sum the coefficients.
  std::vector<double> factor(q + 1);
  for (int k = 0; k <= q; ++k) factor[k] = psi.derivative_bound(k);
  std::vector<double> acc{1.0};
  for (int l = 0; l < m; ++l) {
    std::vector<double> next(std::min<std::size_t>(acc.size() + q, q + 1), 0.0);
    for (std::size_t a = 0; a < acc.size(); ++a) {
      for (int k = 0; k <= q && a + k < next.size(); ++k) next[a + k] += acc[a] * factor[k];
    }
    acc = std::move(next);
  }
  double sum = 0.0;
  for (double c : acc) sum += c;
  return sum;
}

double bound_ratio(const ChaosVector& v, const Dictionary& dict, const DependenceEstimate& estimate) {
  const std::size_t d = v.group_count();
  if (dict.size() != d) throw ContractViolation("dictionary/group count mismatch");
  const auto& el = v.elements();
  double cov_sum = 0.0;
  for (std::size_t i = 0; i < el.size(); ++i) {
    for (std::size_t j = i + 1; j < el.size(); ++j) {
      if (v.group_of(i) == v.group_of(j)) continue;
      const double c = cov_squares(el[i], el[j]);
      if (!(c > 0.0)) {
        throw DegenerateInput("bound_ratio undefined: Cov(F_" + std::to_string(i + 1) + "^2, F_" +
                              std::to_string(j + 1) + "^2) = " + format_double(c));
      }
      cov_sum += c;
    }
  }
  const int q1 = v.groups().front().order;
  double best = 0.0;
  for (const TupleGap& t : estimate.tuples) {
    double denom = group_derivative_bound(dict[d - 1][t.choice[d - 1]],
                                          static_cast<int>(v.groups()[d - 1].elements.size()));
    for (std::size_t j = 0; j + 1 < d; ++j) {
      denom *= group_norm(dict[j][t.choice[j]], static_cast<int>(v.groups()[j].elements.size()), q1);
    }
    denom *= cov_sum;
    if (!(denom > 0.0)) throw DegenerateInput("bound_ratio: zero denominator");
    best = std::max(best, std::abs(t.gap) / denom);
  }
  return best;
}

double bound_ratio(const ChaosVector& v, const Dictionary& dict, std::size_t samples,
                   std::uint64_t seed, MonteCarloOptions options) {
  return bound_ratio(v, dict, empirical_dependence(v, dict, samples, seed, options));
}

IndependenceReport build_report(const ChaosVector& v, double tol, const Dictionary& dict,
                                std::size_t samples, std::uint64_t seed,
                                MonteCarloOptions options) {
  IndependenceReport out;
  out.matrix = squared_cov_matrix(v);
  out.table = contraction_table(v);
  out.verdict = criterion_check(out.table, tol);
  for (const auto& list : dict) {
    for (const TestFunction& f : list) out.dictionary_ids.push_back(f.id());
  }
  if (samples > 0) out.dependence = empirical_dependence(v, dict, samples, seed, options);
  return out;
}

}  // namespace chaoslab
