#pragma once

#include <cstdint>
#include <initializer_list>
#include <map>
#include <utility>
#include <vector>

namespace chaoslab {

/// Basis indices are 1-based, matching the kernel file format (e_1 .. e_N).
using MultiIndex = std::vector<int>;

/// Largest tensor order accepted; q! must fit in an unsigned 64-bit integer.
inline constexpr int kMaxOrder = 20;

/// Coefficients smaller than this in absolute value are dropped after every
/// operation so that sparse tensors stay canonical.
inline constexpr double kDropTolerance = 1e-15;

/// R^N with its implicit orthonormal basis e_1..e_N.
class HilbertSpace {
 public:
  explicit HilbertSpace(int dimension);

  int dimension() const { return dimension_; }

  friend bool operator==(HilbertSpace a, HilbertSpace b) = default;

 private:
  int dimension_;
};

/// Number of distinct orderings of a sorted multi-index: q! / prod(a_i!).
std::uint64_t multiplicity(const MultiIndex& sorted_index);

/// q! as an exact integer; q <= kMaxOrder.
std::uint64_t factorial(int q);

/// A general (not necessarily symmetric) order-q tensor, stored sparsely by
/// ordered index tuple. Contractions are returned in this form.
class RawTensor {
 public:
  using Entries = std::map<MultiIndex, double>;

  RawTensor(HilbertSpace space, int order);

  /// Validates every tuple (length == order, indices in 1..N); duplicate tuples
  /// are summed. Throws MalformedInput.
  RawTensor(HilbertSpace space, int order, std::vector<std::pair<MultiIndex, double>> entries);

  /// The elementary tensor e_{i_1} ⊗ ... ⊗ e_{i_q} (indices taken as given).
  static RawTensor basis(HilbertSpace space, const MultiIndex& index, double value = 1.0);

  HilbertSpace space() const { return space_; }
  int order() const { return order_; }
  const Entries& entries() const { return entries_; }
  double at(const MultiIndex& index) const;
  double norm() const;

 private:
  friend class TensorAccess;
  RawTensor(HilbertSpace space, int order, Entries entries, bool trusted);

  HilbertSpace space_;
  int order_;
  Entries entries_;
};

/// A symmetric kernel f in the q-th symmetric tensor power of R^N.
///
/// Only sorted multi-indices are stored; the value at any permutation of a
/// stored tuple equals the stored coefficient. Exact zeros are never stored.
/// Instances are immutable.
class SymmetricTensor {
 public:
  using Entries = std::map<MultiIndex, double>;

  /// The zero tensor of the given order.
  SymmetricTensor(HilbertSpace space, int order);

  /// Builds from sorted entries. Unsorted or out-of-range indices, wrong
  /// lengths and duplicate keys throw MalformedInput. Zero values are skipped.
  static SymmetricTensor from_entries(HilbertSpace space, int order,
                                      const std::vector<std::pair<MultiIndex, double>>& entries);

  static SymmetricTensor scalar(HilbertSpace space, double value);

  /// The symmetric rank-one tensor e_i^{⊗q}-style product; `index` must be sorted.
  static SymmetricTensor basis(HilbertSpace space, const MultiIndex& sorted_index,
                               double value = 1.0);

  HilbertSpace space() const { return space_; }
  int order() const { return order_; }
  const Entries& entries() const { return entries_; }
  std::size_t nnz() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  /// Value at an arbitrary (not necessarily sorted) index tuple.
  double at(const MultiIndex& index) const;

  double norm() const;
  SymmetricTensor scaled(double factor) const;

 private:
  friend class TensorAccess;
  SymmetricTensor(HilbertSpace space, int order, Entries entries);

  HilbertSpace space_;
  int order_;
  Entries entries_;
};

/// Average over all q! index permutations, stored canonically.
SymmetricTensor symmetrize(const RawTensor& raw);

/// Plain Hilbert-Schmidt inner product, summed over all (unsorted) tuples.
double inner(const SymmetricTensor& f, const SymmetricTensor& g);

/// a*f + b*g.
SymmetricTensor linear_combination(double a, const SymmetricTensor& f, double b,
                                   const SymmetricTensor& g);

/// The r-th contraction: pairs the last r slots of f with the last r slots
/// of g. r = 0 is the tensor product; r = p = q is the scalar <f, g>.
RawTensor contract(const SymmetricTensor& f, const SymmetricTensor& g, int r);

/// Symmetrization of contract(f, g, r), computed without materializing
/// every ordering of the raw contraction.
SymmetricTensor contract_sym(const SymmetricTensor& f, const SymmetricTensor& g, int r);

/// ||contract(f, g, r)|| without materializing the raw tensor.
double contraction_norm(const SymmetricTensor& f, const SymmetricTensor& g, int r);

}  // namespace chaoslab
