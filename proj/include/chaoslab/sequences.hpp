#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "chaoslab/independence.hpp"

namespace chaoslab {

enum class Family { disjoint, vanishing_overlap, persistent_overlap, mixed_orders };

/// Throws ContractViolation for unknown names.
Family parse_family(std::string_view name);
std::string_view family_name(Family family);

struct FamilySpec {
  Family family = Family::vanishing_overlap;
  std::vector<int> orders{2, 2};       // q_j, one per group
  std::vector<int> group_sizes{1, 1};  // m_j, one per group
  double theta = 0.5;                  // overlap parameter in [0, 1]
  int n = 1;                           // sequence index
};

/// Coordinate layout of a generated vector. With M elements and bulk size b:
/// element e owns bulk coordinates e(b+1)+1 .. e(b+1)+b and the private
/// coordinate e(b+1)+b+1; the shared coordinate is M(b+1)+1 = N.
struct FamilyLayout {
  int elements = 0;
  int bulk = 0;
  int dimension = 0;
  double overlap = 0.0;  // rho: fraction of each kernel's squared norm on the shared part
};

FamilyLayout family_layout(const FamilySpec& spec);

/// Deterministic witness sequences. Every element (of order q) has kernel
///   f = (sqrt(1 - rho) D + sqrt(rho) S) / sqrt(q!)
/// where D = b^{-1/2} sum_k e_k^{⊗q} over the element's own bulk block and S
/// is the unit-norm symmetric tensor on {shared, private^(q-1)} (S = e_shared
/// for q = 1). rho = 0 (disjoint), theta/sqrt(n) (vanishing_overlap,
/// mixed_orders) or theta (persistent_overlap). Bulk size b = n, except
/// b = 1 for persistent_overlap so that its dimension stays bounded.
/// Throws ContractViolation for invalid specs.
ChaosVector generate(const FamilySpec& spec);

/// Vector manifest (JSON):
///   { "groups": [ { "order": q, "elements": [ "kernel.json" | {kernel}, ... ] }, ... ] }
/// Relative paths are resolved against the manifest's directory. Kernels are
/// rescaled to unit variance when needed; a warning is appended when the
/// factor differs from 1 by more than 1e-6. Errors are IngestionError.
ChaosVector load_vector(const std::filesystem::path& path,
                        std::vector<std::string>* warnings = nullptr);
ChaosVector parse_vector(std::string_view text, const std::string& context,
                         const std::filesystem::path& base_dir = {},
                         std::vector<std::string>* warnings = nullptr);

/// Manifest text with inline kernels in canonical form.
std::string vector_to_text(const ChaosVector& v, const RunHeader& header = {});

}  // namespace chaoslab
