#include "chaoslab/sequences.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>

#include "chaoslab/errors.hpp"
#include "kernel_json.hpp"

namespace chaoslab {

namespace {

constexpr int kMaxFamilyOrder = kMaxOrder / 2;  // F^2 has order 2q

void validate(const FamilySpec& spec) {
  if (spec.orders.size() < 2) throw ContractViolation("a family needs at least two groups");
  if (spec.orders.size() != spec.group_sizes.size()) {
    throw ContractViolation("orders and group sizes must have the same length");
  }
  for (int q : spec.orders) {
    if (q < 1 || q > kMaxFamilyOrder) {
      throw ContractViolation("family orders must lie in 1.." + std::to_string(kMaxFamilyOrder));
    }
  }
  for (int m : spec.group_sizes) {
    if (m < 1) throw ContractViolation("group sizes must be >= 1");
  }
  if (spec.n < 1) throw ContractViolation("sequence index n must be >= 1");
  if (!(spec.theta >= 0.0 && spec.theta <= 1.0)) {
    throw ContractViolation("overlap parameter theta must lie in [0, 1]");
  }
  if (spec.family == Family::persistent_overlap && !(spec.theta > 0.0)) {
    throw ContractViolation("persistent_overlap needs theta > 0");
  }
  if (spec.family == Family::mixed_orders &&
      (spec.orders.size() != 2 || !(spec.orders[0] > spec.orders[1]))) {
    throw ContractViolation("mixed_orders needs exactly two groups with q_1 > q_2");
  }
}

SymmetricTensor element_kernel(HilbertSpace space, int q, int bulk_first, int bulk, int own,
                               int shared, double rho) {
  std::vector<std::pair<MultiIndex, double>> entries;
  const double qfact = static_cast<double>(factorial(q));
  const double bulk_weight = std::sqrt((1.0 - rho) / (static_cast<double>(bulk) * qfact));
  if (bulk_weight != 0.0) {
    for (int k = 0; k < bulk; ++k) entries.emplace_back(MultiIndex(q, bulk_first + k), bulk_weight);
  }
  if (rho > 0.0) {
    // Unit-norm symmetric tensor on {shared, own^(q-1)}: q orderings.
    MultiIndex index(q - 1, own);
    index.push_back(shared);
    const double weight = std::sqrt(rho / (static_cast<double>(q) * qfact));
    entries.emplace_back(q == 1 ? MultiIndex{shared} : index, weight);
  }
  return SymmetricTensor::from_entries(space, q, entries);
}

}  // namespace

Family parse_family(std::string_view name) {
  if (name == "disjoint") return Family::disjoint;
  if (name == "vanishing_overlap") return Family::vanishing_overlap;
  if (name == "persistent_overlap") return Family::persistent_overlap;
  if (name == "mixed_orders") return Family::mixed_orders;
  throw ContractViolation("unknown family '" + std::string(name) +
                          "' (expected disjoint, vanishing_overlap, persistent_overlap, mixed_orders)");
}

std::string_view family_name(Family family) {
  switch (family) {
    case Family::disjoint: return "disjoint";
    case Family::vanishing_overlap: return "vanishing_overlap";
    case Family::persistent_overlap: return "persistent_overlap";
    case Family::mixed_orders: return "mixed_orders";
  }
  return "";
}

FamilyLayout family_layout(const FamilySpec& spec) {
  validate(spec);
  FamilyLayout out;
  for (int m : spec.group_sizes) out.elements += m;
  out.bulk = spec.family == Family::persistent_overlap ? 1 : spec.n;
  out.dimension = out.elements * (out.bulk + 1) + 1;
  switch (spec.family) {
    case Family::disjoint: out.overlap = 0.0; break;
    case Family::vanishing_overlap:
    case Family::mixed_orders: out.overlap = spec.theta / std::sqrt(static_cast<double>(spec.n)); break;
    case Family::persistent_overlap: out.overlap = spec.theta; break;
  }
  return out;
}

ChaosVector generate(const FamilySpec& spec) {
  const FamilyLayout layout = family_layout(spec);
  const HilbertSpace space(layout.dimension);
  const int shared = layout.dimension;
  std::vector<std::vector<ChaosElement>> groups;
  int e = 0;
  for (std::size_t j = 0; j < spec.orders.size(); ++j) {
    std::vector<ChaosElement> group;
    for (int l = 0; l < spec.group_sizes[j]; ++l, ++e) {
      const int first = e * (layout.bulk + 1) + 1;
      const int own = first + layout.bulk;
      group.emplace_back(
          element_kernel(space, spec.orders[j], first, layout.bulk, own, shared, layout.overlap));
    }
    groups.push_back(std::move(group));
  }
  return ChaosVector(std::move(groups));
}

// ---------------------------------------------------------------------------
// Manifests

ChaosVector parse_vector(std::string_view text, const std::string& context,
                         const std::filesystem::path& base_dir, std::vector<std::string>* warnings) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IngestionError(context + ": not a valid JSON document: " + e.what());
  }
  if (!doc.is_object() || !doc.contains("groups") || !doc.at("groups").is_array()) {
    throw IngestionError(context + ": missing array field 'groups'");
  }
  std::vector<std::vector<ChaosElement>> groups;
  std::optional<int> dimension;
  std::size_t gpos = 0;
  for (const json& g : doc.at("groups")) {
    ++gpos;
    const std::string gctx = context + ": group #" + std::to_string(gpos);
    if (!g.is_object() || !g.contains("order") || !g.at("order").is_number_integer()) {
      throw IngestionError(gctx + ": missing integer field 'order'");
    }
    if (!g.contains("elements") || !g.at("elements").is_array() || g.at("elements").empty()) {
      throw IngestionError(gctx + ": needs a non-empty 'elements' list");
    }
    const int order = g.at("order").get<int>();
    std::vector<ChaosElement> group;
    std::size_t epos = 0;
    for (const json& item : g.at("elements")) {
      ++epos;
      std::string ectx = gctx + ", element #" + std::to_string(epos);
      SymmetricTensor kernel = [&] {
        if (item.is_string()) {
          std::filesystem::path p = item.get<std::string>();
          if (p.is_relative()) p = base_dir / p;
          ectx += " (" + p.string() + ")";
          std::ifstream in(p);
          if (!in) throw IngestionError(ectx + ": cannot open kernel file");
          std::stringstream buffer;
          buffer << in.rdbuf();
          json kdoc;
          try {
            kdoc = json::parse(buffer.str());
          } catch (const json::parse_error& e) {
            throw IngestionError(ectx + ": not a valid JSON document: " + e.what());
          }
          return detail::kernel_from_json(kdoc, ectx);
        }
        if (item.is_object()) return detail::kernel_from_json(item, ectx);
        throw IngestionError(ectx + ": must be a kernel path or an inline kernel object");
      }();
      if (kernel.order() != order) {
        throw IngestionError(ectx + ": kernel order " + std::to_string(kernel.order()) +
                             " does not match group order " + std::to_string(order));
      }
      if (order < 1) throw IngestionError(ectx + ": chaos elements need order >= 1");
      if (dimension && *dimension != kernel.space().dimension()) {
        throw IngestionError(ectx + ": dimension " + std::to_string(kernel.space().dimension()) +
                             " differs from " + std::to_string(*dimension));
      }
      dimension = kernel.space().dimension();
      if (kernel.empty()) throw IngestionError(ectx + ": zero kernel");
      const ChaosElement raw(std::move(kernel));
      const ChaosElement element = normalize(raw);
      const double factor = 1.0 / std::sqrt(variance(raw));
      if (warnings && std::abs(factor - 1.0) > 1e-6) {
        warnings->push_back(ectx + ": rescaled by " + format_double(factor) + " to unit variance");
      }
      group.push_back(element);
    }
    groups.push_back(std::move(group));
  }
  try {
    return ChaosVector(std::move(groups));
  } catch (const ContractViolation& e) {
    throw IngestionError(context + ": " + e.what());
  }
}

ChaosVector load_vector(const std::filesystem::path& path, std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string() + ": cannot open vector manifest");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_vector(buffer.str(), path.string(), path.parent_path(), warnings);
}

std::string vector_to_text(const ChaosVector& v, const RunHeader& header) {
  using nlohmann::json;
  std::ostringstream os;
  os << "{\n";
  if (!header.empty()) {
    os << "  \"header\": {";
    bool first = true;
    for (const auto& [key, value] : header) {
      os << (first ? "\n" : ",\n") << "    " << json(key).dump() << ": " << json(value).dump();
      first = false;
    }
    os << "\n  },\n";
  }
  os << "  \"groups\": [";
  for (std::size_t j = 0; j < v.groups().size(); ++j) {
    const auto& g = v.groups()[j];
    os << (j ? ",\n" : "\n") << "    {\n      \"order\": " << g.order << ",\n      \"elements\": [";
    for (std::size_t l = 0; l < g.elements.size(); ++l) {
      os << (l ? ",\n" : "\n") << "        "
         << detail::kernel_object_text(g.elements[l].kernel(), "        ");
    }
    os << "\n      ]\n    }";
  }
  os << "\n  ]\n}\n";
  return os.str();
}

}  // namespace chaoslab
