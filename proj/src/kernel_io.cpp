#include "chaoslab/kernel_io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>
#include <unistd.h>

#include "chaoslab/errors.hpp"
#include "kernel_json.hpp"

namespace chaoslab {

namespace {

using nlohmann::json;

std::string index_text(const json& index) { return index.dump(); }

json parse_document(std::string_view text, const std::string& context) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw IngestionError(context + ": not a valid JSON document: " + e.what());
  }
}

int require_int(const json& doc, const char* key, const std::string& context) {
  if (!doc.is_object() || !doc.contains(key)) {
    throw IngestionError(context + ": missing field '" + key + "'");
  }
  const json& v = doc.at(key);
  if (!v.is_number_integer()) throw IngestionError(context + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

struct ParsedEntry {
  MultiIndex index;
  double value;
};

/// Shared validation for symmetric and raw tensors.
std::vector<ParsedEntry> parse_entries(const json& doc, int dimension, int order,
                                       bool require_sorted, const std::string& context) {
  if (!doc.contains("entries") || !doc.at("entries").is_array()) {
    throw IngestionError(context + ": missing array field 'entries'");
  }
  std::vector<ParsedEntry> out;
  std::set<MultiIndex> seen;
  std::size_t position = 0;
  for (const json& entry : doc.at("entries")) {
    ++position;
    const std::string where = context + ": entry #" + std::to_string(position);
    if (!entry.is_object() || !entry.contains("index") || !entry.contains("value")) {
      throw IngestionError(where + " needs 'index' and 'value'");
    }
    const json& jindex = entry.at("index");
    if (!jindex.is_array()) throw IngestionError(where + ": 'index' must be a list");
    const std::string shown = where + " (index " + index_text(jindex) + ")";
    if (static_cast<int>(jindex.size()) != order) {
      throw IngestionError(shown + ": expected " + std::to_string(order) + " indices");
    }
    MultiIndex index;
    for (const json& i : jindex) {
      if (!i.is_number_integer()) throw IngestionError(shown + ": indices must be integers");
      const int k = i.get<int>();
      if (k < 1 || k > dimension) {
        throw IngestionError(shown + ": index out of range 1.." + std::to_string(dimension));
      }
      index.push_back(k);
    }
    if (require_sorted && !std::is_sorted(index.begin(), index.end())) {
      throw IngestionError(shown + ": indices must be sorted ascending");
    }
    if (!entry.at("value").is_number()) throw IngestionError(shown + ": 'value' must be a number");
    if (!seen.insert(index).second) throw IngestionError(shown + ": duplicate entry");
    out.push_back({std::move(index), entry.at("value").get<double>()});
  }
  return out;
}

void write_entries(std::ostream& os, const std::map<MultiIndex, double>& entries,
                   const std::string& indent) {
  os << indent << "  \"entries\": [";
  bool first = true;
  for (const auto& [index, value] : entries) {
    os << (first ? "\n" : ",\n") << indent << "    {\"index\": [";
    for (std::size_t k = 0; k < index.size(); ++k) os << (k ? ", " : "") << index[k];
    os << "], \"value\": " << format_double(value) << '}';
    first = false;
  }
  os << (first ? "]\n" : "\n" + indent + "  ]\n");
}

void write_header(std::ostream& os, const RunHeader& header) {
  if (header.empty()) return;
  os << "  \"header\": {";
  bool first = true;
  for (const auto& [key, value] : header) {
    os << (first ? "\n" : ",\n") << "    " << json(key).dump() << ": " << json(value).dump();
    first = false;
  }
  os << "\n  },\n";
}

}  // namespace

namespace detail {

SymmetricTensor kernel_from_json(const json& doc, const std::string& context) {
  const int dimension = require_int(doc, "dimension", context);
  const int order = require_int(doc, "order", context);
  if (dimension < 1) throw IngestionError(context + ": dimension must be >= 1");
  if (order < 0 || order > kMaxOrder) {
    throw IngestionError(context + ": order must lie in 0.." + std::to_string(kMaxOrder));
  }
  std::vector<std::pair<MultiIndex, double>> entries;
  for (auto& e : parse_entries(doc, dimension, order, true, context)) {
    entries.emplace_back(std::move(e.index), e.value);
  }
  try {
    return SymmetricTensor::from_entries(HilbertSpace(dimension), order, entries);
  } catch (const Error& e) {
    throw IngestionError(context + ": " + e.what());
  }
}

std::string kernel_object_text(const SymmetricTensor& kernel, const std::string& indent) {
  std::ostringstream os;
  os << "{\n"
     << indent << "  \"dimension\": " << kernel.space().dimension() << ",\n"
     << indent << "  \"order\": " << kernel.order() << ",\n";
  write_entries(os, kernel.entries(), indent);
  os << indent << '}';
  return os.str();
}

}  // namespace detail

SymmetricTensor parse_kernel(std::string_view text, const std::string& context) {
  return detail::kernel_from_json(parse_document(text, context), context);
}

SymmetricTensor load_kernel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestionError(path.string() + ": cannot open kernel file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_kernel(buffer.str(), path.string());
}

std::string kernel_to_text(const SymmetricTensor& kernel, const RunHeader& header) {
  const std::string body = detail::kernel_object_text(kernel, "");
  if (header.empty()) return body + "\n";
  std::ostringstream os;
  os << "{\n";
  write_header(os, header);
  os << body.substr(2) << '\n';
  return os.str();
}

RawTensor parse_raw_tensor(std::string_view text, const std::string& context) {
  const json doc = parse_document(text, context);
  const int dimension = require_int(doc, "dimension", context);
  const int order = require_int(doc, "order", context);
  if (dimension < 1) throw IngestionError(context + ": dimension must be >= 1");
  if (order < 0 || order > kMaxOrder) {
    throw IngestionError(context + ": order must lie in 0.." + std::to_string(kMaxOrder));
  }
  std::vector<std::pair<MultiIndex, double>> entries;
  for (auto& e : parse_entries(doc, dimension, order, false, context)) {
    entries.emplace_back(std::move(e.index), e.value);
  }
  return RawTensor(HilbertSpace(dimension), order, std::move(entries));
}

std::string raw_tensor_to_text(const RawTensor& tensor, const RunHeader& header) {
  std::ostringstream os;
  os << "{\n";
  write_header(os, header);
  os << "  \"dimension\": " << tensor.space().dimension() << ",\n"
     << "  \"order\": " << tensor.order() << ",\n"
     << "  \"symmetric\": false,\n"
     << "  \"norm\": " << format_double(tensor.norm()) << ",\n";
  write_entries(os, tensor.entries(), "");
  os << "}\n";
  return os.str();
}

void atomic_write(const std::filesystem::path& path, std::string_view content) {
  namespace fs = std::filesystem;
  const fs::path dir = path.has_parent_path() ? path.parent_path() : fs::path(".");
  const fs::path tmp = dir / ("." + path.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IngestionError(path.string() + ": cannot open for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::error_code ec;
      fs::remove(tmp, ec);
      throw IngestionError(path.string() + ": write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw IngestionError(path.string() + ": cannot move output into place");
  }
}

}  // namespace chaoslab
