#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "chaoslab/independence.hpp"
#include "chaoslab/tensor.hpp"

namespace chaoslab {

/// Kernel file (JSON):
///   { "dimension": N, "order": q,
///     "entries": [ { "index": [i_1, ..., i_q], "value": c }, ... ] }
/// Indices are 1-based and sorted ascending; repeated indices inside one
/// entry are allowed, repeated entries are not. Unknown keys are ignored.
/// Errors are IngestionError naming `context` and the offending entry.
SymmetricTensor parse_kernel(std::string_view text, const std::string& context);
SymmetricTensor load_kernel(const std::filesystem::path& path);

/// Canonical serialization: entries in lexicographic order, values with 17
/// significant digits, so parse_kernel(kernel_to_text(f)) == f bit for bit.
/// A non-empty header is written as a leading "header" object.
std::string kernel_to_text(const SymmetricTensor& kernel, const RunHeader& header = {});

/// Raw (unsymmetrized) tensors use the same layout plus "symmetric": false;
/// indices may be in any order.
RawTensor parse_raw_tensor(std::string_view text, const std::string& context);
std::string raw_tensor_to_text(const RawTensor& tensor, const RunHeader& header = {});

/// Writes to a temporary file in the target directory and renames it into
/// place, so a failed run never leaves a partial file behind.
void atomic_write(const std::filesystem::path& path, std::string_view content);

}  // namespace chaoslab
