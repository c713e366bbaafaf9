#pragma once

#include <string>

#include "json.hpp"

#include "chaoslab/tensor.hpp"

namespace chaoslab::detail {

SymmetricTensor kernel_from_json(const nlohmann::json& doc, const std::string& context);

/// Kernel object text; every line after the first is prefixed by `indent`.
std::string kernel_object_text(const SymmetricTensor& kernel, const std::string& indent);

}  // namespace chaoslab::detail
