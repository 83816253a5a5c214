#pragma once

#include "dclust/models.hpp"

#include <filesystem>
#include <string>

namespace dclust {

/// JSON document {kind, dims, params, kernel?, fingerprint?}. Doubles are
/// written in shortest round-trip form, so parsing restores them bit-exactly.
std::string model_to_json(const Model& model);
Model model_from_json(const std::string& text);

void save_model(const Model& model, const std::filesystem::path& path);
Model load_model(const std::filesystem::path& path);

}  // namespace dclust
