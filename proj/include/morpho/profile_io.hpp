#pragma once

#include <filesystem>
#include <string>

#include "morpho/profiles.hpp"

namespace morpho {

/// Writes `<name>.json` (layout descriptor) and `<name>.raw` (little-endian
/// float32, pixel-major, columns in layout order).
void save_profile(const std::filesystem::path& header_path, const ProfileStack& stack);
ProfileStack load_profile(const std::filesystem::path& header_path);

/// Layout descriptor as JSON text.
std::string layout_json(const ProfileStack& stack);

}  // namespace morpho
