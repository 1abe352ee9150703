#pragma once

#include <filesystem>

#include "fsmr/image.hpp"
#include "fsmr/patterns.hpp"

namespace fsmr {

/// Reads 8-bit PNG (gray, RGB; alpha is dropped) or binary/ASCII PGM/PPM into [0,1] planes.
[[nodiscard]] Image read_image(const std::filesystem::path& path);

/// Writes an 8-bit PNG, PGM or PPM chosen by extension; values are quantized on the way out.
void write_image(const std::filesystem::path& path, const Image& image);

/// Mask images: 0 = lost, anything else = valid.
[[nodiscard]] LossMask read_mask(const std::filesystem::path& path);

/// 1-bit gray PNG (or PGM with 0/255) holding the mask.
void write_mask(const std::filesystem::path& path, const LossMask& mask);

}  // namespace fsmr
