#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "ati/evalsim.hpp"

namespace ati {

/// 8-bit RGB PNG; values are rounded from [0, 1].
std::string encode_png(const Image& img);

/// 8-bit grayscale PNG from row-major bytes.
std::string encode_png_gray(int width, int height, const std::vector<std::uint8_t>& pixels);

/// Any PNG libpng can read, converted to 8-bit RGB. Throws FormatError.
Image decode_png(std::string_view bytes);

void save_png(const std::filesystem::path& path, const Image& img);
Image load_png(const std::filesystem::path& path);

}  // namespace ati
