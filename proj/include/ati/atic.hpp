#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "ati/injector.hpp"

namespace ati {

// ATIC v1 layout, little-endian:
//   "ATIC" | u32 version | u32 T' | u32 H' | u32 W' | u32 channels |
//   T'*H'*W'*channels f32, frame-major, row-major, channel-minor.
inline constexpr char kAticMagic[4] = {'A', 'T', 'I', 'C'};
inline constexpr std::uint32_t kAticVersion = 1;
inline constexpr std::size_t kAticHeaderSize = 24;

/// Values are narrowed to f32.
std::string encode_atic(const ConditionTensor& tensor);

/// Throws FormatError on bad magic, unknown version, truncation or trailing
/// bytes.
ConditionTensor decode_atic(std::string_view bytes);

void save_atic(const std::filesystem::path& path, const ConditionTensor& tensor);
ConditionTensor load_atic(const std::filesystem::path& path);

}  // namespace ati
