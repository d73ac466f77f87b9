#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "ati/core.hpp"

namespace ati {

inline constexpr int kTrajectoryFormatVersion = 1;

/// Parses the version-1 trajectory document. Throws FormatError on any schema
/// problem, including an unknown version or a track whose point count differs
/// from frame_count. Semantic invariants are left to validate().
TrajectorySet parse_trajectory_json(std::string_view text);

/// Canonical serialization: fixed key order, shortest round-trip doubles,
/// trailing newline. write(parse(write(x))) == write(x) byte for byte.
std::string write_trajectory_json(const TrajectorySet& set);

TrajectorySet load_trajectory_file(const std::filesystem::path& path);
void save_trajectory_file(const std::filesystem::path& path, const TrajectorySet& set);

}  // namespace ati
