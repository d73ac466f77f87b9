#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace ati {

/// Reads a whole file as bytes. Throws ati::Error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, flushes it, then renames it over
/// `path`. Readers observe either the old or the new content, never a mix.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);

}  // namespace ati
