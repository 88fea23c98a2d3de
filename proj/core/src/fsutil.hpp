#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

namespace rcms::fsutil {

// nullopt when the file does not exist; StorageError on read failure.
std::optional<std::string> read_file(const std::filesystem::path& path);
std::string read_file_or_throw(const std::filesystem::path& path);

// Temp file in the target directory, then rename, so readers never see a
// partial write. Creates parent directories. Throws StorageError.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace rcms::fsutil
