#include "fsutil.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

#include "rcms/errors.hpp"

namespace rcms::fsutil {

std::optional<std::string> read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw StorageError("read failed: " + path.string());
  return buf.str();
}

std::string read_file_or_throw(const std::filesystem::path& path) {
  auto content = read_file(path);
  if (!content) throw StorageError("no such file: " + path.string());
  return *std::move(content);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  const auto dir = path.parent_path();
  std::error_code ec;
  if (!dir.empty()) {
    std::filesystem::create_directories(dir, ec);
    if (ec) throw StorageError("cannot create " + dir.string() + ": " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw StorageError("cannot open " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      std::filesystem::remove(tmp, ec);
      throw StorageError("write failed: " + tmp.string());
    }
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw StorageError("rename failed: " + path.string());
  }
}

}  // namespace rcms::fsutil
