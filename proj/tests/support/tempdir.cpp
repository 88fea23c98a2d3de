#include "tempdir.hpp"

#include <atomic>
#include <random>
#include <sstream>

namespace testsupport {

TempDir::TempDir() {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  std::ostringstream name;
  name << "rcms-test-" << std::hex << rd() << "-" << counter.fetch_add(1);
  path_ = std::filesystem::temp_directory_path() / name.str();
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace testsupport
