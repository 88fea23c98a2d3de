#pragma once

#include <stdexcept>

namespace rcms {

// Disk or filesystem failure while reading or writing persisted state.
class StorageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Persisted artifact (certificate file, key file, store, scenario) that does
// not parse or fails its internal consistency checks.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rcms
