#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "rcms/bytes.hpp"

namespace rcms {

// Deterministic byte source. Equal seeds give identical streams on every
// platform: values are taken as raw mt19937_64 output words, never through
// std distributions (whose algorithms are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng from_label(std::string_view label) { return Rng(label_seed(label)); }
  static std::uint64_t label_seed(std::string_view label);

  std::uint64_t next_u64() { return engine_(); }
  std::uint32_t next_below(std::uint32_t bound);
  Bytes bytes(std::size_t n);
  std::string token(std::size_t length, std::string_view alphabet);

 private:
  std::mt19937_64 engine_;
};

}  // namespace rcms
