#include "rcms/rng.hpp"

#include <stdexcept>

namespace rcms {

std::uint64_t Rng::label_seed(std::string_view label) {
  // FNV-1a 64
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::uint32_t Rng::next_below(std::uint32_t bound) {
  if (bound == 0) throw std::invalid_argument("bound must be positive");
  return static_cast<std::uint32_t>(next_u64() % bound);
}

Bytes Rng::bytes(std::size_t n) {
  Bytes out;
  out.reserve(n);
  while (out.size() < n) {
    std::uint64_t w = next_u64();
    for (int i = 0; i < 8 && out.size() < n; ++i) {
      out.push_back(static_cast<std::uint8_t>(w >> (8 * i)));
    }
  }
  return out;
}

std::string Rng::token(std::size_t length, std::string_view alphabet) {
  if (alphabet.empty()) throw std::invalid_argument("alphabet must not be empty");
  std::string out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(alphabet[next_below(static_cast<std::uint32_t>(alphabet.size()))]);
  }
  return out;
}

}  // namespace rcms
