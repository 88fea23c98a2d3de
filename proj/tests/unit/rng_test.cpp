#include <set>

#include "doctest.h"
#include "rcms/rng.hpp"

using namespace rcms;

TEST_CASE("label seeds are fnv-1a") {
  CHECK(Rng::label_seed("") == 0xcbf29ce484222325ULL);
  CHECK(Rng::label_seed("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(Rng::label_seed("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("equal seeds give equal streams") {
  Rng a(7), b(7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(Rng(7).bytes(64) == Rng(7).bytes(64));
  CHECK(Rng(7).bytes(64) != Rng(8).bytes(64));
}

TEST_CASE("bytes are the word stream, little end first") {
  const std::uint64_t word = Rng(123).next_u64();
  const Bytes b = Rng(123).bytes(8);
  for (int i = 0; i < 8; ++i) {
    CHECK(b[static_cast<std::size_t>(i)] == static_cast<std::uint8_t>(word >> (8 * i)));
  }
  // Unaligned lengths truncate the final word.
  const Bytes b3 = Rng(123).bytes(3);
  CHECK(Bytes(b.begin(), b.begin() + 3) == b3);
}

TEST_CASE("next_below stays below and covers the range") {
  Rng rng(99);
  std::set<std::uint32_t> seen;
  for (int i = 0; i < 2000; ++i) {
    const std::uint32_t v = rng.next_below(7);
    CHECK(v < 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 7);
  CHECK(Rng(1).next_below(1) == 0);
}

TEST_CASE("token draws from the alphabet") {
  Rng rng(5);
  const std::string t = rng.token(32, "abc");
  CHECK(t.size() == 32);
  for (char c : t) CHECK((c == 'a' || c == 'b' || c == 'c'));
  CHECK(Rng(5).token(32, "abc") == t);
}
