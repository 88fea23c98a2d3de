#include <random>
#include <string>

#include "doctest.h"
#include "oracle.hpp"
#include "rcms/crypto.hpp"

using namespace rcms;
using crypto::base64_decode;
using crypto::base64_encode;
using crypto::hex_decode;
using crypto::hex_encode;

namespace {

Bytes random_bytes(std::mt19937_64& gen, std::size_t max_len) {
  const std::size_t len = gen() % (max_len + 1);
  Bytes out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(gen());
  return out;
}

template <std::size_t N>
std::string hex_of(const std::array<std::uint8_t, N>& digest) {
  return hex_encode(ByteView(digest.data(), digest.size()));
}

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(hex_of(crypto::sha256(to_bytes(""))) ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(hex_of(crypto::sha256(to_bytes("abc"))) ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(hex_of(crypto::sha256(to_bytes(
            "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"))) ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
  // One spanning several blocks.
  CHECK(hex_of(crypto::sha256(to_bytes(std::string(1000, 'a')))) ==
        hex_of(oracle::sha256(to_bytes(std::string(1000, 'a')))));
}

TEST_CASE("md5 known answers") {
  CHECK(hex_of(crypto::md5(to_bytes(""))) == "d41d8cd98f00b204e9800998ecf8427e");
  CHECK(hex_of(crypto::md5(to_bytes("abc"))) == "900150983cd24fb0d6963f7d28e17f72");
  CHECK(hex_of(crypto::md5(to_bytes("message digest"))) == "f96b697d7cb7938d525a2f31aaf161d0");
}

TEST_CASE("hmac-sha256 rfc 4231 vectors") {
  // Case 1.
  CHECK(hex_of(crypto::hmac_sha256(Bytes(20, 0x0b), to_bytes("Hi There"))) ==
        "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7");
  // Case 2: key shorter than the block.
  CHECK(hex_of(crypto::hmac_sha256(to_bytes("Jefe"), to_bytes("what do ya want for nothing?"))) ==
        "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843");
  // Case 6: key longer than the block, must be hashed first.
  CHECK(hex_of(crypto::hmac_sha256(
            Bytes(131, 0xaa), to_bytes("Test Using Larger Than Block-Size Key - Hash Key First"))) ==
        "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54");
}

TEST_CASE("digests match openssl over random inputs") {
  std::mt19937_64 gen(0x5eed);
  for (int i = 0; i < 200; ++i) {
    const Bytes data = random_bytes(gen, 300);
    const Bytes key = random_bytes(gen, 200);
    CHECK(hex_of(crypto::sha256(data)) == hex_of(oracle::sha256(data)));
    CHECK(hex_of(crypto::md5(data)) == hex_of(oracle::md5(data)));
    CHECK(hex_of(crypto::hmac_sha256(key, data)) == hex_of(oracle::hmac_sha256(key, data)));
  }
}

TEST_CASE("base64 rfc 4648 vectors") {
  CHECK(base64_encode(to_bytes("")) == "");
  CHECK(base64_encode(to_bytes("f")) == "Zg==");
  CHECK(base64_encode(to_bytes("fo")) == "Zm8=");
  CHECK(base64_encode(to_bytes("foo")) == "Zm9v");
  CHECK(base64_encode(to_bytes("foob")) == "Zm9vYg==");
  CHECK(base64_encode(to_bytes("fooba")) == "Zm9vYmE=");
  CHECK(base64_encode(to_bytes("foobar")) == "Zm9vYmFy");
}

TEST_CASE("base64 round trips and matches openssl") {
  std::mt19937_64 gen(0xb64);
  for (int i = 0; i < 200; ++i) {
    const Bytes data = random_bytes(gen, 120);
    const std::string encoded = base64_encode(data);
    CHECK(encoded == oracle::base64(data));
    auto decoded = base64_decode(encoded);
    REQUIRE(decoded.has_value());
    CHECK(*decoded == data);
  }
}

TEST_CASE("base64 decode is strict") {
  CHECK(base64_decode("Zg==").has_value());
  CHECK_FALSE(base64_decode("Zg=").has_value());     // bad length
  CHECK_FALSE(base64_decode("Zg===").has_value());   // bad length
  CHECK_FALSE(base64_decode("Z===").has_value());    // padding too long
  CHECK_FALSE(base64_decode("Zg=a").has_value());    // data after padding
  CHECK_FALSE(base64_decode("Zm9v!A==").has_value());  // bad alphabet
  CHECK_FALSE(base64_decode("Zm9\n").has_value());   // whitespace is not data
  // Non-canonical encodings: trailing bits must be zero.
  CHECK_FALSE(base64_decode("Zh==").has_value());
  CHECK_FALSE(base64_decode("Zm9=").has_value());
}

TEST_CASE("hex round trips") {
  CHECK(hex_encode(Bytes{0x00, 0xff, 0x10}) == "00ff10");
  CHECK(hex_decode("00ff10") == Bytes{0x00, 0xff, 0x10});
  CHECK(hex_decode("ABCD") == Bytes{0xab, 0xcd});  // upper-case accepted
  CHECK_FALSE(hex_decode("0").has_value());
  CHECK_FALSE(hex_decode("0g").has_value());
  std::mt19937_64 gen(0x4e57);
  for (int i = 0; i < 50; ++i) {
    const Bytes data = random_bytes(gen, 60);
    CHECK(hex_decode(hex_encode(data)) == data);
  }
}

TEST_CASE("constant time compare") {
  CHECK(crypto::constant_time_equal(to_bytes("abc"), to_bytes("abc")));
  CHECK_FALSE(crypto::constant_time_equal(to_bytes("abc"), to_bytes("abd")));
  CHECK_FALSE(crypto::constant_time_equal(to_bytes("abc"), to_bytes("abcd")));
  CHECK(crypto::constant_time_equal(to_bytes(""), to_bytes("")));
}
