#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "rcms/codegen.hpp"

using namespace rcms;

namespace {

std::string code_of(std::string_view password, std::string_view key) {
  return compute_verification_code(Password::from_utf8(password), PublicKeyBytes{to_bytes(key)})
      .text();
}

}  // namespace

TEST_CASE("verification code frozen values") {
  CHECK(code_of("s3cret!", "RCMS-TEST-ROOT-KEY-1") == "/HLBLmXe");
  CHECK(code_of("s3cret!", "RCMS-TEST-ROOT-KEY-2") == "Cou8Gf1d");
  CHECK(code_of("wrongpw", "RCMS-TEST-ROOT-KEY-1") == "Gye7CLoU");
}

TEST_CASE("verification code shape") {
  const std::string code = code_of("pw", "key");
  CHECK(code.size() == VerificationCode::kLength);
  CHECK(code.find('=') == std::string::npos);
  CHECK(VerificationCode::well_formed(code));
}

TEST_CASE("code changes with either input") {
  CHECK(code_of("pw", "key-a") != code_of("pw", "key-b"));
  CHECK(code_of("pw-a", "key") != code_of("pw-b", "key"));
}

TEST_CASE("empty inputs are rejected") {
  CHECK_THROWS_AS(code_of("", "key"), EmptyInputError);
  CHECK_THROWS_AS(code_of("pw", ""), EmptyInputError);
}

TEST_CASE("verification code text validation") {
  CHECK_NOTHROW(VerificationCode("AAAAAAAA"));
  CHECK_NOTHROW(VerificationCode("/HLBLmXe"));
  CHECK_THROWS_AS(VerificationCode("short"), std::invalid_argument);
  CHECK_THROWS_AS(VerificationCode("AAAAAAAAA"), std::invalid_argument);
  CHECK_THROWS_AS(VerificationCode("AAAA AAA"), std::invalid_argument);
  CHECK_THROWS_AS(VerificationCode("AAAAAAA="), std::invalid_argument);
  CHECK_FALSE(VerificationCode::well_formed("AAAAAAA*"));
}

TEST_CASE("check trims whitespace and compares in constant time") {
  const Password pw = Password::from_utf8("s3cret!");
  const PublicKeyBytes key{to_bytes("RCMS-TEST-ROOT-KEY-1")};
  CHECK(check_verification_code("/HLBLmXe", pw, key));
  CHECK(check_verification_code("  /HLBLmXe\n", pw, key));
  CHECK(check_verification_code("\t/HLBLmXe \r\n", pw, key));
  CHECK_FALSE(check_verification_code("Gye7CLoU", pw, key));
  CHECK_FALSE(check_verification_code("", pw, key));
  CHECK_FALSE(check_verification_code("/HLBLmX", pw, key));
}

TEST_CASE("matches the openssl oracle over random inputs") {
  std::mt19937_64 gen(0xc0de);
  for (int i = 0; i < 300; ++i) {
    Bytes password(1 + gen() % 40);
    for (auto& b : password) b = static_cast<std::uint8_t>(gen());
    Bytes key(1 + gen() % 64);
    for (auto& b : key) b = static_cast<std::uint8_t>(gen());
    CHECK(compute_verification_code(Password{password}, PublicKeyBytes{key}).text() ==
          oracle::verification_code(password, key));
  }
}
