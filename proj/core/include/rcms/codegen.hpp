#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "rcms/bytes.hpp"

namespace rcms {

class EmptyInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Password {
  Bytes octets;

  static Password from_utf8(std::string_view s) { return Password{to_bytes(s)}; }
  bool operator==(const Password&) const = default;
};

struct PublicKeyBytes {
  Bytes octets;

  bool operator==(const PublicKeyBytes&) const = default;
};

// Eight base64 characters, the printable form handed to the user on the
// credentials slip and typed back during pairing.
class VerificationCode {
 public:
  static constexpr std::size_t kLength = 8;

  explicit VerificationCode(std::string text);

  const std::string& text() const { return text_; }
  bool operator==(const VerificationCode&) const = default;

  static bool well_formed(std::string_view text);

 private:
  std::string text_;
};

// First 6 bytes of HMAC-SHA256(key = password, message = CA public key),
// base64. Throws EmptyInputError if either input is empty.
VerificationCode compute_verification_code(const Password& password,
                                           const PublicKeyBytes& ca_public_key);

// Trims ASCII whitespace around the candidate, then compares in constant
// time against the computed code.
bool check_verification_code(std::string_view candidate, const Password& password,
                             const PublicKeyBytes& ca_public_key);

}  // namespace rcms
