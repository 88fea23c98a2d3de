#include "rcms/codegen.hpp"

#include "rcms/crypto.hpp"

namespace rcms {

namespace {
constexpr std::size_t kCodeBytes = 6;

bool is_base64_char(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') ||
         c == '+' || c == '/';
}

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' ||
                        s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() &&
         (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}
}  // namespace

bool VerificationCode::well_formed(std::string_view text) {
  if (text.size() != kLength) return false;
  for (char c : text) {
    if (!is_base64_char(c)) return false;
  }
  return true;
}

VerificationCode::VerificationCode(std::string text) : text_(std::move(text)) {
  if (!well_formed(text_)) {
    throw std::invalid_argument("verification code must be 8 base64 characters");
  }
}

VerificationCode compute_verification_code(const Password& password,
                                           const PublicKeyBytes& ca_public_key) {
  if (password.octets.empty()) throw EmptyInputError("password must not be empty");
  if (ca_public_key.octets.empty()) throw EmptyInputError("public key must not be empty");
  const auto mac = crypto::hmac_sha256(password.octets, ca_public_key.octets);
  return VerificationCode(crypto::base64_encode(ByteView(mac.data(), kCodeBytes)));
}

bool check_verification_code(std::string_view candidate, const Password& password,
                             const PublicKeyBytes& ca_public_key) {
  const std::string_view trimmed = trim_ascii(candidate);
  const VerificationCode expected = compute_verification_code(password, ca_public_key);
  return crypto::constant_time_equal(view_of(trimmed), view_of(expected.text()));
}

}  // namespace rcms
