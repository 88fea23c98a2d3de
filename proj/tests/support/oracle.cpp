#include "oracle.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>

#include <stdexcept>

namespace oracle {

namespace {

template <std::size_t N>
std::array<std::uint8_t, N> digest(const EVP_MD* md, rcms::ByteView data) {
  std::array<std::uint8_t, N> out{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), out.data(), &len, md, nullptr) != 1 || len != N) {
    throw std::runtime_error("EVP_Digest failed");
  }
  return out;
}

}  // namespace

std::array<std::uint8_t, 32> sha256(rcms::ByteView data) {
  return digest<32>(EVP_sha256(), data);
}

std::array<std::uint8_t, 16> md5(rcms::ByteView data) { return digest<16>(EVP_md5(), data); }

std::array<std::uint8_t, 32> hmac_sha256(rcms::ByteView key, rcms::ByteView message) {
  std::array<std::uint8_t, 32> out{};
  unsigned int len = 0;
  if (HMAC(EVP_sha256(), key.data(), static_cast<int>(key.size()), message.data(), message.size(),
           out.data(), &len) == nullptr ||
      len != out.size()) {
    throw std::runtime_error("HMAC failed");
  }
  return out;
}

std::string base64(rcms::ByteView data) {
  std::string out(4 * ((data.size() + 2) / 3), '\0');
  const int written = EVP_EncodeBlock(reinterpret_cast<unsigned char*>(out.data()), data.data(),
                                      static_cast<int>(data.size()));
  out.resize(static_cast<std::size_t>(written));
  return out;
}

std::string verification_code(rcms::ByteView password, rcms::ByteView public_key) {
  const auto mac = hmac_sha256(password, public_key);
  return base64(rcms::ByteView(mac.data(), 6));
}

}  // namespace oracle
