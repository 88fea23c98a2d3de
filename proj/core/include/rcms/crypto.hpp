#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "rcms/bytes.hpp"

namespace rcms::crypto {

std::array<std::uint8_t, 32> sha256(ByteView data);
std::array<std::uint8_t, 32> hmac_sha256(ByteView key, ByteView message);
std::array<std::uint8_t, 16> md5(ByteView data);

// RFC 4648 standard alphabet, '=' padding on encode; decode rejects
// anything that is not canonical base64 (bad chars, bad length, bad padding).
std::string base64_encode(ByteView data);
std::optional<Bytes> base64_decode(std::string_view text);

std::string hex_encode(ByteView data);
std::optional<Bytes> hex_decode(std::string_view text);

// Compares the full length of both inputs without early exit; a length
// mismatch returns false (lengths are not secret here).
bool constant_time_equal(ByteView a, ByteView b);

}  // namespace rcms::crypto
