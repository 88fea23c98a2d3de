#pragma once

#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "rcms/bytes.hpp"

namespace rcms::sim {

// Tunneled (phase 2) authentication methods, by analogy with common inner
// methods: cleartext password, one-way challenge/response, and mutual
// challenge/response with a server proof.
enum class InnerMethod {
  Pap,
  Md5Challenge,
  MutualChallenge,
};

std::string_view method_name(InnerMethod method);
std::optional<InnerMethod> method_from_name(std::string_view name);

// Pap < Md5Challenge < MutualChallenge.
int method_strength(InnerMethod method);

// First method in the server's offer order the client accepts; the server
// controls preference, which is what a downgrade attack exploits.
std::optional<InnerMethod> negotiate_method(const std::vector<InnerMethod>& server_order,
                                            const std::set<InnerMethod>& client_policy);

// MD5(identifier byte || password || challenge), the CHAP construction.
Bytes md5_challenge_response(std::uint8_t identifier, ByteView password, ByteView challenge);

// HMAC-SHA256(password, server_challenge || client_challenge || username).
Bytes mutual_client_response(ByteView password, ByteView server_challenge,
                             ByteView client_challenge, std::string_view username);

// Server's possession proof: HMAC-SHA256(password, response || client_challenge || "srv").
Bytes mutual_server_auth(ByteView password, ByteView client_response, ByteView client_challenge);

enum class OuterMethod {
  Tls,     // certificate on both sides, no password inside the tunnel
  Ttls,    // server certificate, password-based inner method in the tunnel
};

std::string_view outer_method_name(OuterMethod method);
std::optional<OuterMethod> outer_method_from_name(std::string_view name);

}  // namespace rcms::sim
