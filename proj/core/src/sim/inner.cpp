#include "rcms/sim/inner.hpp"

#include <stdexcept>

#include "rcms/crypto.hpp"

namespace rcms::sim {

std::string_view method_name(InnerMethod method) {
  switch (method) {
    case InnerMethod::Pap:
      return "pap";
    case InnerMethod::Md5Challenge:
      return "md5-challenge";
    case InnerMethod::MutualChallenge:
      return "mutual-challenge";
  }
  return "unknown";
}

std::optional<InnerMethod> method_from_name(std::string_view name) {
  if (name == "pap") return InnerMethod::Pap;
  if (name == "md5-challenge") return InnerMethod::Md5Challenge;
  if (name == "mutual-challenge") return InnerMethod::MutualChallenge;
  return std::nullopt;
}

int method_strength(InnerMethod method) {
  switch (method) {
    case InnerMethod::Pap:
      return 0;
    case InnerMethod::Md5Challenge:
      return 1;
    case InnerMethod::MutualChallenge:
      return 2;
  }
  return -1;
}

std::optional<InnerMethod> negotiate_method(const std::vector<InnerMethod>& server_order,
                                            const std::set<InnerMethod>& client_policy) {
  for (InnerMethod m : server_order) {
    if (client_policy.count(m)) return m;
  }
  return std::nullopt;
}

Bytes md5_challenge_response(std::uint8_t identifier, ByteView password, ByteView challenge) {
  if (challenge.empty()) throw std::invalid_argument("challenge must not be empty");
  const Bytes ident{identifier};
  const auto digest = crypto::md5(concat({ident, password, challenge}));
  return Bytes(digest.begin(), digest.end());
}

Bytes mutual_client_response(ByteView password, ByteView server_challenge,
                             ByteView client_challenge, std::string_view username) {
  if (server_challenge.empty() || client_challenge.empty()) {
    throw std::invalid_argument("challenges must not be empty");
  }
  const auto mac = crypto::hmac_sha256(
      password, concat({server_challenge, client_challenge, view_of(username)}));
  return Bytes(mac.begin(), mac.end());
}

Bytes mutual_server_auth(ByteView password, ByteView client_response, ByteView client_challenge) {
  if (client_response.empty() || client_challenge.empty()) {
    throw std::invalid_argument("response material must not be empty");
  }
  const auto mac = crypto::hmac_sha256(
      password, concat({client_response, client_challenge, view_of(std::string_view("srv"))}));
  return Bytes(mac.begin(), mac.end());
}

std::string_view outer_method_name(OuterMethod method) {
  switch (method) {
    case OuterMethod::Tls:
      return "tls";
    case OuterMethod::Ttls:
      return "ttls";
  }
  return "unknown";
}

std::optional<OuterMethod> outer_method_from_name(std::string_view name) {
  if (name == "tls") return OuterMethod::Tls;
  if (name == "ttls") return OuterMethod::Ttls;
  return std::nullopt;
}

}  // namespace rcms::sim
