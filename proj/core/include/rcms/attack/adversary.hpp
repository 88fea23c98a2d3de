#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rcms/certmodel.hpp"
#include "rcms/sim/inner.hpp"
#include "rcms/sim/message.hpp"

namespace rcms::attack {

// How the rogue fabricates a server certificate for the twin network. All
// three produce chains that validate structurally; none carries the
// legitimate root's key, which is exactly what pinning latches onto.
enum class ForgeStrategy {
  SelfSigned,      // one self-signed certificate naming the real server
  SameServerName,  // leaf naming the real server, issued by the rogue's own CA
  OtherTrustedCa,  // leaf naming the real server, issued by an unrelated
                   // public CA that clients generally trust
};

std::string_view forge_strategy_name(ForgeStrategy strategy);
std::optional<ForgeStrategy> forge_strategy_from_name(std::string_view name);

struct ForgedIdentity {
  CertificateChain chain;          // leaf first
  std::vector<KeyPair> keyring;    // private halves the rogue actually holds
};

ForgedIdentity forge_evil_twin_identity(ForgeStrategy strategy, std::string_view server_name,
                                        UtcTime now, Rng& rng);

// Password material the rogue extracted from its side of a session.
struct CapturedMaterial {
  enum class Kind { PlaintextCredentials, ChallengeResponse };

  Kind kind;
  sim::InnerMethod method;
  std::string username;
  std::string password;  // PlaintextCredentials only

  // ChallengeResponse only.
  std::uint8_t md5_identifier = 0;
  Bytes md5_challenge;
  Bytes server_challenge;
  Bytes client_challenge;
  Bytes response;
};

// Reads the rogue endpoint's decrypted-record view and pairs up challenges
// it issued with responses it received.
std::vector<CapturedMaterial> capture_credentials(const sim::Transcript& transcript,
                                                  const std::string& adversary_actor);

struct Wordlist {
  std::vector<std::string> words;

  static Wordlist load(const std::filesystem::path& path);
};

// Offline dictionary attack on captured challenge/response material:
// recompute the response for each candidate. Plaintext captures just echo
// the password. Throws std::invalid_argument on unusable material.
std::optional<std::string> dictionary_attack(const CapturedMaterial& material,
                                             const Wordlist& wordlist);

}  // namespace rcms::attack
