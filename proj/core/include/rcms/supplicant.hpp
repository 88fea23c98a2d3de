#pragma once

#include <optional>
#include <string>

#include "rcms/certmodel.hpp"
#include "rcms/truststore.hpp"

namespace rcms {

// What the station learned about a network before deciding whether to
// authenticate: the SSID it advertises, whether it offers 802.1X, and (for
// 802.1X, once the tunnel handshake presented it) the server chain.
struct NetworkOffer {
  Ssid ssid;
  bool uses_8021x = false;
  std::optional<CertificateChain> server_chain;
};

enum class RejectReason {
  DowngradedSecurityPolicy,  // known-802.1X network showed up without 802.1X
  ChainInvalid,
  CodeMismatch,
  CredentialsRejected,
  InnerAuthFailed,
};

std::string_view reject_reason_name(RejectReason reason);

struct AuthOutcome {
  enum class Kind { SuccessNon8021X, Success8021X, Rejected, Canceled };

  Kind kind;
  std::optional<RejectReason> reason;      // set iff Rejected
  std::optional<ChainError> chain_error;   // set iff reason == ChainInvalid

  static AuthOutcome success_non_8021x() { return {Kind::SuccessNon8021X, {}, {}}; }
  static AuthOutcome success_8021x() { return {Kind::Success8021X, {}, {}}; }
  static AuthOutcome rejected(RejectReason r) { return {Kind::Rejected, r, {}}; }
  static AuthOutcome rejected_chain(ChainError e) {
    return {Kind::Rejected, RejectReason::ChainInvalid, e};
  }
  static AuthOutcome canceled() { return {Kind::Canceled, {}, {}}; }

  bool success() const { return kind == Kind::SuccessNon8021X || kind == Kind::Success8021X; }

  // Stable string form used in reports and by the CLI.
  std::string token() const;

  bool operator==(const AuthOutcome&) const = default;
};

// The five user-input situations of the pairing flow:
//   1 first association with an 802.1X network
//   2 pinned key changed, credentials on file
//   3 pinned key changed, no credentials on file
//   4 pinned key unchanged, no credentials on file
//   5 server rejected the credentials (re-entry)
struct UserInputRequest {
  int situation = 0;
  bool wants_credentials = false;
  bool wants_code = false;
};

struct UserInput {
  std::string username;
  std::string password;
  std::string code;
};

// Returns nullopt when the user declines, which cancels the association.
class UserInputProvider {
 public:
  virtual ~UserInputProvider() = default;
  virtual std::optional<UserInput> request(const UserInputRequest& request) = 0;
};

enum class InnerAuthStatus {
  Accepted,
  BadCredentials,  // the server rejected this username/password
  MethodFailed,    // the exchange itself broke down (no method, dead tunnel)
};

// The station's view of "run the inner authentication with these
// credentials". The simulator drives the message exchange behind it.
class InnerAuthPort {
 public:
  virtual ~InnerAuthPort() = default;
  virtual InnerAuthStatus authenticate(const std::string& username, const Password& password) = 0;
};

// Prompt class for the offer as it stands, before any authentication
// attempt: situations 1 to 4, or nullopt when no prompt is needed (pinned
// key matches and credentials are on file, or the network is not 802.1X).
// Pre: for 802.1X offers the chain has already validated.
std::optional<UserInputRequest> classify_situation(const NetworkOffer& offer,
                                                   const TrustStore& trust,
                                                   const CredentialsStore& credentials);

// The full pairing decision for one association attempt: downgrade check,
// chain validation, situation prompts, code verification, pinning, seamless
// renewal, inner authentication with a single re-entry on rejection, and
// credential save on success. Mutates the stores only at the points the
// flow prescribes; a cancellation keeps every mutation already made.
AuthOutcome decide(const NetworkOffer& offer, TrustStore& trust, CredentialsStore& credentials,
                   UserInputProvider& user, InnerAuthPort& inner, UtcTime now);

}  // namespace rcms
