#include "rcms/supplicant.hpp"

#include "rcms/codegen.hpp"

namespace rcms {

std::string_view reject_reason_name(RejectReason reason) {
  switch (reason) {
    case RejectReason::DowngradedSecurityPolicy:
      return "downgraded-security-policy";
    case RejectReason::ChainInvalid:
      return "chain-invalid";
    case RejectReason::CodeMismatch:
      return "code-mismatch";
    case RejectReason::CredentialsRejected:
      return "credentials-rejected";
    case RejectReason::InnerAuthFailed:
      return "inner-auth-failed";
  }
  return "unknown";
}

std::string AuthOutcome::token() const {
  switch (kind) {
    case Kind::SuccessNon8021X:
      return "success-non-8021x";
    case Kind::Success8021X:
      return "success-8021x";
    case Kind::Canceled:
      return "canceled";
    case Kind::Rejected:
      break;
  }
  std::string out = "rejected-";
  out += reject_reason_name(*reason);
  return out;
}

std::optional<UserInputRequest> classify_situation(const NetworkOffer& offer,
                                                   const TrustStore& trust,
                                                   const CredentialsStore& credentials) {
  if (!offer.uses_8021x) return std::nullopt;
  if (!offer.server_chain || offer.server_chain->empty()) {
    throw std::invalid_argument("classify_situation needs the validated server chain");
  }
  const Certificate& root = offer.server_chain->back();
  const TrustEntry* entry = trust.lookup(offer.ssid);
  const bool have_credentials = credentials.lookup(offer.ssid) != nullptr;

  if (entry == nullptr) return UserInputRequest{1, true, true};
  if (entry->root_public_key != root.public_key) {
    if (have_credentials) return UserInputRequest{2, false, true};
    return UserInputRequest{3, true, true};
  }
  if (!have_credentials) return UserInputRequest{4, true, false};
  return std::nullopt;
}

AuthOutcome decide(const NetworkOffer& offer, TrustStore& trust, CredentialsStore& credentials,
                   UserInputProvider& user, InnerAuthPort& inner, UtcTime now) {
  if (!offer.uses_8021x) {
    // A pin means this SSID is known to speak 802.1X; an unprotected twin
    // with the same name is treated as a downgrade, not as the same network.
    if (trust.lookup(offer.ssid) != nullptr) {
      return AuthOutcome::rejected(RejectReason::DowngradedSecurityPolicy);
    }
    return AuthOutcome::success_non_8021x();
  }

  if (!offer.server_chain) {
    return AuthOutcome::rejected_chain(ChainError{ChainFault::EmptyChain, 0});
  }
  auto validated = validate_chain(*offer.server_chain, now);
  if (!validated.ok()) return AuthOutcome::rejected_chain(validated.error());
  const Certificate root = validated.value();
  const Fingerprint root_fp = fingerprint(root);

  const TrustEntry* entry = trust.lookup(offer.ssid);
  const bool pinned_key_matches = entry != nullptr && entry->root_public_key == root.public_key;
  const bool renewal_pending =
      pinned_key_matches && entry->root_fingerprint != root_fp;

  const auto prompt = classify_situation(offer, trust, credentials);

  std::string username;
  Password password;

  if (!prompt) {
    const StoredCredentials* saved = credentials.lookup(offer.ssid);
    username = saved->username;
    password = saved->password;
  } else {
    const auto input = user.request(*prompt);
    if (!input) return AuthOutcome::canceled();

    if (prompt->wants_credentials) {
      username = input->username;
      password = Password::from_utf8(input->password);
    } else {
      // Situation 2: the code is checked against the password already on
      // file for this SSID.
      const StoredCredentials* saved = credentials.lookup(offer.ssid);
      username = saved->username;
      password = saved->password;
    }

    if (prompt->wants_code) {
      if (!check_verification_code(input->code, password, PublicKeyBytes{root.public_key})) {
        return AuthOutcome::rejected(RejectReason::CodeMismatch);
      }
      trust.pin(offer.ssid, root, now);
    }
  }

  if (renewal_pending && !(prompt && prompt->wants_code)) {
    trust.seamless_update(offer.ssid, root, now);
  }

  InnerAuthStatus status = inner.authenticate(username, password);
  if (status == InnerAuthStatus::MethodFailed) {
    return AuthOutcome::rejected(RejectReason::InnerAuthFailed);
  }
  if (status == InnerAuthStatus::BadCredentials) {
    const auto retry = user.request(UserInputRequest{5, true, false});
    if (!retry) return AuthOutcome::canceled();
    username = retry->username;
    password = Password::from_utf8(retry->password);
    status = inner.authenticate(username, password);
    if (status == InnerAuthStatus::MethodFailed) {
      return AuthOutcome::rejected(RejectReason::InnerAuthFailed);
    }
    if (status == InnerAuthStatus::BadCredentials) {
      return AuthOutcome::rejected(RejectReason::CredentialsRejected);
    }
  }

  credentials.store(offer.ssid, username, password);
  return AuthOutcome::success_8021x();
}

}  // namespace rcms
