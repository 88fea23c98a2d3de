#include "rcms/attack/adversary.hpp"

#include <sstream>

#include "../fsutil.hpp"
#include "rcms/crypto.hpp"

namespace rcms::attack {

namespace {

constexpr UtcTime kDay = 86400;
constexpr UtcTime kYear = 365 * kDay;

std::string serial_from(Rng& rng) {
  return crypto::hex_encode(rng.bytes(4));
}

Certificate make_tbs(std::string serial, std::string subject, std::string issuer, ByteView key,
                     bool is_ca, UtcTime now) {
  Certificate cert;
  cert.serial = std::move(serial);
  cert.subject = std::move(subject);
  cert.issuer = std::move(issuer);
  cert.public_key.assign(key.begin(), key.end());
  cert.not_before = now - kDay;
  cert.not_after = now + 3 * kYear;
  cert.is_ca = is_ca;
  return cert;
}

}  // namespace

std::string_view forge_strategy_name(ForgeStrategy strategy) {
  switch (strategy) {
    case ForgeStrategy::SelfSigned:
      return "self-signed";
    case ForgeStrategy::SameServerName:
      return "same-server-name";
    case ForgeStrategy::OtherTrustedCa:
      return "other-trusted-ca";
  }
  return "unknown";
}

std::optional<ForgeStrategy> forge_strategy_from_name(std::string_view name) {
  if (name == "self-signed") return ForgeStrategy::SelfSigned;
  if (name == "same-server-name") return ForgeStrategy::SameServerName;
  if (name == "other-trusted-ca") return ForgeStrategy::OtherTrustedCa;
  return std::nullopt;
}

ForgedIdentity forge_evil_twin_identity(ForgeStrategy strategy, std::string_view server_name,
                                        UtcTime now, Rng& rng) {
  ForgedIdentity identity;
  const std::string name(server_name);

  if (strategy == ForgeStrategy::SelfSigned) {
    KeyPair key = generate_keypair(rng);
    Certificate cert = make_tbs(serial_from(rng), name, name, key.public_key, true, now);
    identity.chain.push_back(sign_certificate(std::move(cert), key));
    identity.keyring.push_back(std::move(key));
    return identity;
  }

  const std::string ca_name = (strategy == ForgeStrategy::SameServerName)
                                  ? "WiFi Secure Services CA"
                                  : "GlobalTrust Public Root CA";
  KeyPair ca_key = generate_keypair(rng);
  KeyPair leaf_key = generate_keypair(rng);

  Certificate ca = make_tbs(serial_from(rng), ca_name, ca_name, ca_key.public_key, true, now);
  ca = sign_certificate(std::move(ca), ca_key);
  Certificate leaf =
      make_tbs(serial_from(rng), name, ca_name, leaf_key.public_key, false, now);
  leaf = sign_certificate(std::move(leaf), ca_key);

  identity.chain.push_back(std::move(leaf));
  identity.chain.push_back(std::move(ca));
  identity.keyring.push_back(std::move(leaf_key));
  identity.keyring.push_back(std::move(ca_key));
  return identity;
}

std::vector<CapturedMaterial> capture_credentials(const sim::Transcript& transcript,
                                                  const std::string& adversary_actor) {
  std::vector<CapturedMaterial> captured;
  const auto* view = transcript.view_of(adversary_actor);
  if (view == nullptr) return captured;

  // Challenges the adversary issued, waiting for their responses.
  std::optional<std::pair<std::uint8_t, Bytes>> open_md5;
  std::optional<Bytes> open_mutual;

  auto b64 = [](const sim::Payload& p, const char* key) -> std::optional<Bytes> {
    auto it = p.find(key);
    if (it == p.end()) return std::nullopt;
    return crypto::base64_decode(it->second);
  };

  for (const auto& [seq, record] : *view) {
    auto type_it = record.find("type");
    if (type_it == record.end()) continue;
    const std::string& type = type_it->second;

    if (type == "pap-auth") {
      auto user_it = record.find("username");
      auto pass_it = record.find("password");
      if (user_it == record.end() || pass_it == record.end()) continue;
      CapturedMaterial m;
      m.kind = CapturedMaterial::Kind::PlaintextCredentials;
      m.method = sim::InnerMethod::Pap;
      m.username = user_it->second;
      m.password = pass_it->second;
      captured.push_back(std::move(m));
    } else if (type == "md5-challenge") {
      auto ident_it = record.find("identifier");
      auto challenge = b64(record, "challenge");
      if (ident_it == record.end() || !challenge) continue;
      open_md5 = {static_cast<std::uint8_t>(std::stoul(ident_it->second)), *std::move(challenge)};
    } else if (type == "md5-response") {
      auto response = b64(record, "response");
      auto user_it = record.find("username");
      if (!open_md5 || !response || user_it == record.end()) continue;
      CapturedMaterial m;
      m.kind = CapturedMaterial::Kind::ChallengeResponse;
      m.method = sim::InnerMethod::Md5Challenge;
      m.username = user_it->second;
      m.md5_identifier = open_md5->first;
      m.md5_challenge = open_md5->second;
      m.response = *std::move(response);
      captured.push_back(std::move(m));
      open_md5.reset();
    } else if (type == "mutual-challenge") {
      if (auto sc = b64(record, "server_challenge")) open_mutual = *std::move(sc);
    } else if (type == "mutual-response") {
      auto cc = b64(record, "client_challenge");
      auto response = b64(record, "response");
      auto user_it = record.find("username");
      if (!open_mutual || !cc || !response || user_it == record.end()) continue;
      CapturedMaterial m;
      m.kind = CapturedMaterial::Kind::ChallengeResponse;
      m.method = sim::InnerMethod::MutualChallenge;
      m.username = user_it->second;
      m.server_challenge = *open_mutual;
      m.client_challenge = *std::move(cc);
      m.response = *std::move(response);
      captured.push_back(std::move(m));
      open_mutual.reset();
    }
  }
  return captured;
}

Wordlist Wordlist::load(const std::filesystem::path& path) {
  const std::string content = fsutil::read_file_or_throw(path);
  Wordlist list;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) list.words.push_back(line);
  }
  return list;
}

std::optional<std::string> dictionary_attack(const CapturedMaterial& material,
                                             const Wordlist& wordlist) {
  if (material.kind == CapturedMaterial::Kind::PlaintextCredentials) {
    return material.password;
  }

  if (material.response.empty()) throw std::invalid_argument("captured response is empty");

  if (material.method == sim::InnerMethod::Md5Challenge) {
    if (material.md5_challenge.empty()) throw std::invalid_argument("captured challenge is empty");
    for (const std::string& word : wordlist.words) {
      const Bytes attempt =
          sim::md5_challenge_response(material.md5_identifier, view_of(word), material.md5_challenge);
      if (attempt == material.response) return word;
    }
    return std::nullopt;
  }

  if (material.method == sim::InnerMethod::MutualChallenge) {
    if (material.server_challenge.empty() || material.client_challenge.empty()) {
      throw std::invalid_argument("captured challenge material is incomplete");
    }
    for (const std::string& word : wordlist.words) {
      const Bytes attempt =
          sim::mutual_client_response(view_of(word), material.server_challenge,
                                      material.client_challenge, material.username);
      if (attempt == material.response) return word;
    }
    return std::nullopt;
  }

  throw std::invalid_argument("material not attackable offline");
}

}  // namespace rcms::attack
