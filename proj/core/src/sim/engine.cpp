#include <algorithm>
#include <random>
#include <stdexcept>

#include "rcms/codegen.hpp"
#include "rcms/crypto.hpp"
#include "rcms/sim/scenario.hpp"

namespace rcms::sim {

namespace {

constexpr UtcTime kDay = 86400;
constexpr std::string_view kMicLabel = "rcms.sim.mic";
constexpr std::string_view kClientAuthLabel = "rcms.sim.client-auth";

std::string b64(ByteView data) { return crypto::base64_encode(data); }

struct ServerCfg {
  std::string as_actor;
  std::string ap_actor;
  bool relay_legs = false;
  CertificateChain chain;
  std::vector<KeyPair> keyring;
  std::vector<OuterMethod> outer_order;
  std::vector<InnerMethod> inner_order;
  std::map<std::string, std::string> users;
  std::optional<Bytes> client_ca_pub;
  bool rogue = false;
  bool relay_via_legit = false;
  std::optional<std::string> shared_password;
};

struct Bss {
  std::string ap_actor;
  int rssi = 0;
  bool uses_8021x = true;
  ServerCfg* server = nullptr;
  bool adversary = false;
};

struct StationCfg {
  std::string actor;
  std::string outer_identity;
  std::set<InnerMethod> policy;
  bool eap_tls = false;
  CertificateChain client_chain;
  std::vector<KeyPair> client_keys;
};

struct Session {
  StationCfg sta;
  ServerCfg* srv = nullptr;
  Tunnel client_tunnel;
  Tunnel server_tunnel;
  bool tunnels_ready = false;
  std::uint64_t record_counter = 0;
  bool negotiated = false;
  std::optional<InnerMethod> chosen;
  bool server_failed = false;
  bool client_aborted = false;
  bool inner_accepted = false;
  bool completed = false;
};

class Engine;

class ScriptedProvider : public UserInputProvider {
 public:
  ScriptedProvider(const Scenario& sc, const Bytes* legit_root_pub,
                   UserInputProvider* interactive)
      : sc_(sc), legit_root_pub_(legit_root_pub), interactive_(interactive) {}

  std::optional<UserInput> request(const UserInputRequest& req) override {
    if (interactive_) return interactive_->request(req);
    UserInput in;
    if (req.situation == 5) {
      if (sc_.victim.retry_credentials) {
        in.username = sc_.victim.retry_credentials->first;
        in.password = sc_.victim.retry_credentials->second;
      } else {
        in.username = sc_.victim.username;
        in.password = sc_.victim.password;
      }
      return in;
    }
    if (req.wants_credentials) {
      in.username = sc_.victim.username;
      in.password = sc_.victim.password;
    }
    if (req.wants_code) {
      const std::string& mode = sc_.victim.code_entry;
      if (mode == "decline") return std::nullopt;
      if (mode == "wrong") {
        in.code = "AAAAAAAA";
      } else if (mode.rfind("literal:", 0) == 0) {
        in.code = mode.substr(8);
      } else if (mode == "legit-slip") {
        if (legit_root_pub_ == nullptr) {
          throw ScenarioError("code_entry legit-slip needs a legitimate chain");
        }
        in.code = compute_verification_code(Password::from_utf8(sc_.victim.password),
                                            PublicKeyBytes{*legit_root_pub_})
                      .text();
      } else {
        throw ScenarioError("unknown code_entry mode: " + mode);
      }
    }
    return in;
  }

 private:
  const Scenario& sc_;
  const Bytes* legit_root_pub_;
  UserInputProvider* interactive_;
};

class EnginePort : public InnerAuthPort {
 public:
  EnginePort(Engine& engine, Session& session) : engine_(engine), session_(session) {}
  InnerAuthStatus authenticate(const std::string& username, const Password& password) override;

 private:
  Engine& engine_;
  Session& session_;
};

class Engine {
 public:
  Engine(const Scenario& sc, const RunOptions& opt) : sc_(sc), opt_(opt), rng_(effective_seed()) {}

  ScenarioResult run();

  InnerAuthStatus port_authenticate(Session& s, const std::string& username,
                                    const Password& password);

 private:
  std::uint64_t effective_seed() const {
    return opt_.seed_override ? *opt_.seed_override : sc_.seed;
  }

  std::filesystem::path resolve(const std::string& rel) const {
    std::filesystem::path p(rel);
    if (p.is_absolute()) return p;
    return sc_.base_dir / p;
  }

  void build_networks();
  void prepare_stores();
  void register_secrets();

  // Message plumbing. Relay legs (AP between station and AS) appear only on
  // the legitimate side; the rogue integrates both roles in one actor.
  std::uint64_t server_to_sta(Session& s, MessageKind kind, Payload payload);
  std::uint64_t sta_to_server(Session& s, MessageKind kind, Payload payload);
  void send_record_from_sta(Session& s, const Payload& record);
  void send_record_from_srv(Session& s, const Payload& record);
  void server_post_failure(Session& s);
  void client_abort(Session& s, const std::string& reason);

  bool ladder_to_tunnel(Session& s, bool with_assoc);
  bool do_key_exchange(Session& s);
  bool negotiate_inner(Session& s);
  InnerAuthStatus run_inner_attempt(Session& s, const std::string& username,
                                    const Password& password);
  InnerAuthStatus run_mutual_attempt(Session& s, const std::string& username,
                                     const Password& password);
  InnerAuthStatus run_client_cert_attempt(Session& s);
  Bytes server_mutual_challenge(Session& s);
  void finish_success(Session& s);
  void four_way_handshake(Session& s);

  AuthOutcome run_victim(const Bss& bss);
  AuthOutcome run_victim_open(const Bss& bss);
  AuthOutcome run_victim_8021x(const Bss& bss);

  std::optional<Session> open_relay_session(const std::string& username, Bytes& server_challenge);

  StationCfg victim_station() const;
  bool is_victim(const Session& s) const { return s.sta.actor == sc_.victim.id; }

  void evaluate_attack();

  const Scenario& sc_;
  RunOptions opt_;
  Transcript tx_;
  Rng rng_;

  std::optional<ServerCfg> legit_;
  std::optional<ServerCfg> rogue_;
  std::vector<Bss> networks_;
  const Bytes* legit_root_pub_ = nullptr;
  Bytes legit_root_pub_storage_;

  std::filesystem::path store_dir_;
  std::optional<TrustStore> trust_;
  std::optional<CredentialsStore> creds_;

  ScenarioResult result_;
  bool rogue_completed_with_victim_ = false;
  bool rogue_relay_success_ = false;
};

InnerAuthStatus EnginePort::authenticate(const std::string& username, const Password& password) {
  return engine_.port_authenticate(session_, username, password);
}

class NullProvider : public UserInputProvider {
 public:
  std::optional<UserInput> request(const UserInputRequest&) override { return std::nullopt; }
};

class NullPort : public InnerAuthPort {
 public:
  InnerAuthStatus authenticate(const std::string&, const Password&) override {
    return InnerAuthStatus::MethodFailed;
  }
};

void Engine::build_networks() {
  if (sc_.legitimate) {
    const LegitimateSpec& spec = *sc_.legitimate;
    ServerCfg cfg;
    cfg.as_actor = spec.as_id;
    cfg.ap_actor = spec.ap_id;
    cfg.relay_legs = true;
    cfg.chain = load_chain_file(resolve(spec.chain_path));
    KeyPair leaf_key = load_keypair_file(resolve(spec.key_path));
    if (cfg.chain.empty() || cfg.chain.front().public_key != leaf_key.public_key) {
      throw ScenarioError("legitimate key does not match the served chain");
    }
    cfg.keyring.push_back(std::move(leaf_key));
    cfg.outer_order = spec.outer_order;
    cfg.inner_order = spec.method_order;
    cfg.users = spec.users;
    if (spec.client_ca_path) {
      cfg.client_ca_pub = load_certificate_file(resolve(*spec.client_ca_path)).public_key;
    }
    legit_ = std::move(cfg);
    legit_root_pub_storage_ = legit_->chain.back().public_key;
    legit_root_pub_ = &legit_root_pub_storage_;
    if (spec.present) {
      networks_.push_back(Bss{spec.ap_id, spec.rssi, true, &*legit_, false});
    }
  }

  if (sc_.adversary && sc_.adversary->present) {
    const AdversarySpec& spec = *sc_.adversary;
    if (spec.open_network) {
      networks_.push_back(Bss{spec.id, spec.rssi, false, nullptr, true});
    } else {
      ServerCfg cfg;
      cfg.as_actor = spec.id;
      cfg.ap_actor = spec.id;
      cfg.relay_legs = false;
      cfg.rogue = true;
      cfg.outer_order = spec.outer_order;
      cfg.inner_order = spec.method_order;
      cfg.relay_via_legit = spec.relay_via_legitimate && legit_.has_value();
      cfg.shared_password = spec.shared_password;
      if (spec.strategy) {
        const std::string server_name =
            legit_ && !legit_->chain.empty() ? legit_->chain.front().subject
                                             : "radius." + sc_.ssid.display() + ".example";
        attack::ForgedIdentity identity =
            attack::forge_evil_twin_identity(*spec.strategy, server_name, sc_.now, rng_);
        cfg.chain = std::move(identity.chain);
        cfg.keyring = std::move(identity.keyring);
      } else {
        cfg.chain = load_chain_file(resolve(*spec.stolen_chain_path));
        // A stolen certificate comes without its private key: the keyring
        // stays empty and the key exchange cannot be opened.
      }
      rogue_ = std::move(cfg);
      networks_.push_back(Bss{spec.id, spec.rssi, true, &*rogue_, true});
    }
    result_.adversary_actors.insert(spec.id);
  }

  if (legit_ && rogue_) {
    for (const KeyPair& rk : rogue_->keyring) {
      for (const KeyPair& lk : legit_->keyring) {
        if (rk.public_key == lk.public_key) {
          throw std::logic_error("adversary holds a legitimate private key");
        }
      }
    }
  }
  if (networks_.empty()) throw ScenarioError("no network is present in the scenario");
}

void Engine::prepare_stores() {
  if (!sc_.rcms) return;
  store_dir_ = opt_.store_dir;
  if (store_dir_.empty()) {
    std::random_device rd;
    const std::string tag = crypto::hex_encode(Bytes{
        static_cast<std::uint8_t>(rd()), static_cast<std::uint8_t>(rd()),
        static_cast<std::uint8_t>(rd()), static_cast<std::uint8_t>(rd()),
        static_cast<std::uint8_t>(rd()), static_cast<std::uint8_t>(rd())});
    store_dir_ = std::filesystem::temp_directory_path() / ("rcms-run-" + tag);
  }
  trust_.emplace(TrustStore::open(store_dir_ / "trust.json"));
  creds_.emplace(CredentialsStore::open(store_dir_ / "credentials.json"));

  if (sc_.victim.pinned) {
    Certificate root;
    if (sc_.victim.pinned_cert_path) {
      root = load_certificate_file(resolve(*sc_.victim.pinned_cert_path));
    } else if (legit_) {
      root = legit_->chain.back();
    } else {
      throw ScenarioError("pinned victim needs a legitimate chain or pinned_cert");
    }
    trust_->pin(sc_.ssid, root, sc_.now - 30 * kDay);
  }
  if (sc_.victim.store_credentials) {
    creds_->store(sc_.ssid, sc_.victim.username, Password::from_utf8(sc_.victim.password));
  }
}

void Engine::register_secrets() {
  if (!sc_.victim.password.empty()) {
    tx_.register_secret("victim-password", to_bytes(sc_.victim.password));
  }
  if (sc_.rcms && legit_root_pub_ != nullptr && !sc_.victim.password.empty()) {
    const VerificationCode code = compute_verification_code(
        Password::from_utf8(sc_.victim.password), PublicKeyBytes{*legit_root_pub_});
    tx_.register_secret("victim-slip-code", to_bytes(code.text()));
  }
}

std::uint64_t Engine::server_to_sta(Session& s, MessageKind kind, Payload payload) {
  if (s.srv->relay_legs) {
    tx_.post(s.srv->as_actor, s.srv->ap_actor, kind, payload);
    return tx_.post(s.srv->ap_actor, s.sta.actor, kind, std::move(payload)).seq;
  }
  return tx_.post(s.srv->as_actor, s.sta.actor, kind, std::move(payload)).seq;
}

std::uint64_t Engine::sta_to_server(Session& s, MessageKind kind, Payload payload) {
  if (s.srv->relay_legs) {
    const std::uint64_t seq = tx_.post(s.sta.actor, s.srv->ap_actor, kind, payload).seq;
    tx_.post(s.srv->ap_actor, s.srv->as_actor, kind, std::move(payload));
    return seq;
  }
  return tx_.post(s.sta.actor, s.srv->as_actor, kind, std::move(payload)).seq;
}

void Engine::send_record_from_sta(Session& s, const Payload& record) {
  const Bytes ct = s.client_tunnel.crypt(encode_record(record), s.record_counter);
  Payload payload{{"ctr", std::to_string(s.record_counter)}, {"ct", b64(ct)}};
  ++s.record_counter;
  const std::uint64_t seq = sta_to_server(s, MessageKind::TunnelData, std::move(payload));
  tx_.observe(s.sta.actor, seq, record);
  tx_.observe(s.srv->as_actor, seq, record);
}

void Engine::send_record_from_srv(Session& s, const Payload& record) {
  const Bytes ct = s.server_tunnel.crypt(encode_record(record), s.record_counter);
  Payload payload{{"ctr", std::to_string(s.record_counter)}, {"ct", b64(ct)}};
  ++s.record_counter;
  const std::uint64_t seq = server_to_sta(s, MessageKind::TunnelData, std::move(payload));
  tx_.observe(s.srv->as_actor, seq, record);
  tx_.observe(s.sta.actor, seq, record);
}

void Engine::server_post_failure(Session& s) {
  if (s.server_failed) return;
  s.server_failed = true;
  server_to_sta(s, MessageKind::EapFailure, {});
}

void Engine::client_abort(Session& s, const std::string& reason) {
  if (s.client_aborted || s.server_failed) return;
  s.client_aborted = true;
  if (s.tunnels_ready) {
    Payload record{{"type", "abort"}};
    if (!reason.empty()) record["reason"] = reason;
    send_record_from_sta(s, record);
  }
  server_post_failure(s);
}

bool Engine::ladder_to_tunnel(Session& s, bool with_assoc) {
  const std::string& ap = s.srv->relay_legs ? s.srv->ap_actor : s.srv->as_actor;
  if (with_assoc) {
    tx_.post(s.sta.actor, ap, MessageKind::AuthReq, {{"alg", "open"}});
    tx_.post(ap, s.sta.actor, MessageKind::AuthResp, {{"status", "success"}});
    tx_.post(s.sta.actor, ap, MessageKind::AssocReq, {{"ssid", sc_.ssid.display()}});
    tx_.post(ap, s.sta.actor, MessageKind::AssocResp, {{"status", "success"}});
  }
  tx_.post(ap, s.sta.actor, MessageKind::EapIdentityReq, {});
  sta_to_server(s, MessageKind::EapIdentityResp, {{"identity", s.sta.outer_identity}});

  const OuterMethod wanted = s.sta.eap_tls ? OuterMethod::Tls : OuterMethod::Ttls;
  bool outer_ok = false;
  for (OuterMethod m : s.srv->outer_order) {
    server_to_sta(s, MessageKind::EapMethodOffer,
                  {{"layer", "outer"}, {"method", std::string(outer_method_name(m))}});
    if (m == wanted) {
      outer_ok = true;
      break;
    }
    sta_to_server(s, MessageKind::EapMethodNak, {});
  }
  if (!outer_ok) {
    server_post_failure(s);
    return false;
  }

  s.client_tunnel.client_nonce = rng_.bytes(16);
  s.server_tunnel.client_nonce = s.client_tunnel.client_nonce;
  sta_to_server(s, MessageKind::TunnelHello, {{"nonce", b64(s.client_tunnel.client_nonce)}});
  s.server_tunnel.server_nonce = rng_.bytes(16);
  s.client_tunnel.server_nonce = s.server_tunnel.server_nonce;
  server_to_sta(s, MessageKind::TunnelHello, {{"nonce", b64(s.server_tunnel.server_nonce)}});
  server_to_sta(s, MessageKind::TunnelCert, {{"chain", chain_to_text(s.srv->chain)}});
  return true;
}

bool Engine::do_key_exchange(Session& s) {
  const KeyExchange kx = client_key_exchange(s.srv->chain, rng_);
  sta_to_server(s, MessageKind::TunnelKeyExchange,
                {{"target_key", b64(kx.box.target_public_key)},
                 {"nonce", b64(kx.box.nonce)},
                 {"ct", b64(kx.box.ciphertext)},
                 {"tag", b64(kx.box.tag)}});
  auto opened = server_open_key_exchange(s.srv->keyring, kx.box);
  if (!opened.ok()) {
    server_post_failure(s);
    return false;
  }
  s.client_tunnel.master_secret = tunnel_master_secret(
      kx.pre_master, s.client_tunnel.client_nonce, s.client_tunnel.server_nonce);
  s.server_tunnel.master_secret = tunnel_master_secret(
      opened.value(), s.server_tunnel.client_nonce, s.server_tunnel.server_nonce);
  s.tunnels_ready = true;
  return true;
}

bool Engine::negotiate_inner(Session& s) {
  if (s.negotiated) return s.chosen.has_value();
  s.negotiated = true;
  for (InnerMethod m : s.srv->inner_order) {
    send_record_from_srv(s, {{"type", "method-offer"}, {"method", std::string(method_name(m))}});
    if (s.sta.policy.count(m)) {
      send_record_from_sta(s,
                           {{"type", "method-accept"}, {"method", std::string(method_name(m))}});
      s.chosen = m;
      return true;
    }
    send_record_from_sta(s, {{"type", "method-nak"}});
  }
  server_post_failure(s);
  return false;
}

Bytes Engine::server_mutual_challenge(Session& s) {
  const Bytes challenge = rng_.bytes(16);
  send_record_from_srv(
      s, {{"type", "mutual-challenge"}, {"server_challenge", b64(challenge)}});
  return challenge;
}

std::optional<Session> Engine::open_relay_session(const std::string& username,
                                                  Bytes& server_challenge) {
  Session n;
  n.sta.actor = sc_.adversary->id;
  n.sta.outer_identity = username;
  n.sta.policy = {InnerMethod::MutualChallenge};
  n.srv = &*legit_;
  if (!ladder_to_tunnel(n, true)) return std::nullopt;
  if (!do_key_exchange(n)) return std::nullopt;
  if (!negotiate_inner(n) || n.chosen != InnerMethod::MutualChallenge) return std::nullopt;
  server_challenge = server_mutual_challenge(n);
  return n;
}

InnerAuthStatus Engine::run_inner_attempt(Session& s, const std::string& username,
                                          const Password& password) {
  switch (*s.chosen) {
    case InnerMethod::Pap: {
      send_record_from_sta(s, {{"type", "pap-auth"},
                               {"username", username},
                               {"password", bytes_to_string(password.octets)}});
      bool ok = true;
      if (!s.srv->rogue) {
        auto it = s.srv->users.find(username);
        ok = it != s.srv->users.end() && to_bytes(it->second) == password.octets;
      }
      send_record_from_srv(s, {{"type", "inner-result"}, {"ok", ok ? "true" : "false"}});
      return ok ? InnerAuthStatus::Accepted : InnerAuthStatus::BadCredentials;
    }
    case InnerMethod::Md5Challenge: {
      const auto identifier = static_cast<std::uint8_t>(rng_.next_u64() & 0xff);
      const Bytes challenge = rng_.bytes(16);
      send_record_from_srv(s, {{"type", "md5-challenge"},
                               {"identifier", std::to_string(identifier)},
                               {"challenge", b64(challenge)}});
      const Bytes response = md5_challenge_response(identifier, password.octets, challenge);
      if (is_victim(s)) tx_.register_secret("victim-md5-response", response);
      send_record_from_sta(s, {{"type", "md5-response"},
                               {"identifier", std::to_string(identifier)},
                               {"response", b64(response)},
                               {"username", username}});
      bool ok = true;
      if (!s.srv->rogue) {
        auto it = s.srv->users.find(username);
        ok = it != s.srv->users.end() &&
             md5_challenge_response(identifier, view_of(it->second), challenge) == response;
      }
      send_record_from_srv(s, {{"type", "inner-result"}, {"ok", ok ? "true" : "false"}});
      return ok ? InnerAuthStatus::Accepted : InnerAuthStatus::BadCredentials;
    }
    case InnerMethod::MutualChallenge:
      return run_mutual_attempt(s, username, password);
  }
  throw std::logic_error("unreachable inner method");
}

InnerAuthStatus Engine::run_mutual_attempt(Session& s, const std::string& username,
                                           const Password& password) {
  ServerCfg* srv = s.srv;

  std::optional<Session> nested;
  Bytes server_challenge;
  if (srv->rogue && srv->relay_via_legit) {
    nested = open_relay_session(username, server_challenge);
  }
  if (nested) {
    // Replay the upstream challenge to the victim so the response forwards.
    send_record_from_srv(
        s, {{"type", "mutual-challenge"}, {"server_challenge", b64(server_challenge)}});
  } else {
    server_challenge = server_mutual_challenge(s);
  }

  const Bytes client_challenge = rng_.bytes(16);
  const Bytes response =
      mutual_client_response(password.octets, server_challenge, client_challenge, username);
  if (is_victim(s)) tx_.register_secret("victim-mutual-response", response);
  send_record_from_sta(s, {{"type", "mutual-response"},
                           {"client_challenge", b64(client_challenge)},
                           {"response", b64(response)},
                           {"username", username}});

  std::optional<Bytes> server_auth;
  bool rejected = false;
  if (!srv->rogue) {
    auto it = srv->users.find(username);
    if (it != srv->users.end()) {
      const Bytes expected = mutual_client_response(view_of(it->second), server_challenge,
                                                    client_challenge, username);
      if (crypto::constant_time_equal(expected, response)) {
        server_auth = mutual_server_auth(view_of(it->second), response, client_challenge);
      }
    }
    rejected = !server_auth.has_value();
  } else if (nested) {
    send_record_from_sta(*nested, {{"type", "mutual-response"},
                                   {"client_challenge", b64(client_challenge)},
                                   {"response", b64(response)},
                                   {"username", username}});
    auto it = legit_->users.find(username);
    std::optional<Bytes> upstream_auth;
    if (it != legit_->users.end()) {
      const Bytes expected = mutual_client_response(view_of(it->second), server_challenge,
                                                    client_challenge, username);
      if (crypto::constant_time_equal(expected, response)) {
        upstream_auth = mutual_server_auth(view_of(it->second), response, client_challenge);
      }
    }
    if (upstream_auth) {
      send_record_from_srv(*nested,
                           {{"type", "mutual-server-auth"}, {"server_auth", b64(*upstream_auth)}});
      send_record_from_sta(*nested, {{"type", "inner-done"}});
      send_record_from_srv(*nested, {{"type", "inner-result"}, {"ok", "true"}});
      nested->inner_accepted = true;
      finish_success(*nested);
      rogue_relay_success_ = true;
      server_auth = upstream_auth;
    } else {
      send_record_from_srv(*nested, {{"type", "inner-result"}, {"ok", "false"}});
      client_abort(*nested, "relay-rejected-upstream");
    }
  } else if (srv->shared_password) {
    server_auth = mutual_server_auth(view_of(*srv->shared_password), response, client_challenge);
  }

  if (rejected) {
    send_record_from_srv(s, {{"type", "inner-result"}, {"ok", "false"}});
    return InnerAuthStatus::BadCredentials;
  }
  if (srv->rogue && !server_auth) {
    // No way to compute the proof; bluff and hope the client skips the check.
    server_auth = rng_.bytes(32);
  }

  send_record_from_srv(s, {{"type", "mutual-server-auth"}, {"server_auth", b64(*server_auth)}});

  const Bytes expected_auth = mutual_server_auth(password.octets, response, client_challenge);
  if (!crypto::constant_time_equal(expected_auth, *server_auth)) {
    client_abort(s, "server-auth-failed");
    return InnerAuthStatus::MethodFailed;
  }
  send_record_from_sta(s, {{"type", "inner-done"}});
  send_record_from_srv(s, {{"type", "inner-result"}, {"ok", "true"}});
  return InnerAuthStatus::Accepted;
}

InnerAuthStatus Engine::run_client_cert_attempt(Session& s) {
  send_record_from_sta(s, {{"type", "client-cert"}, {"chain", chain_to_text(s.sta.client_chain)}});
  const Bytes message = concat({s.client_tunnel.client_nonce, s.client_tunnel.server_nonce,
                                view_of(kClientAuthLabel)});
  Bytes signature;
  if (!s.sta.client_keys.empty()) {
    signature = sign_payload(s.sta.client_keys.front().private_key, message);
  }
  send_record_from_sta(s, {{"type", "client-cert-verify"}, {"signature", b64(signature)}});

  bool ok = false;
  const CertificateChain& chain = s.sta.client_chain;
  auto validated = validate_chain(chain, sc_.now);
  if (validated.ok()) {
    const bool anchor_ok = s.srv->rogue
                               ? true
                               : (s.srv->client_ca_pub.has_value() &&
                                  validated.value().public_key == *s.srv->client_ca_pub);
    ok = anchor_ok && verify_payload(chain.front().public_key, message, signature);
  }
  send_record_from_srv(s, {{"type", "inner-result"}, {"ok", ok ? "true" : "false"}});
  return ok ? InnerAuthStatus::Accepted : InnerAuthStatus::BadCredentials;
}

void Engine::four_way_handshake(Session& s) {
  const std::string& ap = s.srv->relay_legs ? s.srv->ap_actor : s.srv->as_actor;
  const Bytes anonce = rng_.bytes(16);
  const Bytes snonce = rng_.bytes(16);
  const SessionKeys sta_keys = derive_keys(s.client_tunnel, anonce, snonce);
  const SessionKeys srv_keys = derive_keys(s.server_tunnel, anonce, snonce);

  auto mic = [&](const SessionKeys& keys, std::uint8_t step) {
    const Bytes step_byte{step};
    return crypto::hex_encode(
        crypto::hmac_sha256(keys.ptk, concat({view_of(kMicLabel), step_byte, anonce, snonce})));
  };

  tx_.post(ap, s.sta.actor, MessageKind::HandshakeMsg,
           {{"step", "1"}, {"anonce", b64(anonce)}});
  tx_.post(s.sta.actor, ap, MessageKind::HandshakeMsg,
           {{"step", "2"}, {"snonce", b64(snonce)}, {"mic", mic(sta_keys, 2)}});
  if (mic(srv_keys, 2) != mic(sta_keys, 2)) {
    throw std::logic_error("handshake key mismatch after accepted authentication");
  }
  tx_.post(ap, s.sta.actor, MessageKind::HandshakeMsg, {{"step", "3"}, {"mic", mic(srv_keys, 3)}});
  tx_.post(s.sta.actor, ap, MessageKind::HandshakeMsg, {{"step", "4"}, {"mic", mic(sta_keys, 4)}});

  result_.session_keys.push_back(SessionKeyRecord{s.sta.actor, ap, sta_keys});
  result_.session_keys.push_back(SessionKeyRecord{s.srv->as_actor, s.sta.actor, srv_keys});
  s.completed = true;
}

void Engine::finish_success(Session& s) {
  if (s.srv->relay_legs) {
    tx_.post(s.srv->as_actor, s.srv->ap_actor, MessageKind::EapSuccess,
             {{"pmk", b64(derive_pmk(s.server_tunnel.master_secret))}});
    tx_.post(s.srv->ap_actor, s.sta.actor, MessageKind::EapSuccess, {});
  } else {
    tx_.post(s.srv->as_actor, s.sta.actor, MessageKind::EapSuccess, {});
  }
  four_way_handshake(s);
  if (s.srv->rogue && is_victim(s)) rogue_completed_with_victim_ = true;
}

InnerAuthStatus Engine::port_authenticate(Session& s, const std::string& username,
                                          const Password& password) {
  if (s.server_failed || s.client_aborted) return InnerAuthStatus::MethodFailed;
  if (!s.tunnels_ready) {
    if (!do_key_exchange(s)) return InnerAuthStatus::MethodFailed;
    if (!s.sta.eap_tls && !negotiate_inner(s)) return InnerAuthStatus::MethodFailed;
  }
  InnerAuthStatus status = s.sta.eap_tls ? run_client_cert_attempt(s)
                                         : run_inner_attempt(s, username, password);
  if (status == InnerAuthStatus::Accepted) s.inner_accepted = true;
  return status;
}

StationCfg Engine::victim_station() const {
  StationCfg sta;
  sta.actor = sc_.victim.id;
  sta.outer_identity = sc_.victim.username;
  sta.policy = sc_.victim.inner_policy;
  sta.eap_tls = sc_.victim.eap_tls;
  if (sc_.victim.eap_tls) {
    sta.client_chain = load_chain_file(resolve(*sc_.victim.client_chain_path));
    KeyPair key = load_keypair_file(resolve(*sc_.victim.client_key_path));
    if (sta.client_chain.empty() || sta.client_chain.front().public_key != key.public_key) {
      throw ScenarioError("victim client key does not match the client chain");
    }
    sta.client_keys.push_back(std::move(key));
  }
  return sta;
}

AuthOutcome Engine::run_victim_open(const Bss& bss) {
  AuthOutcome outcome = AuthOutcome::success_non_8021x();
  if (sc_.rcms) {
    NullProvider user;
    NullPort port;
    const NetworkOffer offer{sc_.ssid, false, std::nullopt};
    outcome = decide(offer, *trust_, *creds_, user, port, sc_.now);
  }
  if (outcome.kind == AuthOutcome::Kind::SuccessNon8021X) {
    tx_.post(sc_.victim.id, bss.ap_actor, MessageKind::AuthReq, {{"alg", "open"}});
    tx_.post(bss.ap_actor, sc_.victim.id, MessageKind::AuthResp, {{"status", "success"}});
    tx_.post(sc_.victim.id, bss.ap_actor, MessageKind::AssocReq, {{"ssid", sc_.ssid.display()}});
    tx_.post(bss.ap_actor, sc_.victim.id, MessageKind::AssocResp, {{"status", "success"}});
  }
  return outcome;
}

AuthOutcome Engine::run_victim_8021x(const Bss& bss) {
  Session s;
  s.sta = victim_station();
  s.srv = bss.server;

  if (!ladder_to_tunnel(s, true)) {
    return AuthOutcome::rejected(RejectReason::InnerAuthFailed);
  }

  if (!sc_.rcms) {
    // Pinning disabled: the station accepts whatever certificate it sees.
    if (!do_key_exchange(s)) return AuthOutcome::rejected(RejectReason::InnerAuthFailed);
    InnerAuthStatus status;
    if (s.sta.eap_tls) {
      status = run_client_cert_attempt(s);
    } else {
      if (!negotiate_inner(s)) return AuthOutcome::rejected(RejectReason::InnerAuthFailed);
      status = run_inner_attempt(s, sc_.victim.username,
                                 Password::from_utf8(sc_.victim.password));
    }
    if (status == InnerAuthStatus::Accepted) {
      s.inner_accepted = true;
      finish_success(s);
      return AuthOutcome::success_8021x();
    }
    if (status == InnerAuthStatus::BadCredentials) {
      client_abort(s, "credentials-rejected");
      return AuthOutcome::rejected(RejectReason::CredentialsRejected);
    }
    return AuthOutcome::rejected(RejectReason::InnerAuthFailed);
  }

  const NetworkOffer offer{sc_.ssid, true, s.srv->chain};
  ScriptedProvider user(sc_, legit_root_pub_, opt_.interactive_user);
  EnginePort port(*this, s);
  const AuthOutcome outcome = decide(offer, *trust_, *creds_, user, port, sc_.now);

  if (outcome.kind == AuthOutcome::Kind::Success8021X && s.inner_accepted) {
    finish_success(s);
  } else if (s.tunnels_ready && !s.server_failed && !s.client_aborted) {
    client_abort(s, "station-gave-up");
  }
  return outcome;
}

AuthOutcome Engine::run_victim(const Bss& bss) {
  return bss.uses_8021x ? run_victim_8021x(bss) : run_victim_open(bss);
}

void Engine::evaluate_attack() {
  if (!sc_.adversary || !sc_.adversary->present) return;
  AttackSummary attack;
  attack.goal = sc_.adversary->goal;
  attack.relayed = rogue_relay_success_;

  const std::vector<attack::CapturedMaterial> captured =
      attack::capture_credentials(tx_, sc_.adversary->id);
  attack.captured_count = captured.size();

  std::optional<attack::Wordlist> wordlist;
  if (sc_.adversary->wordlist_path) {
    wordlist = attack::Wordlist::load(resolve(*sc_.adversary->wordlist_path));
  }

  bool plaintext = false;
  for (const auto& material : captured) {
    if (material.kind == attack::CapturedMaterial::Kind::PlaintextCredentials) {
      plaintext = true;
      attack.recovered_password = material.password;
      break;
    }
  }
  if (!plaintext && wordlist) {
    for (const auto& material : captured) {
      if (auto hit = attack::dictionary_attack(material, *wordlist)) {
        attack.recovered_password = hit;
        break;
      }
    }
  }

  const bool victim_blocked = result_.victim_outcome.kind == AuthOutcome::Kind::Rejected ||
                              result_.victim_outcome.kind == AuthOutcome::Kind::Canceled;
  const bool blocked = sc_.rcms && victim_blocked && captured.empty() &&
                       !rogue_completed_with_victim_;

  if (attack.goal == "mitm") {
    if (rogue_completed_with_victim_ &&
        result_.victim_outcome.kind == AuthOutcome::Kind::Success8021X) {
      attack.token = "mitm-established";
    } else if (blocked) {
      attack.token = "attack-blocked";
    } else {
      attack.token = "mitm-failed";
    }
  } else {
    if (plaintext) {
      attack.token = "credentials-stolen-plaintext";
    } else if (attack.recovered_password) {
      attack.token = "credentials-recovered-dictionary";
    } else if (blocked) {
      attack.token = "attack-blocked";
    } else {
      attack.token = "credential-theft-failed";
    }
  }
  result_.attack = attack;
}

ScenarioResult Engine::run() {
  result_.name = sc_.name;
  result_.rcms = sc_.rcms;
  result_.expected = sc_.expected;

  build_networks();
  prepare_stores();
  register_secrets();

  // Scan phase: stations hear every present BSS beacon.
  std::vector<const Bss*> heard;
  for (const Bss& bss : networks_) heard.push_back(&bss);
  std::sort(heard.begin(), heard.end(),
            [](const Bss* a, const Bss* b) { return a->ap_actor < b->ap_actor; });
  for (const Bss* bss : heard) {
    tx_.post(bss->ap_actor, sc_.victim.id, MessageKind::Beacon,
             {{"ssid", sc_.ssid.display()},
              {"security", bss->uses_8021x ? "802.1X" : "open"},
              {"rssi", std::to_string(bss->rssi)}});
  }

  // Join the loudest BSS; ties resolve to the smaller actor id.
  const Bss* selected = heard.front();
  for (const Bss* bss : heard) {
    if (bss->rssi > selected->rssi ||
        (bss->rssi == selected->rssi && bss->ap_actor < selected->ap_actor)) {
      selected = bss;
    }
  }

  result_.victim_outcome = run_victim(*selected);
  evaluate_attack();

  result_.observed = result_.attack ? result_.attack->token : result_.victim_outcome.token();
  result_.leakage = tx_.leakage();
  result_.transcript = std::move(tx_);
  return std::move(result_);
}

}  // namespace

ScenarioResult run_scenario(const Scenario& scenario, const RunOptions& options) {
  Engine engine(scenario, options);
  return engine.run();
}

}  // namespace rcms::sim
