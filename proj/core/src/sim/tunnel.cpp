#include "rcms/sim/tunnel.hpp"

#include "../textcodec.hpp"
#include "rcms/crypto.hpp"

namespace rcms::sim {

namespace {

constexpr std::string_view kMasterLabel = "rcms.sim.master";
constexpr std::string_view kPmkLabel = "rcms.sim.pmk";
constexpr std::string_view kPtkLabel = "rcms.sim.ptk";
constexpr std::string_view kRecordLabel = "rcms.sim.rec";

Bytes be64(std::uint64_t v) {
  Bytes out(8);
  for (int i = 0; i < 8; ++i) out[i] = static_cast<std::uint8_t>(v >> (56 - 8 * i));
  return out;
}

Bytes be32(std::uint32_t v) {
  Bytes out(4);
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(v >> (24 - 8 * i));
  return out;
}

}  // namespace

Bytes Tunnel::crypt(ByteView data, std::uint64_t record_counter) const {
  Bytes out(data.begin(), data.end());
  const Bytes counter = be64(record_counter);
  std::size_t off = 0;
  std::uint32_t block = 0;
  while (off < out.size()) {
    const auto ks = crypto::hmac_sha256(
        master_secret, concat({view_of(kRecordLabel), counter, be32(block)}));
    for (std::size_t i = 0; i < ks.size() && off < out.size(); ++i, ++off) {
      out[off] ^= ks[i];
    }
    ++block;
  }
  return out;
}

Bytes tunnel_master_secret(ByteView pre_master, ByteView client_nonce, ByteView server_nonce) {
  const auto mac =
      crypto::hmac_sha256(pre_master, concat({view_of(kMasterLabel), client_nonce, server_nonce}));
  return Bytes(mac.begin(), mac.end());
}

Bytes derive_pmk(ByteView master_secret) {
  const auto mac = crypto::hmac_sha256(master_secret, view_of(kPmkLabel));
  return Bytes(mac.begin(), mac.end());
}

Bytes derive_ptk(ByteView pmk, ByteView anonce, ByteView snonce) {
  const auto mac = crypto::hmac_sha256(pmk, concat({view_of(kPtkLabel), anonce, snonce}));
  return Bytes(mac.begin(), mac.end());
}

SessionKeys derive_keys(const Tunnel& tunnel, ByteView anonce, ByteView snonce) {
  SessionKeys keys;
  keys.pmk = derive_pmk(tunnel.master_secret);
  keys.ptk = derive_ptk(keys.pmk, anonce, snonce);
  return keys;
}

Bytes encode_record(const Payload& record) {
  return to_bytes(textcodec::build_kv_block(record));
}

std::optional<Payload> decode_record(ByteView data) {
  const std::string text = bytes_to_string(data);
  return textcodec::parse_kv_block(text);
}

KeyExchange client_key_exchange(const CertificateChain& server_chain, Rng& rng) {
  if (server_chain.empty()) throw std::invalid_argument("empty server chain");
  KeyExchange kx;
  kx.pre_master = rng.bytes(32);
  kx.box = seal_to_key(server_chain.front().public_key, kx.pre_master, rng);
  return kx;
}

Result<Bytes, TunnelFailure> server_open_key_exchange(const std::vector<KeyPair>& keyring,
                                                      const SealedSecret& box) {
  for (const KeyPair& key : keyring) {
    if (key.public_key == box.target_public_key) {
      if (auto opened = unseal_with(key, box)) return *std::move(opened);
    }
  }
  return TunnelFailure::UnsealFailure;
}

Result<std::pair<Tunnel, Tunnel>, TunnelFailure> establish_tunnel(
    const CertificateChain& server_chain, const std::vector<KeyPair>& server_keyring, Rng& rng) {
  Tunnel client;
  client.client_nonce = rng.bytes(16);
  Tunnel server;
  server.client_nonce = client.client_nonce;
  server.server_nonce = rng.bytes(16);
  client.server_nonce = server.server_nonce;

  const KeyExchange kx = client_key_exchange(server_chain, rng);
  auto opened = server_open_key_exchange(server_keyring, kx.box);
  if (!opened.ok()) return opened.error();

  client.master_secret =
      tunnel_master_secret(kx.pre_master, client.client_nonce, client.server_nonce);
  server.master_secret =
      tunnel_master_secret(opened.value(), server.client_nonce, server.server_nonce);
  return std::make_pair(std::move(client), std::move(server));
}

}  // namespace rcms::sim
