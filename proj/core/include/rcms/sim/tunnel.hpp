#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rcms/bytes.hpp"
#include "rcms/certmodel.hpp"
#include "rcms/keys.hpp"
#include "rcms/result.hpp"
#include "rcms/rng.hpp"
#include "rcms/sim/message.hpp"

namespace rcms::sim {

// TLS stand-in: both ends hold the same master secret after the key
// exchange; records are keystream-encrypted under it with a per-record
// counter. No integrity beyond the model's needs.
struct Tunnel {
  Bytes client_nonce;
  Bytes server_nonce;
  Bytes master_secret;

  Bytes crypt(ByteView data, std::uint64_t record_counter) const;
};

Bytes tunnel_master_secret(ByteView pre_master, ByteView client_nonce, ByteView server_nonce);

Bytes derive_pmk(ByteView master_secret);
Bytes derive_ptk(ByteView pmk, ByteView anonce, ByteView snonce);

struct SessionKeys {
  Bytes pmk;
  Bytes ptk;

  bool operator==(const SessionKeys&) const = default;
};

SessionKeys derive_keys(const Tunnel& tunnel, ByteView anonce, ByteView snonce);

// Tunneled records are key/value payloads serialized to bytes before
// encryption; decode rejects anything that is not a valid record.
Bytes encode_record(const Payload& record);
std::optional<Payload> decode_record(ByteView data);

enum class TunnelFailure {
  UnsealFailure,  // server lacks the private half for the presented key
};

// The client half of the key exchange: a fresh pre-master sealed to the
// chain's leaf public key.
struct KeyExchange {
  SealedSecret box;
  Bytes pre_master;
};

KeyExchange client_key_exchange(const CertificateChain& server_chain, Rng& rng);

// Server side: find the keypair matching the sealed box and open it.
Result<Bytes, TunnelFailure> server_open_key_exchange(const std::vector<KeyPair>& keyring,
                                                      const SealedSecret& box);

// Wires the two halves directly (no message log), for tests.
Result<std::pair<Tunnel, Tunnel>, TunnelFailure> establish_tunnel(
    const CertificateChain& server_chain, const std::vector<KeyPair>& server_keyring, Rng& rng);

}  // namespace rcms::sim
