#pragma once

#include <filesystem>
#include <optional>

#include "rcms/bytes.hpp"
#include "rcms/rng.hpp"

namespace rcms {

// Simulation stand-in for an asymmetric keypair. The private half is a keyed
// derivation of the public half; sign/verify and seal/unseal treat that
// derivation as scheme-internal, so actors must only ever handle KeyPair
// values granted to them explicitly. Callers never depend on the derivation,
// which keeps the scheme swappable for a real one.
struct KeyPair {
  Bytes public_key;
  Bytes private_key;

  bool operator==(const KeyPair&) const = default;
};

KeyPair generate_keypair(Rng& rng);
KeyPair keypair_from_public(ByteView public_key);
bool keypair_matches(const KeyPair& key);

Bytes sign_payload(ByteView private_key, ByteView message);
bool verify_payload(ByteView public_key, ByteView message, ByteView signature);

// Secret addressed to a public key; only the holder of the matching private
// half can open it. A bad key or tampered box fails closed (nullopt).
struct SealedSecret {
  Bytes target_public_key;
  Bytes nonce;
  Bytes ciphertext;
  Bytes tag;
};

SealedSecret seal_to_key(ByteView public_key, ByteView payload, Rng& rng);
std::optional<Bytes> unseal_with(const KeyPair& key, const SealedSecret& box);

void write_keypair_file(const std::filesystem::path& path, const KeyPair& key);
KeyPair load_keypair_file(const std::filesystem::path& path);

}  // namespace rcms
