#include "rcms/keys.hpp"

#include <map>

#include "fsutil.hpp"
#include "rcms/crypto.hpp"
#include "rcms/errors.hpp"
#include "textcodec.hpp"

namespace rcms {

namespace {

constexpr std::string_view kPairLabel = "rcms.keypair.v1";
constexpr std::string_view kSealLabel = "rcms.seal.v1";
constexpr std::string_view kSealTagLabel = "rcms.seal.tag.v1";
constexpr std::string_view kKeyFileLabel = "RCMS PRIVATE KEY";

Bytes paired_private(ByteView public_key) {
  const Bytes material = concat({view_of(kPairLabel), public_key});
  const auto digest = crypto::sha256(material);
  return Bytes(digest.begin(), digest.end());
}

Bytes seal_keystream(ByteView private_half, ByteView nonce, std::size_t n) {
  Bytes out;
  out.reserve(n);
  std::uint32_t counter = 0;
  while (out.size() < n) {
    Bytes ctr_bytes = {static_cast<std::uint8_t>(counter >> 24),
                       static_cast<std::uint8_t>(counter >> 16),
                       static_cast<std::uint8_t>(counter >> 8),
                       static_cast<std::uint8_t>(counter)};
    const auto block =
        crypto::sha256(concat({view_of(kSealLabel), private_half, nonce, ctr_bytes}));
    for (std::size_t i = 0; i < block.size() && out.size() < n; ++i) out.push_back(block[i]);
    ++counter;
  }
  return out;
}

Bytes seal_tag(ByteView private_half, ByteView nonce, ByteView ciphertext) {
  const auto mac = crypto::hmac_sha256(private_half, concat({view_of(kSealTagLabel), nonce, ciphertext}));
  return Bytes(mac.begin(), mac.end());
}

}  // namespace

KeyPair generate_keypair(Rng& rng) {
  return keypair_from_public(rng.bytes(32));
}

KeyPair keypair_from_public(ByteView public_key) {
  if (public_key.empty()) throw std::invalid_argument("public key must not be empty");
  return KeyPair{Bytes(public_key.begin(), public_key.end()), paired_private(public_key)};
}

bool keypair_matches(const KeyPair& key) {
  return !key.public_key.empty() &&
         crypto::constant_time_equal(key.private_key, paired_private(key.public_key));
}

Bytes sign_payload(ByteView private_key, ByteView message) {
  const auto mac = crypto::hmac_sha256(private_key, message);
  return Bytes(mac.begin(), mac.end());
}

bool verify_payload(ByteView public_key, ByteView message, ByteView signature) {
  if (public_key.empty()) return false;
  const Bytes expected = sign_payload(paired_private(public_key), message);
  return crypto::constant_time_equal(expected, signature);
}

SealedSecret seal_to_key(ByteView public_key, ByteView payload, Rng& rng) {
  if (public_key.empty()) throw std::invalid_argument("public key must not be empty");
  SealedSecret box;
  box.target_public_key.assign(public_key.begin(), public_key.end());
  box.nonce = rng.bytes(16);
  const Bytes priv = paired_private(public_key);
  const Bytes ks = seal_keystream(priv, box.nonce, payload.size());
  box.ciphertext.resize(payload.size());
  for (std::size_t i = 0; i < payload.size(); ++i) box.ciphertext[i] = payload[i] ^ ks[i];
  box.tag = seal_tag(priv, box.nonce, box.ciphertext);
  return box;
}

std::optional<Bytes> unseal_with(const KeyPair& key, const SealedSecret& box) {
  if (!keypair_matches(key)) return std::nullopt;
  if (!crypto::constant_time_equal(key.public_key, box.target_public_key)) return std::nullopt;
  const Bytes expected_tag = seal_tag(key.private_key, box.nonce, box.ciphertext);
  if (!crypto::constant_time_equal(expected_tag, box.tag)) return std::nullopt;
  const Bytes ks = seal_keystream(key.private_key, box.nonce, box.ciphertext.size());
  Bytes out(box.ciphertext.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = box.ciphertext[i] ^ ks[i];
  return out;
}

void write_keypair_file(const std::filesystem::path& path, const KeyPair& key) {
  std::map<std::string, std::string> fields{
      {"public_key", crypto::base64_encode(key.public_key)},
      {"private_key", crypto::base64_encode(key.private_key)},
  };
  fsutil::write_file_atomic(
      path, textcodec::wrap_marker_block(kKeyFileLabel, textcodec::build_kv_block(fields)));
}

KeyPair load_keypair_file(const std::filesystem::path& path) {
  const std::string content = fsutil::read_file_or_throw(path);
  auto blocks = textcodec::split_marker_blocks(kKeyFileLabel, content);
  if (!blocks || blocks->size() != 1) {
    throw ParseError("not a key file: " + path.string());
  }
  auto fields = textcodec::parse_kv_block((*blocks)[0]);
  if (!fields || fields->size() != 2 || !fields->count("public_key") ||
      !fields->count("private_key")) {
    throw ParseError("malformed key file: " + path.string());
  }
  auto pub = crypto::base64_decode(fields->at("public_key"));
  auto priv = crypto::base64_decode(fields->at("private_key"));
  if (!pub || !priv || pub->empty()) throw ParseError("malformed key file: " + path.string());
  return KeyPair{*std::move(pub), *std::move(priv)};
}

}  // namespace rcms
