#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "rcms/bytes.hpp"
#include "rcms/keys.hpp"
#include "rcms/result.hpp"

namespace rcms {

// Seconds since the Unix epoch, UTC. Always passed explicitly; nothing in
// the library reads the wall clock.
using UtcTime = std::int64_t;

struct Certificate {
  std::string serial;
  std::string subject;
  std::string issuer;
  Bytes public_key;
  UtcTime not_before = 0;
  UtcTime not_after = 0;
  bool is_ca = false;
  // Over the canonical encoding without the signature field, by the issuer
  // key (self-signed for roots).
  Bytes signature;

  bool operator==(const Certificate&) const = default;
  bool self_signed() const { return subject == issuer; }
};

// Leaf first, root last.
using CertificateChain = std::vector<Certificate>;

// Deterministic, injective byte encoding: sorted "key=value" lines with
// backslash escaping in string fields. Signing and fingerprinting both hash
// this form, so two certificates are identical iff their encodings are.
Bytes canonical_encode(const Certificate& cert, bool include_signature);

Certificate sign_certificate(Certificate tbs, const KeyPair& issuer_key);
bool verify_certificate_signature(const Certificate& cert, ByteView issuer_public_key);

struct Fingerprint {
  std::string hex;  // SHA-256 of the canonical encoding including signature

  bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(const Certificate& cert);
std::string fingerprint_abbrev(const Fingerprint& fp);

enum class ChainFault {
  EmptyChain,
  BrokenLink,    // certs[i].issuer does not name certs[i+1].subject (or root not self-issued)
  NotCa,         // non-leaf certificate without the CA flag
  BadSignature,  // signature does not verify under the issuer public key
  NotYetValid,
  Expired,
};

std::string_view chain_fault_name(ChainFault fault);

struct ChainError {
  ChainFault fault;
  std::size_t index = 0;  // offending certificate (leaf = 0)

  bool operator==(const ChainError&) const = default;
};

// Checks in order: emptiness, issuer/subject linkage (root must be
// self-issued), CA flags above the leaf, signatures (root self-verifies),
// then validity window (inclusive bounds) for every certificate. Reports the
// first failing check, lowest index first. Ok carries the root certificate.
Result<Certificate, ChainError> validate_chain(const CertificateChain& chain, UtcTime now);

std::string certificate_to_text(const Certificate& cert);
std::string chain_to_text(const CertificateChain& chain);

// Throws ParseError on malformed input. A chain file is one or more
// certificate blocks, leaf first.
CertificateChain chain_from_text(std::string_view text);
Certificate certificate_from_text(std::string_view text);

void write_chain_file(const std::filesystem::path& path, const CertificateChain& chain);
CertificateChain load_chain_file(const std::filesystem::path& path);
Certificate load_certificate_file(const std::filesystem::path& path);

}  // namespace rcms
