#include "rcms/certmodel.hpp"

#include <charconv>
#include <map>

#include "fsutil.hpp"
#include "rcms/crypto.hpp"
#include "rcms/errors.hpp"
#include "textcodec.hpp"

namespace rcms {

namespace {

constexpr std::string_view kCertFileLabel = "RCMS CERTIFICATE";

std::string to_decimal(UtcTime t) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), t);
  return std::string(buf, end);
}

bool parse_decimal(std::string_view s, UtcTime& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::map<std::string, std::string> cert_fields(const Certificate& cert, bool include_signature) {
  std::map<std::string, std::string> fields{
      {"serial", cert.serial},
      {"subject", cert.subject},
      {"issuer", cert.issuer},
      {"public_key", crypto::base64_encode(cert.public_key)},
      {"not_before", to_decimal(cert.not_before)},
      {"not_after", to_decimal(cert.not_after)},
      {"is_ca", cert.is_ca ? "true" : "false"},
  };
  if (include_signature) fields.emplace("signature", crypto::base64_encode(cert.signature));
  return fields;
}

Certificate cert_from_fields(const std::map<std::string, std::string>& fields,
                             const std::string& origin) {
  static const char* kRequired[] = {"serial",     "subject",   "issuer", "public_key",
                                    "not_before", "not_after", "is_ca",  "signature"};
  if (fields.size() != 8) throw ParseError("unexpected certificate fields in " + origin);
  for (const char* key : kRequired) {
    if (!fields.count(key)) throw ParseError(std::string("missing field ") + key + " in " + origin);
  }
  Certificate cert;
  cert.serial = fields.at("serial");
  cert.subject = fields.at("subject");
  cert.issuer = fields.at("issuer");
  auto pub = crypto::base64_decode(fields.at("public_key"));
  auto sig = crypto::base64_decode(fields.at("signature"));
  if (!pub || !sig) throw ParseError("bad base64 in " + origin);
  cert.public_key = *std::move(pub);
  cert.signature = *std::move(sig);
  if (!parse_decimal(fields.at("not_before"), cert.not_before) ||
      !parse_decimal(fields.at("not_after"), cert.not_after)) {
    throw ParseError("bad timestamp in " + origin);
  }
  const std::string& is_ca = fields.at("is_ca");
  if (is_ca == "true") {
    cert.is_ca = true;
  } else if (is_ca == "false") {
    cert.is_ca = false;
  } else {
    throw ParseError("bad is_ca value in " + origin);
  }
  return cert;
}

}  // namespace

Bytes canonical_encode(const Certificate& cert, bool include_signature) {
  return to_bytes(textcodec::build_kv_block(cert_fields(cert, include_signature)));
}

Certificate sign_certificate(Certificate tbs, const KeyPair& issuer_key) {
  tbs.signature = sign_payload(issuer_key.private_key, canonical_encode(tbs, false));
  return tbs;
}

bool verify_certificate_signature(const Certificate& cert, ByteView issuer_public_key) {
  return verify_payload(issuer_public_key, canonical_encode(cert, false), cert.signature);
}

Fingerprint fingerprint(const Certificate& cert) {
  return Fingerprint{crypto::hex_encode(crypto::sha256(canonical_encode(cert, true)))};
}

std::string fingerprint_abbrev(const Fingerprint& fp) {
  if (fp.hex.size() <= 12) return fp.hex;
  return fp.hex.substr(0, 12) + "...";
}

std::string_view chain_fault_name(ChainFault fault) {
  switch (fault) {
    case ChainFault::EmptyChain:
      return "empty-chain";
    case ChainFault::BrokenLink:
      return "broken-link";
    case ChainFault::NotCa:
      return "not-ca";
    case ChainFault::BadSignature:
      return "bad-signature";
    case ChainFault::NotYetValid:
      return "not-yet-valid";
    case ChainFault::Expired:
      return "expired";
  }
  return "unknown";
}

Result<Certificate, ChainError> validate_chain(const CertificateChain& chain, UtcTime now) {
  if (chain.empty()) return ChainError{ChainFault::EmptyChain, 0};
  const std::size_t n = chain.size();

  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (chain[i].issuer != chain[i + 1].subject) return ChainError{ChainFault::BrokenLink, i};
  }
  if (!chain[n - 1].self_signed()) return ChainError{ChainFault::BrokenLink, n - 1};

  for (std::size_t i = 1; i < n; ++i) {
    if (!chain[i].is_ca) return ChainError{ChainFault::NotCa, i};
  }

  for (std::size_t i = 0; i < n; ++i) {
    const Certificate& issuer = (i + 1 < n) ? chain[i + 1] : chain[i];
    if (!verify_certificate_signature(chain[i], issuer.public_key)) {
      return ChainError{ChainFault::BadSignature, i};
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    if (now < chain[i].not_before) return ChainError{ChainFault::NotYetValid, i};
    if (now > chain[i].not_after) return ChainError{ChainFault::Expired, i};
  }

  return chain[n - 1];
}

std::string certificate_to_text(const Certificate& cert) {
  return textcodec::wrap_marker_block(kCertFileLabel,
                                      textcodec::build_kv_block(cert_fields(cert, true)));
}

std::string chain_to_text(const CertificateChain& chain) {
  std::string out;
  for (const Certificate& cert : chain) out += certificate_to_text(cert);
  return out;
}

CertificateChain chain_from_text(std::string_view text) {
  auto blocks = textcodec::split_marker_blocks(kCertFileLabel, text);
  if (!blocks || blocks->empty()) throw ParseError("no certificate blocks found");
  CertificateChain chain;
  chain.reserve(blocks->size());
  for (std::size_t i = 0; i < blocks->size(); ++i) {
    auto fields = textcodec::parse_kv_block((*blocks)[i]);
    if (!fields) throw ParseError("malformed certificate block " + std::to_string(i));
    chain.push_back(cert_from_fields(*fields, "block " + std::to_string(i)));
  }
  return chain;
}

Certificate certificate_from_text(std::string_view text) {
  CertificateChain chain = chain_from_text(text);
  if (chain.size() != 1) throw ParseError("expected exactly one certificate");
  return chain[0];
}

void write_chain_file(const std::filesystem::path& path, const CertificateChain& chain) {
  fsutil::write_file_atomic(path, chain_to_text(chain));
}

CertificateChain load_chain_file(const std::filesystem::path& path) {
  try {
    return chain_from_text(fsutil::read_file_or_throw(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

Certificate load_certificate_file(const std::filesystem::path& path) {
  try {
    return certificate_from_text(fsutil::read_file_or_throw(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace rcms
