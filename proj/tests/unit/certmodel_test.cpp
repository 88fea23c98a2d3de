#include <fstream>

#include "doctest.h"
#include "rcms/certmodel.hpp"
#include "rcms/crypto.hpp"
#include "rcms/errors.hpp"
#include "tempdir.hpp"

using namespace rcms;

namespace {

Certificate make_cert(const std::string& subject, const std::string& issuer,
                      const Bytes& public_key, const KeyPair& signer, bool is_ca,
                      UtcTime not_before = 1700000000, UtcTime not_after = 2000000000,
                      const std::string& serial = "0001") {
  Certificate tbs;
  tbs.serial = serial;
  tbs.subject = subject;
  tbs.issuer = issuer;
  tbs.public_key = public_key;
  tbs.not_before = not_before;
  tbs.not_after = not_after;
  tbs.is_ca = is_ca;
  return sign_certificate(std::move(tbs), signer);
}

KeyPair test_key(const char* pub) { return keypair_from_public(to_bytes(pub)); }

// Root fixture shared by the frozen-value checks.
Certificate frozen_root() {
  const KeyPair key = test_key("RCMS-TEST-ROOT-KEY-1");
  return make_cert("RCMS Test Root CA", "RCMS Test Root CA", key.public_key, key, true);
}

CertificateChain frozen_chain(UtcTime leaf_not_before = 1700000000,
                              UtcTime leaf_not_after = 2000000000) {
  const KeyPair root_key = test_key("RCMS-TEST-ROOT-KEY-1");
  const KeyPair int_key = test_key("RCMS-TEST-INT-KEY-1");
  const KeyPair leaf_key = test_key("RCMS-TEST-LEAF-KEY-1");
  const Certificate root = frozen_root();
  const Certificate mid = make_cert("RCMS Test Intermediate", root.subject, int_key.public_key,
                                    root_key, true, 1700000000, 2000000000, "0002");
  const Certificate leaf = make_cert("radius.test.example", mid.subject, leaf_key.public_key,
                                     int_key, false, leaf_not_before, leaf_not_after, "0003");
  return {leaf, mid, root};
}

}  // namespace

TEST_CASE("frozen root certificate signature and fingerprint") {
  const Certificate root = frozen_root();
  CHECK(crypto::base64_encode(root.signature) == "hx2EV9d/nYUCOThk389MHBqIBxANRM4GlJX+EGntWy0=");
  CHECK(fingerprint(root).hex ==
        "5c58a52c57cd3e757b9ef6c7a944c57c78a17cd350b32c95e3b0106a6dd53341");
  CHECK(fingerprint_abbrev(fingerprint(root)) == "5c58a52c57cd...");
}

TEST_CASE("canonical encoding is the sorted key=value block") {
  const Certificate root = frozen_root();
  const std::string expected =
      "is_ca=true\n"
      "issuer=RCMS Test Root CA\n"
      "not_after=2000000000\n"
      "not_before=1700000000\n"
      "public_key=UkNNUy1URVNULVJPT1QtS0VZLTE=\n"
      "serial=0001\n"
      "signature=hx2EV9d/nYUCOThk389MHBqIBxANRM4GlJX+EGntWy0=\n"
      "subject=RCMS Test Root CA\n";
  CHECK(bytes_to_string(canonical_encode(root, true)) == expected);
  // Without the signature the line disappears and everything else stays.
  const std::string no_sig = bytes_to_string(canonical_encode(root, false));
  CHECK(no_sig.find("signature=") == std::string::npos);
  CHECK(no_sig.find("subject=RCMS Test Root CA\n") != std::string::npos);
}

TEST_CASE("canonical encoding escapes structural characters") {
  const KeyPair key = test_key("k");
  const Certificate a = make_cert("evil\nsubject=x", "evil\nsubject=x", key.public_key, key, true);
  const Certificate b = make_cert("evil", "evil", key.public_key, key, true);
  CHECK(canonical_encode(a, false) != canonical_encode(b, false));
  // Text form round trips the awkward name unchanged.
  const Certificate back = certificate_from_text(certificate_to_text(a));
  CHECK(back == a);
  CHECK(back.subject == "evil\nsubject=x");
}

TEST_CASE("signature verification") {
  const Certificate root = frozen_root();
  CHECK(verify_certificate_signature(root, root.public_key));
  Certificate tampered = root;
  tampered.subject = "Impostor";
  tampered.issuer = "Impostor";
  CHECK_FALSE(verify_certificate_signature(tampered, tampered.public_key));
  CHECK_FALSE(verify_certificate_signature(root, to_bytes("RCMS-TEST-ROOT-KEY-2")));
}

TEST_CASE("chain text round trips") {
  const CertificateChain chain = frozen_chain();
  const std::string text = chain_to_text(chain);
  CHECK(chain_from_text(text) == chain);
  // A chain file is plain concatenation of certificate blocks.
  CHECK(text == certificate_to_text(chain[0]) + certificate_to_text(chain[1]) +
                    certificate_to_text(chain[2]));
}

TEST_CASE("certificate parsing is strict") {
  const std::string good = certificate_to_text(frozen_root());
  CHECK_NOTHROW(certificate_from_text(good));
  CHECK_THROWS_AS(certificate_from_text(""), ParseError);
  CHECK_THROWS_AS(certificate_from_text("junk"), ParseError);

  // Missing field.
  std::string missing = good;
  const auto serial_at = missing.find("serial=");
  missing.erase(serial_at, missing.find('\n', serial_at) - serial_at + 1);
  CHECK_THROWS_AS(certificate_from_text(missing), ParseError);

  // Unknown extra field.
  std::string extra = good;
  extra.insert(extra.find("serial="), "color=green\n");
  CHECK_THROWS_AS(certificate_from_text(extra), ParseError);

  // Broken base64 in the key.
  std::string bad_b64 = good;
  const auto key_at = bad_b64.find("public_key=");
  bad_b64.replace(key_at, std::string("public_key=U").size(), "public_key=!");
  CHECK_THROWS_AS(certificate_from_text(bad_b64), ParseError);

  // Trailing garbage outside the markers.
  CHECK_THROWS_AS(certificate_from_text(good + "stray\n"), ParseError);
}

TEST_CASE("chain validation accepts the good chain") {
  const CertificateChain chain = frozen_chain();
  auto result = validate_chain(chain, 1760000000);
  REQUIRE(result.ok());
  CHECK(result.value().subject == "RCMS Test Root CA");

  // Single self-signed certificate is a valid chain of one.
  auto single = validate_chain({frozen_root()}, 1760000000);
  REQUIRE(single.ok());

  // Validity bounds are inclusive.
  CHECK(validate_chain(chain, 1700000000).ok());
  CHECK(validate_chain(chain, 2000000000).ok());
}

TEST_CASE("chain validation faults carry the failing index") {
  const CertificateChain good = frozen_chain();

  auto empty = validate_chain({}, 1760000000);
  REQUIRE_FALSE(empty.ok());
  CHECK(empty.error() == ChainError{ChainFault::EmptyChain, 0});

  CertificateChain broken = good;
  broken[0].issuer = "Nobody";
  auto r1 = validate_chain(broken, 1760000000);
  REQUIRE_FALSE(r1.ok());
  CHECK(r1.error() == ChainError{ChainFault::BrokenLink, 0});

  CertificateChain not_self = good;
  not_self[2].issuer = "Somebody Else";
  auto r2 = validate_chain(not_self, 1760000000);
  REQUIRE_FALSE(r2.ok());
  CHECK(r2.error() == ChainError{ChainFault::BrokenLink, 2});

  CertificateChain no_ca = good;
  no_ca[1].is_ca = false;
  // Re-signing keeps the signature valid so the CA check is what trips.
  no_ca[1] = sign_certificate(no_ca[1], test_key("RCMS-TEST-ROOT-KEY-1"));
  auto r3 = validate_chain(no_ca, 1760000000);
  REQUIRE_FALSE(r3.ok());
  CHECK(r3.error() == ChainError{ChainFault::NotCa, 1});

  CertificateChain bad_sig = good;
  bad_sig[1].signature[0] ^= 1;
  auto r4 = validate_chain(bad_sig, 1760000000);
  REQUIRE_FALSE(r4.ok());
  CHECK(r4.error() == ChainError{ChainFault::BadSignature, 1});

  auto r5 = validate_chain(frozen_chain(1800000000, 2000000000), 1760000000);
  REQUIRE_FALSE(r5.ok());
  CHECK(r5.error() == ChainError{ChainFault::NotYetValid, 0});

  auto r6 = validate_chain(frozen_chain(1700000000, 1750000000), 1760000000);
  REQUIRE_FALSE(r6.ok());
  CHECK(r6.error() == ChainError{ChainFault::Expired, 0});

  // Linkage is checked before validity: break both, linkage wins.
  CertificateChain both = frozen_chain(1700000000, 1750000000);
  both[0].issuer = "Nobody";
  auto r7 = validate_chain(both, 1760000000);
  REQUIRE_FALSE(r7.ok());
  CHECK(r7.error() == ChainError{ChainFault::BrokenLink, 0});
}

TEST_CASE("fault names are stable tokens") {
  CHECK(chain_fault_name(ChainFault::EmptyChain) == "empty-chain");
  CHECK(chain_fault_name(ChainFault::BrokenLink) == "broken-link");
  CHECK(chain_fault_name(ChainFault::NotCa) == "not-ca");
  CHECK(chain_fault_name(ChainFault::BadSignature) == "bad-signature");
  CHECK(chain_fault_name(ChainFault::NotYetValid) == "not-yet-valid");
  CHECK(chain_fault_name(ChainFault::Expired) == "expired");
}

TEST_CASE("chain files round trip") {
  testsupport::TempDir dir;
  const CertificateChain chain = frozen_chain();
  const auto path = dir.file("chain.crt");
  write_chain_file(path, chain);
  CHECK(load_chain_file(path) == chain);

  write_chain_file(dir.file("root.crt"), {chain[2]});
  CHECK(load_certificate_file(dir.file("root.crt")) == chain[2]);
  // A multi-certificate file is not a certificate file.
  CHECK_THROWS_AS(load_certificate_file(path), ParseError);

  std::ofstream(dir.file("bad.crt")) << "garbage\n";
  CHECK_THROWS_AS(load_chain_file(dir.file("bad.crt")), ParseError);
}
