#include <stdexcept>

#include "doctest.h"
#include "oracle.hpp"
#include "rcms/sim/inner.hpp"

using namespace rcms;
using namespace rcms::sim;

TEST_CASE("method names round trip") {
  for (InnerMethod m : {InnerMethod::Pap, InnerMethod::Md5Challenge, InnerMethod::MutualChallenge}) {
    const auto back = method_from_name(method_name(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(method_name(InnerMethod::Pap) == "pap");
  CHECK(method_name(InnerMethod::Md5Challenge) == "md5-challenge");
  CHECK(method_name(InnerMethod::MutualChallenge) == "mutual-challenge");
  CHECK(method_from_name("chap") == std::nullopt);
  CHECK(method_from_name("") == std::nullopt);
  CHECK(method_from_name("PAP") == std::nullopt);
}

TEST_CASE("outer method names round trip") {
  for (OuterMethod m : {OuterMethod::Tls, OuterMethod::Ttls}) {
    const auto back = outer_method_from_name(outer_method_name(m));
    REQUIRE(back.has_value());
    CHECK(*back == m);
  }
  CHECK(outer_method_name(OuterMethod::Tls) == "tls");
  CHECK(outer_method_name(OuterMethod::Ttls) == "ttls");
  CHECK(outer_method_from_name("peap") == std::nullopt);
}

TEST_CASE("method strength orders cleartext below challenge below mutual") {
  CHECK(method_strength(InnerMethod::Pap) == 0);
  CHECK(method_strength(InnerMethod::Md5Challenge) == 1);
  CHECK(method_strength(InnerMethod::MutualChallenge) == 2);
  CHECK(method_strength(InnerMethod::Pap) < method_strength(InnerMethod::Md5Challenge));
  CHECK(method_strength(InnerMethod::Md5Challenge) < method_strength(InnerMethod::MutualChallenge));
}

TEST_CASE("negotiation picks the first server offer the client allows") {
  const std::set<InnerMethod> all{InnerMethod::Pap, InnerMethod::Md5Challenge,
                                  InnerMethod::MutualChallenge};
  const std::set<InnerMethod> strong_only{InnerMethod::MutualChallenge};

  // The server's preference order wins, which is what a downgrading rogue
  // exploits against a permissive client.
  CHECK(negotiate_method({InnerMethod::Pap, InnerMethod::MutualChallenge}, all) == InnerMethod::Pap);
  CHECK(negotiate_method({InnerMethod::MutualChallenge, InnerMethod::Pap}, all) ==
        InnerMethod::MutualChallenge);
  CHECK(negotiate_method({InnerMethod::Pap, InnerMethod::MutualChallenge}, strong_only) ==
        InnerMethod::MutualChallenge);
  CHECK(negotiate_method({InnerMethod::Pap}, strong_only) == std::nullopt);
  CHECK(negotiate_method({}, all) == std::nullopt);
  CHECK(negotiate_method({InnerMethod::Pap}, {}) == std::nullopt);
}

TEST_CASE("challenge response matches the digest oracle") {
  const Bytes password = to_bytes("s3cret!");
  const Bytes challenge = to_bytes("sixteen-byte-chg");

  const Bytes got = md5_challenge_response(0x2a, password, challenge);
  std::string msg;
  msg.push_back(static_cast<char>(0x2a));
  msg += "s3cret!";
  msg += "sixteen-byte-chg";
  const auto want = oracle::md5(to_bytes(msg));
  CHECK(got == Bytes(want.begin(), want.end()));

  CHECK(md5_challenge_response(0x2b, password, challenge) != got);
  CHECK(md5_challenge_response(0x2a, to_bytes("s3cret?"), challenge) != got);
  CHECK(md5_challenge_response(0x2a, password, to_bytes("other-challenge0")) != got);
  CHECK_THROWS_AS(md5_challenge_response(0x2a, password, Bytes{}), std::invalid_argument);
}

TEST_CASE("mutual challenge pair matches the keyed-hash oracle") {
  const Bytes password = to_bytes("hunter2hunter2");
  const Bytes sc = to_bytes("server-challenge");
  const Bytes cc = to_bytes("client-challenge");

  const Bytes response = mutual_client_response(password, sc, cc, "alice");
  const auto want_resp = oracle::hmac_sha256(
      password, to_bytes("server-challengeclient-challengealice"));
  CHECK(response == Bytes(want_resp.begin(), want_resp.end()));

  const Bytes proof = mutual_server_auth(password, response, cc);
  std::string proof_msg = bytes_to_string(response);
  proof_msg += "client-challenge";
  proof_msg += "srv";
  const auto want_proof = oracle::hmac_sha256(password, to_bytes(proof_msg));
  CHECK(proof == Bytes(want_proof.begin(), want_proof.end()));

  // Only the password holder can produce either half.
  CHECK(mutual_client_response(to_bytes("wrong"), sc, cc, "alice") != response);
  CHECK(mutual_client_response(password, sc, cc, "bob") != response);
  CHECK(mutual_server_auth(to_bytes("wrong"), response, cc) != proof);

  CHECK_THROWS_AS(mutual_client_response(password, Bytes{}, cc, "alice"), std::invalid_argument);
  CHECK_THROWS_AS(mutual_client_response(password, sc, Bytes{}, "alice"), std::invalid_argument);
  CHECK_THROWS_AS(mutual_server_auth(password, Bytes{}, cc), std::invalid_argument);
  CHECK_THROWS_AS(mutual_server_auth(password, response, Bytes{}), std::invalid_argument);
}
