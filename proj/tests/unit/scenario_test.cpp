#include <fstream>

#include "doctest.h"
#include "rcms/errors.hpp"
#include "rcms/sim/scenario.hpp"
#include "tempdir.hpp"

using namespace rcms;
using namespace rcms::sim;

namespace {

// A minimal well-formed scenario the error cases below mutate.
const char* kBase = R"({
  "name": "demo",
  "seed": 7,
  "now": 1760000000,
  "ssid": "CampusNet",
  "rcms": true,
  "expected": "success-8021x",
  "victim": {"username": "jsmith", "password": "pw"},
  "legitimate": {"chain": "pki/chain.crt", "key": "pki/server.key"}
})";

Scenario parse(std::string_view text) { return scenario_from_json(text, "/tmp/scenarios"); }

}  // namespace

TEST_CASE("a full scenario parses with spec fields and defaults") {
  const Scenario sc = parse(R"({
    "name": "evil-pap",
    "seed": 42,
    "now": 1760000000,
    "ssid": "CampusNet",
    "rcms": false,
    "expected": "credentials-stolen-plaintext",
    "victim": {
      "username": "jsmith",
      "password": "hunter2",
      "inner_policy": ["pap", "md5-challenge"],
      "code_entry": "wrong",
      "retry": {"username": "jsmith", "password": "hunter2"}
    },
    "legitimate": {
      "ap_id": "ap-1",
      "as_id": "as-1",
      "rssi": -60,
      "chain": "pki/chain.crt",
      "key": "pki/server.key",
      "users": {"jsmith": "hunter2"},
      "outer_order": ["tls", "ttls"],
      "method_order": ["mutual-challenge"]
    },
    "adversary": {
      "id": "twin",
      "rssi": -30,
      "goal": "credential-theft",
      "strategy": "self-signed",
      "method_order": ["pap"],
      "wordlist": "wordlists/common.txt"
    }
  })");

  CHECK(sc.name == "evil-pap");
  CHECK(sc.seed == 42);
  CHECK(sc.now == 1760000000);
  CHECK(sc.ssid.display() == "CampusNet");
  CHECK_FALSE(sc.rcms);
  CHECK(sc.expected == "credentials-stolen-plaintext");
  CHECK(sc.base_dir == "/tmp/scenarios");

  CHECK(sc.victim.id == "victim");
  CHECK(sc.victim.username == "jsmith");
  CHECK(sc.victim.inner_policy ==
        std::set<InnerMethod>{InnerMethod::Pap, InnerMethod::Md5Challenge});
  CHECK(sc.victim.code_entry == "wrong");
  REQUIRE(sc.victim.retry_credentials.has_value());
  CHECK(sc.victim.retry_credentials->first == "jsmith");
  CHECK_FALSE(sc.victim.pinned);

  REQUIRE(sc.legitimate.has_value());
  CHECK(sc.legitimate->ap_id == "ap-1");
  CHECK(sc.legitimate->rssi == -60);
  CHECK(sc.legitimate->outer_order ==
        std::vector<OuterMethod>{OuterMethod::Tls, OuterMethod::Ttls});
  CHECK(sc.legitimate->method_order == std::vector<InnerMethod>{InnerMethod::MutualChallenge});
  CHECK(sc.legitimate->users.at("jsmith") == "hunter2");

  REQUIRE(sc.adversary.has_value());
  CHECK(sc.adversary->id == "twin");
  CHECK(sc.adversary->rssi == -30);
  CHECK(sc.adversary->strategy == attack::ForgeStrategy::SelfSigned);
  CHECK(sc.adversary->method_order == std::vector<InnerMethod>{InnerMethod::Pap});
  CHECK(sc.adversary->wordlist_path == "wordlists/common.txt");
  CHECK_FALSE(sc.adversary->relay_via_legitimate);
}

TEST_CASE("defaults fill what the file leaves out") {
  const Scenario sc = parse(kBase);
  CHECK(sc.victim.inner_policy.size() == 3);
  CHECK(sc.legitimate->rssi == -55);
  CHECK(sc.legitimate->ap_id == "uni-ap");
  CHECK(sc.legitimate->outer_order == std::vector<OuterMethod>{OuterMethod::Ttls});
  CHECK(sc.legitimate->method_order ==
        std::vector<InnerMethod>{InnerMethod::MutualChallenge, InnerMethod::Md5Challenge,
                                 InnerMethod::Pap});
  CHECK(sc.victim.code_entry == "legit-slip");
  CHECK_FALSE(sc.adversary.has_value());
}

TEST_CASE("ssid accepts a base64 escape for non-text names") {
  const Scenario sc = parse(R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": {"b64": "3q0A7w=="},
    "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p"},
    "legitimate": {"chain": "c", "key": "k"}
  })");
  CHECK(sc.ssid.octets == std::string("\xde\xad\x00\xef", 4));
  CHECK(sc.ssid.display() == "base64:3q0A7w==");
}

TEST_CASE("parser rejects malformed scenarios") {
  auto mutate = [](std::string from, std::string to) {
    std::string text = kBase;
    const auto at = text.find(from);
    REQUIRE(at != std::string::npos);
    text.replace(at, from.size(), to);
    return text;
  };

  CHECK_THROWS_AS(parse("not json"), ScenarioError);
  CHECK_THROWS_AS(parse("[1,2]"), ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"name\"", "\"nmae\"")), ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"name\": \"demo\",", "\"name\": \"\",")), ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"seed\": 7", "\"seed\": \"7\"")), ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"ssid\": \"CampusNet\"", "\"ssid\": \"\"")), ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"username\": \"jsmith\"", "\"username\": \"\"")), ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"victim\"", "\"victum\"")), ScenarioError);

  // Unknown keys anywhere are fatal, not ignored.
  CHECK_THROWS_AS(parse(mutate("\"rcms\": true", "\"rcms\": true, \"color\": 1")), ScenarioError);
  CHECK_THROWS_AS(
      parse(mutate("\"username\": \"jsmith\"", "\"username\": \"jsmith\", \"x\": 1")),
      ScenarioError);

  // Bad method lists.
  CHECK_THROWS_AS(parse(mutate("\"victim\": {\"username\": \"jsmith\", \"password\": \"pw\"}",
                               "\"victim\": {\"username\": \"jsmith\", \"password\": \"pw\", "
                               "\"inner_policy\": []}")),
                  ScenarioError);
  CHECK_THROWS_AS(parse(mutate("\"victim\": {\"username\": \"jsmith\", \"password\": \"pw\"}",
                               "\"victim\": {\"username\": \"jsmith\", \"password\": \"pw\", "
                               "\"inner_policy\": [\"chap\"]}")),
                  ScenarioError);
}

TEST_CASE("parser rejects inconsistent combinations") {
  // Without any network there is nothing to simulate.
  CHECK_THROWS_AS(parse(R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p"}
  })"),
                  ScenarioError);

  // Pinning belongs to the pairing flow.
  CHECK_THROWS_AS(parse(R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p", "pinned": true},
    "legitimate": {"chain": "c", "key": "k"}
  })"),
                  ScenarioError);

  // An adversary picks exactly one way to present itself.
  const char* both = R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p"},
    "legitimate": {"chain": "c", "key": "k"},
    "adversary": {"goal": "credential-theft", "strategy": "self-signed", "stolen_chain": "c"}
  })";
  CHECK_THROWS_AS(parse(both), ScenarioError);
  const char* neither = R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p"},
    "legitimate": {"chain": "c", "key": "k"},
    "adversary": {"goal": "credential-theft"}
  })";
  CHECK_THROWS_AS(parse(neither), ScenarioError);

  // Relaying needs somewhere to relay to.
  CHECK_THROWS_AS(parse(R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p"},
    "adversary": {"goal": "mitm", "strategy": "self-signed", "relay_via_legitimate": true}
  })"),
                  ScenarioError);

  CHECK_THROWS_AS(parse(R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "p"},
    "legitimate": {"chain": "c", "key": "k"},
    "adversary": {"goal": "world-domination", "strategy": "self-signed"}
  })"),
                  ScenarioError);

  // Certificate-based client auth needs both halves of the identity.
  CHECK_THROWS_AS(parse(R"({
    "name": "demo", "seed": 1, "now": 5, "ssid": "Net", "rcms": false, "expected": "x",
    "victim": {"username": "u", "password": "", "eap_tls": true},
    "legitimate": {"chain": "c", "key": "k"}
  })"),
                  ScenarioError);
}

TEST_CASE("scenario files load relative to their directory") {
  testsupport::TempDir dir;
  const auto path = dir.file("demo.json");
  std::ofstream(path) << kBase;
  const Scenario sc = load_scenario_file(path);
  CHECK(sc.name == "demo");
  CHECK(sc.base_dir == dir.path());

  CHECK_THROWS_AS(load_scenario_file(dir.file("missing.json")), StorageError);

  // Errors carry the file name for usable CLI diagnostics.
  std::ofstream(dir.file("bad.json")) << "{}";
  try {
    load_scenario_file(dir.file("bad.json"));
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(std::string(e.what()).find("bad.json") != std::string::npos);
  }
}

TEST_CASE("report rows summarize results") {
  ScenarioResult result;
  result.name = "evil-pap";
  result.rcms = true;
  result.expected = "attack-blocked";
  result.observed = "attack-blocked";
  result.victim_outcome = AuthOutcome::rejected(RejectReason::CodeMismatch);
  result.adversary_actors = {"evil"};
  AttackSummary attack;
  attack.goal = "credential-theft";
  attack.token = "attack-blocked";
  attack.captured_count = 2;
  attack.recovered_password = "hunter2";
  attack.relayed = true;
  result.attack = attack;

  const ReportRow row = report_row(result);
  CHECK(row.scenario == "evil-pap");
  CHECK(row.rcms);
  CHECK(row.match());
  CHECK(row.victim_outcome == "rejected-code-mismatch");
  CHECK(row.leakage_to_adversary == 0);
  CHECK(row.details == "goal=credential-theft captured=2 recovered=hunter2 relayed");
}

TEST_CASE("matrix reports render as a table and as machine-readable rows") {
  MatrixReport report;
  report.seed = 42;
  report.seed_overridden = true;

  CHECK_FALSE(report.all_match());  // empty is not a pass

  ReportRow good;
  good.scenario = "alpha";
  good.rcms = false;
  good.expected = good.observed = "success-8021x";
  good.victim_outcome = "success-8021x";
  ReportRow bad = good;
  bad.scenario = "beta";
  bad.observed = "mitm-established";
  report.rows = {good, bad};

  CHECK_FALSE(report.all_match());
  const std::string table = report_to_table(report);
  CHECK(table.find("alpha") != std::string::npos);
  CHECK(table.find("FAIL") != std::string::npos);
  CHECK(table.find("MISMATCHES PRESENT") != std::string::npos);

  report.rows = {good};
  CHECK(report.all_match());
  CHECK(report_to_table(report).find("all scenarios match") != std::string::npos);

  const std::string json_text = report_to_json(report);
  CHECK(json_text.find("\"schema_version\": 1") != std::string::npos);
  CHECK(json_text.find("\"seed\": 42") != std::string::npos);
  CHECK(json_text.find("\"all_match\": true") != std::string::npos);
  CHECK(json_text.find("\"scenario\": \"alpha\"") != std::string::npos);
}
