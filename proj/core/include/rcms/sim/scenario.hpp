#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "rcms/attack/adversary.hpp"
#include "rcms/sim/inner.hpp"
#include "rcms/sim/message.hpp"
#include "rcms/sim/tunnel.hpp"
#include "rcms/supplicant.hpp"

namespace rcms::sim {

struct VictimSpec {
  std::string id = "victim";
  std::string username;
  std::string password;
  bool eap_tls = false;
  std::optional<std::string> client_chain_path;
  std::optional<std::string> client_key_path;
  std::set<InnerMethod> inner_policy{InnerMethod::Pap, InnerMethod::Md5Challenge,
                                     InnerMethod::MutualChallenge};
  // Pairing state prepared before the run (an earlier association).
  bool pinned = false;
  std::optional<std::string> pinned_cert_path;  // pin this instead of the served root
  bool store_credentials = false;
  // What the scripted user types at a code prompt: "legit-slip" computes the
  // code from the victim password and the legitimate root, "wrong" types
  // garbage, "decline" cancels, "literal:XXXXXXXX" types exactly that.
  std::string code_entry = "legit-slip";
  std::optional<std::pair<std::string, std::string>> retry_credentials;
};

struct LegitimateSpec {
  bool present = true;
  std::string ap_id = "uni-ap";
  std::string as_id = "uni-as";
  int rssi = -55;
  std::string chain_path;
  std::string key_path;
  std::vector<OuterMethod> outer_order{OuterMethod::Ttls};
  std::vector<InnerMethod> method_order{InnerMethod::MutualChallenge, InnerMethod::Md5Challenge,
                                        InnerMethod::Pap};
  std::map<std::string, std::string> users;
  std::optional<std::string> client_ca_path;
};

struct AdversarySpec {
  bool present = true;
  std::string id = "evil";
  int rssi = -35;
  std::string goal = "credential-theft";  // or "mitm"
  // Exactly one of: a forge strategy, a replayed (stolen) certificate chain
  // without its keys, or an open twin network.
  std::optional<attack::ForgeStrategy> strategy;
  std::optional<std::string> stolen_chain_path;
  bool open_network = false;
  std::vector<OuterMethod> outer_order{OuterMethod::Ttls};
  std::vector<InnerMethod> method_order{InnerMethod::Pap, InnerMethod::Md5Challenge,
                                        InnerMethod::MutualChallenge};
  bool relay_via_legitimate = false;
  std::optional<std::string> shared_password;
  std::optional<std::string> wordlist_path;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  UtcTime now = 0;
  Ssid ssid;
  bool rcms = false;
  std::string expected;
  VictimSpec victim;
  std::optional<LegitimateSpec> legitimate;
  std::optional<AdversarySpec> adversary;
  std::filesystem::path base_dir;  // relative file references resolve here
};

class ScenarioError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Strict: unknown keys, wrong types or inconsistent combinations all throw
// ScenarioError.
Scenario scenario_from_json(std::string_view text, std::filesystem::path base_dir);
Scenario load_scenario_file(const std::filesystem::path& path);

struct AttackSummary {
  std::string goal;
  std::string token;
  std::size_t captured_count = 0;
  std::optional<std::string> recovered_password;
  bool relayed = false;
};

struct SessionKeyRecord {
  std::string actor;
  std::string peer;
  SessionKeys keys;
};

struct ScenarioResult {
  std::string name;
  bool rcms = false;
  std::string expected;
  std::string observed;
  AuthOutcome victim_outcome = AuthOutcome::canceled();
  std::optional<AttackSummary> attack;
  std::vector<SessionKeyRecord> session_keys;
  LeakageReport leakage;
  std::set<std::string> adversary_actors;
  Transcript transcript;

  bool matches_expected() const { return expected == observed; }
};

struct RunOptions {
  std::optional<std::uint64_t> seed_override;
  // Working directory for this run's trust/credentials stores. Empty means
  // a scratch directory under the system temp dir.
  std::filesystem::path store_dir;
  // When set, replaces the scripted user for pairing prompts (interactive
  // supplicant front end).
  UserInputProvider* interactive_user = nullptr;
};

ScenarioResult run_scenario(const Scenario& scenario, const RunOptions& options);

struct ReportRow {
  std::string scenario;
  bool rcms = false;
  std::string expected;
  std::string observed;
  std::string victim_outcome;
  std::size_t leakage_to_adversary = 0;
  std::string details;

  bool match() const { return expected == observed; }
};

struct MatrixReport {
  std::uint64_t seed = 0;
  bool seed_overridden = false;
  std::vector<ReportRow> rows;

  bool all_match() const;
};

ReportRow report_row(const ScenarioResult& result);
std::string report_to_json(const MatrixReport& report);
std::string report_to_table(const MatrixReport& report);

}  // namespace rcms::sim
