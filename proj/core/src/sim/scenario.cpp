#include "rcms/sim/scenario.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <sstream>

#include "../fsutil.hpp"
#include "rcms/crypto.hpp"

namespace rcms::sim {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw ScenarioError(what); }

void check_keys(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) {
      if (key == a) {
        ok = true;
        break;
      }
    }
    if (!ok) fail(std::string("unknown key '") + key + "' in " + where);
  }
}

template <typename T>
T get_as(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key)) fail(std::string("missing key '") + key + "' in " + where);
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("bad value for '") + key + "' in " + where);
  }
}

template <typename T>
T get_or(const json& obj, const char* key, const char* where, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    fail(std::string("bad value for '") + key + "' in " + where);
  }
}

std::vector<InnerMethod> parse_methods(const json& arr, const char* where) {
  if (!arr.is_array() || arr.empty()) fail(std::string("expected method list in ") + where);
  std::vector<InnerMethod> out;
  for (const json& item : arr) {
    if (!item.is_string()) fail(std::string("bad method entry in ") + where);
    auto m = method_from_name(item.get<std::string>());
    if (!m) fail("unknown inner method '" + item.get<std::string>() + "' in " + where);
    out.push_back(*m);
  }
  return out;
}

std::vector<OuterMethod> parse_outer(const json& arr, const char* where) {
  if (!arr.is_array() || arr.empty()) fail(std::string("expected method list in ") + where);
  std::vector<OuterMethod> out;
  for (const json& item : arr) {
    if (!item.is_string()) fail(std::string("bad method entry in ") + where);
    auto m = outer_method_from_name(item.get<std::string>());
    if (!m) fail("unknown outer method '" + item.get<std::string>() + "' in " + where);
    out.push_back(*m);
  }
  return out;
}

Ssid parse_ssid(const json& value) {
  if (value.is_string()) return Ssid::from_string(value.get<std::string>());
  if (value.is_object()) {
    check_keys(value, "ssid", {"b64"});
    auto bytes = crypto::base64_decode(get_as<std::string>(value, "b64", "ssid"));
    if (!bytes) fail("ssid.b64 is not base64");
    return Ssid{bytes_to_string(*bytes)};
  }
  fail("ssid must be a string or {\"b64\": ...}");
}

VictimSpec parse_victim(const json& obj) {
  if (!obj.is_object()) fail("victim must be an object");
  check_keys(obj, "victim",
             {"id", "username", "password", "eap_tls", "client_chain", "client_key",
              "inner_policy", "pinned", "pinned_cert", "store_credentials", "code_entry",
              "retry"});
  VictimSpec v;
  v.id = get_or<std::string>(obj, "id", "victim", v.id);
  v.username = get_as<std::string>(obj, "username", "victim");
  v.password = get_as<std::string>(obj, "password", "victim");
  v.eap_tls = get_or<bool>(obj, "eap_tls", "victim", false);
  if (obj.contains("client_chain")) {
    v.client_chain_path = get_as<std::string>(obj, "client_chain", "victim");
  }
  if (obj.contains("client_key")) {
    v.client_key_path = get_as<std::string>(obj, "client_key", "victim");
  }
  if (obj.contains("inner_policy")) {
    auto list = parse_methods(obj.at("inner_policy"), "victim.inner_policy");
    v.inner_policy = std::set<InnerMethod>(list.begin(), list.end());
  }
  v.pinned = get_or<bool>(obj, "pinned", "victim", false);
  if (obj.contains("pinned_cert")) {
    v.pinned_cert_path = get_as<std::string>(obj, "pinned_cert", "victim");
  }
  v.store_credentials = get_or<bool>(obj, "store_credentials", "victim", false);
  v.code_entry = get_or<std::string>(obj, "code_entry", "victim", v.code_entry);
  if (obj.contains("retry")) {
    const json& r = obj.at("retry");
    if (!r.is_object()) fail("victim.retry must be an object");
    check_keys(r, "victim.retry", {"username", "password"});
    v.retry_credentials = {get_as<std::string>(r, "username", "victim.retry"),
                           get_as<std::string>(r, "password", "victim.retry")};
  }
  if (v.eap_tls && (!v.client_chain_path || !v.client_key_path)) {
    fail("eap_tls victim needs client_chain and client_key");
  }
  if (v.username.empty() || (v.password.empty() && !v.eap_tls)) {
    fail("victim needs a username and password");
  }
  return v;
}

LegitimateSpec parse_legitimate(const json& obj) {
  if (!obj.is_object()) fail("legitimate must be an object");
  check_keys(obj, "legitimate",
             {"present", "ap_id", "as_id", "rssi", "chain", "key", "outer_order", "method_order",
              "users", "client_ca"});
  LegitimateSpec l;
  l.present = get_or<bool>(obj, "present", "legitimate", true);
  l.ap_id = get_or<std::string>(obj, "ap_id", "legitimate", l.ap_id);
  l.as_id = get_or<std::string>(obj, "as_id", "legitimate", l.as_id);
  l.rssi = get_or<int>(obj, "rssi", "legitimate", l.rssi);
  l.chain_path = get_as<std::string>(obj, "chain", "legitimate");
  l.key_path = get_as<std::string>(obj, "key", "legitimate");
  if (obj.contains("outer_order")) {
    l.outer_order = parse_outer(obj.at("outer_order"), "legitimate.outer_order");
  }
  if (obj.contains("method_order")) {
    l.method_order = parse_methods(obj.at("method_order"), "legitimate.method_order");
  }
  if (obj.contains("users")) {
    const json& users = obj.at("users");
    if (!users.is_object()) fail("legitimate.users must be an object");
    for (const auto& [name, pw] : users.items()) {
      if (!pw.is_string()) fail("legitimate.users values must be strings");
      l.users[name] = pw.get<std::string>();
    }
  }
  if (obj.contains("client_ca")) {
    l.client_ca_path = get_as<std::string>(obj, "client_ca", "legitimate");
  }
  return l;
}

AdversarySpec parse_adversary(const json& obj) {
  if (!obj.is_object()) fail("adversary must be an object");
  check_keys(obj, "adversary",
             {"present", "id", "rssi", "goal", "strategy", "stolen_chain", "open_network",
              "outer_order", "method_order", "relay_via_legitimate", "shared_password",
              "wordlist"});
  AdversarySpec a;
  a.present = get_or<bool>(obj, "present", "adversary", true);
  a.id = get_or<std::string>(obj, "id", "adversary", a.id);
  a.rssi = get_or<int>(obj, "rssi", "adversary", a.rssi);
  a.goal = get_as<std::string>(obj, "goal", "adversary");
  if (a.goal != "credential-theft" && a.goal != "mitm") {
    fail("adversary.goal must be credential-theft or mitm");
  }
  if (obj.contains("strategy")) {
    auto s = attack::forge_strategy_from_name(get_as<std::string>(obj, "strategy", "adversary"));
    if (!s) fail("unknown adversary.strategy");
    a.strategy = s;
  }
  if (obj.contains("stolen_chain")) {
    a.stolen_chain_path = get_as<std::string>(obj, "stolen_chain", "adversary");
  }
  a.open_network = get_or<bool>(obj, "open_network", "adversary", false);
  const int modes = int(a.strategy.has_value()) + int(a.stolen_chain_path.has_value()) +
                    int(a.open_network);
  if (modes != 1) {
    fail("adversary needs exactly one of strategy, stolen_chain, open_network");
  }
  if (obj.contains("outer_order")) {
    a.outer_order = parse_outer(obj.at("outer_order"), "adversary.outer_order");
  }
  if (obj.contains("method_order")) {
    a.method_order = parse_methods(obj.at("method_order"), "adversary.method_order");
  }
  a.relay_via_legitimate = get_or<bool>(obj, "relay_via_legitimate", "adversary", false);
  if (obj.contains("shared_password")) {
    a.shared_password = get_as<std::string>(obj, "shared_password", "adversary");
  }
  if (obj.contains("wordlist")) {
    a.wordlist_path = get_as<std::string>(obj, "wordlist", "adversary");
  }
  return a;
}

}  // namespace

Scenario scenario_from_json(std::string_view text, std::filesystem::path base_dir) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) fail("scenario is not a JSON object");
  check_keys(doc, "scenario",
             {"name", "seed", "now", "ssid", "rcms", "expected", "victim", "legitimate",
              "adversary"});
  Scenario sc;
  sc.base_dir = std::move(base_dir);
  sc.name = get_as<std::string>(doc, "name", "scenario");
  if (sc.name.empty()) fail("scenario.name must not be empty");
  sc.seed = get_as<std::uint64_t>(doc, "seed", "scenario");
  sc.now = get_as<UtcTime>(doc, "now", "scenario");
  if (!doc.contains("ssid")) fail("missing key 'ssid' in scenario");
  sc.ssid = parse_ssid(doc.at("ssid"));
  if (sc.ssid.octets.empty()) fail("ssid must not be empty");
  sc.rcms = get_as<bool>(doc, "rcms", "scenario");
  sc.expected = get_as<std::string>(doc, "expected", "scenario");
  if (!doc.contains("victim")) fail("missing key 'victim' in scenario");
  sc.victim = parse_victim(doc.at("victim"));
  if (doc.contains("legitimate")) sc.legitimate = parse_legitimate(doc.at("legitimate"));
  if (doc.contains("adversary")) sc.adversary = parse_adversary(doc.at("adversary"));

  if (!sc.legitimate && !sc.adversary) fail("scenario needs a legitimate or adversary network");
  if (sc.adversary && sc.adversary->relay_via_legitimate && !sc.legitimate) {
    fail("relay_via_legitimate needs a legitimate network");
  }
  if (sc.victim.pinned && !sc.victim.pinned_cert_path && !sc.legitimate) {
    fail("pinned victim needs a legitimate chain or pinned_cert");
  }
  if (sc.victim.pinned && !sc.rcms) fail("pinned victim only makes sense with rcms true");
  return sc;
}

Scenario load_scenario_file(const std::filesystem::path& path) {
  const std::string content = fsutil::read_file_or_throw(path);
  try {
    return scenario_from_json(content, path.parent_path());
  } catch (const ScenarioError& e) {
    throw ScenarioError(path.string() + ": " + e.what());
  }
}

bool MatrixReport::all_match() const {
  for (const ReportRow& row : rows) {
    if (!row.match()) return false;
  }
  return !rows.empty();
}

ReportRow report_row(const ScenarioResult& result) {
  ReportRow row;
  row.scenario = result.name;
  row.rcms = result.rcms;
  row.expected = result.expected;
  row.observed = result.observed;
  row.victim_outcome = result.victim_outcome.token();
  row.leakage_to_adversary = result.leakage.count_reaching(result.adversary_actors);
  if (result.attack) {
    std::ostringstream details;
    details << "goal=" << result.attack->goal << " captured=" << result.attack->captured_count;
    if (result.attack->recovered_password) {
      details << " recovered=" << *result.attack->recovered_password;
    }
    if (result.attack->relayed) details << " relayed";
    row.details = details.str();
  }
  return row;
}

std::string report_to_json(const MatrixReport& report) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ReportRow& row : report.rows) {
    rows.push_back({{"scenario", row.scenario},
                    {"rcms", row.rcms},
                    {"expected", row.expected},
                    {"observed", row.observed},
                    {"victim_outcome", row.victim_outcome},
                    {"leakage_to_adversary", row.leakage_to_adversary},
                    {"details", row.details},
                    {"match", row.match()}});
  }
  nlohmann::json doc{{"schema_version", 1},
                     {"seed", report.seed},
                     {"seed_overridden", report.seed_overridden},
                     {"rows", std::move(rows)},
                     {"all_match", report.all_match()}};
  return doc.dump(2) + "\n";
}

std::string report_to_table(const MatrixReport& report) {
  std::size_t name_w = 8;
  for (const ReportRow& row : report.rows) name_w = std::max(name_w, row.scenario.size());
  std::ostringstream out;
  out << std::left;
  out.width(static_cast<std::streamsize>(name_w + 2));
  out << "scenario";
  out << "rcms  result  expected / observed\n";
  for (const ReportRow& row : report.rows) {
    out.width(static_cast<std::streamsize>(name_w + 2));
    out << row.scenario;
    out << (row.rcms ? "on    " : "off   ");
    out << (row.match() ? "ok      " : "FAIL    ");
    out << row.expected;
    if (!row.match()) out << " / " << row.observed;
    out << "\n";
  }
  out << (report.all_match() ? "all scenarios match\n" : "MISMATCHES PRESENT\n");
  return out.str();
}

}  // namespace rcms::sim
