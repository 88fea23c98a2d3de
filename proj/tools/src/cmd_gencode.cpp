#include <ctime>
#include <fstream>
#include <iostream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "json.hpp"
#include "rcms/certmodel.hpp"
#include "rcms/codegen.hpp"
#include "rcms/errors.hpp"

namespace rcms::cli {

namespace {

namespace fsutil_detail {
// Writing through std::ofstream here keeps the tool free of the library's
// internal helpers; the slip is not safety-critical state.
void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << text;
  if (!out.flush()) throw std::runtime_error("short write: " + path);
}
}  // namespace fsutil_detail

struct GenCodeArgs {
  std::string root_path;
  std::string password;
  bool random_creds = false;
  std::string username;
  std::string ssid;
  std::string out_path;
  std::int64_t now = 0;
};

// No lookalike characters; these get typed from paper.
constexpr std::string_view kCredAlphabet =
    "23456789abcdefghjkmnpqrstuvwxyzACDEFGHJKMNPQRSTUVWXYZ";

std::string random_token(std::size_t length) {
  std::random_device rd;
  std::string out;
  out.reserve(length);
  for (std::size_t i = 0; i < length; ++i) {
    out.push_back(kCredAlphabet[rd() % kCredAlphabet.size()]);
  }
  return out;
}

void run_gen_code(GenCodeArgs& args) {
  if (args.now == 0) args.now = static_cast<std::int64_t>(std::time(nullptr));

  Certificate root;
  try {
    root = load_certificate_file(args.root_path);
  } catch (const ParseError& e) {
    throw std::runtime_error(std::string("unreadable root certificate: ") + e.what());
  }
  if (!root.is_ca) throw std::runtime_error("root certificate is not a CA");
  if (!root.self_signed()) throw std::runtime_error("root certificate is not self-signed");
  if (!verify_certificate_signature(root, root.public_key)) {
    throw std::runtime_error("root certificate signature does not verify");
  }
  if (args.now < root.not_before || args.now > root.not_after) {
    throw std::runtime_error("root certificate is not valid at the requested time");
  }

  if (args.random_creds) {
    if (args.username.empty()) args.username = "user-" + random_token(4);
    args.password = random_token(14);
  }
  const VerificationCode code = compute_verification_code(
      Password::from_utf8(args.password), PublicKeyBytes{root.public_key});

  const Fingerprint fp = fingerprint(root);
  std::ostringstream slip;
  slip << "wireless enrollment slip\n";
  if (!args.ssid.empty()) slip << "  network (SSID):    " << args.ssid << "\n";
  slip << "  root certificate:  " << root.subject << "\n"
       << "  root key id:       " << fingerprint_abbrev(fp) << "\n"
       << "  issued:            " << args.now << " (UTC seconds)\n";
  if (!args.username.empty()) slip << "  username:          " << args.username << "\n";
  if (args.random_creds) slip << "  password:          " << args.password << "\n";
  slip << "  verification code: " << code.text() << "\n";

  std::cout << slip.str();

  if (!args.out_path.empty()) {
    fsutil_detail::write_text(args.out_path, slip.str());
    nlohmann::json sidecar{{"schema_version", 1},
                           {"subject", root.subject},
                           {"fingerprint", fp.hex},
                           {"issued", args.now},
                           {"verification_code", code.text()}};
    if (!args.ssid.empty()) sidecar["ssid"] = args.ssid;
    if (!args.username.empty()) sidecar["username"] = args.username;
    fsutil_detail::write_text(args.out_path + ".json", sidecar.dump(2) + "\n");
  }
}

}  // namespace

void register_gen_code(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<GenCodeArgs>();
  CLI::App* cmd = app.add_subcommand(
      "gen-code", "compute the verification code a user types when pairing with a network");
  cmd->add_option("--root", args->root_path, "root CA certificate the network will present")
      ->required();
  CLI::Option* pw = cmd->add_option("--password", args->password, "the user's password");
  CLI::Option* rand_flag =
      cmd->add_flag("--random-creds", args->random_creds, "mint a fresh username and password");
  pw->excludes(rand_flag);
  rand_flag->excludes(pw);
  cmd->add_option("--username", args->username, "username printed on the slip");
  cmd->add_option("--ssid", args->ssid, "network name printed on the slip");
  cmd->add_option("--out", args->out_path, "write the slip here (plus a .json sidecar)");
  cmd->add_option("--now", args->now, "validity check time, UTC seconds (default: wall clock)");
  cmd->callback([args, &exit_code] {
    if (args->password.empty() && !args->random_creds) {
      throw CLI::ValidationError("one of --password or --random-creds is required");
    }
    run_gen_code(*args);
    exit_code = kExitOk;
  });
}

}  // namespace rcms::cli
