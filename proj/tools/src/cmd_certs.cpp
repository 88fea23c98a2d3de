#include <ctime>
#include <iostream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rcms/certmodel.hpp"
#include "rcms/crypto.hpp"
#include "rcms/keys.hpp"
#include "rcms/rng.hpp"

namespace rcms::cli {

namespace {

struct CertArgs {
  std::string name;
  std::string key_seed;
  std::string serial;
  std::int64_t not_before = 0;
  std::int64_t not_after = 0;
  std::string out_cert;
  std::string out_key;
  std::string ca_cert;
  std::string ca_key;
  bool is_ca = false;
};

void add_shared_options(CLI::App* cmd, CertArgs& args) {
  cmd->add_option("--name", args.name, "subject name")->required();
  cmd->add_option("--key-seed", args.key_seed,
                  "derive the keypair deterministically from this label")
      ->required();
  cmd->add_option("--serial", args.serial, "serial (default: derived from the key seed)");
  cmd->add_option("--not-before", args.not_before, "validity start, UTC seconds");
  cmd->add_option("--not-after", args.not_after, "validity end, UTC seconds");
  cmd->add_option("--out-cert", args.out_cert, "certificate output path")->required();
  cmd->add_option("--out-key", args.out_key, "keypair output path")->required();
}

void fill_defaults(CertArgs& args, Rng& rng) {
  if (args.serial.empty()) args.serial = crypto::hex_encode(rng.bytes(4));
  if (args.not_before == 0 && args.not_after == 0) {
    args.not_before = static_cast<std::int64_t>(std::time(nullptr)) - 86400;
    args.not_after = args.not_before + 5LL * 365 * 86400;
  }
}

void report_written(const Certificate& cert, const CertArgs& args) {
  std::cout << "subject:     " << cert.subject << "\n"
            << "serial:      " << cert.serial << "\n"
            << "fingerprint: " << fingerprint(cert).hex << "\n"
            << "certificate: " << args.out_cert << "\n"
            << "keypair:     " << args.out_key << "\n";
}

void run_make_ca(CertArgs& args) {
  Rng rng = Rng::from_label("keypair:" + args.key_seed);
  KeyPair key = generate_keypair(rng);
  fill_defaults(args, rng);

  Certificate tbs;
  tbs.serial = args.serial;
  tbs.subject = args.name;
  tbs.issuer = args.name;
  tbs.public_key = key.public_key;
  tbs.not_before = args.not_before;
  tbs.not_after = args.not_after;
  tbs.is_ca = true;
  const Certificate cert = sign_certificate(std::move(tbs), key);

  write_chain_file(args.out_cert, {cert});
  write_keypair_file(args.out_key, key);
  report_written(cert, args);
}

void run_issue(CertArgs& args) {
  const Certificate ca = load_certificate_file(args.ca_cert);
  const KeyPair ca_keypair = load_keypair_file(args.ca_key);
  if (ca.public_key != ca_keypair.public_key) {
    throw std::runtime_error("--ca-key does not match --ca-cert");
  }
  if (!ca.is_ca) throw std::runtime_error("--ca-cert is not a CA certificate");

  Rng rng = Rng::from_label("keypair:" + args.key_seed);
  KeyPair key = generate_keypair(rng);
  fill_defaults(args, rng);

  Certificate tbs;
  tbs.serial = args.serial;
  tbs.subject = args.name;
  tbs.issuer = ca.subject;
  tbs.public_key = key.public_key;
  tbs.not_before = args.not_before;
  tbs.not_after = args.not_after;
  tbs.is_ca = args.is_ca;
  const Certificate cert = sign_certificate(std::move(tbs), ca_keypair);

  write_chain_file(args.out_cert, {cert});
  write_keypair_file(args.out_key, key);
  report_written(cert, args);
}

}  // namespace

void register_cert_commands(CLI::App& app, int& exit_code) {
  auto make_args = std::make_shared<CertArgs>();
  CLI::App* make = app.add_subcommand("make-ca", "create a self-signed CA certificate");
  add_shared_options(make, *make_args);
  make->callback([make_args, &exit_code] {
    run_make_ca(*make_args);
    exit_code = kExitOk;
  });

  auto issue_args = std::make_shared<CertArgs>();
  CLI::App* issue = app.add_subcommand("issue", "issue a certificate from a CA");
  add_shared_options(issue, *issue_args);
  issue->add_option("--ca-cert", issue_args->ca_cert, "issuing CA certificate")->required();
  issue->add_option("--ca-key", issue_args->ca_key, "issuing CA keypair")->required();
  issue->add_flag("--ca", issue_args->is_ca, "mark the issued certificate as a CA");
  issue->callback([issue_args, &exit_code] {
    run_issue(*issue_args);
    exit_code = kExitOk;
  });
}

}  // namespace rcms::cli
