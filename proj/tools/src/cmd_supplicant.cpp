#include <unistd.h>

#include <iostream>
#include <memory>
#include <string>

#include <termios.h>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rcms/sim/scenario.hpp"

namespace rcms::cli {

namespace {

std::optional<std::string> read_line(bool hide) {
  termios saved{};
  const bool tty = isatty(STDIN_FILENO) != 0;
  if (hide && tty) {
    tcgetattr(STDIN_FILENO, &saved);
    termios quiet = saved;
    quiet.c_lflag &= ~static_cast<tcflag_t>(ECHO);
    tcsetattr(STDIN_FILENO, TCSANOW, &quiet);
  }
  std::string line;
  const bool got = static_cast<bool>(std::getline(std::cin, line));
  if (hide && tty) {
    tcsetattr(STDIN_FILENO, TCSANOW, &saved);
    std::cout << "\n";
  }
  if (!got) return std::nullopt;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

class TerminalProvider : public UserInputProvider {
 public:
  std::optional<UserInput> request(const UserInputRequest& req) override {
    switch (req.situation) {
      case 1:
        std::cout << "new 802.1X network: enter your credentials and the verification code\n"
                     "from your enrollment slip (empty input cancels)\n";
        break;
      case 2:
        std::cout << "WARNING: this network's pinned root key CHANGED. Only continue with a\n"
                     "verification code from a slip you trust (empty input cancels)\n";
        break;
      case 3:
        std::cout << "this network's root key changed and no credentials are saved: enter\n"
                     "credentials and the verification code from your slip\n";
        break;
      case 4:
        std::cout << "enter your credentials for this network\n";
        break;
      case 5:
        std::cout << "the server rejected those credentials, try again\n";
        break;
      default:
        break;
    }

    UserInput input;
    if (req.wants_credentials) {
      std::cout << "username: " << std::flush;
      auto username = read_line(false);
      if (!username || username->empty()) return std::nullopt;
      std::cout << "password: " << std::flush;
      auto password = read_line(true);
      if (!password || password->empty()) return std::nullopt;
      input.username = *username;
      input.password = *password;
    }
    if (req.wants_code) {
      std::cout << "verification code: " << std::flush;
      auto code = read_line(false);
      if (!code || code->empty()) return std::nullopt;
      input.code = *code;
    }
    return input;
  }
};

struct SupplicantArgs {
  std::string scenario_path;
  std::string store_dir;
  std::optional<std::uint64_t> seed;
};

int run_supplicant(const SupplicantArgs& args) {
  sim::Scenario scenario = sim::load_scenario_file(args.scenario_path);
  TerminalProvider terminal;
  sim::RunOptions options;
  options.seed_override = args.seed;
  options.store_dir = args.store_dir;
  options.interactive_user = &terminal;

  const sim::ScenarioResult result = sim::run_scenario(scenario, options);
  std::cout << "outcome: " << result.victim_outcome.token() << "\n";
  if (result.attack) {
    std::cout << "adversary: " << result.attack->token << "\n";
  }

  switch (result.victim_outcome.kind) {
    case AuthOutcome::Kind::SuccessNon8021X:
    case AuthOutcome::Kind::Success8021X:
      return kExitOk;
    case AuthOutcome::Kind::Canceled:
      return kExitCanceled;
    case AuthOutcome::Kind::Rejected:
      return kExitRejected;
  }
  return kExitRejected;
}

}  // namespace

void register_supplicant(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<SupplicantArgs>();
  CLI::App* cmd = app.add_subcommand(
      "supplicant", "walk one scenario interactively, answering the pairing prompts yourself");
  cmd->add_option("--scenario", args->scenario_path, "scenario .json file")
      ->required()
      ->check(CLI::ExistingFile);
  cmd->add_option("--store", args->store_dir, "trust/credential store directory to use");
  cmd->add_option("--seed", args->seed, "override the scenario's RNG seed");
  cmd->callback([args, &exit_code] { exit_code = run_supplicant(*args); });
}

}  // namespace rcms::cli
