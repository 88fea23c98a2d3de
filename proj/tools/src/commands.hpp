#pragma once

namespace CLI {
class App;
}

namespace rcms::cli {

// Exit codes shared across subcommands. CLI11 owns 1 for usage errors.
inline constexpr int kExitOk = 0;
inline constexpr int kExitBadInput = 2;  // unreadable or invalid input files
inline constexpr int kExitMismatch = 3;  // scenario outcomes differ from expectations
inline constexpr int kExitCanceled = 4;
inline constexpr int kExitRejected = 5;

void register_cert_commands(CLI::App& app, int& exit_code);
void register_gen_code(CLI::App& app, int& exit_code);
void register_run_scenarios(CLI::App& app, int& exit_code);
void register_supplicant(CLI::App& app, int& exit_code);

}  // namespace rcms::cli
