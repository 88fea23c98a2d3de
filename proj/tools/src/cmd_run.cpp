#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "commands.hpp"
#include "rcms/sim/scenario.hpp"

namespace rcms::cli {

namespace {

namespace fs = std::filesystem;

struct RunArgs {
  std::string matrix_dir;
  std::string store_dir;
  std::optional<std::uint64_t> seed;
  std::string report_path;
  std::string transcripts_dir;
  bool json_output = false;
};

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("short write: " + path.string());
}

int run_matrix(const RunArgs& args) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(args.matrix_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw std::runtime_error("no scenario files (*.json) in " + args.matrix_dir);
  }

  sim::MatrixReport report;
  report.seed_overridden = args.seed.has_value();
  report.seed = args.seed.value_or(0);

  for (const fs::path& file : files) {
    sim::Scenario scenario = sim::load_scenario_file(file);
    sim::RunOptions options;
    options.seed_override = args.seed;
    if (!args.store_dir.empty()) {
      options.store_dir = fs::path(args.store_dir) / scenario.name;
    }
    sim::ScenarioResult result = sim::run_scenario(scenario, options);
    report.rows.push_back(sim::report_row(result));
    if (!args.transcripts_dir.empty()) {
      write_text(fs::path(args.transcripts_dir) / (scenario.name + ".jsonl"),
                 result.transcript.to_jsonl());
    }
  }

  std::cout << (args.json_output ? sim::report_to_json(report) : sim::report_to_table(report));
  if (!args.report_path.empty()) {
    write_text(args.report_path, sim::report_to_json(report));
  }
  return report.all_match() ? kExitOk : kExitMismatch;
}

}  // namespace

void register_run_scenarios(CLI::App& app, int& exit_code) {
  auto args = std::make_shared<RunArgs>();
  CLI::App* cmd = app.add_subcommand(
      "run-scenarios", "run a directory of attack scenarios and compare against expectations");
  cmd->add_option("--matrix", args->matrix_dir, "directory of scenario .json files")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd->add_option("--store", args->store_dir,
                  "keep per-scenario trust/credential stores under this directory");
  cmd->add_option("--seed", args->seed, "override every scenario's RNG seed");
  cmd->add_option("--report", args->report_path, "write a JSON report here");
  cmd->add_option("--transcripts", args->transcripts_dir,
                  "write per-scenario message transcripts (.jsonl) here");
  cmd->add_flag("--json", args->json_output, "print the JSON report instead of the table");
  cmd->callback([args, &exit_code] { exit_code = run_matrix(*args); });
}

}  // namespace rcms::cli
