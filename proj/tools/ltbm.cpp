// Command-line front end over the C interface.

#include <CLI11.hpp>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "ltbm/ltbm.h"

namespace {

constexpr int kExitModuleError = 3;
constexpr int kExitUsage = 64;

// Failures before a command runs still produce one error record.
void error_record(std::ostream& os, const std::string& command, const char* code, const std::string& message) {
  std::string q;
  for (char c : message) {
    if (c == '"' || c == '\\') q += '\\';
    q += c == '\n' ? ' ' : c;
  }
  os << "record=error command=" << command << " code=" << code << " message=\"" << q << "\"\n";
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> commands = {"curvature",  "geodesic",  "separation",     "distortion-table",
                                             "check-ode",  "check-tbm", "counterexample", "lw-distance"};
  CLI::App app{"Timelike Brunn-Minkowski checks on weighted spacetimes"};
  std::string command, config, out;
  std::uint64_t seed = 0;
  int threads = 0;
  bool verbose = false;
  app.add_option("command", command, "command to run")->required()->check(CLI::IsMember(commands));
  app.add_option("--config", config, "run configuration (INI)")->required();
  app.add_option("--out", out, "record file; records go to stdout when absent");
  auto* seed_opt = app.add_option("--seed", seed, "overrides numerics.seed");
  auto* threads_opt = app.add_option("--threads", threads, "overrides numerics.threads")->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "echo progress to stderr");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) {
      std::cerr << "cannot write " << out << "\n";
      return kExitUsage;
    }
  }
  std::ostream& records = out.empty() ? std::cout : file;
  std::ostream& summary = out.empty() ? std::cerr : std::cout;

  ltbm_run* run = nullptr;
  ltbm_status st = ltbm_run_load(config.c_str(), &run);
  if (st != LTBM_OK) {
    error_record(records, command, ltbm_status_name(st), ltbm_last_error());
    std::cerr << "error: " << ltbm_status_name(st) << ": " << ltbm_last_error() << "\n";
    return kExitModuleError;
  }
  if (*seed_opt) ltbm_run_set_seed(run, seed);
  if (*threads_opt) ltbm_run_set_threads(run, threads);
  if (verbose) std::cerr << "running " << command << " on " << config << " (n=" << ltbm_run_dim(run) << ")\n";

  int exit_status = kExitModuleError;
  st = ltbm_run_command(run, command.c_str(), &exit_status);
  records << ltbm_run_records(run);
  summary << ltbm_run_summary(run);
  if (verbose && st != LTBM_OK) std::cerr << "status " << ltbm_status_name(st) << "\n";
  ltbm_run_free(run);
  records.flush();
  return exit_status;
}
