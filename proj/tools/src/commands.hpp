#pragma once

// Subcommands of the confdim tool. Each cmd_* validates the whole
// configuration before computing and returns the report in memory; files are
// written only by run() once a command has succeeded.

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"
#include "confdim/systems.hpp"

namespace confdim::cli {

enum ExitCode : int { kSuccess = 0, kConfigError = 2, kNonConvergence = 3, kIrregular = 4 };

struct Table {
  std::string name;  // file stem
  std::string csv;   // header line first
};

struct Report {
  std::string command;
  nlohmann::ordered_json body;  // deterministic for a given config
  std::vector<Table> tables;
  int exit_code = kSuccess;
};

// A family and, when a truncation level or explicit maps are given, a finite
// system built from it.
struct SystemSource {
  std::shared_ptr<const MapFamily> family;
  std::optional<SystemSpec> system;
  std::string kind;
};

SystemSource build_system(const Config& config);

Report cmd_bowen(const Config& config);
Report cmd_scan(const Config& config);
Report cmd_converge(const Config& config);
Report cmd_dimension(const Config& config);
Report cmd_gibbs(const Config& config);
Report cmd_gallery_list(const Config& config);

struct Invocation {
  std::string command;
  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::string format = "json";
  std::vector<std::string> overrides;  // KEY=VALUE
};

// Runs one command; writes the report to `out_dir` or, without one, to `out`.
// Returns the process exit code.
int run(const Invocation& invocation, std::ostream& out, std::ostream& err);

// Report file contents keyed by file name, as run() would write them.
std::vector<std::pair<std::string, std::string>> render(const Report& report, const std::string& format,
                                                       const std::string& timestamp);

}  // namespace confdim::cli
