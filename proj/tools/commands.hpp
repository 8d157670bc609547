#pragma once

#include <functional>
#include <string>
#include <vector>

#include "output.hpp"

namespace cqa::cli {

struct FlagSpec {
    std::string name;  // long name without dashes
    std::string fallback;
    std::string help;
};

struct CommandResult {
    Table table;
    bool verified = true;  // false makes the process exit with 1
};

struct CommandSpec {
    std::string name;
    std::string summary;
    std::string columns;  // shown in --help
    std::vector<FlagSpec> flags;
    std::function<CommandResult(const RunConfig&)> run;
};

const std::vector<CommandSpec>& command_specs();
const CommandSpec& find_command(const std::string& name);

CommandResult run_command(const RunConfig& cfg);

// "start:stop:count" inclusive of both ends, a comma list, or one number.
// Must be strictly increasing.
std::vector<double> parse_grid(const std::string& text);

int default_jobs();

}  // namespace cqa::cli
