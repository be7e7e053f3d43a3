#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "degpar/config.hpp"

namespace degpar::cli {

enum ExitCode : int { Ok = 0, ConfigError = 2, NumericalFailure = 3, AuditFailure = 4 };

struct Options {
    std::string config_path;          ///< empty: schema defaults only
    std::string out_dir = ".";
    unsigned threads = 1;
    std::vector<std::string> overrides;  ///< KEY=VALUE
};

const std::vector<std::string>& subcommands();

/// Every key any subcommand understands.
const Schema& schema();

/// Runs one subcommand; reports go to `out`, diagnostics and timing to `err`.
/// Exceptions are mapped to exit codes.
int run(const std::string& subcommand, const Options& opts, std::ostream& out, std::ostream& err);

}  // namespace degpar::cli
