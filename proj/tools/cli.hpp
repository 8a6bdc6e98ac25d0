#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "tsagg/error.hpp"

namespace tsagg::cli {

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kInput = 3,
    kInfeasible = 4,
    kLimit = 5,
    kIo = 6,
};

int exit_code_for(const Error& e);

/// `flag` if nonempty, else $TSAGG_OUT_DIR if set, else "./out".
std::filesystem::path resolve_out_dir(const std::string& flag);

/// Runs one subcommand. `args` excludes the program name. Diagnostics go to
/// `err` as "tsagg: <category> error: <message>".
int run_pipeline(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tsagg::cli
