#pragma once

#include <filesystem>
#include <ostream>
#include <string>

#include "nlstrain/config.hpp"

namespace nlstrain::cli {

enum ExitCode : int { kOk = 0, kValidation = 2, kNumerical = 3, kAcceptance = 4 };

/// Writes `<command>-<hash>.{csv,json}` into out_dir and returns the exit code.
/// Failures are reported in out_dir/error.json.
int run(const RunConfig& config, const std::filesystem::path& out_dir, std::ostream& log);

/// `<binary> <command> --config <path> [--out <dir>]`.
int main(int argc, char** argv);

/// Temp file plus rename, so readers never see partial output.
void write_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace nlstrain::cli
