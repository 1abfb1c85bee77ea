#pragma once

// Command-line surface: validate, fit-pathloss, fit-losprob, shadow, eval,
// synth. `run` is what the plfit executable calls; tests drive it in-process.

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace plfit::cli {

inline constexpr std::string_view kToolName = "plfit";
inline constexpr std::string_view kToolVersion = "0.1.0";

enum ExitCode : int {
  kSuccess = 0,
  kInternalError = 1,
  kInvalidInput = 2,
  kPartialValidation = 3,
};

// args[0] is the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// Hex SHA-256 of a file's bytes, as recorded in run_manifest.json.
std::string sha256_file(const std::string& path);

}  // namespace plfit::cli
