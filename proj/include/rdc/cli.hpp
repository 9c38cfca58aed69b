#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace rdc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitFailure = 3;

/// Runs one rdc-sim invocation. `args` excludes the program name. Results
/// go to files, short key=value summaries to `out`, and a single
/// `error kind=... message="..."` line to `err` on failure.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Parsed run manifest: the invocation, its outputs and the resolved
/// inputs (profiles, grid rows) needed to repeat it without the originals.
struct Manifest {
  std::string subcommand;
  std::vector<std::string> args;
  std::vector<std::string> outputs;
  std::map<std::string, std::string> overrides;
  std::string seeds;
  std::vector<std::string> profiles;  // serialized profiles, in order
  std::vector<std::string> grid_lines;
};

std::string format_manifest(const Manifest& m);
Manifest parse_manifest(const std::string& text);

/// Path of the manifest written next to `output_path`.
std::string manifest_path(const std::string& output_path);

}  // namespace rdc::cli
