#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace toric::cli {

enum class Command {
  Validate,
  Vertices,
  StructureGroup,
  Delzant,
  Fan,
  SolitonVector,
  Residual,
  Solve,
  DingScan,
  CheckPotential,
};

std::optional<Command> parse_command(const std::string& name);
std::string command_name(Command c);

enum ExitCode : int {
  kOk = 0,
  kValidationFailure = 2,
  kNoConvergence = 3,
  kIoError = 4,
};

struct RunConfig {
  Command command = Command::Validate;
  std::filesystem::path input;
  std::optional<std::filesystem::path> potential;  // payload for residual / ding-scan / check-potential
  std::optional<std::filesystem::path> target;     // second geodesic endpoint for ding-scan
  std::optional<std::filesystem::path> output;
  std::optional<double> tolerance;
  int grid = 0;  // 0 picks 32 nodes in 1D, 20 in 2D
  double truncation = 12.0;
  bool allow_general_offsets = false;
  std::uint64_t seed = 0;
  int samples = 11;       // t values for ding-scan
  std::vector<int> face;  // structure-group: facets cutting out the face; empty means every facet and vertex
};

/// Runs one subcommand. Human-readable summary on `out`, one-line errors on `err`,
/// artifacts at config.output. Returns the process exit code.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace toric::cli
