#pragma once

// Subcommands of the chanmetric executable, callable in-process so they can
// be tested without spawning the binary.
//
// Exit codes: 0 success, 2 invalid input or unwritable output, 3 solver did
// not converge (compute) or a check failed (verify returns 1).

#include "chanmetric/core.hpp"
#include "chanmetric/metrics.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace chanmetric::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitNotConverged = 3;

int cmd_compute(const std::filesystem::path& path, std::ostream& out, std::ostream& err);

struct VerifyOptions {
  std::string axiom;
  int trials = 100;
  std::uint64_t seed = 1;
  std::size_t inputs = 2;
  std::size_t outputs = 2;
  std::string metric = "gmin";
  double t = 0.25;
  double s = 0.4;
  int samples = 9;
};

int cmd_verify(const VerifyOptions& options, std::ostream& out, std::ostream& err);

struct SweepRow {
  double a = 0.0;
  double c = 0.0;
  double gmin = 0.0;
  double gmax = 0.0;
  double gap = 0.0;
  bool converged = false;
};

/// Rows for Phi = [[a, c], [1-a, 1-c]] with a, c on the interior grid
/// i / (n + 1), i = 1..n, restricted to a + c <= 1; ordered by a, then c.
std::vector<SweepRow> sweep_rows(int grid, const TangentChannel& tangent, const SolverConfig& config = {});

/// The default sweep tangent [[-1, 1], [1, -1]].
TangentChannel sweep_tangent();

std::string sweep_csv(const std::vector<SweepRow>& rows);

struct SweepOptions {
  int grid = 9;
  std::filesystem::path output;
  std::optional<std::filesystem::path> tangent_file;
};

int cmd_sweep(const SweepOptions& options, std::ostream& err);

}  // namespace chanmetric::cli
