#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lassocert/types.hpp"

namespace lassocert {

inline constexpr const char* kToolName = "lassocert";
inline constexpr const char* kToolVersion = "0.1.0";

enum class Subcommand { Solve, Certify, Decompose, Hausdorff, Probe, Example };

struct RunConfig {
  Subcommand subcommand = Subcommand::Solve;
  std::vector<std::string> inputs;
  std::string output;
  std::optional<double> tol_kkt;
  std::optional<double> tol_active;
  std::uint64_t seed = 0;
  double gamma = 0.5;
  double lambda = 0.5;
  std::string variant = "lasso";
  double radius = 0.1;
  int samples = 20;
  bool run_probe = false;  // `example --probe`
};

// Parses argv into a RunConfig; throws Error(ParseError) on bad usage.
RunConfig parse_cli(int argc, const char* const* argv);

// Exit code contract: 0 success, 1 error, 2 well-formed run whose stability verdict
// fails (certify with a failed condition, probe with the blow-up flag raised).
int run_cli(const RunConfig& config);

}  // namespace lassocert
