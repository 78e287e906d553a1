#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "riemann/error.hpp"

namespace riemann {

enum class Command { Solve, Verify, Barrier, Plot, Counterexample };

std::optional<Command> parse_command(std::string_view name);

struct RunConfig {
  std::string domain;
  int level = 6;
  std::optional<double> lambda;
  double tol = 1e-10;
  double radius = 0.7;
  std::size_t probes = 20;
  std::uint64_t seed = 0;
  std::string out = ".";
};

/// Throws MalformedInput unless 1 <= level <= 10, 0 < radius < 1, probes >= 1,
/// tol > 0 and the domain path is set (counterexample needs no domain).
void validate(Command command, const RunConfig& cfg);

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitIndeterminate = 4;

int exit_code(ErrorCode code);

/// Runs one command and writes its artifacts into cfg.out. Errors are
/// reported on `log` and turned into the exit status.
int run(Command command, const RunConfig& cfg, std::ostream& log);

}  // namespace riemann
