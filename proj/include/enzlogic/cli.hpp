#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "enzlogic/config.hpp"

namespace enzlogic {

/// Process exit codes.
enum ExitCode : int { exit_pass = 0, exit_fail = 1, exit_config = 2, exit_numeric = 3 };

/// Fills in waveforms for inputs without one when the scenario asks for
/// random waveforms. `seed` overrides the configured seed.
Waveforms resolve_waveforms(const ScenarioConfig& cfg, std::optional<std::uint64_t> seed = {});

/// tau for seqmap checks: the configured value, or output depth (gate count
/// for sequential netlists) times the netlist settle bound.
double resolve_tau(const ScenarioConfig& cfg);

int cmd_simulate(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err,
                 std::optional<std::uint64_t> seed = {});
int cmd_truth_table(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_check_seqmap(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err,
                     std::optional<std::uint64_t> seed = {});
int cmd_bounds(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err);
/// Writes the netlist dump for an expression.
int cmd_synth(const std::string& expr, const std::string& style,
              const std::vector<std::string>& vars, std::ostream& out, std::ostream& err);

struct RunOptions {
  std::string command;
  std::vector<std::string> configs;
  /// File for one config, directory for several; empty means stdout.
  std::string out;
  std::optional<std::uint64_t> seed;
  unsigned jobs = 1;
  /// synth only, when no config is given.
  std::string expr;
  std::string style = "direct";
  std::vector<std::string> vars;
};

/// Loads every config and runs `command` on each, `jobs` at a time. Output is
/// emitted in config order. Returns the largest exit code.
int run(const RunOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace enzlogic
