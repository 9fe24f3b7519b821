#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "enzlogic/circuit.hpp"
#include "enzlogic/expr.hpp"
#include "enzlogic/gates.hpp"
#include "enzlogic/integrator.hpp"
#include "enzlogic/waveform.hpp"

namespace enzlogic {

struct SimulationSettings {
  double t_end = 200.0;
  double dt_out = 0.1;
  IntegratorOptions integrator;
};

struct RandomWaveformSettings {
  std::uint64_t seed = 1;
  /// Absent means twice the resolved seqmap tau.
  std::optional<double> min_segment;
  /// Absent means 1.5 x min_segment.
  std::optional<double> max_segment;
};

struct SeqMapSettings {
  double kappa = 0.05;
  /// Absent means "auto": output depth (gate count when sequential) x the
  /// netlist settle bound.
  std::optional<double> tau;
  double delay = 0.0;
  /// Defaults to the first primary output.
  std::string output;
  bool latch_initial = false;
};

/// Everything one invocation needs, validated.
struct ScenarioConfig {
  std::string source;
  Netlist netlist;
  /// Set when the circuit came from an expression; used as the truth-table
  /// oracle.
  std::optional<BooleanExpr> expression;
  Waveforms waveforms;
  std::optional<RandomWaveformSettings> random;
  SimulationSettings simulation;
  ThresholdConfig thresholds;
  SeqMapSettings seqmap;
  double bounds_kappa = 0.05;
};

/// YAML scenario. Throws ConfigError with `source:line:column` and the field
/// name on any problem.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config(const std::string& path);

}  // namespace enzlogic
