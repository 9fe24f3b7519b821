#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "enzlogic/expr.hpp"
#include "enzlogic/gates.hpp"
#include "enzlogic/integrator.hpp"
#include "enzlogic/kinetics.hpp"
#include "enzlogic/oracle.hpp"
#include "enzlogic/waveform.hpp"

namespace enzlogic {

enum class GateKind { not_gate, or_gate, and_gate };

std::string_view to_string(GateKind kind);

/// Species and enzyme names; empty entries get `<id>_S`, `<id>_Sp`,
/// `<id>_E1` (NOT) or `<id>_E2`/`<id>_E3` (two-input), and `<id>_P`.
struct GateNames {
  std::string substrate;
  std::string product;
  std::string input_a;
  std::string input_b;
  std::string bias;

  bool operator==(const GateNames&) const = default;
};

struct GateInstance {
  std::string id;
  std::variant<NotGateParams, TwoInputGateParams> params;
  /// Initial substrate concentration.
  double initial = 0.5;
  GateNames names;

  GateKind kind() const;
  std::size_t arity() const { return kind() == GateKind::not_gate ? 1 : 2; }
  /// Names with defaults filled in.
  GateNames resolved_names() const;
  /// Output is the substrate for NOT and the product for OR/AND.
  Slot output_slot() const { return kind() == GateKind::not_gate ? Slot::substrate : Slot::product; }
  bool operator==(const GateInstance&) const = default;

  static GateInstance make_not(std::string id, NotGateParams p = {});
  static GateInstance make_or(std::string id, TwoInputGateParams p = TwoInputGateParams::or_defaults());
  static GateInstance make_and(std::string id,
                               TwoInputGateParams p = TwoInputGateParams::and_defaults());
};

/// `source` names a primary input or a gate id; the destination is input slot
/// `slot` (0 or 1) of gate `gate`. The destination enzyme concentration equals
/// the source concentration.
struct Wire {
  std::string source;
  std::string gate;
  std::size_t slot = 0;

  bool operator==(const Wire&) const = default;
};

/// An inverted input drives its enzymes with 1 - x (active low).
struct PrimaryInput {
  std::string name;
  bool inverted = false;

  bool operator==(const PrimaryInput&) const = default;
};

struct PrimaryOutput {
  std::string name;
  std::string source;

  bool operator==(const PrimaryOutput&) const = default;
};

struct Netlist {
  std::vector<GateInstance> gates;
  std::vector<Wire> wires;
  std::vector<PrimaryInput> inputs;
  std::vector<PrimaryOutput> outputs;
  /// Cycles are rejected unless this is set.
  bool sequential = false;

  /// Throws NetlistError on duplicate names, dangling or missing wires, bad
  /// slots, doubly driven slots, or an undeclared cycle.
  void validate() const;
  bool has_cycle() const;
  /// Gates in dependency order. Throws NetlistError on a cycle.
  std::vector<std::size_t> topological_order() const;
  /// Gate levels on the longest path from the inputs (a gate fed only by
  /// primary inputs has level 1). Combinational only.
  std::map<std::string, int> gate_levels() const;
  /// Level of an output's source; 0 for an output wired to an input.
  int output_depth(const std::string& output) const;
  /// Largest output depth.
  int depth() const;

  const GateInstance& gate(const std::string& id) const;
  const PrimaryInput* input(const std::string& name) const;
  /// Driving wire of a gate slot, or nullptr.
  const Wire* driver(const std::string& gate, std::size_t slot) const;
  std::vector<std::string> input_names() const;
  std::vector<std::string> output_names() const;
  std::vector<GateKind> gate_kinds() const;

  bool operator==(const Netlist&) const = default;
};

enum class SynthesisStyle { direct, nand_only };

std::string_view to_string(SynthesisStyle s);
SynthesisStyle parse_style(std::string_view s);

/// Netlist with primary inputs `inputs` (in order) and a single output named
/// `output`. Throws NetlistError if `expr` uses an undeclared variable.
Netlist synthesize(const BooleanExpr& expr, SynthesisStyle style,
                   const std::vector<std::string>& inputs, const std::string& output = "out");

/// Two cross-coupled NANDs, each an AND feeding a NOT. Inputs X1 (active
/// low at the pin) and X2, output Q, so that Q' = X1 OR (X2 AND Q).
Netlist build_rs_latch();

struct Elaboration {
  ReactionNetwork network;
  /// Gate id -> pair index.
  std::map<std::string, std::size_t> gate_pair;
  /// Gate id -> output species.
  std::map<std::string, SpeciesRef> gate_output;
  /// Primary output -> species name, absent for outputs wired to an input.
  std::map<std::string, std::string> output_species;
};

/// One conserved pair and enzyme set per gate; inputs become schedules from
/// `waveforms` (constant 0 when absent) and gate-to-gate wires become
/// couplings.
Elaboration elaborate(const Netlist& netlist, const Waveforms& waveforms = {});

struct CircuitTrace {
  Trace trace;
  /// Primary output -> sampled concentration.
  std::map<std::string, std::vector<double>> outputs;
};

/// Throws ScheduleError if a primary input has no waveform defined from 0.
CircuitTrace simulate_circuit(const Netlist& netlist, const Waveforms& waveforms, double t_end,
                              double dt_out, const IntegratorOptions& options = {});

/// Steady-state output concentrations for constant logic inputs, composed
/// gate by gate along the topological order. Combinational only.
std::map<std::string, double> equilibrium_outputs(const Netlist& netlist, const Assignment& inputs);

/// Ideal Boolean outputs for constant inputs. Combinational only.
std::map<std::string, bool> ideal_outputs(const Netlist& netlist, const Assignment& inputs);

/// Line format: `INPUT name [inverted]`, `GATE id KIND key=value...`,
/// `WIRE src -> gate.slot`, `OUTPUT name src`, `SEQUENTIAL`. `#` starts a
/// comment.
void dump_netlist(std::ostream& os, const Netlist& netlist);
std::string dump_netlist(const Netlist& netlist);
/// Throws NetlistError naming the line on malformed input.
Netlist parse_netlist(std::istream& is);
Netlist parse_netlist_text(const std::string& text);

}  // namespace enzlogic
