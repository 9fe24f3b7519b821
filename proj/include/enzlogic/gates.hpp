#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace enzlogic {

enum class LogicLevel { zero, one, invalid };

std::string_view to_string(LogicLevel level);
LogicLevel from_bit(bool bit);

struct ThresholdConfig {
  double tau0 = 0.2;
  double tau1 = 0.8;

  /// Throws DomainError unless 0 < tau0 < tau1 < 1.
  void validate() const;
  bool operator==(const ThresholdConfig&) const = default;
};

/// x < tau0 is Zero, x > tau1 is One, anything in between is Invalid.
LogicLevel threshold(double x, const ThresholdConfig& cfg = {});

struct EnzymeKinetics {
  double k_cat = 1.0;
  double k_m = 0.01;

  bool operator==(const EnzymeKinetics&) const = default;
};

/// S1 --E1--> S1', S1' --P1--> S1. Output is S1.
struct NotGateParams {
  EnzymeKinetics input{1.0, 0.01};
  EnzymeKinetics bias{1.0, 0.01};
  double bias_conc = 0.2;

  double v_input() const { return input.k_cat; }
  double v_bias() const { return bias.k_cat * bias_conc; }
  bool operator==(const NotGateParams&) const = default;
};

enum class TwoInputMode { or_gate, and_gate };

std::string_view to_string(TwoInputMode mode);

/// S2 --E2--> S2', S2 --E3--> S2', S2' --P2--> S2. Output is S2'.
struct TwoInputGateParams {
  TwoInputMode mode = TwoInputMode::or_gate;
  EnzymeKinetics input_a{0.6, 0.01};
  EnzymeKinetics input_b{0.6, 0.01};
  EnzymeKinetics bias{1.0, 0.01};
  double bias_conc = 0.2;

  static TwoInputGateParams or_defaults();
  static TwoInputGateParams and_defaults();

  double v_a() const { return input_a.k_cat; }
  double v_b() const { return input_b.k_cat; }
  double v_bias() const { return bias.k_cat * bias_conc; }
  bool operator==(const TwoInputGateParams&) const = default;
};

struct ConstraintReport {
  std::vector<std::string> violations;

  bool ok() const { return violations.empty(); }
};

/// Checks the rate inequalities at full insertion, plus basic well-formedness
/// (positive constants, bias concentration in (0,1]).
ConstraintReport validate_gate(const NotGateParams& params);
ConstraintReport validate_gate(const TwoInputGateParams& params);

/// Throws DomainError if constants are non-positive or the bias concentration
/// is outside (0,1]. The rate inequalities are not required here.
void require_well_formed(const NotGateParams& params);
void require_well_formed(const TwoInputGateParams& params);

/// Steady-state S1 for input concentration e1. Exactly 1 when e1 == 0.
double equilibrium_not(const NotGateParams& params, double e1);

/// Steady-state S2' for input concentrations e2, e3. Exactly 0 when both are 0.
double equilibrium_two_input(const TwoInputGateParams& params, double e2, double e3);

/// Thresholded steady state for logic inputs. Throws DomainError on an
/// Invalid input and ThresholdInfeasibleError when the output is Invalid.
LogicLevel gate_truth_row(const NotGateParams& params, LogicLevel in,
                          const ThresholdConfig& cfg = {});
LogicLevel gate_truth_row(const TwoInputGateParams& params, LogicLevel a, LogicLevel b,
                          const ThresholdConfig& cfg = {});

}  // namespace enzlogic
