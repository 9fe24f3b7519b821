#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "enzlogic/circuit.hpp"
#include "enzlogic/gates.hpp"
#include "enzlogic/integrator.hpp"

namespace enzlogic {

struct SeqMapSpec {
  double kappa = 0.05;
  double tau = 1.0;
};

struct Violation {
  double t;
  double err;
  double err_after_tau;
};

struct Verdict {
  bool pass = true;
  std::vector<Violation> violations;
  std::size_t samples = 0;
  /// Samples with a grid point at least tau later.
  std::size_t checked = 0;
  /// Samples within tau of the end of the trace.
  std::size_t unchecked = 0;
  /// Checked samples whose error exceeded kappa.
  std::size_t deviations = 0;
};

/// Every sample t with |S(t) - f(t)| > kappa must have |S - f| < kappa at the
/// first grid point >= t + tau. Throws DomainError on mismatched lengths, a
/// non-increasing grid, kappa outside (0,1), or tau shorter than one step.
Verdict check(const std::vector<double>& times, const std::vector<double>& output,
              const std::vector<double>& reference, const SeqMapSpec& spec);

/// `PASS` or `FAIL`, a counts line, then `t=.. err=.. err_after_tau=..` per
/// violation.
void write_report(std::ostream& os, const Verdict& v, const SeqMapSpec& spec);

struct NotGateBounds {
  double t_plus = 0.0;
  /// Absent when kappa <= (1 + K_m) V_P1, where the closed form has no value.
  std::optional<double> t_minus;
  bool t_minus_domain_violated = false;
  /// Simulated settle time for E1 0 -> 1 from S1 = 1; filled in when the
  /// closed form is unavailable.
  std::optional<double> t_minus_empirical;
  double t_max = 0.0;
};

/// Closed forms with K_m and V_P1 = k_cat(P1) [P1] taken from the bias enzyme.
double t_plus_bound(const NotGateParams& params, double kappa);
std::optional<double> t_minus_bound(const NotGateParams& params, double kappa);

/// Throws DomainError for kappa outside (0,1) or malformed parameters. When
/// `fallback` is set and t_minus is undefined, simulates the falling
/// transition instead.
NotGateBounds not_gate_bounds(const NotGateParams& params, double kappa, bool fallback = true);

/// Smallest t (to 1e-3) after which |S(t) - target| < kappa up to the
/// horizon, starting from the network's stored state at t = 0. Throws
/// SettleError when the output is still outside the band at the horizon.
double empirical_settle_time(const ReactionNetwork& network, SpeciesRef output, double target,
                             double kappa, double horizon, const IntegratorOptions& options = {});

/// -(K_m + 1) / V_P ln(kappa) for the gate's bias enzyme; used to scale
/// default horizons.
double closed_form_scale(const GateInstance& gate, double kappa);

/// Time for one gate, inputs held at `inputs`, to come within kappa of the
/// rail nearest its equilibrium output, starting from the opposite rail.
/// Horizon defaults to 100 x closed_form_scale. Throws SettleError when the
/// equilibrium itself is not within kappa of that rail.
double gate_settle_time(const GateInstance& gate, const std::vector<double>& inputs, double kappa,
                        std::optional<double> horizon = std::nullopt);

/// Worst case over all logic input corners; for NOT gates also at least the
/// closed-form t_max.
double gate_settle_bound(const GateInstance& gate, double kappa);

/// Largest gate_settle_bound over the netlist's gates.
double netlist_settle_bound(const Netlist& netlist, double kappa);

/// Ideal 0/1 trace of `output` sampled at `times`. Combinational netlists
/// evaluate the gates on the inputs at t - delay * depth(output). Sequential
/// netlists apply Q = x1 OR (x2 AND Q) once per constant-input segment of their
/// first two inputs, shifted by 2 * delay, starting from `latch_initial`.
std::vector<double> reference_signal(const Netlist& netlist, const Waveforms& waveforms,
                                     const std::vector<double>& times, const std::string& output,
                                     double delay = 0.0, bool latch_initial = false);

}  // namespace enzlogic
