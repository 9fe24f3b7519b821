#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace enzlogic {

/// Piecewise-constant, right-continuous function of time with values in
/// [0,1]. Undefined before the first step.
class Schedule {
 public:
  struct Step {
    double time;
    double value;
    bool operator==(const Step&) const = default;
  };

  /// Constant 0 for all time.
  Schedule();

  static Schedule constant(double value);
  /// Steps must have strictly increasing times and values in [0,1].
  static Schedule from_steps(std::vector<Step> steps);

  /// Throws ScheduleError when t precedes the first step.
  double at(double t) const;
  double start() const { return steps_.front().time; }
  bool defined_at(double t) const { return t >= start(); }

  /// Times strictly inside (t0, t1) at which the value changes.
  std::vector<double> switch_points(double t0, double t1) const;

  const std::vector<Step>& steps() const { return steps_; }

  bool operator==(const Schedule&) const = default;

 private:
  explicit Schedule(std::vector<Step> steps) : steps_(std::move(steps)) {}
  std::vector<Step> steps_;
};

/// Enzyme with Michaelis-Menten constants. Its concentration comes either
/// from `schedule` or, when the network couples it, from a live species.
struct EnzymeSignal {
  std::string name;
  double k_cat = 1.0;
  double k_m = 0.01;
  Schedule schedule;

  bool operator==(const EnzymeSignal&) const = default;
};

enum class Slot { substrate, product };

constexpr Slot opposite(Slot s) {
  return s == Slot::substrate ? Slot::product : Slot::substrate;
}

/// Substrate/product pair with total fixed at 1. Only the substrate
/// concentration is stored; the product is 1 - s.
struct ConservedPair {
  std::string substrate;
  std::string product;
  double s = 0.5;

  double product_conc() const { return 1.0 - s; }
  bool operator==(const ConservedPair&) const = default;
};

struct SpeciesRef {
  std::size_t pair = 0;
  Slot slot = Slot::substrate;

  bool operator==(const SpeciesRef&) const = default;
};

/// `from` --enzyme--> opposite(from), both slots of the same pair.
struct CatalyzedConversion {
  std::size_t pair = 0;
  Slot from = Slot::substrate;
  std::size_t enzyme = 0;

  Slot to() const { return opposite(from); }
  bool operator==(const CatalyzedConversion&) const = default;
};

/// Enzyme whose effective concentration tracks a species concentration.
struct EnzymeCoupling {
  std::size_t enzyme = 0;
  SpeciesRef source;

  bool operator==(const EnzymeCoupling&) const = default;
};

struct ReactionNetwork {
  std::vector<ConservedPair> pairs;
  std::vector<EnzymeSignal> enzymes;
  std::vector<CatalyzedConversion> conversions;
  std::vector<EnzymeCoupling> couplings;

  std::size_t add_pair(std::string substrate, std::string product, double s0);
  std::size_t add_enzyme(EnzymeSignal enzyme);
  void add_conversion(std::size_t pair, Slot from, std::size_t enzyme);
  void couple(std::size_t enzyme, SpeciesRef source);

  /// Throws DomainError on dangling indices, duplicate names, bad constants,
  /// out-of-range initial states, or an enzyme coupled twice.
  void validate() const;

  std::vector<double> initial_state() const;

  /// Coupling for `enzyme`, or nullptr when it follows its schedule.
  const EnzymeCoupling* coupling_of(std::size_t enzyme) const;

  /// Effective concentration of `enzyme` at time t in the given state.
  double enzyme_concentration(std::size_t enzyme, double t,
                              std::span<const double> state) const;

  bool operator==(const ReactionNetwork&) const = default;
};

double species_concentration(SpeciesRef ref, std::span<const double> state);

/// k_cat * e * s / (K_m + s). Throws DomainError outside the stated domain.
double michaelis_rate(double k_cat, double e_conc, double k_m, double s_conc);

/// ds/dt of the substrate of `pair`: production minus consumption, enzymes
/// evaluated at time t.
double net_rate(const ReactionNetwork& network, std::span<const double> state,
                std::size_t pair, double t);
/// Same, using the pairs' stored concentrations as the state.
double net_rate(const ReactionNetwork& network, std::size_t pair, double t);

}  // namespace enzlogic
