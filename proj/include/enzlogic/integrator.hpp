#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "enzlogic/kinetics.hpp"

namespace enzlogic {

enum class Method {
  /// Linearly implicit 4(3) Rosenbrock with analytic Jacobian. L-stable
  /// enough for the fast rail modes that small K_m produces.
  rosenbrock4,
  /// Explicit Dormand-Prince 5(4) with continuous extension.
  dormand_prince45,
};

std::string_view to_string(Method m);
/// Accepts "rosenbrock", "rosenbrock4", "dopri5", "dormand_prince45".
Method parse_method(std::string_view name);

struct IntegratorOptions {
  Method method = Method::rosenbrock4;
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  double initial_step = 1e-3;
  double max_step = std::numeric_limits<double>::infinity();
  std::size_t max_steps = 20'000'000;
  /// States within this distance outside [0,1] are clamped; anything larger is
  /// a failed step.
  double box_tolerance = 1e-9;
};

struct IntegrationStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
  std::size_t segments = 0;
};

/// Uniformly sampled concentrations. `states[p][k]` is the substrate
/// concentration of pair p at `times[k]`; products are derived.
struct Trace {
  std::vector<double> times;
  std::vector<std::string> substrate_names;
  std::vector<std::string> product_names;
  std::vector<std::vector<double>> states;
  std::vector<std::string> enzyme_names;
  std::vector<std::vector<double>> enzymes;
  IntegrationStats stats;

  std::size_t size() const { return times.size(); }
  /// Substrate then product for every pair, in pair order.
  std::vector<std::string> species_names() const;
  /// Column for a substrate, product or enzyme name. Throws std::out_of_range.
  std::vector<double> column(std::string_view name) const;
  /// Pair states at sample k.
  std::vector<double> state_at(std::size_t k) const;
};

/// Integrates the network from its stored initial state over [t0, t_end],
/// sampling every dt_out. Steps never straddle a schedule switch point.
Trace integrate(const ReactionNetwork& network, double t0, double t_end, double dt_out,
                const IntegratorOptions& options = {});

/// Final state only, no sampling.
std::vector<double> integrate_to(const ReactionNetwork& network, double t0, double t_end,
                                 const IntegratorOptions& options = {});

/// Header `t,<species...>,<enzymes...>`, 12 significant digits, LF endings.
void write_csv(std::ostream& os, const Trace& trace);

/// Right-hand side and Jacobian for the pair states with every enzyme
/// concentration either frozen (scheduled) or read from the state (coupled).
/// Exposed for testing.
class RateKernel {
 public:
  RateKernel(const ReactionNetwork& network, double t);

  std::size_t dimension() const { return dim_; }
  void rhs(std::span<const double> y, std::span<double> dy) const;
  /// Row-major dim x dim.
  void jacobian(std::span<const double> y, std::span<double> jac) const;
  /// Effective enzyme concentrations in state y.
  std::vector<double> enzyme_levels(std::span<const double> y) const;

 private:
  struct Term {
    std::size_t pair;
    double sign;     // +1 if the conversion produces substrate
    double x_sign;   // d(substrate of term)/d(s_pair)
    double k_cat;
    double k_m;
    bool coupled;
    double level;    // frozen enzyme concentration when !coupled
    std::size_t src_pair;
    double src_sign;  // d(enzyme conc)/d(s_src)
  };
  std::size_t dim_;
  std::vector<Term> terms_;
  std::vector<double> frozen_;
  std::vector<std::pair<std::size_t, SpeciesRef>> coupled_;
};

}  // namespace enzlogic
