#include "enzlogic/gates.hpp"

#include <cmath>
#include <sstream>

#include "enzlogic/errors.hpp"

namespace enzlogic {

namespace {

constexpr double root_tolerance = 1e-12;

bool in_unit(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

void check_kinetics(const EnzymeKinetics& k, const char* name, std::vector<std::string>& out) {
  if (!(k.k_cat > 0.0) || !std::isfinite(k.k_cat)) out.push_back(std::string("k_cat(") + name + ") > 0");
  if (!(k.k_m > 0.0) || !std::isfinite(k.k_m)) out.push_back(std::string("K_m(") + name + ") > 0");
}

void check_bias_conc(double c, const char* name, std::vector<std::string>& out) {
  if (!(c > 0.0) || !(c <= 1.0)) out.push_back(std::string("0 < [") + name + "] <= 1");
}

void throw_if_any(const std::vector<std::string>& problems) {
  if (problems.empty()) return;
  std::string msg = "malformed gate parameters:";
  for (const auto& p : problems) msg += " " + p + ";";
  throw DomainError(msg);
}

void require_unit(double x, const char* what) {
  if (!in_unit(x)) {
    std::ostringstream os;
    os << what << " = " << x << " outside [0,1]";
    throw DomainError(os.str());
  }
}

/// Root of an increasing function on [0,1] with f(0) <= 0 <= f(1).
template <class F>
double bisect_increasing(F f) {
  double lo = 0.0, hi = 1.0;
  const double flo = f(lo), fhi = f(hi);
  if (flo > 0.0 || fhi < 0.0) throw SolverError("equilibrium root not bracketed in [0,1]");
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  while (hi - lo > root_tolerance) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    (fm < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double level_conc(LogicLevel in) {
  switch (in) {
    case LogicLevel::zero: return 0.0;
    case LogicLevel::one: return 1.0;
    case LogicLevel::invalid: break;
  }
  throw DomainError("logic input must be Zero or One");
}

LogicLevel classify(double x, const ThresholdConfig& cfg, const char* gate) {
  const LogicLevel out = threshold(x, cfg);
  if (out == LogicLevel::invalid) {
    std::ostringstream os;
    os << "threshold-infeasible parameters: " << gate << " equilibrium " << x << " lies in ["
       << cfg.tau0 << ", " << cfg.tau1 << "]";
    throw ThresholdInfeasibleError(os.str());
  }
  return out;
}

}  // namespace

std::string_view to_string(LogicLevel level) {
  switch (level) {
    case LogicLevel::zero: return "0";
    case LogicLevel::one: return "1";
    case LogicLevel::invalid: return "X";
  }
  return "?";
}

LogicLevel from_bit(bool bit) { return bit ? LogicLevel::one : LogicLevel::zero; }

void ThresholdConfig::validate() const {
  if (!(tau0 > 0.0 && tau0 < tau1 && tau1 < 1.0)) {
    std::ostringstream os;
    os << "thresholds must satisfy 0 < tau0 < tau1 < 1 (got tau0=" << tau0 << ", tau1=" << tau1
       << ")";
    throw DomainError(os.str());
  }
}

LogicLevel threshold(double x, const ThresholdConfig& cfg) {
  require_unit(x, "concentration");
  if (x < cfg.tau0) return LogicLevel::zero;
  if (x > cfg.tau1) return LogicLevel::one;
  return LogicLevel::invalid;
}

std::string_view to_string(TwoInputMode mode) {
  return mode == TwoInputMode::or_gate ? "OR" : "AND";
}

TwoInputGateParams TwoInputGateParams::or_defaults() {
  TwoInputGateParams p;
  p.mode = TwoInputMode::or_gate;
  p.bias_conc = 0.2;
  return p;
}

TwoInputGateParams TwoInputGateParams::and_defaults() {
  TwoInputGateParams p;
  p.mode = TwoInputMode::and_gate;
  p.bias_conc = 0.9;
  return p;
}

ConstraintReport validate_gate(const NotGateParams& p) {
  ConstraintReport r;
  check_kinetics(p.input, "E1", r.violations);
  check_kinetics(p.bias, "P1", r.violations);
  check_bias_conc(p.bias_conc, "P1", r.violations);
  if (!r.ok()) return r;
  if (!(p.v_bias() < p.v_input())) r.violations.emplace_back("V_P1 < V_E1");
  return r;
}

ConstraintReport validate_gate(const TwoInputGateParams& p) {
  ConstraintReport r;
  check_kinetics(p.input_a, "E2", r.violations);
  check_kinetics(p.input_b, "E3", r.violations);
  check_kinetics(p.bias, "P2", r.violations);
  check_bias_conc(p.bias_conc, "P2", r.violations);
  if (!r.ok()) return r;
  const double vp = p.v_bias(), va = p.v_a(), vb = p.v_b();
  if (p.mode == TwoInputMode::or_gate) {
    if (!(vp < va)) r.violations.emplace_back("V_P2 < V_E2");
    if (!(vp < vb)) r.violations.emplace_back("V_P2 < V_E3");
  } else {
    if (!(vp > va)) r.violations.emplace_back("V_P2 > V_E2");
    if (!(vp > vb)) r.violations.emplace_back("V_P2 > V_E3");
    if (!(vp < va + vb)) r.violations.emplace_back("V_P2 < V_E2+V_E3");
  }
  return r;
}

void require_well_formed(const NotGateParams& p) {
  std::vector<std::string> problems;
  check_kinetics(p.input, "E1", problems);
  check_kinetics(p.bias, "P1", problems);
  check_bias_conc(p.bias_conc, "P1", problems);
  throw_if_any(problems);
}

void require_well_formed(const TwoInputGateParams& p) {
  std::vector<std::string> problems;
  check_kinetics(p.input_a, "E2", problems);
  check_kinetics(p.input_b, "E3", problems);
  check_kinetics(p.bias, "P2", problems);
  check_bias_conc(p.bias_conc, "P2", problems);
  throw_if_any(problems);
}

double equilibrium_not(const NotGateParams& p, double e1) {
  require_well_formed(p);
  require_unit(e1, "[E1]");
  if (e1 == 0.0) return 1.0;
  const double ve = p.v_input() * e1, vp = p.v_bias();
  const double ke = p.input.k_m, kp = p.bias.k_m;
  return bisect_increasing(
      [&](double s) { return ve * s / (ke + s) - vp * (1.0 - s) / (kp + 1.0 - s); });
}

double equilibrium_two_input(const TwoInputGateParams& p, double e2, double e3) {
  require_well_formed(p);
  require_unit(e2, "[E2]");
  require_unit(e3, "[E3]");
  if (e2 == 0.0 && e3 == 0.0) return 0.0;
  const double wa = p.v_a() * e2, wb = p.v_b() * e3, vp = p.v_bias();
  const double ka = p.input_a.k_m, kb = p.input_b.k_m, kp = p.bias.k_m;
  // Back reaction minus forward production of S2', increasing in S2'.
  return bisect_increasing([&](double q) {
    const double s = 1.0 - q;
    return vp * q / (kp + q) - wa * s / (ka + s) - wb * s / (kb + s);
  });
}

LogicLevel gate_truth_row(const NotGateParams& p, LogicLevel in, const ThresholdConfig& cfg) {
  return classify(equilibrium_not(p, level_conc(in)), cfg, "NOT");
}

LogicLevel gate_truth_row(const TwoInputGateParams& p, LogicLevel a, LogicLevel b,
                          const ThresholdConfig& cfg) {
  const double x = equilibrium_two_input(p, level_conc(a), level_conc(b));
  return classify(x, cfg, p.mode == TwoInputMode::or_gate ? "OR" : "AND");
}

}  // namespace enzlogic
