// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "enzlogic/cli.hpp"
#include "enzlogic/errors.hpp"
#include "enzlogic/oracle.hpp"
#include "enzlogic/seqmap.hpp"
#include "helpers.hpp"

using namespace enzlogic;
namespace ts = testing_support;

namespace {

constexpr double kappa = 0.05;

struct Outcome {
  bool pass = true;
  std::string detail;
};

/// Conservation and range bookkeeping over every trace produced.
struct Audit {
  std::size_t traces = 0;
  std::size_t samples = 0;
  double worst_sum = 0.0;
  double lowest = 1.0;
  double highest = 0.0;

  void add(const Trace& tr) {
    ++traces;
    samples += tr.size();
    for (std::size_t p = 0; p < tr.states.size(); ++p) {
      const auto& s = tr.states[p];
      const auto sp = tr.column(tr.product_names[p]);
      for (std::size_t k = 0; k < s.size(); ++k) {
        worst_sum = std::max(worst_sum, std::abs(s[k] + sp[k] - 1.0));
        lowest = std::min({lowest, s[k], sp[k]});
        highest = std::max({highest, s[k], sp[k]});
      }
    }
    for (const auto& e : tr.enzymes)
      for (double x : e) {
        lowest = std::min(lowest, x);
        highest = std::max(highest, x);
      }
  }
};

Audit audit;

std::string f(double v, const char* spec = "%.4g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

Schedule program(std::vector<std::pair<double, double>> st) {
  std::vector<Schedule::Step> s;
  for (auto [t, v] : st) s.push_back({t, v});
  return Schedule::from_steps(s);
}

/// Random NOT parameters with V_P1 < V_E1 and equilibria close to the rails.
NotGateParams random_not(std::mt19937_64& rng) {
  auto log_uniform = [&](double lo, double hi) {
    return std::exp(std::uniform_real_distribution<double>(std::log(lo), std::log(hi))(rng));
  };
  std::uniform_real_distribution<double> u(0.0, 1.0);
  NotGateParams p;
  p.input = {log_uniform(0.5, 2.0), log_uniform(0.005, 0.03)};
  p.bias.k_m = log_uniform(0.005, 0.03);
  const double v_p = p.v_input() * (0.05 + 0.35 * u(rng));
  p.bias_conc = 0.05 + 0.95 * u(rng);
  p.bias.k_cat = v_p / p.bias_conc;
  return p;
}

std::vector<NotGateParams> random_not_sets() {
  std::mt19937_64 rng(20240601);
  std::vector<NotGateParams> out;
  while (out.size() < 50) {
    const auto p = random_not(rng);
    if (validate_gate(p).ok()) out.push_back(p);
  }
  return out;
}

// -- 1 ----------------------------------------------------------------------

Outcome truth_tables() {
  Outcome o;
  // Expected levels per row, first input most significant.
  const std::vector<std::pair<std::string, std::vector<int>>> tables{
      {"NOT", {1, 0}}, {"OR", {0, 1, 1, 1}}, {"AND", {0, 0, 0, 1}}};
  std::size_t rows = 0;
  for (const auto& [kind, expected] : tables) {
    const auto cfg = parse_config("circuit: {gate: {kind: " + kind + "}}\n", kind);
    std::ostringstream out, err;
    const int rc = cmd_truth_table(cfg, out, err);
    if (rc != exit_pass) {
      o.pass = false;
      o.detail += kind + " exit " + std::to_string(rc) + "; ";
    }
    std::istringstream lines(out.str());
    std::string line;
    std::getline(lines, line);
    const auto arity = expected.size() == 2 ? 1u : 2u;
    std::size_t r = 0;
    const auto& g = cfg.netlist.gates[0];
    while (std::getline(lines, line)) {
      std::istringstream cols(line);
      std::vector<int> in(arity);
      std::string name, level, oracle, match;
      double eq = 0;
      for (auto& x : in) cols >> x;
      cols >> name >> eq >> level >> oracle >> match;
      ++rows;
      if (r >= expected.size() || level != std::to_string(expected[r]) || match != "yes") {
        o.pass = false;
        o.detail += kind + " row " + std::to_string(r) + " '" + line + "'; ";
      }
      // Independent closed-form equilibrium.
      double closed = 0;
      if (arity == 1) {
        const auto& p = std::get<NotGateParams>(g.params);
        closed = ts::not_equilibrium_closed_form(p.input.k_cat, in[0], p.input.k_m, p.v_bias(),
                                                 p.bias.k_m);
      } else {
        const auto& p = std::get<TwoInputGateParams>(g.params);
        closed = ts::two_input_equilibrium_closed_form(
            p.input_a.k_cat * in[0] + p.input_b.k_cat * in[1], p.input_a.k_m, p.v_bias(),
            p.bias.k_m);
      }
      if (std::abs(closed - eq) > 1e-6) {
        o.pass = false;
        o.detail += kind + " closed form " + f(closed) + " vs " + f(eq) + "; ";
      }
      if (!(eq < 0.05 || eq > 0.95)) {
        o.pass = false;
        o.detail += kind + " equilibrium " + f(eq) + " inside [0.05,0.95]; ";
      }
      // The simulated gate reaches the same value.
      Waveforms w;
      for (std::size_t i = 0; i < arity; ++i)
        w[cfg.netlist.inputs[i].name] = Schedule::constant(in[i]);
      const auto ct = simulate_circuit(cfg.netlist, w, 100.0, 0.5);
      audit.add(ct.trace);
      if (std::abs(ct.outputs.at("out").back() - eq) > 1e-3) {
        o.pass = false;
        o.detail += kind + " simulation ends at " + f(ct.outputs.at("out").back()) + "; ";
      }
      ++r;
    }
    if (r != expected.size()) {
      o.pass = false;
      o.detail += kind + " printed " + std::to_string(r) + " rows; ";
    }
  }
  if (o.pass) o.detail = std::to_string(rows) + " rows match, all equilibria outside [0.05, 0.95]";
  return o;
}

// -- 2 ----------------------------------------------------------------------

Outcome forward_bound() {
  Outcome o;
  std::size_t violations = 0;
  double worst_ratio = 0.0;
  for (const auto& p : random_not_sets()) {
    const double tp = t_plus_bound(p, kappa);
    const double closed = -(p.bias.k_m + 1.0) / (p.bias.k_cat * p.bias_conc) * std::log(kappa);
    const double settle = gate_settle_time(GateInstance::make_not("n", p), {0.0}, kappa);
    // Exact relaxation with E1 absent must be inside the band by t_plus.
    const double s_at = ts::forward_relaxation_exact(0.0, p.v_bias(), p.bias.k_m, tp);
    worst_ratio = std::max(worst_ratio, settle / tp);
    if (settle > tp || std::abs(closed - tp) > 1e-12 * tp || !(1.0 - s_at < kappa)) {
      ++violations;
      o.detail += "settle " + f(settle) + " t_plus " + f(tp) + "; ";
    }
  }
  o.pass = violations == 0;
  if (o.pass)
    o.detail = "50 sets, 0 violations, worst settle/t_plus = " + f(worst_ratio, "%.3f");
  return o;
}

// -- 3 ----------------------------------------------------------------------

Outcome minus_domain() {
  Outcome o;
  std::size_t flagged = 0, defined = 0, mismatches = 0;
  double worst_fallback = 0.0;
  const auto sets = random_not_sets();
  for (const auto& p : sets) {
    const double k = p.bias.k_m, vp = p.v_bias();
    for (double kap : {0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9}) {
      const auto tm = t_minus_bound(p, kap);
      const bool violated = kap <= (1.0 + k) * vp;
      if (violated) {
        ++flagged;
        if (tm) ++mismatches;
      } else {
        ++defined;
        const double expect = -std::log(kap - (1.0 + k) * vp) / (1.0 + k);
        if (!tm || std::abs(*tm - expect) > 1e-12 * std::max(1.0, std::abs(expect))) ++mismatches;
      }
      const auto b = not_gate_bounds(p, kap, false);
      if (b.t_minus_domain_violated != violated) ++mismatches;
    }
    const auto b = not_gate_bounds(p, kappa);
    if (b.t_minus_domain_violated) {
      if (!b.t_minus_empirical || !std::isfinite(*b.t_minus_empirical)) {
        ++mismatches;
        o.detail += "fallback missing; ";
      } else {
        worst_fallback = std::max(worst_fallback, *b.t_minus_empirical);
      }
    }
  }
  o.pass = mismatches == 0 && flagged > 0 && defined > 0;
  o.detail = std::to_string(flagged) + " flagged, " + std::to_string(defined) +
             " closed-form values, " + std::to_string(mismatches) +
             " mismatches; largest fallback " + f(worst_fallback) + o.detail;
  return o;
}

// -- 4 ----------------------------------------------------------------------

struct SeqStats {
  std::size_t runs = 0, failed = 0;
  std::string first_failure;
};

void seqmap_run(const Netlist& n, const Waveforms& w, double t_end, double tau, SeqStats& st,
                const std::string& label) {
  const auto ct = simulate_circuit(n, w, t_end, tau / 50.0);
  audit.add(ct.trace);
  const auto ref = reference_signal(n, w, ct.trace.times, "out");
  const auto v = check(ct.trace.times, ct.outputs.at("out"), ref, {kappa, tau});
  ++st.runs;
  if (!v.pass || v.checked == 0) {
    if (st.failed++ == 0) st.first_failure = label;
  }
}

Outcome sequential_mapping() {
  Outcome o;
  SeqStats gates;
  for (const char* e : {"NOT(a)", "OR(a,b)", "AND(a,b)"}) {
    const auto expr = parse_expr(e);
    const auto vars = expr.variables();
    const auto n = synthesize(expr, SynthesisStyle::direct, vars);
    const double settle = netlist_settle_bound(n, kappa);
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
      const double t_end = 20.0 * settle;
      const auto w = random_waveforms(vars, {t_end, 2.0 * settle, 3.0 * settle, seed});
      seqmap_run(n, w, t_end, settle, gates, std::string(e) + " seed " + std::to_string(seed));
    }
  }

  const std::vector<std::string> abc{"a", "b", "c"};
  const auto corpus = expression_corpus(3, abc);
  double settle = 0.0;
  for (const auto& g : {GateInstance::make_not("n"), GateInstance::make_or("o"),
                        GateInstance::make_and("a")})
    settle = std::max(settle, gate_settle_bound(g, kappa));
  SeqStats circuits;
  int max_depth = 0;
  for (auto style : {SynthesisStyle::direct, SynthesisStyle::nand_only}) {
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto n = synthesize(corpus[i], style, abc);
      max_depth = std::max(max_depth, n.depth());
      const double tau = std::max(1, n.depth()) * settle;
      const auto w = random_waveforms(abc, {8.0 * tau, 2.0 * tau, 3.0 * tau, 1000 + i});
      seqmap_run(n, w, 8.0 * tau, tau, circuits,
                 corpus[i].to_string() + " " + std::string(to_string(style)));
    }
  }
  o.pass = gates.failed == 0 && circuits.failed == 0;
  o.detail = "gates " + std::to_string(gates.runs - gates.failed) + "/" +
             std::to_string(gates.runs) + ", corpus " +
             std::to_string(circuits.runs - circuits.failed) + "/" +
             std::to_string(circuits.runs) + " (" + std::to_string(corpus.size()) +
             " expressions x 2 styles, max depth " + std::to_string(max_depth) + ")";
  if (!gates.first_failure.empty()) o.detail += "; first gate failure " + gates.first_failure;
  if (!circuits.first_failure.empty())
    o.detail += "; first corpus failure " + circuits.first_failure;
  return o;
}

// -- 5 ----------------------------------------------------------------------

Outcome synthesis_soundness() {
  Outcome o;
  const std::vector<std::string> abc{"a", "b", "c"};
  const auto corpus = expression_corpus(3, abc);
  const ThresholdConfig th;
  std::size_t checks = 0, mismatches = 0;
  for (auto style : {SynthesisStyle::direct, SynthesisStyle::nand_only})
    for (const auto& e : corpus) {
      const auto n = synthesize(e, style, abc);
      for (std::uint32_t r = 0; r < 8; ++r) {
        const auto a = row_assignment(abc, r);
        const double x = equilibrium_outputs(n, a).at("out");
        ++checks;
        if (threshold(x, th) != from_bit(eval_expr(e, a))) {
          if (mismatches++ == 0) o.detail = "; first mismatch " + e.to_string();
        }
      }
    }
  o.pass = mismatches == 0;
  o.detail = std::to_string(checks) + " rows, " + std::to_string(mismatches) + " mismatches" +
             o.detail;
  return o;
}

// -- 6 ----------------------------------------------------------------------

Outcome latch() {
  Outcome o;
  const auto n = build_rs_latch();
  const double settle = netlist_settle_bound(n, kappa);
  const double t1 = 4.0 * settle, hold = 12.0 * settle, dt = 0.25;
  struct Program {
    const char* name;
    bool x1a, x2a;
  };
  bool reached[2] = {false, false};
  for (const Program p : {Program{"set", true, true}, Program{"reset", false, false}}) {
    Waveforms w{{"X1", program({{0, double(p.x1a)}, {t1, 0.0}})},
                {"X2", program({{0, double(p.x2a)}, {t1, 1.0}})}};
    const auto ct = simulate_circuit(n, w, t1 + hold, dt);
    audit.add(ct.trace);
    const bool rail = latch_reference({{p.x1a, p.x2a}, {false, true}}, false).back();
    const auto& q = ct.outputs.at("Q");
    double worst = 0.0, held_from = -1.0;
    for (std::size_t k = 0; k < q.size(); ++k) {
      const double t = ct.trace.times[k];
      if (t < t1) continue;
      const double err = std::abs(q[k] - (rail ? 1.0 : 0.0));
      worst = std::max(worst, err);
      if (err >= kappa) held_from = -1.0;
      else if (held_from < 0) held_from = t;
    }
    const double held = held_from < 0 ? 0.0 : ct.trace.times.back() - held_from;
    const bool ok = worst < kappa && held >= 10.0 * settle;
    reached[rail] = reached[rail] || ok;
    o.pass = o.pass && ok;
    o.detail += std::string(p.name) + "->hold Q=" + f(q.back()) + " (ref " + (rail ? "1" : "0") +
                ", held " + f(held / settle, "%.1f") + "x settle, max err " + f(worst) + "); ";
  }
  o.pass = o.pass && reached[0] && reached[1];

  // Input corners outside the set/reset/hold programs: report only.
  std::vector<std::string> notes;
  for (auto [x1a, x2a] : {std::pair{true, false}, std::pair{false, true}}) {
    for (bool init : {false, true}) {
      auto m = n;
      for (auto& g : m.gates)
        if (g.id == "not_q") g.initial = init ? 1.0 : 0.0;
        else if (g.id == "not_qb") g.initial = init ? 0.0 : 1.0;
      Waveforms w{{"X1", program({{0, double(x1a)}, {t1, 0.0}})},
                  {"X2", program({{0, double(x2a)}, {t1, 1.0}})}};
      const auto ct = simulate_circuit(m, w, t1 + hold, dt);
      audit.add(ct.trace);
      const bool ref = latch_reference({{x1a, x2a}, {false, true}}, init).back();
      const double q = ct.outputs.at("Q").back();
      if (std::abs(q - (ref ? 1.0 : 0.0)) >= kappa)
        notes.push_back(std::string("(") + (x1a ? "1" : "0") + "," + (x2a ? "1" : "0") +
                        ")->hold from Q0=" + (init ? "1" : "0") + " ends Q=" + f(q) +
                        ", recurrence " + (ref ? "1" : "0"));
    }
  }
  o.detail += notes.empty() ? "no divergence in other corners"
                            : "divergence (reported): " + notes.front();
  for (std::size_t i = 1; i < notes.size(); ++i) o.detail += "; " + notes[i];
  return o;
}

// -- 7 ----------------------------------------------------------------------

Outcome conservation() {
  Outcome o;
  o.pass = audit.traces > 0 && audit.worst_sum <= 1e-9 && audit.lowest >= 0.0 &&
           audit.highest <= 1.0;
  o.detail = std::to_string(audit.traces) + " traces, " + std::to_string(audit.samples) +
             " samples, max |S+S'-1| = " + f(audit.worst_sum, "%.3g") + ", range [" +
             f(audit.lowest, "%.3g") + ", " + f(audit.highest, "%.6g") + "]";
  return o;
}

// -- 8 ----------------------------------------------------------------------

Outcome monotonicity() {
  Outcome o;
  std::size_t pairs = 0, violations = 0;
  std::vector<double> grid(21);
  for (int i = 0; i <= 20; ++i) grid[i] = i / 20.0;

  std::vector<NotGateParams> nots{NotGateParams{}};
  for (const auto& p : random_not_sets()) nots.push_back(p);
  for (const auto& p : nots)
    for (int i = 0; i < 20; ++i) {
      ++pairs;
      if (!(equilibrium_not(p, grid[i + 1]) < equilibrium_not(p, grid[i]))) ++violations;
    }

  for (const auto& p : {TwoInputGateParams::or_defaults(), TwoInputGateParams::and_defaults()})
    for (int i = 0; i <= 20; ++i)
      for (int j = 0; j < 20; ++j) {
        pairs += 2;
        if (equilibrium_two_input(p, grid[j + 1], grid[i]) < equilibrium_two_input(p, grid[j], grid[i]))
          ++violations;
        if (equilibrium_two_input(p, grid[i], grid[j + 1]) < equilibrium_two_input(p, grid[i], grid[j]))
          ++violations;
      }
  o.pass = violations == 0;
  o.detail = std::to_string(pairs) + " grid steps, " + std::to_string(violations) + " violations";
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds, 0 for none
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {1, "truth tables", 1.0, truth_tables},
      {2, "forward settle within t_plus", 30.0, forward_bound},
      {3, "t_minus formula and domain flag", 0.0, minus_domain},
      {4, "sequential mapping on gates and corpus", 300.0, sequential_mapping},
      {5, "synthesis soundness", 0.0, synthesis_soundness},
      {6, "RS latch", 0.0, latch},
      {7, "conservation and bounds", 0.0, conservation},
      {8, "equilibrium monotonicity", 0.0, monotonicity},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget > 0 && secs >= c.budget) {
      o.pass = false;
      o.detail += "; over the " + f(c.budget, "%.0f") + " s budget";
    }
    all = all && o.pass;
    std::printf("criterion %d %-40s %s (%.2f s) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                secs, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
