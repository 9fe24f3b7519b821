#include "enzlogic/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "enzlogic/errors.hpp"
#include "enzlogic/oracle.hpp"
#include "enzlogic/seqmap.hpp"

namespace enzlogic {

namespace {

std::string fmt(double v, const char* spec = "%.6g") {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, v);
  return buf;
}

/// Runs `body`, mapping exceptions onto exit codes.
int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return exit_config;
  } catch (const NetlistError& e) {
    err << "netlist error: " << e.what() << '\n';
    return exit_config;
  } catch (const ScheduleError& e) {
    err << "waveform error: " << e.what() << '\n';
    return exit_config;
  } catch (const DomainError& e) {
    err << "invalid value: " << e.what() << '\n';
    return exit_config;
  } catch (const SettleError& e) {
    err << "did not settle: " << e.what() << '\n';
    return exit_numeric;
  } catch (const IntegrationError& e) {
    err << "integration failed: " << e.what() << '\n';
    return exit_numeric;
  } catch (const SolverError& e) {
    err << "solver failed: " << e.what() << '\n';
    return exit_numeric;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_numeric;
  }
}

const GateInstance& single_not_gate(const ScenarioConfig& cfg) {
  const auto& n = cfg.netlist;
  if (n.gates.size() != 1 || n.gates.front().kind() != GateKind::not_gate)
    throw ConfigError(cfg.source + ": circuit: bounds needs a circuit that is a single NOT gate");
  return n.gates.front();
}

}  // namespace

Waveforms resolve_waveforms(const ScenarioConfig& cfg, std::optional<std::uint64_t> seed) {
  Waveforms w = cfg.waveforms;
  if (!cfg.random) return w;
  std::vector<std::string> missing;
  for (const auto& in : cfg.netlist.input_names())
    if (!w.count(in)) missing.push_back(in);
  if (missing.empty()) return w;
  RandomWaveformSpec spec;
  spec.t_end = cfg.simulation.t_end;
  spec.seed = seed.value_or(cfg.random->seed);
  spec.min_segment = cfg.random->min_segment ? *cfg.random->min_segment : 2.0 * resolve_tau(cfg);
  spec.max_segment = cfg.random->max_segment.value_or(1.5 * spec.min_segment);
  for (auto& [name, s] : random_waveforms(missing, spec)) w[name] = std::move(s);
  return w;
}

double resolve_tau(const ScenarioConfig& cfg) {
  if (cfg.seqmap.tau) return *cfg.seqmap.tau;
  const double settle = netlist_settle_bound(cfg.netlist, cfg.seqmap.kappa);
  if (cfg.netlist.sequential) return static_cast<double>(cfg.netlist.gates.size()) * settle;
  return std::max(1, cfg.netlist.output_depth(cfg.seqmap.output)) * settle;
}

int cmd_simulate(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err,
                 std::optional<std::uint64_t> seed) {
  return guarded(err, [&] {
    const auto w = resolve_waveforms(cfg, seed);
    const auto& s = cfg.simulation;
    const auto ct = simulate_circuit(cfg.netlist, w, s.t_end, s.dt_out, s.integrator);
    write_csv(out, ct.trace);
    return int{exit_pass};
  });
}

int cmd_truth_table(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto& n = cfg.netlist;
    if (n.sequential)
      throw ConfigError(cfg.source + ": circuit: truth-table needs a combinational circuit");
    const auto vars = n.input_names();
    if (vars.size() > 16) throw ConfigError(cfg.source + ": circuit: too many inputs for a table");
    for (const auto& v : vars) out << v << ' ';
    out << "output equilibrium level oracle match\n";
    bool all_ok = true;
    for (std::uint32_t row = 0; row < (1u << vars.size()); ++row) {
      const auto a = row_assignment(vars, row);
      const auto eq = equilibrium_outputs(n, a);
      const auto ideal = ideal_outputs(n, a);
      for (const auto& o : n.outputs) {
        const bool expected = cfg.expression && n.outputs.size() == 1
                                  ? eval_expr(*cfg.expression, a)
                                  : ideal.at(o.name);
        const double x = eq.at(o.name);
        const auto level = threshold(x, cfg.thresholds);
        const bool ok = level == from_bit(expected);
        all_ok = all_ok && ok;
        for (const auto& v : vars) out << (a.at(v) ? '1' : '0') << std::string(v.size(), ' ');
        out << o.name << ' ' << fmt(x, "%.6f") << ' ' << to_string(level) << ' '
            << (expected ? '1' : '0') << ' ' << (ok ? "yes" : "NO") << '\n';
      }
    }
    if (!all_ok) err << "truth table mismatch\n";
    return all_ok ? int{exit_pass} : int{exit_fail};
  });
}

int cmd_check_seqmap(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err,
                     std::optional<std::uint64_t> seed) {
  return guarded(err, [&] {
    const auto& sm = cfg.seqmap;
    if (sm.output.empty()) throw ConfigError(cfg.source + ": seqmap.output: circuit has no outputs");
    const auto w = resolve_waveforms(cfg, seed);
    const SeqMapSpec spec{sm.kappa, resolve_tau(cfg)};
    const auto& s = cfg.simulation;
    const auto ct = simulate_circuit(cfg.netlist, w, s.t_end, s.dt_out, s.integrator);
    const auto& times = ct.trace.times;
    const auto ref =
        reference_signal(cfg.netlist, w, times, sm.output, sm.delay, sm.latch_initial);
    const auto v = check(times, ct.outputs.at(sm.output), ref, spec);
    write_report(out, v, spec);
    if (v.checked == 0)
      err << "warning: no sample has a grid point tau=" << fmt(spec.tau)
          << " later; all " << v.unchecked << " samples unchecked\n";
    return v.pass ? int{exit_pass} : int{exit_fail};
  });
}

int cmd_bounds(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto& g = single_not_gate(cfg);
    const auto& p = std::get<NotGateParams>(g.params);
    const double kappa = cfg.bounds_kappa;
    const auto b = not_gate_bounds(p, kappa);
    out << "kappa=" << fmt(kappa) << '\n';
    out << "t_plus=" << fmt(b.t_plus) << '\n';
    if (b.t_minus) {
      out << "t_minus=" << fmt(*b.t_minus) << '\n';
    } else {
      out << "t_minus=undefined (domain: kappa <= (1+K_m) V_P1 = "
          << fmt((1.0 + p.bias.k_m) * p.v_bias()) << ")\n";
    }
    if (b.t_minus_empirical) out << "t_minus_empirical=" << fmt(*b.t_minus_empirical) << '\n';
    out << "t_max=" << fmt(b.t_max) << '\n';
    auto settle = [&](double e1, const char* label) {
      try {
        out << label << '=' << fmt(gate_settle_time(g, {e1}, kappa)) << '\n';
      } catch (const SettleError& e) {
        out << label << "=unavailable (" << e.what() << ")\n";
      }
    };
    settle(0.0, "settle_rise");
    settle(1.0, "settle_fall");
    return int{exit_pass};
  });
}

int cmd_synth(const std::string& expr, const std::string& style,
              const std::vector<std::string>& vars, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    BooleanExpr e = BooleanExpr::var("_");
    try {
      e = parse_expr(expr);
    } catch (const std::invalid_argument& ex) {
      throw ConfigError(std::string("--expr: ") + ex.what());
    }
    SynthesisStyle s{};
    try {
      s = parse_style(style);
    } catch (const std::exception& ex) {
      throw ConfigError(std::string("--style: ") + ex.what());
    }
    dump_netlist(out, synthesize(e, s, vars.empty() ? e.variables() : vars));
    return int{exit_pass};
  });
}

int run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
  const auto& cmd = opts.command;
  if (cmd == "synth" && opts.configs.empty()) {
    if (opts.expr.empty()) {
      err << "synth: --expr or --config is required\n";
      return exit_config;
    }
    std::ostringstream os;
    const int rc = cmd_synth(opts.expr, opts.style, opts.vars, os, err);
    if (opts.out.empty()) {
      out << os.str();
    } else {
      std::ofstream f(opts.out);
      if (!(f << os.str())) {
        err << "cannot write " << opts.out << '\n';
        return exit_config;
      }
    }
    return rc;
  }
  if (opts.configs.empty()) {
    err << cmd << ": --config is required\n";
    return exit_config;
  }

  struct Result {
    std::ostringstream out, err;
    int rc = 0;
  };
  std::vector<Result> results(opts.configs.size());
  auto one = [&](std::size_t i) {
    auto& r = results[i];
    r.rc = guarded(r.err, [&] {
      const auto cfg = load_config(opts.configs[i]);
      if (cmd == "simulate") return cmd_simulate(cfg, r.out, r.err, opts.seed);
      if (cmd == "truth-table") return cmd_truth_table(cfg, r.out, r.err);
      if (cmd == "check-seqmap") return cmd_check_seqmap(cfg, r.out, r.err, opts.seed);
      if (cmd == "bounds") return cmd_bounds(cfg, r.out, r.err);
      if (cmd == "synth") {
        if (!cfg.expression)
          throw ConfigError(cfg.source + ": circuit: synth needs an expression circuit");
        dump_netlist(r.out, cfg.netlist);
        return int{exit_pass};
      }
      throw ConfigError("unknown command '" + cmd + "'");
    });
  };

  const unsigned jobs = std::max(1u, std::min<unsigned>(opts.jobs, opts.configs.size()));
  if (jobs == 1) {
    for (std::size_t i = 0; i < results.size(); ++i) one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned j = 0; j < jobs; ++j)
      pool.emplace_back([&] {
        for (std::size_t i; (i = next.fetch_add(1)) < results.size();) one(i);
      });
    for (auto& t : pool) t.join();
  }

  int worst = exit_pass;
  const bool many = opts.configs.size() > 1;
  for (std::size_t i = 0; i < results.size(); ++i) {
    auto& r = results[i];
    worst = std::max(worst, r.rc);
    if (many) err << "== " << opts.configs[i] << " (exit " << r.rc << ")\n";
    err << r.err.str();
    if (opts.out.empty()) {
      if (many) out << "== " << opts.configs[i] << '\n';
      out << r.out.str();
      continue;
    }
    std::filesystem::path path(opts.out);
    if (many) {
      std::filesystem::create_directories(path);
      path /= std::filesystem::path(opts.configs[i]).stem().string() +
              (cmd == "simulate" ? ".csv" : ".txt");
    }
    std::ofstream f(path);
    if (!(f << r.out.str())) {
      err << "cannot write " << path.string() << '\n';
      worst = std::max(worst, int{exit_config});
    }
  }
  return worst;
}

}  // namespace enzlogic
