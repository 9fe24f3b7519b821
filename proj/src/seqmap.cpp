#include "enzlogic/seqmap.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <ostream>

#include "enzlogic/errors.hpp"

namespace enzlogic {

namespace {

void require_kappa(double kappa) {
  if (!(kappa > 0.0 && kappa < 1.0)) throw DomainError("kappa must lie in (0,1)");
}

}  // namespace

Verdict check(const std::vector<double>& times, const std::vector<double>& output,
              const std::vector<double>& reference, const SeqMapSpec& spec) {
  require_kappa(spec.kappa);
  if (output.size() != times.size() || reference.size() != times.size())
    throw DomainError("output, reference and time grid differ in length");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw DomainError("time grid must be strictly increasing");
  if (!(spec.tau > 0.0)) throw DomainError("tau must be positive");
  if (times.size() >= 2) {
    const double step = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    if (spec.tau < step * (1.0 - 1e-9)) throw DomainError("tau is shorter than one sample step");
  }

  Verdict v;
  v.samples = times.size();
  const double slack = 1e-9 * std::max(1.0, spec.tau);
  std::size_t j = 0;
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double target = times[k] + spec.tau - slack;
    j = std::max(j, k);
    while (j < times.size() && times[j] < target) ++j;
    if (j == times.size()) {
      ++v.unchecked;
      continue;
    }
    ++v.checked;
    const double err = std::abs(output[k] - reference[k]);
    if (!(err > spec.kappa)) continue;
    ++v.deviations;
    const double after = std::abs(output[j] - reference[j]);
    if (!(after < spec.kappa)) v.violations.push_back({times[k], err, after});
  }
  v.pass = v.violations.empty();
  return v;
}

void write_report(std::ostream& os, const Verdict& v, const SeqMapSpec& spec) {
  char buf[160];
  os << (v.pass ? "PASS" : "FAIL") << '\n';
  std::snprintf(buf, sizeof buf,
                "samples=%zu checked=%zu unchecked=%zu deviations=%zu violations=%zu kappa=%.6g "
                "tau=%.6g\n",
                v.samples, v.checked, v.unchecked, v.deviations, v.violations.size(), spec.kappa,
                spec.tau);
  os << buf;
  for (const auto& x : v.violations) {
    std::snprintf(buf, sizeof buf, "t=%.6g err=%.6g err_after_tau=%.6g\n", x.t, x.err,
                  x.err_after_tau);
    os << buf;
  }
}

double t_plus_bound(const NotGateParams& p, double kappa) {
  require_kappa(kappa);
  require_well_formed(p);
  return -(p.bias.k_m + 1.0) / p.v_bias() * std::log(kappa);
}

std::optional<double> t_minus_bound(const NotGateParams& p, double kappa) {
  require_kappa(kappa);
  require_well_formed(p);
  const double k = p.bias.k_m;
  const double arg = kappa - (1.0 + k) * p.v_bias();
  if (!(arg > 0.0)) return std::nullopt;
  return -std::log(arg) / (1.0 + k);
}

NotGateBounds not_gate_bounds(const NotGateParams& p, double kappa, bool fallback) {
  NotGateBounds b;
  b.t_plus = t_plus_bound(p, kappa);
  b.t_minus = t_minus_bound(p, kappa);
  b.t_minus_domain_violated = !b.t_minus.has_value();
  b.t_max = b.t_plus;
  if (b.t_minus) {
    b.t_max = std::max(b.t_max, *b.t_minus);
  } else if (fallback) {
    b.t_minus_empirical = gate_settle_time(GateInstance::make_not("n", p), {1.0}, kappa);
    b.t_max = std::max(b.t_max, *b.t_minus_empirical);
  }
  return b;
}

double empirical_settle_time(const ReactionNetwork& network, SpeciesRef output, double target,
                             double kappa, double horizon, const IntegratorOptions& options) {
  require_kappa(kappa);
  if (!(horizon > 0.0)) throw DomainError("settle horizon must be positive");
  constexpr int coarse_samples = 4000;
  constexpr double resolution = 1e-3;
  const auto tr = integrate(network, 0.0, horizon, horizon / coarse_samples, options);
  auto err_at = [&](std::span<const double> y) {
    return std::abs(species_concentration(output, y) - target);
  };
  std::optional<std::size_t> last_out;
  for (std::size_t k = 0; k < tr.size(); ++k)
    if (!(err_at(tr.state_at(k)) < kappa)) last_out = k;
  if (!last_out) return 0.0;
  if (*last_out + 1 >= tr.size()) {
    char buf[120];
    std::snprintf(buf, sizeof buf, "output not within %.3g of %.6g by horizon %.6g", kappa, target,
                  horizon);
    throw SettleError(buf);
  }
  // Refine inside the last coarse interval, restarting from its left end.
  ReactionNetwork from = network;
  const auto y0 = tr.state_at(*last_out);
  for (std::size_t p = 0; p < from.pairs.size(); ++p) from.pairs[p].s = y0[p];
  double lo = tr.times[*last_out], hi = tr.times[*last_out + 1];
  while (hi - lo > resolution) {
    const double mid = 0.5 * (lo + hi);
    const auto y = integrate_to(from, tr.times[*last_out], mid, options);
    (err_at(y) < kappa ? hi : lo) = mid;
  }
  return hi;
}

double closed_form_scale(const GateInstance& gate, double kappa) {
  require_kappa(kappa);
  double km = 0.0, vp = 0.0;
  if (const auto* np = std::get_if<NotGateParams>(&gate.params)) {
    require_well_formed(*np);
    km = np->bias.k_m;
    vp = np->v_bias();
  } else {
    const auto& tp = std::get<TwoInputGateParams>(gate.params);
    require_well_formed(tp);
    km = tp.bias.k_m;
    vp = tp.v_bias();
  }
  return -(km + 1.0) / vp * std::log(kappa);
}

double gate_settle_time(const GateInstance& gate, const std::vector<double>& inputs, double kappa,
                        std::optional<double> horizon) {
  if (inputs.size() != gate.arity()) throw DomainError("wrong number of gate inputs");
  Netlist n;
  GateInstance g = gate;
  g.id = "g";
  g.names = {};
  double target = 0.0;
  if (const auto* np = std::get_if<NotGateParams>(&g.params))
    target = equilibrium_not(*np, inputs[0]);
  else
    target = equilibrium_two_input(std::get<TwoInputGateParams>(g.params), inputs[0], inputs[1]);
  // Settling is measured against the ideal rail, starting from the far one.
  target = target < 0.5 ? 0.0 : 1.0;
  const double out0 = 1.0 - target;
  g.initial = g.output_slot() == Slot::substrate ? out0 : 1.0 - out0;
  Waveforms w;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const std::string in = "in" + std::to_string(i);
    n.inputs.push_back({in, false});
    n.wires.push_back({in, g.id, i});
    w[in] = Schedule::constant(inputs[i]);
  }
  n.gates.push_back(g);
  const auto el = elaborate(n, w);
  const double h = horizon.value_or(100.0 * closed_form_scale(gate, kappa));
  return empirical_settle_time(el.network, el.gate_output.at(g.id), target, kappa, h);
}

double gate_settle_bound(const GateInstance& gate, double kappa) {
  static std::mutex mu;
  static std::map<std::string, double> cache;
  GateInstance key_gate = gate;
  key_gate.id = "g";
  key_gate.names = {};
  key_gate.initial = 0.5;
  Netlist key_net;
  key_net.gates.push_back(key_gate);
  char kbuf[32];
  std::snprintf(kbuf, sizeof kbuf, " %.17g", kappa);
  const std::string key = dump_netlist(key_net) + kbuf;
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  double bound = 0.0;
  if (const auto* np = std::get_if<NotGateParams>(&gate.params)) {
    const auto b = not_gate_bounds(*np, kappa);
    bound = std::max({b.t_max, gate_settle_time(gate, {0.0}, kappa),
                      gate_settle_time(gate, {1.0}, kappa)});
  } else {
    for (double a : {0.0, 1.0})
      for (double b : {0.0, 1.0}) bound = std::max(bound, gate_settle_time(gate, {a, b}, kappa));
  }
  std::lock_guard<std::mutex> lock(mu);
  cache[key] = bound;
  return bound;
}

double netlist_settle_bound(const Netlist& netlist, double kappa) {
  double bound = 0.0;
  for (const auto& g : netlist.gates) bound = std::max(bound, gate_settle_bound(g, kappa));
  return bound;
}

std::vector<double> reference_signal(const Netlist& netlist, const Waveforms& waveforms,
                                     const std::vector<double>& times, const std::string& output,
                                     double delay, bool latch_initial) {
  if (!(delay >= 0.0)) throw DomainError("delay must be non-negative");
  netlist.validate();
  for (const auto& in : netlist.inputs)
    if (!waveforms.count(in.name)) throw ScheduleError("no waveform for input '" + in.name + "'");
  const auto names = netlist.input_names();
  auto bit = [&](const std::string& in, double t) {
    const auto& s = waveforms.at(in);
    return s.at(std::max(t, s.start())) >= 0.5;
  };
  std::vector<double> out;
  out.reserve(times.size());

  if (!netlist.sequential) {
    const double shift = delay * netlist.output_depth(output);
    const auto tt_size = std::size_t{1} << names.size();
    if (names.size() > 16) throw DomainError("too many inputs for a reference table");
    std::vector<signed char> table(tt_size, -1);
    for (double t : times) {
      const double u = t - shift;
      std::size_t row = 0;
      for (const auto& in : names) row = (row << 1) | (bit(in, u) ? 1u : 0u);
      if (table[row] < 0) {
        Assignment a;
        for (std::size_t i = 0; i < names.size(); ++i) a[names[i]] = (row >> (names.size() - 1 - i)) & 1u;
        table[row] = ideal_outputs(netlist, a).at(output) ? 1 : 0;
      }
      out.push_back(table[row]);
    }
    return out;
  }

  if (names.size() < 2) throw DomainError("sequential reference needs two inputs");
  const double shift = 2.0 * delay;
  const double t_last = times.empty() ? 0.0 : times.back();
  Waveforms w{{names[0], waveforms.at(names[0])}, {names[1], waveforms.at(names[1])}};
  std::vector<double> starts{0.0};
  for (double e : edge_times(w, 0.0, t_last)) starts.push_back(e);
  std::vector<std::pair<bool, bool>> seq;
  for (double s : starts) seq.emplace_back(bit(names[0], s), bit(names[1], s));
  const auto f = latch_reference(seq, latch_initial);
  for (double t : times) {
    const double u = t - shift;
    const auto seg = static_cast<std::size_t>(std::upper_bound(starts.begin(), starts.end(), u) -
                                              starts.begin());
    out.push_back(seg == 0 ? f.front() : f[seg - 1]);
  }
  return out;
}

}  // namespace enzlogic
