#include "enzlogic/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <functional>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "enzlogic/errors.hpp"

namespace enzlogic {

namespace {

bool is_identifier(const std::string& s) {
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s[0]))) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isalnum(c) || c == '_'; });
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string_view to_string(GateKind kind) {
  switch (kind) {
    case GateKind::not_gate: return "NOT";
    case GateKind::or_gate: return "OR";
    case GateKind::and_gate: return "AND";
  }
  return "?";
}

GateKind GateInstance::kind() const {
  if (std::holds_alternative<NotGateParams>(params)) return GateKind::not_gate;
  return std::get<TwoInputGateParams>(params).mode == TwoInputMode::or_gate ? GateKind::or_gate
                                                                             : GateKind::and_gate;
}

GateNames GateInstance::resolved_names() const {
  GateNames n = names;
  auto fill = [&](std::string& s, const char* suffix) {
    if (s.empty()) s = id + suffix;
  };
  fill(n.substrate, "_S");
  fill(n.product, "_Sp");
  if (kind() == GateKind::not_gate) {
    fill(n.input_a, "_E1");
    n.input_b.clear();
  } else {
    fill(n.input_a, "_E2");
    fill(n.input_b, "_E3");
  }
  fill(n.bias, "_P");
  return n;
}

GateInstance GateInstance::make_not(std::string id, NotGateParams p) {
  return GateInstance{std::move(id), p, 0.5, {}};
}

GateInstance GateInstance::make_or(std::string id, TwoInputGateParams p) {
  p.mode = TwoInputMode::or_gate;
  return GateInstance{std::move(id), p, 0.5, {}};
}

GateInstance GateInstance::make_and(std::string id, TwoInputGateParams p) {
  p.mode = TwoInputMode::and_gate;
  return GateInstance{std::move(id), p, 0.5, {}};
}

// ---------------------------------------------------------------------------
// Netlist structure

const GateInstance& Netlist::gate(const std::string& id) const {
  for (const auto& g : gates)
    if (g.id == id) return g;
  throw NetlistError("no gate '" + id + "'");
}

const PrimaryInput* Netlist::input(const std::string& name) const {
  for (const auto& in : inputs)
    if (in.name == name) return &in;
  return nullptr;
}

const Wire* Netlist::driver(const std::string& g, std::size_t slot) const {
  for (const auto& w : wires)
    if (w.gate == g && w.slot == slot) return &w;
  return nullptr;
}

std::vector<std::string> Netlist::input_names() const {
  std::vector<std::string> out;
  for (const auto& in : inputs) out.push_back(in.name);
  return out;
}

std::vector<std::string> Netlist::output_names() const {
  std::vector<std::string> out;
  for (const auto& o : outputs) out.push_back(o.name);
  return out;
}

std::vector<GateKind> Netlist::gate_kinds() const {
  std::set<GateKind> kinds;
  for (const auto& g : gates) kinds.insert(g.kind());
  return {kinds.begin(), kinds.end()};
}

void Netlist::validate() const {
  std::set<std::string> names;
  auto claim = [&](const std::string& n, const char* what) {
    if (!is_identifier(n)) throw NetlistError(std::string(what) + " name '" + n + "' is not an identifier");
    if (!names.insert(n).second) throw NetlistError("name '" + n + "' used twice");
  };
  for (const auto& in : inputs) claim(in.name, "input");
  for (const auto& g : gates) {
    claim(g.id, "gate");
    if (!(g.initial >= 0.0 && g.initial <= 1.0))
      throw NetlistError("initial concentration of gate '" + g.id + "' outside [0,1]");
    const auto n = g.resolved_names();
    for (const auto* s : {&n.substrate, &n.product, &n.input_a, &n.bias})
      if (!is_identifier(*s)) throw NetlistError("species name '" + *s + "' is not an identifier");
    if (g.arity() == 2 && !is_identifier(n.input_b))
      throw NetlistError("species name '" + n.input_b + "' is not an identifier");
  }
  std::map<std::pair<std::string, std::size_t>, int> driven;
  for (const auto& w : wires) {
    if (!input(w.source) && std::none_of(gates.begin(), gates.end(),
                                         [&](const GateInstance& g) { return g.id == w.source; }))
      throw NetlistError("wire source '" + w.source + "' does not exist");
    const auto& g = gate(w.gate);
    if (w.slot >= g.arity())
      throw NetlistError("gate '" + w.gate + "' has no input slot " + std::to_string(w.slot));
    if (++driven[{w.gate, w.slot}] > 1)
      throw NetlistError("slot " + w.gate + "." + std::to_string(w.slot) + " driven twice");
  }
  for (const auto& g : gates)
    for (std::size_t s = 0; s < g.arity(); ++s)
      if (!driven.count({g.id, s}))
        throw NetlistError("slot " + g.id + "." + std::to_string(s) + " has no driver");
  std::set<std::string> out_names;
  for (const auto& o : outputs) {
    if (!is_identifier(o.name)) throw NetlistError("output name '" + o.name + "' is not an identifier");
    if (!out_names.insert(o.name).second) throw NetlistError("output '" + o.name + "' declared twice");
    if (!names.count(o.source)) throw NetlistError("output source '" + o.source + "' does not exist");
  }
  if (!sequential && has_cycle())
    throw NetlistError("netlist has a feedback cycle but is not declared sequential");
}

namespace {

std::map<std::string, std::size_t> gate_index(const Netlist& n) {
  std::map<std::string, std::size_t> idx;
  for (std::size_t i = 0; i < n.gates.size(); ++i) idx[n.gates[i].id] = i;
  return idx;
}

}  // namespace

std::vector<std::size_t> Netlist::topological_order() const {
  const auto idx = gate_index(*this);
  std::vector<std::vector<std::size_t>> succ(gates.size());
  std::vector<int> indeg(gates.size(), 0);
  for (const auto& w : wires) {
    const auto s = idx.find(w.source);
    const auto d = idx.find(w.gate);
    if (s == idx.end() || d == idx.end()) continue;
    succ[s->second].push_back(d->second);
    ++indeg[d->second];
  }
  std::vector<std::size_t> order, ready;
  for (std::size_t i = gates.size(); i-- > 0;)
    if (indeg[i] == 0) ready.push_back(i);
  while (!ready.empty()) {
    const auto i = ready.back();
    ready.pop_back();
    order.push_back(i);
    for (auto j : succ[i])
      if (--indeg[j] == 0) ready.push_back(j);
  }
  if (order.size() != gates.size()) throw NetlistError("netlist contains a cycle");
  return order;
}

bool Netlist::has_cycle() const {
  try {
    topological_order();
    return false;
  } catch (const NetlistError&) {
    return true;
  }
}

std::map<std::string, int> Netlist::gate_levels() const {
  std::map<std::string, int> level;
  for (auto i : topological_order()) {
    const auto& g = gates[i];
    int l = 0;
    for (const auto& w : wires)
      if (w.gate == g.id && level.count(w.source)) l = std::max(l, level[w.source]);
    level[g.id] = l + 1;
  }
  return level;
}

int Netlist::output_depth(const std::string& output) const {
  for (const auto& o : outputs)
    if (o.name == output) {
      if (input(o.source)) return 0;
      return gate_levels().at(o.source);
    }
  throw NetlistError("no output '" + output + "'");
}

int Netlist::depth() const {
  int d = 0;
  for (const auto& o : outputs) d = std::max(d, output_depth(o.name));
  return d;
}

// ---------------------------------------------------------------------------
// Synthesis

std::string_view to_string(SynthesisStyle s) {
  return s == SynthesisStyle::direct ? "direct" : "nand_only";
}

SynthesisStyle parse_style(std::string_view s) {
  if (s == "direct") return SynthesisStyle::direct;
  if (s == "nand_only" || s == "nand-only" || s == "nand") return SynthesisStyle::nand_only;
  throw DomainError("unknown synthesis style '" + std::string(s) + "'");
}

namespace {

class Builder {
 public:
  Netlist net;

  std::string add_not(const std::string& x) {
    auto g = GateInstance::make_not(fresh());
    net.wires.push_back({x, g.id, 0});
    net.gates.push_back(g);
    return g.id;
  }

  std::string add_two(GateKind kind, const std::string& a, const std::string& b) {
    auto g = kind == GateKind::and_gate ? GateInstance::make_and(fresh())
                                        : GateInstance::make_or(fresh());
    net.wires.push_back({a, g.id, 0});
    net.wires.push_back({b, g.id, 1});
    net.gates.push_back(g);
    return g.id;
  }

  std::string nand(const std::string& a, const std::string& b) {
    return add_not(add_two(GateKind::and_gate, a, b));
  }

  std::string direct(const BooleanExpr& e) {
    switch (e.op()) {
      case BooleanExpr::Op::var: return e.name();
      case BooleanExpr::Op::not_op: return add_not(direct(e.lhs()));
      case BooleanExpr::Op::and_op: {
        const auto a = direct(e.lhs());
        return add_two(GateKind::and_gate, a, direct(e.rhs()));
      }
      case BooleanExpr::Op::or_op: {
        const auto a = direct(e.lhs());
        return add_two(GateKind::or_gate, a, direct(e.rhs()));
      }
    }
    return {};
  }

  /// Signal carrying e, or NOT e when `negated`, built from NANDs only.
  std::string nand_only(const BooleanExpr& e, bool negated) {
    switch (e.op()) {
      case BooleanExpr::Op::var: return negated ? nand(e.name(), e.name()) : e.name();
      case BooleanExpr::Op::not_op: return nand_only(e.lhs(), !negated);
      case BooleanExpr::Op::and_op: {
        const auto a = nand_only(e.lhs(), false);
        const auto n = nand(a, nand_only(e.rhs(), false));
        return negated ? n : nand(n, n);
      }
      case BooleanExpr::Op::or_op: {
        const auto a = nand_only(e.lhs(), true);
        const auto o = nand(a, nand_only(e.rhs(), true));
        return negated ? nand(o, o) : o;
      }
    }
    return {};
  }

 private:
  std::string fresh() { return "g" + std::to_string(++counter_); }
  int counter_ = 0;
};

}  // namespace

Netlist synthesize(const BooleanExpr& expr, SynthesisStyle style,
                   const std::vector<std::string>& inputs, const std::string& output) {
  for (const auto& v : expr.variables())
    if (std::find(inputs.begin(), inputs.end(), v) == inputs.end())
      throw NetlistError("expression uses undeclared variable '" + v + "'");
  Builder b;
  for (const auto& in : inputs) b.net.inputs.push_back({in, false});
  const auto src = style == SynthesisStyle::direct ? b.direct(expr) : b.nand_only(expr, false);
  b.net.outputs.push_back({output, src});
  b.net.validate();
  return std::move(b.net);
}

Netlist build_rs_latch() {
  Netlist n;
  n.sequential = true;
  n.inputs = {{"X1", true}, {"X2", false}};
  auto and_q = GateInstance::make_and("and_q");
  auto not_q = GateInstance::make_not("not_q");
  not_q.names.substrate = "Q";
  not_q.names.product = "Qp";
  auto and_qb = GateInstance::make_and("and_qb");
  auto not_qb = GateInstance::make_not("not_qb");
  not_qb.names.substrate = "Qb";
  not_qb.names.product = "Qbp";
  n.gates = {and_q, not_q, and_qb, not_qb};
  n.wires = {
      {"X1", "and_q", 0},     {"not_qb", "and_q", 1}, {"and_q", "not_q", 0},
      {"X2", "and_qb", 0},    {"not_q", "and_qb", 1}, {"and_qb", "not_qb", 0},
  };
  n.outputs = {{"Q", "not_q"}};
  return n;
}

// ---------------------------------------------------------------------------
// Elaboration and simulation

Elaboration elaborate(const Netlist& netlist, const Waveforms& waveforms) {
  netlist.validate();
  Elaboration out;
  auto& net = out.network;
  for (const auto& g : netlist.gates) {
    const auto names = g.resolved_names();
    const auto p = net.add_pair(names.substrate, names.product, g.initial);
    out.gate_pair[g.id] = p;
    out.gate_output[g.id] = {p, g.output_slot()};
  }
  auto input_enzyme = [&](const GateInstance& g, std::size_t slot, const std::string& name,
                          const EnzymeKinetics& k) {
    const auto* w = netlist.driver(g.id, slot);
    if (const auto* in = netlist.input(w->source)) {
      const auto it = waveforms.find(in->name);
      Schedule s = it == waveforms.end() ? Schedule() : it->second;
      if (in->inverted) s = complement(s);
      return net.add_enzyme({name, k.k_cat, k.k_m, std::move(s)});
    }
    const auto e = net.add_enzyme({name, k.k_cat, k.k_m, Schedule()});
    net.couple(e, out.gate_output.at(w->source));
    return e;
  };
  for (const auto& g : netlist.gates) {
    const auto names = g.resolved_names();
    const auto pair = out.gate_pair[g.id];
    if (const auto* np = std::get_if<NotGateParams>(&g.params)) {
      const auto e1 = input_enzyme(g, 0, names.input_a, np->input);
      const auto p1 = net.add_enzyme(
          {names.bias, np->bias.k_cat, np->bias.k_m, Schedule::constant(np->bias_conc)});
      net.add_conversion(pair, Slot::substrate, e1);
      net.add_conversion(pair, Slot::product, p1);
    } else {
      const auto& tp = std::get<TwoInputGateParams>(g.params);
      const auto e2 = input_enzyme(g, 0, names.input_a, tp.input_a);
      const auto e3 = input_enzyme(g, 1, names.input_b, tp.input_b);
      const auto p2 = net.add_enzyme(
          {names.bias, tp.bias.k_cat, tp.bias.k_m, Schedule::constant(tp.bias_conc)});
      net.add_conversion(pair, Slot::substrate, e2);
      net.add_conversion(pair, Slot::substrate, e3);
      net.add_conversion(pair, Slot::product, p2);
    }
  }
  for (const auto& o : netlist.outputs) {
    if (netlist.input(o.source)) continue;
    const auto ref = out.gate_output.at(o.source);
    const auto& pr = net.pairs[ref.pair];
    out.output_species[o.name] = ref.slot == Slot::substrate ? pr.substrate : pr.product;
  }
  try {
    net.validate();
  } catch (const DomainError& e) {
    throw NetlistError(std::string("elaborated network invalid: ") + e.what());
  }
  return out;
}

CircuitTrace simulate_circuit(const Netlist& netlist, const Waveforms& waveforms, double t_end,
                              double dt_out, const IntegratorOptions& options) {
  for (const auto& in : netlist.inputs) {
    const auto it = waveforms.find(in.name);
    if (it == waveforms.end()) throw ScheduleError("no waveform for input '" + in.name + "'");
    if (!it->second.defined_at(0.0))
      throw ScheduleError("waveform for input '" + in.name + "' undefined at t=0");
  }
  const auto el = elaborate(netlist, waveforms);
  CircuitTrace ct{integrate(el.network, 0.0, t_end, dt_out, options), {}};
  for (const auto& o : netlist.outputs) {
    if (const auto* in = netlist.input(o.source)) {
      const auto& s = waveforms.at(in->name);
      std::vector<double> col;
      col.reserve(ct.trace.size());
      for (double t : ct.trace.times) col.push_back(in->inverted ? 1.0 - s.at(t) : s.at(t));
      ct.outputs[o.name] = std::move(col);
    } else {
      ct.outputs[o.name] = ct.trace.column(el.output_species.at(o.name));
    }
  }
  return ct;
}

namespace {

template <class T, class GateFn>
std::map<std::string, T> propagate(const Netlist& netlist, const Assignment& inputs, GateFn fn) {
  netlist.validate();
  std::map<std::string, T> value;
  for (const auto& in : netlist.inputs) {
    const auto it = inputs.find(in.name);
    if (it == inputs.end()) throw DomainError("no value for input '" + in.name + "'");
    const bool bit = it->second != in.inverted;
    value[in.name] = static_cast<T>(bit);
  }
  for (auto i : netlist.topological_order()) {
    const auto& g = netlist.gates[i];
    std::vector<T> args;
    for (std::size_t s = 0; s < g.arity(); ++s) args.push_back(value.at(netlist.driver(g.id, s)->source));
    value[g.id] = fn(g, args);
  }
  std::map<std::string, T> out;
  for (const auto& o : netlist.outputs) out[o.name] = value.at(o.source);
  return out;
}

}  // namespace

std::map<std::string, double> equilibrium_outputs(const Netlist& netlist, const Assignment& inputs) {
  return propagate<double>(netlist, inputs, [](const GateInstance& g, const std::vector<double>& a) {
    if (const auto* np = std::get_if<NotGateParams>(&g.params)) return equilibrium_not(*np, a[0]);
    return equilibrium_two_input(std::get<TwoInputGateParams>(g.params), a[0], a[1]);
  });
}

std::map<std::string, bool> ideal_outputs(const Netlist& netlist, const Assignment& inputs) {
  return propagate<bool>(netlist, inputs, [](const GateInstance& g, const std::vector<bool>& a) {
    switch (g.kind()) {
      case GateKind::not_gate: return !a[0];
      case GateKind::or_gate: return a[0] || a[1];
      case GateKind::and_gate: return a[0] && a[1];
    }
    return false;
  });
}

// ---------------------------------------------------------------------------
// Text format

void dump_netlist(std::ostream& os, const Netlist& n) {
  for (const auto& in : n.inputs) os << "INPUT " << in.name << (in.inverted ? " inverted" : "") << '\n';
  auto kv = [&](const char* k, double v) { os << ' ' << k << '=' << fmt_double(v); };
  auto name = [&](const char* k, const std::string& v) {
    if (!v.empty()) os << ' ' << k << '=' << v;
  };
  for (const auto& g : n.gates) {
    os << "GATE " << g.id << ' ' << to_string(g.kind());
    if (const auto* p = std::get_if<NotGateParams>(&g.params)) {
      kv("e1.kcat", p->input.k_cat);
      kv("e1.km", p->input.k_m);
      kv("p.kcat", p->bias.k_cat);
      kv("p.km", p->bias.k_m);
      kv("p.conc", p->bias_conc);
      kv("init", g.initial);
      name("S", g.names.substrate);
      name("Sp", g.names.product);
      name("E1", g.names.input_a);
      name("P", g.names.bias);
    } else {
      const auto& t = std::get<TwoInputGateParams>(g.params);
      kv("e2.kcat", t.input_a.k_cat);
      kv("e2.km", t.input_a.k_m);
      kv("e3.kcat", t.input_b.k_cat);
      kv("e3.km", t.input_b.k_m);
      kv("p.kcat", t.bias.k_cat);
      kv("p.km", t.bias.k_m);
      kv("p.conc", t.bias_conc);
      kv("init", g.initial);
      name("S", g.names.substrate);
      name("Sp", g.names.product);
      name("E2", g.names.input_a);
      name("E3", g.names.input_b);
      name("P", g.names.bias);
    }
    os << '\n';
  }
  for (const auto& w : n.wires) os << "WIRE " << w.source << " -> " << w.gate << '.' << w.slot << '\n';
  for (const auto& o : n.outputs) os << "OUTPUT " << o.name << ' ' << o.source << '\n';
  if (n.sequential) os << "SEQUENTIAL\n";
}

std::string dump_netlist(const Netlist& n) {
  std::ostringstream os;
  dump_netlist(os, n);
  return os.str();
}

namespace {

double parse_number(const std::string& s, const std::function<void(const std::string&)>& fail) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    fail("bad number '" + s + "'");
  }
  if (used != s.size()) fail("bad number '" + s + "'");
  return v;
}

}  // namespace

Netlist parse_netlist(std::istream& is) {
  Netlist n;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto fail = [&](const std::string& what) {
      throw NetlistError("netlist line " + std::to_string(lineno) + ": " + what);
    };
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto& kw = tok[0];
    if (kw == "INPUT") {
      if (tok.size() == 2) {
        n.inputs.push_back({tok[1], false});
      } else if (tok.size() == 3 && tok[2] == "inverted") {
        n.inputs.push_back({tok[1], true});
      } else {
        fail("expected 'INPUT <name> [inverted]'");
      }
    } else if (kw == "OUTPUT") {
      if (tok.size() != 3) fail("expected 'OUTPUT <name> <source>'");
      n.outputs.push_back({tok[1], tok[2]});
    } else if (kw == "SEQUENTIAL") {
      if (tok.size() != 1) fail("SEQUENTIAL takes no arguments");
      n.sequential = true;
    } else if (kw == "WIRE") {
      if (tok.size() != 4 || tok[2] != "->") fail("expected 'WIRE <source> -> <gate>.<slot>'");
      const auto dot = tok[3].rfind('.');
      if (dot == std::string::npos || dot + 2 != tok[3].size() || (tok[3][dot + 1] != '0' && tok[3][dot + 1] != '1'))
        fail("wire destination must be <gate>.0 or <gate>.1");
      n.wires.push_back({tok[1], tok[3].substr(0, dot), static_cast<std::size_t>(tok[3][dot + 1] - '0')});
    } else if (kw == "GATE") {
      if (tok.size() < 3) fail("expected 'GATE <id> <NOT|OR|AND> key=value...'");
      GateInstance g;
      g.id = tok[1];
      const auto& kind = tok[2];
      NotGateParams np;
      TwoInputGateParams tp;
      if (kind == "NOT") {
      } else if (kind == "OR") {
        tp = TwoInputGateParams::or_defaults();
      } else if (kind == "AND") {
        tp = TwoInputGateParams::and_defaults();
      } else {
        fail("unknown gate kind '" + kind + "'");
      }
      const bool is_not = kind == "NOT";
      std::map<std::string, double*> nums;
      std::map<std::string, std::string*> names;
      nums["init"] = &g.initial;
      names["S"] = &g.names.substrate;
      names["Sp"] = &g.names.product;
      names["P"] = &g.names.bias;
      if (is_not) {
        nums["e1.kcat"] = &np.input.k_cat;
        nums["e1.km"] = &np.input.k_m;
        nums["p.kcat"] = &np.bias.k_cat;
        nums["p.km"] = &np.bias.k_m;
        nums["p.conc"] = &np.bias_conc;
        names["E1"] = &g.names.input_a;
      } else {
        nums["e2.kcat"] = &tp.input_a.k_cat;
        nums["e2.km"] = &tp.input_a.k_m;
        nums["e3.kcat"] = &tp.input_b.k_cat;
        nums["e3.km"] = &tp.input_b.k_m;
        nums["p.kcat"] = &tp.bias.k_cat;
        nums["p.km"] = &tp.bias.k_m;
        nums["p.conc"] = &tp.bias_conc;
        names["E2"] = &g.names.input_a;
        names["E3"] = &g.names.input_b;
      }
      for (std::size_t i = 3; i < tok.size(); ++i) {
        const auto eq = tok[i].find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + tok[i] + "'");
        const auto key = tok[i].substr(0, eq), val = tok[i].substr(eq + 1);
        if (auto it = nums.find(key); it != nums.end()) {
          *it->second = parse_number(val, fail);
        } else if (auto jt = names.find(key); jt != names.end()) {
          *jt->second = val;
        } else {
          fail("unknown key '" + key + "' for " + kind + " gate");
        }
      }
      if (is_not)
        g.params = np;
      else
        g.params = tp;
      n.gates.push_back(std::move(g));
    } else {
      fail("unknown keyword '" + kw + "'");
    }
  }
  n.validate();
  return n;
}

Netlist parse_netlist_text(const std::string& text) {
  std::istringstream is(text);
  return parse_netlist(is);
}

}  // namespace enzlogic
