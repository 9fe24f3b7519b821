#include "enzlogic/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include "enzlogic/errors.hpp"

namespace enzlogic {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

class Reader {
 public:
  Reader(std::string source, std::filesystem::path base_dir)
      : source_(std::move(source)), base_dir_(std::move(base_dir)) {}

  [[noreturn]] void fail(const YAML::Mark& mark, const std::string& field,
                         const std::string& what) const {
    std::ostringstream os;
    os << source_;
    if (!mark.is_null()) os << ':' << mark.line + 1 << ':' << mark.column + 1;
    os << ": " << field << ": " << what;
    throw ConfigError(os.str());
  }

  [[noreturn]] void fail(const YAML::Node& node, const std::string& field,
                         const std::string& what) const {
    fail(node.Mark(), field, what);
  }

  void require_map(const YAML::Node& node, const std::string& field) const {
    if (!node.IsMap()) fail(node, field, "expected a mapping");
  }

  void only_keys(const YAML::Node& node, const std::string& field,
                 std::initializer_list<const char*> allowed) const {
    require_map(node, field);
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      const bool ok = std::any_of(allowed.begin(), allowed.end(),
                                  [&](const char* a) { return key == a; });
      if (!ok) fail(kv.first, join(field, key), "unknown key");
    }
  }

  static std::string join(const std::string& a, const std::string& b) {
    return a.empty() ? b : a + "." + b;
  }

  double number(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a number");
    try {
      const double v = node.as<double>();
      if (!std::isfinite(v)) fail(node, field, "must be finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail(node, field, "expected a number, got '" + node.Scalar() + "'");
    }
  }

  double positive(const YAML::Node& node, const std::string& field) const {
    const double v = number(node, field);
    if (!(v > 0.0)) fail(node, field, "must be > 0");
    return v;
  }

  double unit_open(const YAML::Node& node, const std::string& field) const {
    const double v = number(node, field);
    if (!(v > 0.0 && v < 1.0)) fail(node, field, "must lie in (0,1)");
    return v;
  }

  std::uint64_t unsigned_int(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected an unsigned integer");
    try {
      return node.as<std::uint64_t>();
    } catch (const YAML::BadConversion&) {
      fail(node, field, "expected an unsigned integer, got '" + node.Scalar() + "'");
    }
  }

  bool boolean(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected true or false");
    try {
      return node.as<bool>();
    } catch (const YAML::BadConversion&) {
      fail(node, field, "expected true or false, got '" + node.Scalar() + "'");
    }
  }

  std::string text(const YAML::Node& node, const std::string& field) const {
    if (!node.IsScalar()) fail(node, field, "expected a string");
    return node.Scalar();
  }

  bool is_auto(const YAML::Node& node) const {
    return node.IsScalar() && lower(node.Scalar()) == "auto";
  }

  std::filesystem::path resolve(const std::string& path) const {
    std::filesystem::path p(path);
    return p.is_absolute() ? p : base_dir_ / p;
  }

  // -- gate parameters -------------------------------------------------------

  void kinetics(const YAML::Node& node, const std::string& field, EnzymeKinetics& k,
                double* conc) const {
    if (conc)
      only_keys(node, field, {"k_cat", "k_m", "conc"});
    else
      only_keys(node, field, {"k_cat", "k_m"});
    if (node["k_cat"]) k.k_cat = number(node["k_cat"], join(field, "k_cat"));
    if (node["k_m"]) k.k_m = number(node["k_m"], join(field, "k_m"));
    if (conc && node["conc"]) *conc = number(node["conc"], join(field, "conc"));
  }

  /// Enzyme keys are case-insensitive (`E1` or `e1`); `k_m` at this level sets
  /// every enzyme's K_m before per-enzyme overrides.
  GateInstance gate(const YAML::Node& node, const std::string& field, std::string id) const {
    require_map(node, field);
    only_keys(node, field, {"id", "kind", "params", "initial", "names"});
    if (node["id"]) id = text(node["id"], join(field, "id"));
    if (id.empty()) fail(node, join(field, "id"), "missing gate id");
    if (!node["kind"]) fail(node, join(field, "kind"), "missing gate kind");
    const auto kind = lower(text(node["kind"], join(field, "kind")));
    const auto pfield = join(field, "params");
    const YAML::Node params = node["params"];
    if (params) require_map(params, pfield);

    auto enzymes = [&](std::initializer_list<std::pair<const char*, EnzymeKinetics*>> input,
                       const char* bias_key, EnzymeKinetics& bias, double& conc) {
      if (!params) return;
      std::set<std::string> allowed{"k_m", bias_key};
      for (const auto& [k, _] : input) allowed.insert(k);
      for (const auto& kv : params) {
        const auto key = lower(kv.first.as<std::string>());
        if (!allowed.count(key)) fail(kv.first, join(pfield, kv.first.Scalar()), "unknown key");
      }
      if (params["k_m"]) {
        const double km = number(params["k_m"], join(pfield, "k_m"));
        for (const auto& [_, e] : input) e->k_m = km;
        bias.k_m = km;
      }
      for (const auto& kv : params) {
        const auto key = lower(kv.first.as<std::string>());
        const auto sub = join(pfield, kv.first.Scalar());
        if (key == bias_key) {
          kinetics(kv.second, sub, bias, &conc);
          continue;
        }
        for (const auto& [k, e] : input)
          if (key == k) kinetics(kv.second, sub, *e, nullptr);
      }
    };

    GateInstance g;
    if (kind == "not") {
      NotGateParams p;
      enzymes({{"e1", &p.input}}, "p1", p.bias, p.bias_conc);
      g = GateInstance::make_not(id, p);
    } else if (kind == "or" || kind == "and") {
      auto p = kind == "or" ? TwoInputGateParams::or_defaults() : TwoInputGateParams::and_defaults();
      enzymes({{"e2", &p.input_a}, {"e3", &p.input_b}}, "p2", p.bias, p.bias_conc);
      g = kind == "or" ? GateInstance::make_or(id, p) : GateInstance::make_and(id, p);
    } else {
      fail(node["kind"], join(field, "kind"), "expected NOT, OR or AND, got '" + kind + "'");
    }

    try {
      std::visit([](const auto& p) { require_well_formed(p); }, g.params);
    } catch (const DomainError& e) {
      fail(params ? params : node, pfield, e.what());
    }

    if (node["initial"]) {
      g.initial = number(node["initial"], join(field, "initial"));
      if (g.initial < 0.0 || g.initial > 1.0)
        fail(node["initial"], join(field, "initial"), "must lie in [0,1]");
    }
    if (const auto names = node["names"]) {
      const auto nfield = join(field, "names");
      const bool two = g.arity() == 2;
      if (two)
        only_keys(names, nfield, {"S", "Sp", "E2", "E3", "P"});
      else
        only_keys(names, nfield, {"S", "Sp", "E1", "P"});
      auto set = [&](const char* key, std::string& dst) {
        if (names[key]) dst = text(names[key], join(nfield, key));
      };
      set("S", g.names.substrate);
      set("Sp", g.names.product);
      set(two ? "E2" : "E1", g.names.input_a);
      if (two) set("E3", g.names.input_b);
      set("P", g.names.bias);
    }
    return g;
  }

  // -- circuit forms ---------------------------------------------------------

  /// One gate whose inputs are named after its input enzymes.
  Netlist single_gate(const YAML::Node& node) const {
    auto g = gate(node, "circuit.gate", "gate");
    Netlist n;
    if (g.kind() == GateKind::not_gate) {
      if (g.names.substrate.empty()) g.names.substrate = "S1";
      if (g.names.product.empty()) g.names.product = "S1p";
      if (g.names.input_a.empty()) g.names.input_a = "E1";
      if (g.names.bias.empty()) g.names.bias = "P1";
      n.inputs.push_back({g.names.input_a, false});
      n.wires.push_back({g.names.input_a, g.id, 0});
    } else {
      if (g.names.substrate.empty()) g.names.substrate = "S2";
      if (g.names.product.empty()) g.names.product = "S2p";
      if (g.names.input_a.empty()) g.names.input_a = "E2";
      if (g.names.input_b.empty()) g.names.input_b = "E3";
      if (g.names.bias.empty()) g.names.bias = "P2";
      n.inputs.push_back({g.names.input_a, false});
      n.inputs.push_back({g.names.input_b, false});
      n.wires.push_back({g.names.input_a, g.id, 0});
      n.wires.push_back({g.names.input_b, g.id, 1});
    }
    n.outputs.push_back({"out", g.id});
    n.gates.push_back(std::move(g));
    return n;
  }

  Wire wire(const YAML::Node& node, const std::string& field) const {
    const auto s = text(node, field);
    const auto arrow = s.find("->");
    const auto dot = s.rfind('.');
    auto trim = [](std::string x) {
      const auto b = x.find_first_not_of(" \t");
      const auto e = x.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : x.substr(b, e - b + 1);
    };
    if (arrow == std::string::npos || dot == std::string::npos || dot < arrow)
      fail(node, field, "expected 'source -> gate.slot'");
    Wire w;
    w.source = trim(s.substr(0, arrow));
    w.gate = trim(s.substr(arrow + 2, dot - arrow - 2));
    const auto slot = trim(s.substr(dot + 1));
    if (w.source.empty() || w.gate.empty() || slot.empty() ||
        !std::all_of(slot.begin(), slot.end(), [](unsigned char c) { return std::isdigit(c); }))
      fail(node, field, "expected 'source -> gate.slot'");
    w.slot = std::stoul(slot);
    return w;
  }

  Netlist inline_netlist(const YAML::Node& node) const {
    const std::string field = "circuit.netlist";
    only_keys(node, field, {"inputs", "gates", "wires", "outputs", "sequential"});
    Netlist n;
    auto seq = [&](const char* key) {
      const auto v = node[key];
      if (v && !v.IsSequence()) fail(v, join(field, key), "expected a list");
      return v;
    };
    std::size_t i = 0;
    if (const auto ins = seq("inputs"))
      for (const auto& in : ins) {
        const auto f = join(field, "inputs[" + std::to_string(i++) + "]");
        if (in.IsScalar()) {
          n.inputs.push_back({in.Scalar(), false});
        } else {
          only_keys(in, f, {"name", "inverted"});
          if (!in["name"]) fail(in, join(f, "name"), "missing input name");
          n.inputs.push_back({text(in["name"], join(f, "name")),
                              in["inverted"] ? boolean(in["inverted"], join(f, "inverted")) : false});
        }
      }
    i = 0;
    if (const auto gs = seq("gates"))
      for (const auto& g : gs) {
        n.gates.push_back(gate(g, join(field, "gates[" + std::to_string(i++) + "]"), ""));
      }
    i = 0;
    if (const auto ws = seq("wires"))
      for (const auto& w : ws) n.wires.push_back(wire(w, join(field, "wires[" + std::to_string(i++) + "]")));
    i = 0;
    if (const auto os = seq("outputs"))
      for (const auto& o : os) {
        const auto f = join(field, "outputs[" + std::to_string(i++) + "]");
        only_keys(o, f, {"name", "source"});
        if (!o["name"] || !o["source"]) fail(o, f, "outputs need name and source");
        n.outputs.push_back({text(o["name"], join(f, "name")), text(o["source"], join(f, "source"))});
      }
    if (node["sequential"]) n.sequential = boolean(node["sequential"], join(field, "sequential"));
    return n;
  }

  void circuit(const YAML::Node& node, ScenarioConfig& cfg) const {
    const std::string field = "circuit";
    only_keys(node, field,
              {"gate", "expression", "style", "variables", "output", "latch", "netlist",
               "netlist_file"});
    int forms = 0;
    for (const char* k : {"gate", "expression", "latch", "netlist", "netlist_file"})
      forms += node[k] ? 1 : 0;
    if (forms != 1)
      fail(node, field, "exactly one of gate, expression, latch, netlist, netlist_file is required");

    if (node["gate"]) {
      cfg.netlist = single_gate(node["gate"]);
    } else if (node["expression"]) {
      const auto efield = join(field, "expression");
      BooleanExpr e = BooleanExpr::var("_");
      try {
        e = parse_expr(text(node["expression"], efield));
      } catch (const std::invalid_argument& ex) {
        fail(node["expression"], efield, ex.what());
      }
      auto style = SynthesisStyle::direct;
      if (node["style"]) {
        try {
          style = parse_style(text(node["style"], join(field, "style")));
        } catch (const std::exception& ex) {
          fail(node["style"], join(field, "style"), ex.what());
        }
      }
      auto vars = e.variables();
      if (const auto v = node["variables"]) {
        if (!v.IsSequence()) fail(v, join(field, "variables"), "expected a list");
        vars.clear();
        for (const auto& x : v) vars.push_back(text(x, join(field, "variables")));
      }
      const auto out = node["output"] ? text(node["output"], join(field, "output")) : "out";
      try {
        cfg.netlist = synthesize(e, style, vars, out);
      } catch (const NetlistError& ex) {
        fail(node, field, ex.what());
      }
      cfg.expression = e;
    } else if (node["latch"]) {
      if (!boolean(node["latch"], join(field, "latch")))
        fail(node["latch"], join(field, "latch"), "only 'latch: true' is meaningful");
      cfg.netlist = build_rs_latch();
    } else if (node["netlist"]) {
      cfg.netlist = inline_netlist(node["netlist"]);
    } else {
      const auto nf = node["netlist_file"];
      const auto path = resolve(text(nf, join(field, "netlist_file")));
      std::ifstream is(path);
      if (!is) fail(nf, join(field, "netlist_file"), "cannot open " + path.string());
      try {
        cfg.netlist = parse_netlist(is);
      } catch (const NetlistError& ex) {
        fail(nf, join(field, "netlist_file"), path.string() + ": " + ex.what());
      }
    }
    try {
      cfg.netlist.validate();
    } catch (const NetlistError& ex) {
      fail(node, field, ex.what());
    }
  }

  // -- waveforms -------------------------------------------------------------

  Schedule waveform(const YAML::Node& node, const std::string& field, double t_end) const {
    if (node.IsSequence()) {
      std::vector<Schedule::Step> steps;
      std::size_t i = 0;
      for (const auto& st : node) {
        const auto f = field + "[" + std::to_string(i++) + "]";
        if (!st.IsSequence() || st.size() != 2) fail(st, f, "expected [time, level]");
        steps.push_back({number(st[0], f + ".time"), number(st[1], f + ".level")});
      }
      if (steps.empty()) fail(node, field, "needs at least one [time, level] step");
      try {
        return Schedule::from_steps(std::move(steps));
      } catch (const std::exception& ex) {
        fail(node, field, ex.what());
      }
    }
    if (node.IsScalar()) {
      const double v = number(node, field);
      if (v < 0.0 || v > 1.0) fail(node, field, "level must lie in [0,1]");
      return Schedule::constant(v);
    }
    only_keys(node, field, {"square"});
    const auto sq = node["square"];
    const auto sfield = join(field, "square");
    only_keys(sq, sfield, {"period", "start_high", "t0"});
    if (!sq["period"]) fail(sq, join(sfield, "period"), "missing period");
    const double period = positive(sq["period"], join(sfield, "period"));
    const bool high = sq["start_high"] ? boolean(sq["start_high"], join(sfield, "start_high")) : false;
    const double t0 = sq["t0"] ? number(sq["t0"], join(sfield, "t0")) : 0.0;
    try {
      return square_wave(period, t_end, high, t0);
    } catch (const std::exception& ex) {
      fail(sq, sfield, ex.what());
    }
  }

  void waveforms(const YAML::Node& node, ScenarioConfig& cfg) const {
    require_map(node, "waveforms");
    const auto inputs = cfg.netlist.input_names();
    for (const auto& kv : node) {
      const auto name = kv.first.as<std::string>();
      const auto field = join("waveforms", name);
      if (std::find(inputs.begin(), inputs.end(), name) == inputs.end())
        fail(kv.first, field, "no primary input named '" + name + "'");
      cfg.waveforms[name] = waveform(kv.second, field, cfg.simulation.t_end);
    }
  }

  void random(const YAML::Node& node, ScenarioConfig& cfg) const {
    const std::string field = "random_waveforms";
    only_keys(node, field, {"seed", "min_segment", "max_segment"});
    RandomWaveformSettings r;
    if (node["seed"]) r.seed = unsigned_int(node["seed"], join(field, "seed"));
    if (const auto v = node["min_segment"]; v && !is_auto(v))
      r.min_segment = positive(v, join(field, "min_segment"));
    if (const auto v = node["max_segment"]; v && !is_auto(v))
      r.max_segment = positive(v, join(field, "max_segment"));
    if (r.min_segment && r.max_segment && *r.max_segment < *r.min_segment)
      fail(node["max_segment"], join(field, "max_segment"), "must be >= min_segment");
    cfg.random = r;
  }

  // -- settings --------------------------------------------------------------

  void simulation(const YAML::Node& node, SimulationSettings& s) const {
    const std::string field = "simulation";
    only_keys(node, field,
              {"t_end", "dt_out", "method", "abs_tol", "rel_tol", "max_step", "max_steps"});
    if (node["t_end"]) s.t_end = positive(node["t_end"], join(field, "t_end"));
    if (node["dt_out"]) s.dt_out = positive(node["dt_out"], join(field, "dt_out"));
    if (s.dt_out > s.t_end) fail(node, join(field, "dt_out"), "must not exceed t_end");
    if (const auto m = node["method"]) {
      try {
        s.integrator.method = parse_method(text(m, join(field, "method")));
      } catch (const std::exception& ex) {
        fail(m, join(field, "method"), ex.what());
      }
    }
    if (node["abs_tol"]) s.integrator.abs_tol = positive(node["abs_tol"], join(field, "abs_tol"));
    if (node["rel_tol"]) s.integrator.rel_tol = positive(node["rel_tol"], join(field, "rel_tol"));
    if (node["max_step"]) s.integrator.max_step = positive(node["max_step"], join(field, "max_step"));
    if (node["max_steps"])
      s.integrator.max_steps = unsigned_int(node["max_steps"], join(field, "max_steps"));
  }

  void thresholds(const YAML::Node& node, ThresholdConfig& t) const {
    only_keys(node, "thresholds", {"tau0", "tau1"});
    if (node["tau0"]) t.tau0 = number(node["tau0"], "thresholds.tau0");
    if (node["tau1"]) t.tau1 = number(node["tau1"], "thresholds.tau1");
    try {
      t.validate();
    } catch (const DomainError& ex) {
      fail(node, "thresholds", ex.what());
    }
  }

  void seqmap(const YAML::Node& node, ScenarioConfig& cfg) const {
    const std::string field = "seqmap";
    only_keys(node, field, {"kappa", "tau", "delay", "output", "latch_initial"});
    auto& s = cfg.seqmap;
    if (node["kappa"]) s.kappa = unit_open(node["kappa"], join(field, "kappa"));
    if (const auto t = node["tau"]; t && !is_auto(t)) s.tau = positive(t, join(field, "tau"));
    if (node["delay"]) {
      s.delay = number(node["delay"], join(field, "delay"));
      if (s.delay < 0.0) fail(node["delay"], join(field, "delay"), "must be >= 0");
    }
    if (node["output"]) {
      s.output = text(node["output"], join(field, "output"));
      const auto outs = cfg.netlist.output_names();
      if (std::find(outs.begin(), outs.end(), s.output) == outs.end())
        fail(node["output"], join(field, "output"), "no primary output named '" + s.output + "'");
    }
    if (node["latch_initial"])
      s.latch_initial = boolean(node["latch_initial"], join(field, "latch_initial"));
  }

 private:
  std::string source_;
  std::filesystem::path base_dir_;
};

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& source) {
  std::filesystem::path base = std::filesystem::path(source).parent_path();
  Reader r(source, base);
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& ex) {
    r.fail(ex.mark, "yaml", ex.msg);
  }
  if (!root.IsMap()) r.fail(root, "config", "top level must be a mapping");
  r.only_keys(root, "",
              {"circuit", "waveforms", "random_waveforms", "simulation", "thresholds", "seqmap",
               "bounds"});

  ScenarioConfig cfg;
  cfg.source = source;
  if (!root["circuit"]) r.fail(root, "circuit", "missing section");
  try {
    r.circuit(root["circuit"], cfg);
    if (root["simulation"]) r.simulation(root["simulation"], cfg.simulation);
    if (root["waveforms"]) r.waveforms(root["waveforms"], cfg);
    if (root["random_waveforms"]) r.random(root["random_waveforms"], cfg);
    if (root["thresholds"]) r.thresholds(root["thresholds"], cfg.thresholds);
    if (root["seqmap"]) r.seqmap(root["seqmap"], cfg);
    if (const auto b = root["bounds"]) {
      r.only_keys(b, "bounds", {"kappa"});
      if (b["kappa"]) cfg.bounds_kappa = r.unit_open(b["kappa"], "bounds.kappa");
    }
  } catch (const YAML::Exception& ex) {
    r.fail(ex.mark, "yaml", ex.msg);
  }
  if (cfg.seqmap.output.empty() && !cfg.netlist.outputs.empty())
    cfg.seqmap.output = cfg.netlist.outputs.front().name;
  return cfg;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError(path + ": cannot open config file");
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_config(ss.str(), path);
}

}  // namespace enzlogic
