#include <doctest.h>

#include <sstream>

#include "enzlogic/cli.hpp"
#include "enzlogic/seqmap.hpp"

using namespace enzlogic;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

template <class F>
Run capture(F f) {
  std::ostringstream out, err;
  const int rc = f(out, err);
  return {rc, out.str(), err.str()};
}

const char* not_square = R"(
circuit:
  gate: {kind: NOT}
waveforms:
  E1: {square: {period: 60}}
simulation: {t_end: 120, dt_out: 0.5}
)";

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_CASE("simulate writes the NOT-gate CSV header") {
  const auto cfg = parse_config(not_square);
  const auto r = capture([&](auto& o, auto& e) { return cmd_simulate(cfg, o, e); });
  CHECK(r.rc == exit_pass);
  CHECK(r.out.rfind("t,S1,S1p,E1,P1\n", 0) == 0);
  CHECK(count_lines(r.out) == 1 + 241);
}

TEST_CASE("simulate is byte-identical for the same seed") {
  const auto cfg = parse_config(
      "circuit: {gate: {kind: OR}}\nrandom_waveforms: {seed: 5, min_segment: 8, max_segment: 12}\n"
      "simulation: {t_end: 80, dt_out: 0.5}\n");
  auto once = [&](std::optional<std::uint64_t> seed) {
    return capture([&](auto& o, auto& e) { return cmd_simulate(cfg, o, e, seed); }).out;
  };
  CHECK(once({}) == once({}));
  CHECK(once(9) == once(9));
  CHECK(once(9) != once(10));
  CHECK(once({}) == once(5));
}

TEST_CASE("missing waveform is a config error") {
  const auto cfg = parse_config("circuit: {gate: {kind: NOT}}\n");
  CHECK(capture([&](auto& o, auto& e) { return cmd_simulate(cfg, o, e); }).rc == exit_config);
}

TEST_CASE("truth tables for default gates pass") {
  for (const char* kind : {"NOT", "OR", "AND"}) {
    CAPTURE(kind);
    const auto cfg = parse_config(std::string("circuit: {gate: {kind: ") + kind + "}}\n");
    const auto r = capture([&](auto& o, auto& e) { return cmd_truth_table(cfg, o, e); });
    CHECK(r.rc == exit_pass);
    CHECK(count_lines(r.out) == (std::string(kind) == "NOT" ? 3u : 5u));
    CHECK(r.out.find("NO") == std::string::npos);
  }
}

TEST_CASE("AND with V_P2 above V_E2 + V_E3 fails on the (1,1) row") {
  const auto cfg = parse_config(R"(
circuit:
  gate:
    kind: AND
    params:
      E2: {k_cat: 0.4}
      E3: {k_cat: 0.4}
      P2: {conc: 0.9}
)");
  const auto r = capture([&](auto& o, auto& e) { return cmd_truth_table(cfg, o, e); });
  CHECK(r.rc == exit_fail);
  std::istringstream lines(r.out);
  std::string line, last;
  int bad = 0;
  while (std::getline(lines, line)) {
    if (line.find("NO") != std::string::npos) {
      ++bad;
      last = line;
    }
  }
  CHECK(bad == 1);
  CHECK(last.rfind("1  1  ", 0) == 0);
}

TEST_CASE("truth table of an expression circuit and of the latch") {
  const auto cfg = parse_config("circuit: {expression: \"OR(AND(a,NOT(b)),c)\", style: nand_only}\n");
  const auto r = capture([&](auto& o, auto& e) { return cmd_truth_table(cfg, o, e); });
  CHECK(r.rc == exit_pass);
  CHECK(count_lines(r.out) == 9);
  const auto latch = parse_config("circuit: {latch: true}\n");
  CHECK(capture([&](auto& o, auto& e) { return cmd_truth_table(latch, o, e); }).rc == exit_config);
}

TEST_CASE("check-seqmap on a random NOT waveform passes with tau auto") {
  const auto cfg = parse_config(
      "circuit: {gate: {kind: NOT}}\nrandom_waveforms: {seed: 1}\n"
      "simulation: {t_end: 300, dt_out: 0.25}\nseqmap: {kappa: 0.05, tau: auto}\n");
  const auto r = capture([&](auto& o, auto& e) { return cmd_check_seqmap(cfg, o, e); });
  CHECK(r.rc == exit_pass);
  CHECK(r.out.rfind("PASS\n", 0) == 0);
  CHECK(resolve_tau(cfg) == doctest::Approx(gate_settle_bound(cfg.netlist.gates[0], 0.05)));
}

TEST_CASE("check-seqmap with tau far below the settle time fails and lists violations") {
  const auto cfg = parse_config(
      "circuit: {gate: {kind: NOT}}\nrandom_waveforms: {seed: 1}\n"
      "simulation: {t_end: 300, dt_out: 0.05}\nseqmap: {kappa: 0.05, tau: 0.151284}\n");
  const auto r = capture([&](auto& o, auto& e) { return cmd_check_seqmap(cfg, o, e); });
  CHECK(r.rc == exit_fail);
  CHECK(r.out.rfind("FAIL\n", 0) == 0);
  CHECK(r.out.find("err_after_tau=") != std::string::npos);
}

TEST_CASE("check-seqmap with a trace shorter than tau warns and passes") {
  const auto cfg = parse_config(
      "circuit: {gate: {kind: NOT}}\nwaveforms: {E1: [[0, 1]]}\n"
      "simulation: {t_end: 10, dt_out: 0.5}\nseqmap: {tau: 50}\n");
  const auto r = capture([&](auto& o, auto& e) { return cmd_check_seqmap(cfg, o, e); });
  CHECK(r.rc == exit_pass);
  CHECK(r.out.find("checked=0 unchecked=21") != std::string::npos);
  CHECK(r.err.find("warning") != std::string::npos);
}

TEST_CASE("check-seqmap on the latch preset") {
  const auto cfg = parse_config(R"(
circuit: {latch: true}
waveforms:
  X1: [[0, 1], [100, 0]]
  X2: [[0, 1], [200, 0], [300, 1]]
simulation: {t_end: 400, dt_out: 0.5}
)");
  const auto r = capture([&](auto& o, auto& e) { return cmd_check_seqmap(cfg, o, e); });
  CHECK(r.rc == exit_pass);
}

TEST_CASE("bounds output") {
  const auto wide = parse_config(
      "circuit: {gate: {kind: NOT, params: {k_m: 0.1, P1: {conc: 0.1}}}}\nbounds: {kappa: 0.5}\n");
  auto r = capture([&](auto& o, auto& e) { return cmd_bounds(wide, o, e); });
  CHECK(r.rc == exit_pass);
  CHECK(r.out.find("t_minus=undefined") == std::string::npos);
  CHECK(r.out.find("settle_rise=") != std::string::npos);

  const auto narrow =
      parse_config("circuit: {gate: {kind: NOT, params: {k_m: 0.1}}}\nbounds: {kappa: 0.05}\n");
  r = capture([&](auto& o, auto& e) { return cmd_bounds(narrow, o, e); });
  CHECK(r.rc == exit_pass);
  CHECK(r.out.find("t_plus=16.47") != std::string::npos);
  CHECK(r.out.find("t_minus=undefined") != std::string::npos);

  const auto not_a_not = parse_config("circuit: {gate: {kind: OR}}\n");
  CHECK(capture([&](auto& o, auto& e) { return cmd_bounds(not_a_not, o, e); }).rc == exit_config);
}

TEST_CASE("synth dump re-ingests to the same netlist") {
  for (const char* style : {"direct", "nand_only"}) {
    const auto r = capture(
        [&](auto& o, auto& e) { return cmd_synth("XOR(a,b)", style, {}, o, e); });
    REQUIRE(r.rc == exit_pass);
    const auto expected = synthesize(parse_expr("XOR(a,b)"), parse_style(style), {"a", "b"});
    CHECK(parse_netlist_text(r.out) == expected);
    CHECK(elaborate(parse_netlist_text(r.out)).network == elaborate(expected).network);
  }
  CHECK(capture([&](auto& o, auto& e) { return cmd_synth("AND(a", "direct", {}, o, e); }).rc ==
        exit_config);
  CHECK(capture([&](auto& o, auto& e) { return cmd_synth("a", "weird", {}, o, e); }).rc ==
        exit_config);
}

TEST_CASE("run reports the worst exit code and keeps config order under --jobs") {
  RunOptions opts;
  opts.command = "truth-table";
  opts.configs = {"does-not-exist.yaml"};
  std::ostringstream out, err;
  CHECK(run(opts, out, err) == exit_config);
  opts.command = "simulate";
  opts.configs = {};
  CHECK(run(opts, out, err) == exit_config);

  const std::string dir = ENZLOGIC_CONFIG_DIR;
  opts.command = "truth-table";
  opts.configs = {dir + "/not_gate.yaml", dir + "/and_gate_violating.yaml", dir + "/or_gate.yaml"};
  opts.jobs = 3;
  std::ostringstream o2, e2;
  CHECK(run(opts, o2, e2) == exit_fail);
  const auto text = o2.str();
  const auto a = text.find("not_gate.yaml"), b = text.find("and_gate_violating.yaml"),
             c = text.find("or_gate.yaml");
  CHECK(a < b);
  CHECK(b < c);
  CHECK(c != std::string::npos);
}
