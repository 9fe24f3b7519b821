#include <doctest.h>

#include <set>

#include "enzlogic/errors.hpp"
#include "enzlogic/expr.hpp"
#include "enzlogic/oracle.hpp"

using namespace enzlogic;
using E = BooleanExpr;

TEST_CASE("eval_expr examples") {
  CHECK_FALSE(eval_expr(E::not_(E::var("x")), {{"x", true}}));
  CHECK_FALSE(eval_expr(E::nand_(E::var("a"), E::var("b")), {{"a", true}, {"b", true}}));
  const auto x = E::xor_(E::var("a"), E::var("b"));
  std::vector<bool> got;
  for (bool a : {false, true})
    for (bool b : {false, true}) got.push_back(eval_expr(x, {{"a", a}, {"b", b}}));
  CHECK(got == std::vector<bool>{false, true, true, false});
  CHECK_THROWS_AS(eval_expr(E::var("q"), {{"a", true}}), DomainError);
}

TEST_CASE("nand_reference rows") {
  CHECK(nand_reference(false, false));
  CHECK(nand_reference(true, false));
  CHECK(nand_reference(false, true));
  CHECK_FALSE(nand_reference(true, true));
}

TEST_CASE("latch_reference examples") {
  std::vector<std::pair<bool, bool>> set_in(5, {true, false});
  set_in[2].second = true;
  CHECK(latch_reference(set_in, false) == std::vector<bool>(5, true));
  CHECK(latch_reference({{false, true}, {false, true}, {false, true}}, true) ==
        std::vector<bool>(3, true));
  CHECK(latch_reference({{false, false}}, true) == std::vector<bool>{false});
  CHECK(latch_reference({{false, false}}, false) == std::vector<bool>{false});
  CHECK(latch_reference({{true, true}, {false, true}, {false, true}}, false) ==
        std::vector<bool>{true, true, true});
  CHECK_THROWS_AS(latch_reference({}, false), DomainError);
}

TEST_CASE("latch_reference constant-input behavior over both initial states") {
  for (bool init : {false, true})
    for (std::size_t n = 1; n <= 6; ++n) {
      CHECK(latch_reference(std::vector<std::pair<bool, bool>>(n, {false, true}), init) ==
            std::vector<bool>(n, init));
      CHECK(latch_reference(std::vector<std::pair<bool, bool>>(n, {true, false}), init) ==
            std::vector<bool>(n, true));
      CHECK(latch_reference(std::vector<std::pair<bool, bool>>(n, {true, true}), init) ==
            std::vector<bool>(n, true));
      CHECK(latch_reference(std::vector<std::pair<bool, bool>>(n, {false, false}), init) ==
            std::vector<bool>(n, false));
    }
}

TEST_CASE("parse and print round trip") {
  const auto e = parse_expr(" and( a , Not(b_1) ) ");
  CHECK(e.to_string() == "AND(a,NOT(b_1))");
  CHECK(parse_expr(e.to_string()) == e);
  CHECK(e.depth() == 2);
  CHECK(e.variables() == std::vector<std::string>{"a", "b_1"});
  CHECK(parse_expr("x").is_var());
  CHECK(parse_expr("XOR(a,b)") == E::xor_(E::var("a"), E::var("b")));
  CHECK(parse_expr("AND(a,b,c)") == E::and_(E::and_(E::var("a"), E::var("b")), E::var("c")));
  CHECK(parse_expr("NAND(a,b)").to_string() == "NOT(AND(a,b))");
  CHECK_THROWS_AS(parse_expr("AND(a)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("FOO(a,b)"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("AND(a,b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr("a b"), std::invalid_argument);
  CHECK_THROWS_AS(parse_expr(""), std::invalid_argument);
}

TEST_CASE("corpus shape") {
  const std::vector<std::string> vars{"a", "b", "c"};
  const auto corpus = expression_corpus(3, vars);
  MESSAGE("corpus size " << corpus.size());
  std::set<std::string> printed;
  for (const auto& e : corpus) {
    CHECK(e.depth() <= 3);
    CHECK(printed.insert(e.to_string()).second);
    CHECK(parse_expr(e.to_string()) == e);
    for (const auto& v : e.variables()) CHECK((v == "a" || v == "b" || v == "c"));
  }
  // Small levels checked by hand: depth 1 over {a,b,c} modulo renaming is
  // a, NOT(a), AND(a,b), OR(a,b).
  CHECK(expression_corpus(1, vars).size() == 4);
  CHECK(expression_corpus(0, vars).size() == 1);
  // Every Boolean function of 3 inputs with a depth-3 formula appears.
  std::set<std::vector<bool>> functions;
  for (const auto& e : corpus) functions.insert(truth_table(e, vars));
  CHECK(functions.size() > 60);
}

TEST_CASE("bit-parallel truth tables agree with recursive evaluation on the corpus") {
  const std::vector<std::string> vars{"a", "b", "c"};
  for (const auto& e : expression_corpus(3, vars)) {
    const auto tt = truth_table(e, vars);
    for (std::uint32_t r = 0; r < 8; ++r) CHECK(tt[r] == eval_expr(e, row_assignment(vars, r)));
  }
  CHECK_THROWS_AS(truth_table(E::var("z"), vars), DomainError);
}
