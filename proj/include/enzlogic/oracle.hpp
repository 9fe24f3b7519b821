#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "enzlogic/expr.hpp"

namespace enzlogic {

using Assignment = std::map<std::string, bool>;

/// Throws DomainError if a variable of `expr` is missing from `a`.
bool eval_expr(const BooleanExpr& expr, const Assignment& a);

/// Assignment for row `row` of a truth table over `vars`; the first variable
/// is the most significant bit.
Assignment row_assignment(const std::vector<std::string>& vars, std::uint32_t row);

/// Whole truth table by bit-parallel evaluation, row order as
/// `row_assignment`. At most 6 variables. Throws DomainError if `expr` uses a
/// variable outside `vars`.
std::vector<bool> truth_table(const BooleanExpr& expr, const std::vector<std::string>& vars);

/// 1 - x1*x2.
bool nand_reference(bool x1, bool x2);

/// f(k) = x1(k) OR (x2(k) AND f(k-1)), f(-1) = initial. Throws DomainError on
/// an empty sequence.
std::vector<bool> latch_reference(const std::vector<std::pair<bool, bool>>& inputs, bool initial);

}  // namespace enzlogic
