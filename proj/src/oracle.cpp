#include "enzlogic/oracle.hpp"

#include <algorithm>

#include "enzlogic/errors.hpp"

namespace enzlogic {

bool eval_expr(const BooleanExpr& e, const Assignment& a) {
  switch (e.op()) {
    case BooleanExpr::Op::var: {
      const auto it = a.find(e.name());
      if (it == a.end()) throw DomainError("no value for variable '" + e.name() + "'");
      return it->second;
    }
    case BooleanExpr::Op::not_op: return !eval_expr(e.lhs(), a);
    case BooleanExpr::Op::and_op: return eval_expr(e.lhs(), a) && eval_expr(e.rhs(), a);
    case BooleanExpr::Op::or_op: return eval_expr(e.lhs(), a) || eval_expr(e.rhs(), a);
  }
  return false;
}

Assignment row_assignment(const std::vector<std::string>& vars, std::uint32_t row) {
  Assignment a;
  const auto n = vars.size();
  for (std::size_t i = 0; i < n; ++i) a[vars[i]] = (row >> (n - 1 - i)) & 1u;
  return a;
}

namespace {

std::uint64_t table_bits(const BooleanExpr& e, const std::vector<std::string>& vars,
                         std::uint64_t mask) {
  switch (e.op()) {
    case BooleanExpr::Op::var: {
      const auto it = std::find(vars.begin(), vars.end(), e.name());
      if (it == vars.end()) throw DomainError("variable '" + e.name() + "' not declared");
      const auto bit = vars.size() - 1 - static_cast<std::size_t>(it - vars.begin());
      std::uint64_t col = 0;
      for (std::uint64_t r = 0; r < (std::uint64_t{1} << vars.size()); ++r)
        if ((r >> bit) & 1u) col |= std::uint64_t{1} << r;
      return col;
    }
    case BooleanExpr::Op::not_op: return ~table_bits(e.lhs(), vars, mask) & mask;
    case BooleanExpr::Op::and_op:
      return table_bits(e.lhs(), vars, mask) & table_bits(e.rhs(), vars, mask);
    case BooleanExpr::Op::or_op:
      return table_bits(e.lhs(), vars, mask) | table_bits(e.rhs(), vars, mask);
  }
  return 0;
}

}  // namespace

std::vector<bool> truth_table(const BooleanExpr& expr, const std::vector<std::string>& vars) {
  if (vars.size() > 6) throw DomainError("truth_table supports at most 6 variables");
  const std::size_t rows = std::size_t{1} << vars.size();
  const std::uint64_t mask = rows == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << rows) - 1;
  const auto bits = table_bits(expr, vars, mask);
  std::vector<bool> out(rows);
  for (std::size_t r = 0; r < rows; ++r) out[r] = (bits >> r) & 1u;
  return out;
}

bool nand_reference(bool x1, bool x2) { return !(x1 && x2); }

std::vector<bool> latch_reference(const std::vector<std::pair<bool, bool>>& inputs, bool initial) {
  if (inputs.empty()) throw DomainError("latch_reference needs at least one input");
  std::vector<bool> out;
  out.reserve(inputs.size());
  bool f = initial;
  for (const auto& [x1, x2] : inputs) {
    f = x1 || (x2 && f);
    out.push_back(f);
  }
  return out;
}

}  // namespace enzlogic
