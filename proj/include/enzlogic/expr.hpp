#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace enzlogic {

/// Immutable Boolean expression tree over variables, NOT, AND and OR.
/// Copies share structure.
class BooleanExpr {
 public:
  enum class Op { var, not_op, and_op, or_op };

  static BooleanExpr var(std::string name);
  static BooleanExpr not_(BooleanExpr x);
  static BooleanExpr and_(BooleanExpr a, BooleanExpr b);
  static BooleanExpr or_(BooleanExpr a, BooleanExpr b);
  /// Sugar, expanded into the three primitive operators.
  static BooleanExpr nand_(BooleanExpr a, BooleanExpr b);
  static BooleanExpr nor_(BooleanExpr a, BooleanExpr b);
  static BooleanExpr xor_(BooleanExpr a, BooleanExpr b);

  Op op() const { return node_->op; }
  /// Variable name; empty for operators.
  const std::string& name() const { return node_->name; }
  /// Operand of NOT, or left operand of AND/OR.
  const BooleanExpr& lhs() const;
  const BooleanExpr& rhs() const;
  bool is_var() const { return op() == Op::var; }

  /// Operator nesting depth; a bare variable has depth 0.
  int depth() const;
  std::size_t size() const;
  /// Sorted, without duplicates.
  std::vector<std::string> variables() const;
  /// Prefix form, e.g. `AND(a,NOT(b))`. Parses back to an equal tree.
  std::string to_string() const;

  bool operator==(const BooleanExpr& other) const;

 private:
  struct Node {
    Op op;
    std::string name;
    std::vector<BooleanExpr> kids;
  };
  explicit BooleanExpr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Prefix syntax: identifiers, `NOT(x)`, `AND(x,y)`, `OR(x,y)`, plus
/// `NAND`, `NOR`, `XOR` which expand. Operator names are case-insensitive;
/// AND/OR/NAND/NOR accept more than two operands and fold left.
/// Throws std::invalid_argument with the offending column.
BooleanExpr parse_expr(std::string_view text);

/// Every expression of depth <= max_depth over `vars`, one representative per
/// class under operand swapping and variable permutation, with no NOT(NOT(x))
/// and no operator applied to two identical operands.
std::vector<BooleanExpr> expression_corpus(int max_depth, const std::vector<std::string>& vars);

}  // namespace enzlogic
