#include "enzlogic/expr.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace enzlogic {

BooleanExpr BooleanExpr::var(std::string name) {
  return BooleanExpr(std::make_shared<const Node>(Node{Op::var, std::move(name), {}}));
}

BooleanExpr BooleanExpr::not_(BooleanExpr x) {
  return BooleanExpr(std::make_shared<const Node>(Node{Op::not_op, {}, {std::move(x)}}));
}

BooleanExpr BooleanExpr::and_(BooleanExpr a, BooleanExpr b) {
  return BooleanExpr(
      std::make_shared<const Node>(Node{Op::and_op, {}, {std::move(a), std::move(b)}}));
}

BooleanExpr BooleanExpr::or_(BooleanExpr a, BooleanExpr b) {
  return BooleanExpr(
      std::make_shared<const Node>(Node{Op::or_op, {}, {std::move(a), std::move(b)}}));
}

BooleanExpr BooleanExpr::nand_(BooleanExpr a, BooleanExpr b) {
  return not_(and_(std::move(a), std::move(b)));
}

BooleanExpr BooleanExpr::nor_(BooleanExpr a, BooleanExpr b) {
  return not_(or_(std::move(a), std::move(b)));
}

BooleanExpr BooleanExpr::xor_(BooleanExpr a, BooleanExpr b) {
  return or_(and_(a, not_(b)), and_(not_(a), b));
}

const BooleanExpr& BooleanExpr::lhs() const {
  if (node_->kids.empty()) throw std::logic_error("variable has no operands");
  return node_->kids[0];
}

const BooleanExpr& BooleanExpr::rhs() const {
  if (node_->kids.size() < 2) throw std::logic_error("expression has no right operand");
  return node_->kids[1];
}

int BooleanExpr::depth() const {
  int d = 0;
  for (const auto& k : node_->kids) d = std::max(d, k.depth() + 1);
  return d;
}

std::size_t BooleanExpr::size() const {
  std::size_t n = 1;
  for (const auto& k : node_->kids) n += k.size();
  return n;
}

std::vector<std::string> BooleanExpr::variables() const {
  std::set<std::string> out;
  auto walk = [&](const BooleanExpr& e, auto&& self) -> void {
    if (e.is_var()) out.insert(e.name());
    for (const auto& k : e.node_->kids) self(k, self);
  };
  walk(*this, walk);
  return {out.begin(), out.end()};
}

std::string BooleanExpr::to_string() const {
  switch (op()) {
    case Op::var: return name();
    case Op::not_op: return "NOT(" + lhs().to_string() + ")";
    case Op::and_op: return "AND(" + lhs().to_string() + "," + rhs().to_string() + ")";
    case Op::or_op: return "OR(" + lhs().to_string() + "," + rhs().to_string() + ")";
  }
  return {};
}

bool BooleanExpr::operator==(const BooleanExpr& other) const {
  if (node_ == other.node_) return true;
  if (op() != other.op() || name() != other.name()) return false;
  return node_->kids == other.node_->kids;
}

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  BooleanExpr parse() {
    auto e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("expression column " + std::to_string(pos_ + 1) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  std::string ident() {
    skip_ws();
    const auto start = pos_;
    auto ok = [&](char c, bool first) {
      return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
             (!first && std::isdigit(static_cast<unsigned char>(c)));
    };
    while (pos_ < text_.size() && ok(text_[pos_], pos_ == start)) ++pos_;
    if (pos_ == start) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  BooleanExpr expr() {
    const auto id = ident();
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '(') return BooleanExpr::var(id);
    std::string up = id;
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    expect('(');
    std::vector<BooleanExpr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    auto arity = [&](std::size_t lo, std::size_t hi) {
      if (args.size() < lo || args.size() > hi) fail(up + " has the wrong number of operands");
    };
    auto fold = [&](BooleanExpr (*f)(BooleanExpr, BooleanExpr)) {
      BooleanExpr acc = args[0];
      for (std::size_t i = 1; i < args.size(); ++i) acc = f(acc, args[i]);
      return acc;
    };
    constexpr auto many = static_cast<std::size_t>(-1);
    if (up == "NOT") {
      arity(1, 1);
      return BooleanExpr::not_(args[0]);
    }
    if (up == "AND") {
      arity(2, many);
      return fold(&BooleanExpr::and_);
    }
    if (up == "OR") {
      arity(2, many);
      return fold(&BooleanExpr::or_);
    }
    if (up == "NAND") {
      arity(2, many);
      return BooleanExpr::not_(fold(&BooleanExpr::and_));
    }
    if (up == "NOR") {
      arity(2, many);
      return BooleanExpr::not_(fold(&BooleanExpr::or_));
    }
    if (up == "XOR") {
      arity(2, 2);
      return BooleanExpr::xor_(args[0], args[1]);
    }
    fail("unknown operator '" + id + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

/// Canonical text modulo operand order.
std::string sorted_key(const BooleanExpr& e) {
  switch (e.op()) {
    case BooleanExpr::Op::var: return e.name();
    case BooleanExpr::Op::not_op: return "!" + sorted_key(e.lhs());
    default: {
      auto a = sorted_key(e.lhs()), b = sorted_key(e.rhs());
      if (b < a) std::swap(a, b);
      return std::string(e.op() == BooleanExpr::Op::and_op ? "&" : "|") + "(" + a + "," + b + ")";
    }
  }
}

BooleanExpr rename(const BooleanExpr& e, const std::map<std::string, std::string>& m) {
  switch (e.op()) {
    case BooleanExpr::Op::var: return BooleanExpr::var(m.at(e.name()));
    case BooleanExpr::Op::not_op: return BooleanExpr::not_(rename(e.lhs(), m));
    case BooleanExpr::Op::and_op: return BooleanExpr::and_(rename(e.lhs(), m), rename(e.rhs(), m));
    case BooleanExpr::Op::or_op: return BooleanExpr::or_(rename(e.lhs(), m), rename(e.rhs(), m));
  }
  return e;
}

}  // namespace

BooleanExpr parse_expr(std::string_view text) { return Parser(text).parse(); }

std::vector<BooleanExpr> expression_corpus(int max_depth, const std::vector<std::string>& vars) {
  // Level sets by depth, deduplicated modulo operand order.
  std::vector<BooleanExpr> all;
  std::set<std::string> seen;
  auto add = [&](BooleanExpr e) {
    if (seen.insert(sorted_key(e)).second) all.push_back(std::move(e));
  };
  for (const auto& v : vars) add(BooleanExpr::var(v));
  for (int d = 1; d <= max_depth; ++d) {
    const auto prev = all;
    for (const auto& x : prev)
      if (x.op() != BooleanExpr::Op::not_op) add(BooleanExpr::not_(x));
    for (std::size_t i = 0; i < prev.size(); ++i)
      for (std::size_t j = i + 1; j < prev.size(); ++j) {
        add(BooleanExpr::and_(prev[i], prev[j]));
        add(BooleanExpr::or_(prev[i], prev[j]));
      }
  }

  // Keep the member of each renaming class whose key is smallest.
  std::vector<std::string> perm = vars;
  std::sort(perm.begin(), perm.end());
  std::vector<std::map<std::string, std::string>> renamings;
  do {
    std::map<std::string, std::string> m;
    for (std::size_t i = 0; i < vars.size(); ++i) m[vars[i]] = perm[i];
    renamings.push_back(std::move(m));
  } while (std::next_permutation(perm.begin(), perm.end()));

  std::vector<BooleanExpr> out;
  for (const auto& e : all) {
    const auto key = sorted_key(e);
    bool minimal = true;
    for (const auto& m : renamings)
      if (sorted_key(rename(e, m)) < key) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(e);
  }
  return out;
}

}  // namespace enzlogic
