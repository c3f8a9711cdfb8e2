#include "setcalc/expr.hpp"

#include <cctype>
#include <cmath>
#include <set>

namespace setcalc {

struct Expr::Node {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Pow, Neg, Call };
  Kind kind;
  double num = 0.0;
  Rational num_exact = 0;
  std::string name;   // Var and Call
  int exponent = 0;   // Pow
  NodePtr lhs, rhs;
};

namespace {

using Node = Expr::Node;
using NodePtr = Expr::NodePtr;
using Kind = Node::Kind;

NodePtr make_number(double v, Rational exact) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Number;
  n->num = v;
  n->num_exact = std::move(exact);
  return n;
}

NodePtr make_binary(Kind k, NodePtr lhs, NodePtr rhs) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : text_(normalize(text)) {}

  NodePtr run() {
    NodePtr e = expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  // Map the typographic operator glyphs (multiplication sign, minus sign,
  // middle dot) onto their ASCII forms so either spelling parses.
  static std::string normalize(const std::string& in) {
    std::string out;
    out.reserve(in.size());
    for (std::size_t i = 0; i < in.size();) {
      const auto rest = in.compare(i, 2, "\xc3\x97") == 0   ? '*'    // U+00D7
                        : in.compare(i, 2, "\xc2\xb7") == 0 ? '*'    // U+00B7
                        : in.compare(i, 3, "\xe2\x88\x92") == 0 ? '-'  // U+2212
                                                                : '\0';
      if (rest != '\0') {
        out.push_back(rest);
        i += (rest == '-' ? 3 : 2);
      } else {
        out.push_back(in[i]);
        ++i;
      }
    }
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("expression error at position " + std::to_string(pos_) + ": " + what);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (true) {
      if (eat('+')) {
        lhs = make_binary(Kind::Add, lhs, term());
      } else if (eat('-')) {
        lhs = make_binary(Kind::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (true) {
      if (eat('*')) {
        lhs = make_binary(Kind::Mul, lhs, factor());
      } else if (eat('/')) {
        lhs = make_binary(Kind::Div, lhs, factor());
      } else {
        return lhs;
      }
    }
  }

  NodePtr factor() {
    if (eat('-')) {
      auto n = std::make_shared<Node>();
      n->kind = Kind::Neg;
      n->lhs = factor();
      return n;
    }
    if (eat('+')) return factor();
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    while (eat('^')) {
      auto n = std::make_shared<Node>();
      n->kind = Kind::Pow;
      n->lhs = base;
      n->exponent = integer_exponent();
      base = n;
    }
    return base;
  }

  int integer_exponent() {
    skip_ws();
    bool neg = false;
    if (eat('-')) neg = true;
    bool paren = eat('(');
    if (paren && eat('-')) neg = !neg;
    skip_ws();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("exponent must be an integer literal");
    }
    long v = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      v = v * 10 + (text_[pos_] - '0');
      if (v > 1000000) fail("exponent out of range");
      ++pos_;
    }
    if (pos_ < text_.size() && text_[pos_] == '.') fail("exponent must be an integer literal");
    if (paren && !eat(')')) fail("expected ')' after exponent");
    return static_cast<int>(neg ? -v : v);
  }

  NodePtr atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected a value");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    std::string digits;   // integer and fraction digits, point removed
    int frac_digits = 0;
    bool seen_point = false;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits.push_back(c);
        if (seen_point) ++frac_digits;
        ++pos_;
      } else if (c == '.' && !seen_point) {
        seen_point = true;
        ++pos_;
      } else {
        break;
      }
    }
    if (digits.empty()) fail("malformed number");
    long exp10 = -frac_digits;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      const std::size_t mark = pos_;
      ++pos_;
      bool neg = false;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
        neg = text_[pos_] == '-';
        ++pos_;
      }
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        long e = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
          e = e * 10 + (text_[pos_] - '0');
          if (e > 1000) fail("exponent out of range");
          ++pos_;
        }
        exp10 += neg ? -e : e;
      } else {
        pos_ = mark;  // the 'e' starts an identifier, not scientific notation
      }
    }
    Rational exact{BigInt(digits)};
    if (exp10 > 0) {
      exact *= Rational(boost::multiprecision::pow(BigInt(10), unsigned(exp10)));
    } else if (exp10 < 0) {
      exact /= Rational(boost::multiprecision::pow(BigInt(10), unsigned(-exp10)));
    }
    const double v = std::stod(text_.substr(start, pos_ - start));
    return make_number(v, std::move(exact));
  }

  NodePtr ident() {
    std::string name;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      name.push_back(text_[pos_]);
      ++pos_;
    }
    static const std::set<std::string> functions = {"exp", "log", "sin", "cos", "abs", "sqrt"};
    if (functions.count(name)) {
      if (!eat('(')) fail("'" + name + "' needs a parenthesized argument");
      auto n = std::make_shared<Node>();
      n->kind = Kind::Call;
      n->name = name;
      n->lhs = expr();
      if (!eat(')')) fail("expected ')' after argument of '" + name + "'");
      return n;
    }
    auto n = std::make_shared<Node>();
    n->kind = Kind::Var;
    n->name = name;
    return n;
  }

  std::string text_;
  std::size_t pos_ = 0;
};

double eval_node(const NodePtr& n, const std::unordered_map<std::string, double>& vars) {
  switch (n->kind) {
    case Kind::Number:
      return n->num;
    case Kind::Var: {
      auto it = vars.find(n->name);
      if (it == vars.end()) throw Error("unknown variable '" + n->name + "'");
      return it->second;
    }
    case Kind::Add:
      return eval_node(n->lhs, vars) + eval_node(n->rhs, vars);
    case Kind::Sub:
      return eval_node(n->lhs, vars) - eval_node(n->rhs, vars);
    case Kind::Mul:
      return eval_node(n->lhs, vars) * eval_node(n->rhs, vars);
    case Kind::Div:
      return eval_node(n->lhs, vars) / eval_node(n->rhs, vars);
    case Kind::Pow:
      return std::pow(eval_node(n->lhs, vars), n->exponent);
    case Kind::Neg:
      return -eval_node(n->lhs, vars);
    case Kind::Call: {
      const double x = eval_node(n->lhs, vars);
      if (n->name == "exp") return std::exp(x);
      if (n->name == "log") return std::log(x);
      if (n->name == "sin") return std::sin(x);
      if (n->name == "cos") return std::cos(x);
      if (n->name == "abs") return std::abs(x);
      return std::sqrt(x);
    }
  }
  throw Error("unreachable expression node");
}

Rational pow_exact(const Rational& base, int e) {
  if (e == 0) return Rational(1);
  if (e < 0) {
    if (base == 0) throw ZeroDenominator("0 raised to a negative power");
    return Rational(1) / pow_exact(base, -e);
  }
  Rational acc(1), b = base;
  int k = e;
  while (k > 0) {
    if (k & 1) acc *= b;
    b *= b;
    k >>= 1;
  }
  return acc;
}

Rational eval_node_exact(const NodePtr& n,
                         const std::unordered_map<std::string, Rational>& vars) {
  switch (n->kind) {
    case Kind::Number:
      return n->num_exact;
    case Kind::Var: {
      auto it = vars.find(n->name);
      if (it == vars.end()) throw Error("unknown variable '" + n->name + "'");
      return it->second;
    }
    case Kind::Add:
      return eval_node_exact(n->lhs, vars) + eval_node_exact(n->rhs, vars);
    case Kind::Sub:
      return eval_node_exact(n->lhs, vars) - eval_node_exact(n->rhs, vars);
    case Kind::Mul:
      return eval_node_exact(n->lhs, vars) * eval_node_exact(n->rhs, vars);
    case Kind::Div: {
      Rational d = eval_node_exact(n->rhs, vars);
      if (d == 0) throw ZeroDenominator("division by zero in exact evaluation");
      return eval_node_exact(n->lhs, vars) / d;
    }
    case Kind::Pow:
      return pow_exact(eval_node_exact(n->lhs, vars), n->exponent);
    case Kind::Neg:
      return -eval_node_exact(n->lhs, vars);
    case Kind::Call:
      if (n->name == "abs") return abs(eval_node_exact(n->lhs, vars));
      throw Error("exact evaluation does not support '" + n->name + "'");
  }
  throw Error("unreachable expression node");
}

void collect_vars(const NodePtr& n, std::set<std::string>& out) {
  if (!n) return;
  if (n->kind == Kind::Var) out.insert(n->name);
  collect_vars(n->lhs, out);
  collect_vars(n->rhs, out);
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Expr e;
  e.root_ = Parser(text).run();
  e.text_ = text;
  return e;
}

double Expr::eval(const std::unordered_map<std::string, double>& vars) const {
  return eval_node(root_, vars);
}

Rational Expr::eval_exact(const std::unordered_map<std::string, Rational>& vars) const {
  return eval_node_exact(root_, vars);
}

std::vector<std::string> Expr::variables() const {
  std::set<std::string> names;
  collect_vars(root_, names);
  return {names.begin(), names.end()};
}

}  // namespace setcalc
