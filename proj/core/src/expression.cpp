#include "fw/expression.hpp"

#include <cctype>
#include <cmath>
#include <memory>
#include <vector>

#include "fw/errors.hpp"

namespace fw {

namespace {

struct Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, sin, cos, gauss };
  Kind kind;
  double value = 0.0;
  std::vector<std::unique_ptr<Node>> args;
};

using NodePtr = std::unique_ptr<Node>;

NodePtr make(Node::Kind k) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  return n;
}

double periodic_gauss(double x, double x0, double w, double half_period) {
  if (!(w > 0.0)) throw Error("gauss width must be positive");
  const double period = 2.0 * half_period;
  const double nearest = std::round((x - x0) / period);
  double sum = 0.0;
  for (int side = 0; side < 2; ++side) {
    // walk outward from the nearest image in both directions
    for (int step = 0; step < 100000; ++step) {
      const double m = side == 0 ? nearest + step : nearest - 1.0 - step;
      const double r = (x - x0 - m * period) / w;
      const double term = std::exp(-r * r);
      sum += term;
      if (term < 1e-14) break;
    }
  }
  return sum;
}

double eval_node(const Node& n, double x, double half_period) {
  switch (n.kind) {
    case Node::Kind::number: return n.value;
    case Node::Kind::variable: return x;
    case Node::Kind::negate: return -eval_node(*n.args[0], x, half_period);
    case Node::Kind::add:
      return eval_node(*n.args[0], x, half_period) +
             eval_node(*n.args[1], x, half_period);
    case Node::Kind::sub:
      return eval_node(*n.args[0], x, half_period) -
             eval_node(*n.args[1], x, half_period);
    case Node::Kind::mul:
      return eval_node(*n.args[0], x, half_period) *
             eval_node(*n.args[1], x, half_period);
    case Node::Kind::div:
      return eval_node(*n.args[0], x, half_period) /
             eval_node(*n.args[1], x, half_period);
    case Node::Kind::sin: return std::sin(eval_node(*n.args[0], x, half_period));
    case Node::Kind::cos: return std::cos(eval_node(*n.args[0], x, half_period));
    case Node::Kind::gauss:
      return periodic_gauss(x, eval_node(*n.args[0], x, half_period),
                            eval_node(*n.args[1], x, half_period),
                            half_period);
  }
  throw Error("corrupt expression tree");
}

class Parser {
public:
  explicit Parser(const std::string& text) : text_(text) {}

  NodePtr parse() {
    NodePtr e = expr();
    skip_space();
    if (pos_ != text_.size())
      throw ParseError("unexpected trailing input", pos_);
    return e;
  }

private:
  const std::string& text_;
  std::size_t pos_ = 0;

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  bool consume(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr expr() {
    NodePtr lhs = term();
    for (;;) {
      if (consume('+')) {
        auto n = make(Node::Kind::add);
        n->args.push_back(std::move(lhs));
        n->args.push_back(term());
        lhs = std::move(n);
      } else if (consume('-')) {
        auto n = make(Node::Kind::sub);
        n->args.push_back(std::move(lhs));
        n->args.push_back(term());
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    NodePtr lhs = unary();
    for (;;) {
      if (consume('*')) {
        auto n = make(Node::Kind::mul);
        n->args.push_back(std::move(lhs));
        n->args.push_back(unary());
        lhs = std::move(n);
      } else if (consume('/')) {
        auto n = make(Node::Kind::div);
        n->args.push_back(std::move(lhs));
        n->args.push_back(unary());
        lhs = std::move(n);
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (consume('-')) {
      auto n = make(Node::Kind::negate);
      n->args.push_back(unary());
      return n;
    }
    return primary();
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    const char c = text_[pos_];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();

    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isalpha(static_cast<unsigned char>(text_[pos_])))
        ++pos_;
      const std::string name = text_.substr(start, pos_ - start);
      if (name == "x") return make(Node::Kind::variable);
      Node::Kind kind;
      std::size_t arity;
      if (name == "sin") {
        kind = Node::Kind::sin;
        arity = 1;
      } else if (name == "cos") {
        kind = Node::Kind::cos;
        arity = 1;
      } else if (name == "gauss") {
        kind = Node::Kind::gauss;
        arity = 2;
      } else {
        throw ParseError("unknown function or variable '" + name + "'", start);
      }
      if (!consume('(')) throw ParseError("expected '(' after " + name, pos_);
      auto n = make(kind);
      n->args.push_back(expr());
      for (std::size_t i = 1; i < arity; ++i) {
        if (!consume(',')) throw ParseError("expected ','", pos_);
        n->args.push_back(expr());
      }
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return n;
    }

    if (consume('(')) {
      NodePtr inner = expr();
      if (!consume(')')) throw ParseError("expected ')'", pos_);
      return inner;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  NodePtr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) ||
            text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E' ||
            ((text_[pos_] == '+' || text_[pos_] == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E'))))
      ++pos_;
    try {
      std::size_t used = 0;
      const std::string token = text_.substr(start, pos_ - start);
      const double v = std::stod(token, &used);
      if (used != token.size()) throw std::invalid_argument(token);
      auto n = make(Node::Kind::number);
      n->value = v;
      return n;
    } catch (const std::exception&) {
      throw ParseError("malformed number", start);
    }
  }
};

}  // namespace

Field init_expression(const std::string& expr, const GridPtr& grid) {
  Parser parser(expr);
  const NodePtr root = parser.parse();
  std::vector<double> v(grid->size());
  for (int j = 0; j < grid->size(); ++j)
    v[j] = eval_node(*root, grid->x(j), grid->half_period());
  return Field(grid, std::move(v));
}

double eval_expression(const std::string& expr, double x, double half_period) {
  Parser parser(expr);
  const NodePtr root = parser.parse();
  return eval_node(*root, x, half_period);
}

}  // namespace fw
