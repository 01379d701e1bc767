#include "structlens/geomtools/expression.h"

#include <charconv>
#include <cmath>
#include <numbers>

#include "structlens/core/annotation.h"
#include "structlens/core/errors.h"

namespace structlens::geom {

namespace {

struct FunctionInfo {
  std::string_view name;
  std::size_t arity;
};

constexpr FunctionInfo kFunctions[] = {
    {"sqrt", 1}, {"sin", 1}, {"cos", 1},     {"tan", 1},
    {"atan2", 2}, {"abs", 1}, {"radians", 1}, {"degrees", 1},
};

const FunctionInfo* find_function(std::string_view name) {
  for (const auto& f : kFunctions) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

Expr make(Expr::Kind kind, std::vector<Expr> args) {
  Expr e;
  e.kind = kind;
  e.args = std::move(args);
  return e;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse() {
    Expr e = expression();
    skip_space();
    if (pos_ < s_.size()) fail("unexpected input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < s_.size() && (s_[pos_] == ' ' || s_[pos_] == '\t' || s_[pos_] == '\n' ||
                                s_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(std::string_view tok) {
    skip_space();
    if (s_.substr(pos_).starts_with(tok)) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  // Multiplicative and additive operators, ASCII or Unicode.
  bool accept_plus() { return accept("+"); }
  bool accept_minus() { return accept("-") || accept("−"); }
  bool accept_times() {
    skip_space();
    if (s_.substr(pos_).starts_with("**")) return false;
    return accept("*") || accept("×");
  }
  bool accept_divide() { return accept("/") || accept("÷"); }
  bool accept_power() { return accept("^") || accept("**"); }

  Expr expression() {
    Expr lhs = term();
    for (;;) {
      if (accept_plus()) {
        lhs = make(Expr::Kind::add, {std::move(lhs), term()});
      } else if (accept_minus()) {
        lhs = make(Expr::Kind::sub, {std::move(lhs), term()});
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept_times()) {
        lhs = make(Expr::Kind::mul, {std::move(lhs), unary()});
      } else if (accept_divide()) {
        lhs = make(Expr::Kind::div, {std::move(lhs), unary()});
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (++depth_ > 256) fail("expression nested too deeply");
    Expr e;
    if (accept_minus()) {
      e = make(Expr::Kind::neg, {unary()});
    } else if (accept_plus()) {
      e = unary();
    } else {
      e = power();
    }
    --depth_;
    return e;
  }

  Expr power() {
    Expr base = primary();
    if (accept_power()) return make(Expr::Kind::pow, {std::move(base), unary()});
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Expr e = expression();
      if (!accept(")")) fail("expected ')'");
      return e;
    }
    if ((c >= '0' && c <= '9') || c == '.') return number();
    if (accept("π")) return make(Expr::Kind::pi, {});
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected character");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && ((s_[pos_] >= '0' && s_[pos_] <= '9') || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < s_.size() && (s_[p] == '+' || s_[p] == '-')) ++p;
      if (p < s_.size() && s_[p] >= '0' && s_[p] <= '9') {
        while (p < s_.size() && s_[p] >= '0' && s_[p] <= '9') ++p;
        pos_ = p;
      }
    }
    Expr e;
    const char* first = s_.data() + start;
    const char* last = s_.data() + pos_;
    const auto [ptr, ec] = std::from_chars(first, last, e.value);
    if (ec != std::errc() || ptr != last || !std::isfinite(e.value)) {
      pos_ = start;
      fail("malformed number");
    }
    return e;
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name(s_.substr(start, pos_ - start));
    if (name == "pi") return make(Expr::Kind::pi, {});
    const FunctionInfo* f = find_function(name);
    if (!f) {
      pos_ = start;
      fail("unknown name '" + name + "'");
    }
    if (!accept("(")) fail("expected '(' after " + name);
    Expr call = make(Expr::Kind::call, {});
    call.name = name;
    if (!accept(")")) {
      do {
        call.args.push_back(expression());
      } while (accept(","));
      if (!accept(")")) fail("expected ')' to close " + name);
    }
    if (call.args.size() != f->arity) {
      fail(name + " takes " + std::to_string(f->arity) + " argument(s)");
    }
    return call;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int depth_ = 0;
};

double finite(double v, const char* what) {
  if (!std::isfinite(v)) throw MathDomain(std::string(what) + " is not a finite number");
  return v;
}

}  // namespace

Expr parse_expression(std::string_view text) { return Parser(text).parse(); }

double evaluate(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind) {
    case K::number: return e.value;
    case K::pi: return std::numbers::pi;
    case K::neg: return -evaluate(e.args[0]);
    case K::add: return finite(evaluate(e.args[0]) + evaluate(e.args[1]), "sum");
    case K::sub: return finite(evaluate(e.args[0]) - evaluate(e.args[1]), "difference");
    case K::mul: return finite(evaluate(e.args[0]) * evaluate(e.args[1]), "product");
    case K::div: {
      const double num = evaluate(e.args[0]);
      const double den = evaluate(e.args[1]);
      if (den == 0.0) throw MathDomain("division by zero");
      return finite(num / den, "quotient");
    }
    case K::pow: return finite(std::pow(evaluate(e.args[0]), evaluate(e.args[1])), "power");
    case K::call: {
      const double x = evaluate(e.args[0]);
      if (e.name == "sqrt") {
        if (x < 0.0) throw MathDomain("square root of a negative number");
        return std::sqrt(x);
      }
      if (e.name == "sin") return finite(std::sin(x), "sin");
      if (e.name == "cos") return finite(std::cos(x), "cos");
      if (e.name == "tan") return finite(std::tan(x), "tan");
      if (e.name == "atan2") return finite(std::atan2(x, evaluate(e.args[1])), "atan2");
      if (e.name == "abs") return std::abs(x);
      if (e.name == "radians") return finite(x * std::numbers::pi / 180.0, "radians");
      if (e.name == "degrees") return finite(x * 180.0 / std::numbers::pi, "degrees");
      throw MathDomain("unknown function " + e.name);
    }
  }
  return 0.0;
}

std::string to_string(const Expr& e) {
  using K = Expr::Kind;
  auto bin = [&](const char* op) {
    return "(" + to_string(e.args[0]) + " " + op + " " + to_string(e.args[1]) + ")";
  };
  switch (e.kind) {
    case K::number: return format_number(e.value);
    case K::pi: return "pi";
    case K::neg: return "(-" + to_string(e.args[0]) + ")";
    case K::add: return bin("+");
    case K::sub: return bin("-");
    case K::mul: return bin("*");
    case K::div: return bin("/");
    case K::pow: return bin("^");
    case K::call: {
      std::string s = e.name + "(";
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) s += ", ";
        s += to_string(e.args[i]);
      }
      return s + ")";
    }
  }
  return {};
}

double eval_expression(std::string_view text) { return evaluate(parse_expression(text)); }

}  // namespace structlens::geom
