#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "ofp/expr.hpp"

namespace ofp {
namespace {

enum class Tok { End, Ident, Number, LParen, RParen, LBracket, RBracket, Comma, Equals, Plus, Minus, Star, Slash, Caret };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  std::size_t line = 1;
  std::size_t column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space_and_comments();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    const std::size_t start = pos_;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
        advance();
      }
      t.kind = Tok::Ident;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      lex_number(t);
    } else {
      advance();
      switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '[': t.kind = Tok::LBracket; break;
        case ']': t.kind = Tok::RBracket; break;
        case ',': t.kind = Tok::Comma; break;
        case '=': t.kind = Tok::Equals; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '*': t.kind = Tok::Star; break;
        case '/': t.kind = Tok::Slash; break;
        case '^': t.kind = Tok::Caret; break;
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
      }
    }
    t.text = src_.substr(start, pos_ - start);
    return t;
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    auto digits = [&] {
      std::size_t n = 0;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        advance();
        ++n;
      }
      return n;
    };
    std::size_t mantissa = digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      mantissa += digits();
    }
    if (mantissa == 0) throw ParseError("malformed number", t.line, t.column);
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (digits() == 0) throw ParseError("malformed exponent", t.line, t.column);
    }
    t.kind = Tok::Number;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

double parse_double(const Token& t) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), value);
  if (ec == std::errc::result_out_of_range) {
    // from_chars reports overflow/underflow without setting the value; treat
    // underflow as zero and reject overflow.
    bool tiny = t.text.find("e-") != std::string_view::npos || t.text.find("E-") != std::string_view::npos;
    if (!tiny) throw ParseError("number out of range: " + std::string(t.text), t.line, t.column);
    return 0.0;
  }
  if (ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    throw ParseError("malformed number: " + std::string(t.text), t.line, t.column);
  }
  return value;
}

bool reserved(std::string_view name) {
  return name == "func" || name == "in" || name == "inf" || unary_function(name).has_value();
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lexer_(src) { bump(); }

  std::vector<FunctionDef> file() {
    std::vector<FunctionDef> out;
    while (cur_.kind != Tok::End) out.push_back(declaration());
    return out;
  }

 private:
  void bump() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message, const Token& at) const {
    throw ParseError(message, at.line, at.column);
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? std::string("end of input") : "'" + std::string(t.text) + "'";
  }

  Token expect(Tok kind, const char* what) {
    if (cur_.kind != kind) fail(std::string("expected ") + what + ", found " + describe(cur_), cur_);
    Token t = cur_;
    bump();
    return t;
  }

  FunctionDef declaration() {
    if (cur_.kind != Tok::Ident || cur_.text != "func") fail("expected 'func', found " + describe(cur_), cur_);
    bump();
    Token name = expect(Tok::Ident, "function name");
    if (reserved(name.text)) fail("reserved name '" + std::string(name.text) + "'", name);
    expect(Tok::LParen, "'('");
    params_.clear();
    if (cur_.kind != Tok::RParen) {
      params_.push_back(param());
      while (cur_.kind == Tok::Comma) {
        bump();
        params_.push_back(param());
      }
    }
    expect(Tok::RParen, "')'");
    expect(Tok::Equals, "'='");
    Expr body = expression();
    if (cur_.kind != Tok::End && !(cur_.kind == Tok::Ident && cur_.text == "func")) {
      fail("unexpected " + describe(cur_) + " after expression", cur_);
    }
    try {
      return FunctionDef(std::string(name.text), params_, std::move(body));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      fail(e.what(), name);
    }
  }

  ParamDecl param() {
    Token name = expect(Tok::Ident, "parameter name");
    if (reserved(name.text)) fail("reserved name '" + std::string(name.text) + "'", name);
    for (const auto& p : params_) {
      if (p.name == name.text) fail("duplicate parameter '" + std::string(name.text) + "'", name);
    }
    ParamDecl decl{std::string(name.text), Interval::unbounded()};
    if (cur_.kind == Tok::Ident && cur_.text == "in") {
      bump();
      decl.domain = interval();
    }
    return decl;
  }

  Interval interval() {
    Token open = cur_;
    bool lo_inclusive = false;
    if (cur_.kind == Tok::LBracket) {
      lo_inclusive = true;
    } else if (cur_.kind != Tok::LParen) {
      fail("expected '[' or '(' to open interval, found " + describe(cur_), cur_);
    }
    bump();
    double lo = bound();
    expect(Tok::Comma, "',' in interval");
    double hi = bound();
    bool hi_inclusive = false;
    if (cur_.kind == Tok::RBracket) {
      hi_inclusive = true;
    } else if (cur_.kind != Tok::RParen) {
      fail("expected ']' or ')' to close interval, found " + describe(cur_), cur_);
    }
    bump();
    Interval iv{{lo, lo_inclusive && std::isfinite(lo)}, {hi, hi_inclusive && std::isfinite(hi)}};
    if (lo > hi) fail("malformed interval: lower bound exceeds upper bound", open);
    if (iv.empty()) fail("malformed interval: empty", open);
    return iv;
  }

  double bound() {
    double sign = 1.0;
    if (cur_.kind == Tok::Minus || cur_.kind == Tok::Plus) {
      if (cur_.kind == Tok::Minus) sign = -1.0;
      bump();
    }
    if (cur_.kind == Tok::Ident && cur_.text == "inf") {
      bump();
      return sign * std::numeric_limits<double>::infinity();
    }
    Token t = expect(Tok::Number, "interval bound");
    return sign * parse_double(t);
  }

  // expr := term (('+' | '-') term)*
  Expr expression() {
    Expr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      Token op = cur_;
      bump();
      require_operand(op);
      lhs = Expr::binary(op.kind == Tok::Plus ? Op::Add : Op::Sub, std::move(lhs), term());
    }
    return lhs;
  }

  // term := unary (('*' | '/') unary)*
  Expr term() {
    Expr lhs = unary();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      Token op = cur_;
      bump();
      require_operand(op);
      lhs = Expr::binary(op.kind == Tok::Star ? Op::Mul : Op::Div, std::move(lhs), unary());
    }
    return lhs;
  }

  // unary := '-' unary | power
  Expr unary() {
    if (cur_.kind == Tok::Minus) {
      Token op = cur_;
      bump();
      require_operand(op);
      return Expr::unary(Op::Neg, unary());
    }
    return power();
  }

  // power := primary ('^' unary)?   (right-associative, tighter than prefix minus)
  Expr power() {
    Expr base = primary();
    if (cur_.kind == Tok::Caret) {
      Token op = cur_;
      bump();
      require_operand(op);
      return Expr::binary(Op::Pow, std::move(base), unary());
    }
    return base;
  }

  Expr primary() {
    Token t = cur_;
    switch (t.kind) {
      case Tok::Number: {
        bump();
        return Expr::literal(std::string(t.text), parse_double(t));
      }
      case Tok::LParen: {
        bump();
        Expr inner = expression();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident: {
        bump();
        if (cur_.kind == Tok::LParen) return call(t);
        for (std::size_t i = 0; i < params_.size(); ++i) {
          if (params_[i].name == t.text) return Expr::param(i);
        }
        fail("unknown identifier '" + std::string(t.text) + "'", t);
      }
      default:
        fail("expected expression, found " + describe(t), t);
    }
  }

  Expr call(const Token& name) {
    auto op = unary_function(name.text);
    if (!op) fail("unknown function '" + std::string(name.text) + "'", name);
    bump();  // '('
    std::vector<Expr> args;
    if (cur_.kind != Tok::RParen) {
      args.push_back(expression());
      while (cur_.kind == Tok::Comma) {
        bump();
        args.push_back(expression());
      }
    }
    expect(Tok::RParen, "')'");
    if (args.size() != 1) {
      fail("arity mismatch: '" + std::string(name.text) + "' takes 1 argument, got " + std::to_string(args.size()),
           name);
    }
    return Expr::unary(*op, std::move(args.front()));
  }

  void require_operand(const Token& op) {
    const bool starts_operand = cur_.kind == Tok::Number || cur_.kind == Tok::LParen || cur_.kind == Tok::Minus ||
                                (cur_.kind == Tok::Ident && cur_.text != "func");
    if (!starts_operand) fail("dangling operator '" + std::string(op.text) + "'", op);
  }

  Lexer lexer_;
  Token cur_;
  std::vector<ParamDecl> params_;
};

}  // namespace

std::vector<FunctionDef> parse_file(std::string_view text) { return Parser(text).file(); }

FunctionDef parse(std::string_view text) {
  auto defs = parse_file(text);
  if (defs.size() != 1) {
    throw ParseError("expected exactly one function declaration, found " + std::to_string(defs.size()), 1, 1);
  }
  return std::move(defs.front());
}

}  // namespace ofp
