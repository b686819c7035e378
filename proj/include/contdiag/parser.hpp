#ifndef CONTDIAG_PARSER_HPP
#define CONTDIAG_PARSER_HPP

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "contdiag/dyadic.hpp"
#include "contdiag/formula.hpp"
#include "contdiag/signature.hpp"

namespace contdiag {

/// Canonical name of the dyadic-constant symbol for q, e.g. "q(1/2)".
/// The symbol "q" is reserved for these constants in every signature.
inline std::string q_const_name(const Dyadic& q) {
  return "q(" + q.to_plain_fraction_string() + ")";
}

/// Inverse of q_const_name; throws on anything else.
inline Dyadic q_const_value(const std::string& name) {
  if (name.size() < 4 || name.substr(0, 2) != "q(" || name.back() != ')')
    throw DomainError("not a dyadic constant name: " + name);
  return parse_dyadic(name.substr(2, name.size() - 3));
}

inline bool is_q_const_name(const std::string& name) {
  if (name.size() < 4 || name.substr(0, 2) != "q(" || name.back() != ')')
    return false;
  try {
    q_const_value(name);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

namespace detail {

struct Token {
  enum class Kind { Ident, Number, LParen, RParen, Comma, Dot, Tsub, Slash, Caret, End };
  Kind kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= text_.size()) {
      tok_ = {Token::Kind::End, "", start};
      return;
    }
    char c = text_[i_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[j])) || text_[j] == '_'))
        ++j;
      tok_ = {Token::Kind::Ident, text_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i_;
      while (j < text_.size() && std::isdigit(static_cast<unsigned char>(text_[j]))) ++j;
      tok_ = {Token::Kind::Number, text_.substr(i_, j - i_), start};
      i_ = j;
      return;
    }
    if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '.') {
      tok_ = {Token::Kind::Tsub, "-.", start};
      i_ += 2;
      return;
    }
    ++i_;
    switch (c) {
      case '(': tok_ = {Token::Kind::LParen, "(", start}; return;
      case ')': tok_ = {Token::Kind::RParen, ")", start}; return;
      case ',': tok_ = {Token::Kind::Comma, ",", start}; return;
      case '.': tok_ = {Token::Kind::Dot, ".", start}; return;
      case '/': tok_ = {Token::Kind::Slash, "/", start}; return;
      case '^': tok_ = {Token::Kind::Caret, "^", start}; return;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", start);
    }
  }

  const std::string& text_;
  std::size_t i_ = 0;
  Token tok_{Token::Kind::End, "", 0};
};

class FormulaParser {
 public:
  FormulaParser(const std::string& text, const Signature& sig)
      : lex_(text), sig_(sig) {}

  Formula parse() {
    Formula f = formula();
    expect(Token::Kind::End, "end of input");
    return f;
  }

 private:
  using K = Token::Kind;

  Formula formula() {
    if (lex_.peek().kind == K::Ident &&
        (lex_.peek().text == "sup" || lex_.peek().text == "inf")) {
      Token q = lex_.take();
      Token v = expect(K::Ident, "variable name");
      check_not_symbol(v);
      expect(K::Dot, "'.'");
      std::string bound = fresh_binding(v.text, v.pos);
      Formula body = formula();
      pop_binding(v.text);
      return q.text == "sup" ? f_sup(bound, body) : f_inf(bound, body);
    }
    return expr();
  }

  Formula expr() {
    Formula f = primary();
    while (lex_.peek().kind == K::Tsub) {
      lex_.take();
      f = f_tsub(f, primary());
    }
    return f;
  }

  Formula primary() {
    const Token t = lex_.peek();
    if (t.kind == K::LParen) {
      lex_.take();
      Formula f = formula();
      expect(K::RParen, "')'");
      return f;
    }
    if (t.kind != K::Ident) throw ParseError("expected formula", t.pos);
    // Copy: the lexer's token is rewritten by take() below.
    const std::string name = t.text;
    if (name == "neg" || name == "half") {
      lex_.take();
      expect(K::LParen, "'('");
      Formula a = formula();
      expect(K::RParen, "')'");
      return name == "neg" ? f_neg(a) : f_half(a);
    }
    if (name == "min" || name == "max" || name == "avg") {
      lex_.take();
      expect(K::LParen, "'('");
      Formula a = formula();
      expect(K::Comma, "','");
      Formula b = formula();
      expect(K::RParen, "')'");
      if (name == "min") return f_min(a, b);
      if (name == "max") return f_max(a, b);
      return f_avg(a, b);
    }
    if (name == "d") {
      Token d = lex_.take();
      expect(K::LParen, "'('");
      Term a = term();
      expect(K::Comma, "','");
      Term b = term();
      expect(K::RParen, "')'");
      (void)d;
      return f_metric(a, b);
    }
    // predicate atom
    Token p = lex_.take();
    auto arity = sig_.predicate_arity(p.text);
    if (!arity) throw ParseError("unknown predicate symbol '" + p.text + "'", p.pos);
    expect(K::LParen, "'('");
    std::vector<Term> args;
    if (*arity > 0) {
      args.push_back(term());
      while (lex_.peek().kind == K::Comma) {
        lex_.take();
        args.push_back(term());
      }
    }
    expect(K::RParen, "')'");
    if (args.size() != *arity)
      throw ParseError("predicate '" + p.text + "' expects " + std::to_string(*arity) +
                           " arguments, got " + std::to_string(args.size()),
                       p.pos);
    return f_pred(p.text, std::move(args));
  }

  Term term() {
    Token t = expect(K::Ident, "term");
    if (t.text == "q" && lex_.peek().kind == K::LParen) return q_term();
    if (lex_.peek().kind == K::LParen) {
      auto arity = sig_.function_arity(t.text);
      if (!arity)
        throw ParseError("unknown function symbol '" + t.text + "'", t.pos);
      lex_.take();
      std::vector<Term> args;
      if (*arity > 0) {
        args.push_back(term());
        while (lex_.peek().kind == K::Comma) {
          lex_.take();
          args.push_back(term());
        }
      }
      expect(K::RParen, "')'");
      if (args.size() != *arity)
        throw ParseError("function '" + t.text + "' expects " + std::to_string(*arity) +
                             " arguments, got " + std::to_string(args.size()),
                         t.pos);
      return t_app(t.text, std::move(args));
    }
    if (sig_.is_constant(t.text)) return t_const(t.text);
    if (sig_.predicate_arity(t.text) || sig_.function_arity(t.text))
      throw ParseError("symbol '" + t.text + "' used as a variable", t.pos);
    // A variable: bound name if in scope, else free.
    if (auto it = bindings_.find(t.text); it != bindings_.end() && !it->second.empty())
      return t_var(it->second.back());
    return t_var(t.text);
  }

  Term q_term() {
    expect(K::LParen, "'('");
    Token num = expect(K::Number, "numerator");
    std::string lit = num.text;
    if (lex_.peek().kind == K::Slash) {
      lex_.take();
      Token den = expect(K::Number, "denominator");
      lit += "/" + den.text;
      if (lex_.peek().kind == K::Caret) {
        if (den.text != "2")
          throw ParseError("dyadic denominator base must be 2", den.pos);
        lex_.take();
        Token e = expect(K::Number, "exponent");
        lit += "^" + e.text;
      }
    }
    expect(K::RParen, "')'");
    Dyadic v = parse_dyadic(lit);
    if (!v.in_unit_interval())
      throw ParseError("dyadic constant outside [0,1]: " + lit, num.pos);
    return t_const(q_const_name(v));
  }

  void check_not_symbol(const Token& v) {
    if (v.text == "q" || sig_.is_constant(v.text) || sig_.predicate_arity(v.text) ||
        sig_.function_arity(v.text))
      throw ParseError("cannot bind symbol name '" + v.text + "'", v.pos);
  }

  // Enforce single binding along any path by renaming shadowed binders.
  std::string fresh_binding(const std::string& name, std::size_t pos) {
    (void)pos;
    auto& stack = bindings_[name];
    std::string actual = name;
    if (!stack.empty() || used_.count(name))
      actual = name + "_" + std::to_string(rename_counter_++);
    stack.push_back(actual);
    used_.insert(actual);
    return actual;
  }
  void pop_binding(const std::string& name) { bindings_[name].pop_back(); }

  Token expect(K kind, const std::string& what) {
    if (lex_.peek().kind != kind)
      throw ParseError("expected " + what + ", got '" + lex_.peek().text + "'",
                       lex_.peek().pos);
    return lex_.take();
  }

  Lexer lex_;
  const Signature& sig_;
  std::map<std::string, std::vector<std::string>> bindings_;
  std::set<std::string> used_;
  unsigned rename_counter_ = 0;
};

}  // namespace detail

/// Parse a formula against a signature.  Derived connectives (min, max,
/// avg) are expanded into the primitive ones; shadowed binders are renamed
/// so no variable is bound twice along any path.
inline Formula parse_formula(const std::string& text, const Signature& sig) {
  return detail::FormulaParser(text, sig).parse();
}

}  // namespace contdiag

#endif
