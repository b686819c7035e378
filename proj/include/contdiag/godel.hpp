#ifndef CONTDIAG_GODEL_HPP
#define CONTDIAG_GODEL_HPP

#include <string>
#include <vector>

#include "contdiag/dyadic.hpp"
#include "contdiag/formula.hpp"
#include "contdiag/signature.hpp"

namespace contdiag {
namespace godel {

/// Cantor pairing on arbitrary-size naturals.
inline BigInt pair(const BigInt& a, const BigInt& b) {
  return (a + b) * (a + b + 1) / 2 + b;
}

inline std::pair<BigInt, BigInt> unpair(const BigInt& z) {
  if (z < 0) throw DomainError("unpair: negative code");
  BigInt w = (boost::multiprecision::sqrt(BigInt(8 * z + 1)) - 1) / 2;
  BigInt t = w * (w + 1) / 2;
  BigInt b = z - t;
  return {w - b, b};
}

inline BigInt encode_string(const std::string& s) {
  BigInt n = 0;
  for (auto it = s.rbegin(); it != s.rend(); ++it)
    n = n * 257 + (static_cast<unsigned char>(*it) + 1);
  return n;
}

inline std::string decode_string(BigInt n) {
  std::string s;
  while (n > 0) {
    unsigned digit = static_cast<unsigned>(n % 257);
    if (digit == 0) throw DomainError("decode_string: invalid digit");
    s.push_back(static_cast<char>(digit - 1));
    n /= 257;
  }
  return s;
}

inline BigInt encode_list(const std::vector<BigInt>& xs) {
  BigInt acc = 0;
  for (auto it = xs.rbegin(); it != xs.rend(); ++it) acc = pair(*it, acc) + 1;
  return acc;
}

inline std::vector<BigInt> decode_list(BigInt n) {
  std::vector<BigInt> xs;
  while (n > 0) {
    auto [h, t] = unpair(n - 1);
    xs.push_back(h);
    n = t;
  }
  return xs;
}

}  // namespace godel

inline BigInt code_of_term(const Term& t) {
  using godel::pair;
  switch (t->kind) {
    case TermNode::Kind::Var:
      return pair(0, godel::encode_string(t->name));
    case TermNode::Kind::Const:
      return pair(1, godel::encode_string(t->name));
    case TermNode::Kind::App: {
      std::vector<BigInt> args;
      for (const auto& a : t->args) args.push_back(code_of_term(a));
      return pair(2, pair(godel::encode_string(t->name), godel::encode_list(args)));
    }
  }
  throw DomainError("unreachable term kind");
}

inline Term term_of_code(const BigInt& n) {
  auto [tag, payload] = godel::unpair(n);
  if (tag == 0) return t_var(godel::decode_string(payload));
  if (tag == 1) return t_const(godel::decode_string(payload));
  if (tag == 2) {
    auto [name, argcodes] = godel::unpair(payload);
    std::vector<Term> args;
    for (const auto& c : godel::decode_list(argcodes)) args.push_back(term_of_code(c));
    return t_app(godel::decode_string(name), std::move(args));
  }
  throw DomainError("term_of_code: invalid tag");
}

/// Injective numbering of all finitary formulas; inverse of formula_of.
inline BigInt code_of(const Formula& f) {
  using godel::pair;
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
      return pair(0, pair(code_of_term(f->args[0]), code_of_term(f->args[1])));
    case FormulaNode::Kind::PredAtom: {
      std::vector<BigInt> args;
      for (const auto& a : f->args) args.push_back(code_of_term(a));
      return pair(1, pair(godel::encode_string(f->symbol), godel::encode_list(args)));
    }
    case FormulaNode::Kind::Neg:
      return pair(2, code_of(f->left));
    case FormulaNode::Kind::Half:
      return pair(3, code_of(f->left));
    case FormulaNode::Kind::Tsub:
      return pair(4, pair(code_of(f->left), code_of(f->right)));
    case FormulaNode::Kind::Sup:
      return pair(5, pair(godel::encode_string(f->symbol), code_of(f->left)));
    case FormulaNode::Kind::Inf:
      return pair(6, pair(godel::encode_string(f->symbol), code_of(f->left)));
  }
  throw DomainError("unreachable formula kind");
}

/// Decode a formula code, arity-checking atoms against the signature.
inline Formula formula_of(const BigInt& n, const Signature& sig) {
  auto [tag, payload] = godel::unpair(n);
  if (tag == 0) {
    auto [a, b] = godel::unpair(payload);
    return f_metric(term_of_code(a), term_of_code(b));
  }
  if (tag == 1) {
    auto [name, argcodes] = godel::unpair(payload);
    std::string sym = godel::decode_string(name);
    auto arity = sig.predicate_arity(sym);
    if (!arity) throw DomainError("formula_of: unknown predicate '" + sym + "'");
    std::vector<Term> args;
    for (const auto& c : godel::decode_list(argcodes)) args.push_back(term_of_code(c));
    if (args.size() != *arity)
      throw DomainError("formula_of: arity mismatch for '" + sym + "'");
    return f_pred(sym, std::move(args));
  }
  if (tag == 2) return f_neg(formula_of(payload, sig));
  if (tag == 3) return f_half(formula_of(payload, sig));
  if (tag == 4) {
    auto [a, b] = godel::unpair(payload);
    return f_tsub(formula_of(a, sig), formula_of(b, sig));
  }
  if (tag == 5 || tag == 6) {
    auto [name, body] = godel::unpair(payload);
    std::string var = godel::decode_string(name);
    if (var.empty()) throw DomainError("formula_of: empty variable name");
    Formula inner = formula_of(body, sig);
    return tag == 5 ? f_sup(var, inner) : f_inf(var, inner);
  }
  throw DomainError("formula_of: invalid tag");
}

}  // namespace contdiag

#endif
