#ifndef CONTDIAG_FORMULA_HPP
#define CONTDIAG_FORMULA_HPP

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contdiag/errors.hpp"
#include "contdiag/signature.hpp"

namespace contdiag {

// ---------------------------------------------------------------- terms

struct TermNode;
using Term = std::shared_ptr<const TermNode>;

struct TermNode {
  enum class Kind { Var, Const, App };
  Kind kind;
  std::string name;        // variable, constant or function symbol
  std::vector<Term> args;  // App only
};

inline Term t_var(std::string name) {
  return std::make_shared<TermNode>(TermNode{TermNode::Kind::Var, std::move(name), {}});
}
inline Term t_const(std::string name) {
  return std::make_shared<TermNode>(TermNode{TermNode::Kind::Const, std::move(name), {}});
}
inline Term t_app(std::string fn, std::vector<Term> args) {
  return std::make_shared<TermNode>(
      TermNode{TermNode::Kind::App, std::move(fn), std::move(args)});
}

inline bool term_equal(const Term& a, const Term& b) {
  if (a->kind != b->kind || a->name != b->name || a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  return true;
}

inline bool term_closed(const Term& t) {
  if (t->kind == TermNode::Kind::Var) return false;
  for (const auto& a : t->args)
    if (!term_closed(a)) return false;
  return true;
}

inline void term_free_vars(const Term& t, std::set<std::string>& out) {
  if (t->kind == TermNode::Kind::Var) out.insert(t->name);
  for (const auto& a : t->args) term_free_vars(a, out);
}

inline Term term_substitute(const Term& t, const std::string& var, const Term& repl) {
  switch (t->kind) {
    case TermNode::Kind::Var:
      return t->name == var ? repl : t;
    case TermNode::Kind::Const:
      return t;
    case TermNode::Kind::App: {
      std::vector<Term> args;
      args.reserve(t->args.size());
      for (const auto& a : t->args) args.push_back(term_substitute(a, var, repl));
      return t_app(t->name, std::move(args));
    }
  }
  throw DomainError("unreachable term kind");
}

inline std::string render_term(const Term& t) {
  if (t->kind != TermNode::Kind::App) return t->name;
  std::string s = t->name + "(";
  for (std::size_t i = 0; i < t->args.size(); ++i) {
    if (i) s += ",";
    s += render_term(t->args[i]);
  }
  return s + ")";
}

// -------------------------------------------------------------- formulas

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

/// AST over the primitive connectives.  min/max/avg are parser sugar and
/// never appear as nodes.
struct FormulaNode {
  enum class Kind { MetricAtom, PredAtom, Neg, Half, Tsub, Sup, Inf };
  Kind kind;
  std::string symbol;      // PredAtom: predicate name; Sup/Inf: bound variable
  std::vector<Term> args;  // atoms
  Formula left, right;     // Neg/Half/Sup/Inf use left; Tsub uses both
};

inline Formula f_metric(Term a, Term b) {
  return std::make_shared<FormulaNode>(FormulaNode{
      FormulaNode::Kind::MetricAtom, "d", {std::move(a), std::move(b)}, nullptr, nullptr});
}
inline Formula f_pred(std::string name, std::vector<Term> args) {
  return std::make_shared<FormulaNode>(FormulaNode{
      FormulaNode::Kind::PredAtom, std::move(name), std::move(args), nullptr, nullptr});
}
inline Formula f_neg(Formula a) {
  return std::make_shared<FormulaNode>(
      FormulaNode{FormulaNode::Kind::Neg, "", {}, std::move(a), nullptr});
}
inline Formula f_half(Formula a) {
  return std::make_shared<FormulaNode>(
      FormulaNode{FormulaNode::Kind::Half, "", {}, std::move(a), nullptr});
}
inline Formula f_tsub(Formula a, Formula b) {
  return std::make_shared<FormulaNode>(
      FormulaNode{FormulaNode::Kind::Tsub, "", {}, std::move(a), std::move(b)});
}
inline Formula f_sup(std::string var, Formula body) {
  return std::make_shared<FormulaNode>(FormulaNode{
      FormulaNode::Kind::Sup, std::move(var), {}, std::move(body), nullptr});
}
inline Formula f_inf(std::string var, Formula body) {
  return std::make_shared<FormulaNode>(FormulaNode{
      FormulaNode::Kind::Inf, std::move(var), {}, std::move(body), nullptr});
}

// Derived connectives, expanded through the primitive identities:
//   min(a,b) = a -. (a -. b)
//   max(a,b) = 1 - min(1-a, 1-b)
//   avg(a,b) = max(a -. half(a -. b), b -. half(b -. a))
inline Formula f_min(Formula a, Formula b) { return f_tsub(a, f_tsub(a, b)); }
inline Formula f_max(Formula a, Formula b) {
  return f_neg(f_min(f_neg(a), f_neg(b)));
}
inline Formula f_avg(Formula a, Formula b) {
  return f_max(f_tsub(a, f_half(f_tsub(a, b))), f_tsub(b, f_half(f_tsub(b, a))));
}

inline bool formula_equal(const Formula& a, const Formula& b) {
  if (a->kind != b->kind || a->symbol != b->symbol ||
      a->args.size() != b->args.size())
    return false;
  for (std::size_t i = 0; i < a->args.size(); ++i)
    if (!term_equal(a->args[i], b->args[i])) return false;
  if ((a->left == nullptr) != (b->left == nullptr)) return false;
  if (a->left && !formula_equal(a->left, b->left)) return false;
  if ((a->right == nullptr) != (b->right == nullptr)) return false;
  if (a->right && !formula_equal(a->right, b->right)) return false;
  return true;
}

inline bool is_quantifier(const Formula& f) {
  return f->kind == FormulaNode::Kind::Sup || f->kind == FormulaNode::Kind::Inf;
}

inline bool quantifier_free(const FormulaNode* f) {
  if (f->kind == FormulaNode::Kind::Sup || f->kind == FormulaNode::Kind::Inf)
    return false;
  if (f->left && !quantifier_free(f->left.get())) return false;
  if (f->right && !quantifier_free(f->right.get())) return false;
  return true;
}
inline bool quantifier_free(const Formula& f) { return quantifier_free(f.get()); }

inline void formula_free_vars(const Formula& f, std::set<std::string>& out) {
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
    case FormulaNode::Kind::PredAtom:
      for (const auto& t : f->args) term_free_vars(t, out);
      return;
    case FormulaNode::Kind::Sup:
    case FormulaNode::Kind::Inf: {
      std::set<std::string> inner;
      formula_free_vars(f->left, inner);
      inner.erase(f->symbol);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      if (f->left) formula_free_vars(f->left, out);
      if (f->right) formula_free_vars(f->right, out);
  }
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  formula_free_vars(f, out);
  return out;
}

inline bool formula_closed(const Formula& f) { return free_vars(f).empty(); }

/// Substitute a term for a free variable.  The term must be closed, or must
/// avoid capture by every binder on the path to an occurrence.
inline Formula substitute(const Formula& f, const std::string& var, const Term& repl) {
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
    case FormulaNode::Kind::PredAtom: {
      std::vector<Term> args;
      args.reserve(f->args.size());
      for (const auto& t : f->args) args.push_back(term_substitute(t, var, repl));
      if (f->kind == FormulaNode::Kind::MetricAtom)
        return f_metric(args[0], args[1]);
      return f_pred(f->symbol, std::move(args));
    }
    case FormulaNode::Kind::Neg:
      return f_neg(substitute(f->left, var, repl));
    case FormulaNode::Kind::Half:
      return f_half(substitute(f->left, var, repl));
    case FormulaNode::Kind::Tsub:
      return f_tsub(substitute(f->left, var, repl), substitute(f->right, var, repl));
    case FormulaNode::Kind::Sup:
    case FormulaNode::Kind::Inf: {
      if (f->symbol == var) return f;  // var is rebound below, nothing free
      if (!term_closed(repl)) {
        std::set<std::string> tv;
        term_free_vars(repl, tv);
        if (tv.count(f->symbol) && free_vars(f->left).count(var))
          throw DomainError("substitute: variable capture at binder " + f->symbol);
      }
      Formula body = substitute(f->left, var, repl);
      return f->kind == FormulaNode::Kind::Sup ? f_sup(f->symbol, body)
                                               : f_inf(f->symbol, body);
    }
  }
  throw DomainError("unreachable formula kind");
}

inline Formula close_sup(const Formula& f, const std::string& var) {
  return f_sup(var, f);
}
inline Formula close_inf(const Formula& f, const std::string& var) {
  return f_inf(var, f);
}

// ------------------------------------------------------ prenex classes

struct PrenexClass {
  enum class Kind { QF, Sigma, Pi };
  Kind kind = Kind::QF;
  unsigned level = 0;  // >= 1 unless QF

  friend bool operator==(const PrenexClass&, const PrenexClass&) = default;

  std::string to_string() const {
    switch (kind) {
      case Kind::QF: return "QF";
      case Kind::Sigma: return "Sigma_" + std::to_string(level);
      case Kind::Pi: return "Pi_" + std::to_string(level);
    }
    return "?";
  }
};

/// Count alternating quantifier blocks along the root spine.  Consecutive
/// like quantifiers form one block.  A leading inf block gives Sigma, a
/// leading sup block gives Pi.  The matrix must be quantifier-free.
inline PrenexClass classify_prenex(const Formula& f) {
  if (!is_quantifier(f)) {
    if (!quantifier_free(f))
      throw DomainError("classify_prenex: formula is not in prenex form");
    return {PrenexClass::Kind::QF, 0};
  }
  unsigned blocks = 0;
  FormulaNode::Kind last = FormulaNode::Kind::Tsub;  // sentinel
  PrenexClass::Kind lead = PrenexClass::Kind::QF;
  const FormulaNode* cur = f.get();
  while (cur->kind == FormulaNode::Kind::Sup || cur->kind == FormulaNode::Kind::Inf) {
    if (cur->kind != last) {
      ++blocks;
      if (blocks == 1)
        lead = cur->kind == FormulaNode::Kind::Inf ? PrenexClass::Kind::Sigma
                                                   : PrenexClass::Kind::Pi;
      last = cur->kind;
    }
    cur = cur->left.get();
  }
  if (!quantifier_free(cur))
    throw DomainError("classify_prenex: quantifier below the root spine");
  return {lead, blocks};
}

/// Render to the concrete grammar accepted by parse_formula.
inline std::string render_formula(const Formula& f) {
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
      return "d(" + render_term(f->args[0]) + "," + render_term(f->args[1]) + ")";
    case FormulaNode::Kind::PredAtom: {
      std::string s = f->symbol + "(";
      for (std::size_t i = 0; i < f->args.size(); ++i) {
        if (i) s += ",";
        s += render_term(f->args[i]);
      }
      return s + ")";
    }
    case FormulaNode::Kind::Neg:
      return "neg(" + render_formula(f->left) + ")";
    case FormulaNode::Kind::Half:
      return "half(" + render_formula(f->left) + ")";
    case FormulaNode::Kind::Tsub: {
      // "-." is left associative; parenthesize a right tsub operand and
      // quantified operands, which the operand grammar does not admit bare.
      std::string lhs = render_formula(f->left);
      bool wrap_rhs = f->right->kind == FormulaNode::Kind::Tsub || is_quantifier(f->right);
      std::string rhs = wrap_rhs ? "(" + render_formula(f->right) + ")"
                                 : render_formula(f->right);
      std::string wrapped_lhs = is_quantifier(f->left) ? "(" + lhs + ")" : lhs;
      return wrapped_lhs + " -. " + rhs;
    }
    case FormulaNode::Kind::Sup:
      return "sup " + f->symbol + " . " + render_formula(f->left);
    case FormulaNode::Kind::Inf:
      return "inf " + f->symbol + " . " + render_formula(f->left);
  }
  throw DomainError("unreachable formula kind");
}

}  // namespace contdiag

#endif
