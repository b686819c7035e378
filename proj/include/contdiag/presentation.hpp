#ifndef CONTDIAG_PRESENTATION_HPP
#define CONTDIAG_PRESENTATION_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "contdiag/dyadic.hpp"
#include "contdiag/formula.hpp"
#include "contdiag/parser.hpp"
#include "contdiag/signature.hpp"

namespace contdiag {

/// A computably presented metric structure: an enumeration of rational
/// points (closed terms over the distinguished points) plus predicate and
/// metric evaluation to requested precision.  Implementations with the
/// `exact` capability return exact dyadics and ignore the precision
/// argument; `compact` enables two-sided sup/inf evaluation.
class Presentation {
 public:
  virtual ~Presentation() = default;

  virtual const Signature& signature() const = 0;
  virtual Term rational_point(unsigned n) const = 0;
  virtual Dyadic eval_predicate(const std::string& symbol,
                                const std::vector<Term>& args, unsigned k) const = 0;
  virtual Dyadic eval_metric(const Term& a, const Term& b, unsigned k) const = 0;
  virtual bool exact() const { return false; }
  virtual bool compact() const { return false; }
};

using PresentationPtr = std::shared_ptr<const Presentation>;

namespace detail {

/// Subformulas are shared, so both the count and the evaluation memoize by
/// node to stay linear in the size of the formula DAG.
inline unsigned long long count_atoms_rec(
    const Formula& f, std::map<const FormulaNode*, unsigned long long>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  unsigned long long n;
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
    case FormulaNode::Kind::PredAtom:
      n = 1;
      break;
    case FormulaNode::Kind::Tsub:
      n = count_atoms_rec(f->left, memo) + count_atoms_rec(f->right, memo);
      break;
    default:
      n = f->left ? count_atoms_rec(f->left, memo) : 0;
  }
  if (n > (1ull << 40)) n = 1ull << 40;
  memo.emplace(f.get(), n);
  return n;
}

inline unsigned long long count_atoms(const Formula& f) {
  std::map<const FormulaNode*, unsigned long long> memo;
  return count_atoms_rec(f, memo);
}

inline Dyadic eval_qf_rec(const Presentation& M, const Formula& f, unsigned k_atom,
                          std::map<const FormulaNode*, Dyadic>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  Dyadic v;
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
      v = M.eval_metric(f->args[0], f->args[1], k_atom);
      break;
    case FormulaNode::Kind::PredAtom:
      v = M.eval_predicate(f->symbol, f->args, k_atom);
      break;
    case FormulaNode::Kind::Neg:
      v = d_neg(eval_qf_rec(M, f->left, k_atom, memo));
      break;
    case FormulaNode::Kind::Half:
      v = d_half(eval_qf_rec(M, f->left, k_atom, memo));
      break;
    case FormulaNode::Kind::Tsub:
      v = d_tsub(eval_qf_rec(M, f->left, k_atom, memo),
                 eval_qf_rec(M, f->right, k_atom, memo));
      break;
    default:
      throw DomainError("eval_qf: formula is not quantifier-free");
  }
  memo.emplace(f.get(), v);
  return v;
}

inline Dyadic eval_qf_rec(const Presentation& M, const Formula& f, unsigned k_atom) {
  std::map<const FormulaNode*, Dyadic> memo;
  return eval_qf_rec(M, f, k_atom, memo);
}

}  // namespace detail

/// Evaluate a closed quantifier-free sentence to absolute error <= 2^-k.
/// The connectives are 1-Lipschitz in each operand, so evaluating every
/// atom to 2^-(k + ceil(log2 #atoms)) suffices; exact structures give
/// error 0 regardless of k.
inline Dyadic eval_qf(const Presentation& M, const Formula& f, unsigned k) {
  if (!formula_closed(f)) throw DomainError("eval_qf: sentence has free variables");
  unsigned long long atoms = detail::count_atoms(f);
  unsigned extra = 0;
  while ((1ull << extra) < atoms) ++extra;
  return detail::eval_qf_rec(M, f, k + extra);
}

namespace detail {

/// Occurrences of a variable in the atoms below f; an upper bound on the
/// Lipschitz constant of f in that variable (atoms are 1-Lipschitz per
/// occurrence, connectives 1-Lipschitz, sup/inf preserve the constant).
inline unsigned term_occurrences(const Term& t, const std::string& var) {
  if (t->kind == TermNode::Kind::Var) return t->name == var ? 1 : 0;
  unsigned n = 0;
  for (const auto& a : t->args) n += term_occurrences(a, var);
  return n;
}

inline unsigned var_occurrences(const Formula& f, const std::string& var) {
  switch (f->kind) {
    case FormulaNode::Kind::MetricAtom:
    case FormulaNode::Kind::PredAtom: {
      unsigned n = 0;
      for (const auto& t : f->args) n += term_occurrences(t, var);
      return n;
    }
    case FormulaNode::Kind::Tsub:
      return var_occurrences(f->left, var) + var_occurrences(f->right, var);
    case FormulaNode::Kind::Sup:
    case FormulaNode::Kind::Inf:
      if (f->symbol == var) return 0;
      return var_occurrences(f->left, var);
    default:
      return f->left ? var_occurrences(f->left, var) : 0;
  }
}

/// One grid pass at spacing 2^-j.  Quantified variables are replaced by
/// the dyadic-constant terms q(i/2^j); every point of [0,1] lies within
/// 2^-(j+1) of a grid point, so the Lipschitz slack C * 2^-(j+1) bounds
/// the sup/inf error on the open side.
inline Enclosure compact_pass(const Presentation& M, const Formula& f, unsigned j,
                              unsigned k) {
  switch (f->kind) {
    case FormulaNode::Kind::Neg:
      return e_neg(compact_pass(M, f->left, j, k));
    case FormulaNode::Kind::Half:
      return e_half(compact_pass(M, f->left, j, k));
    case FormulaNode::Kind::Tsub:
      return e_tsub(compact_pass(M, f->left, j, k),
                    compact_pass(M, f->right, j, k));
    case FormulaNode::Kind::Sup:
    case FormulaNode::Kind::Inf: {
      bool is_sup = f->kind == FormulaNode::Kind::Sup;
      unsigned C = var_occurrences(f->left, f->symbol);
      Dyadic slack = Dyadic(static_cast<long long>(C)) * Dyadic::pow2(-static_cast<int>(j + 1));
      Enclosure acc(Dyadic(is_sup ? 0 : 1));
      bool first = true;
      unsigned long long steps = 1ull << j;
      for (unsigned long long i = 0; i <= steps; ++i) {
        Dyadic x = Dyadic::from_mantissa_exponent(BigInt(i), j);
        Term point = t_const(q_const_name(x));
        Enclosure inner = compact_pass(M, substitute(f->left, f->symbol, point), j, k);
        if (first) {
          acc = inner;
          first = false;
        } else if (is_sup) {
          acc = Enclosure(d_max(acc.lo(), inner.lo()), d_max(acc.hi(), inner.hi()));
        } else {
          acc = Enclosure(d_min(acc.lo(), inner.lo()), d_min(acc.hi(), inner.hi()));
        }
      }
      if (is_sup) return Enclosure(acc.lo(), d_min(Dyadic(1), acc.hi() + slack));
      return Enclosure(d_tsub(acc.lo(), slack), acc.hi());
    }
    default: {
      Dyadic v = eval_qf_rec(M, f, k);
      if (M.exact()) return Enclosure(v);
      Dyadic err = Dyadic::pow2(-static_cast<int>(k));
      return Enclosure(d_tsub(v, err), d_min(Dyadic(1), v + err));
    }
  }
}

}  // namespace detail

/// Two-sided enclosure of a closed prenex sentence over a compact
/// structure, by dyadic grid refinement with syntactic Lipschitz slack.
/// Successive passes are intersected, so enclosures at higher precision
/// are contained in those at lower precision.
inline Enclosure compact_eval(const Presentation& M, const Formula& f, unsigned k) {
  if (!M.compact()) throw DomainError("compact_eval: structure is not compact");
  if (!formula_closed(f)) throw DomainError("compact_eval: sentence has free variables");
  Dyadic target = Dyadic::pow2(-static_cast<int>(k));
  Enclosure acc(Dyadic(0), Dyadic(1));
  for (unsigned j = 2; j <= 26; ++j) {
    acc = intersect(acc, detail::compact_pass(M, f, j, k + 2));
    if (!(acc.width() > target)) return acc;
  }
  throw PrecisionError("compact_eval: grid refinement exhausted before width 2^-" +
                       std::to_string(k));
}

}  // namespace contdiag

#endif
