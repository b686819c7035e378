#ifndef CONTDIAG_INFINITARY_HPP
#define CONTDIAG_INFINITARY_HPP

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contdiag/diagrams.hpp"
#include "contdiag/godel.hpp"
#include "contdiag/ordinal.hpp"
#include "contdiag/presentation.hpp"
#include "contdiag/structures.hpp"

namespace contdiag {

enum class CodeClass { Sigma, Pi };

inline std::string to_string(CodeClass c) { return c == CodeClass::Sigma ? "Sigma" : "Pi"; }

struct InfCodeNode;
using InfCode = std::shared_ptr<const InfCodeNode>;

/// One entry of an enumerated stream: a sub-code together with the
/// variables the enclosing countable connective quantifies inside it.
struct StreamItem {
  InfCode code;
  std::vector<std::string> vars;
};

/// Total enumerator of stream items.  `length` marks a finite stream;
/// `closure_after` promises every later item's value already occurs among
/// items 0..closure_after (so a prefix that long is exhaustive in value);
/// `tail_slack`, when set, bounds |value - prefix value| after consuming
/// items 0..T.
struct StreamSpec {
  std::function<StreamItem(unsigned)> at;
  std::optional<unsigned> length;
  std::optional<unsigned> closure_after;
  std::function<Dyadic(unsigned)> tail_slack;
};

class EnumeratorRegistry {
 public:
  std::string add(StreamSpec spec, const std::string& hint = "e") {
    std::string id = hint + "." + std::to_string(next_++);
    specs_.emplace(id, std::move(spec));
    return id;
  }

  void add_named(const std::string& id, StreamSpec spec) {
    if (specs_.count(id)) throw DomainError("enumerator id already registered: " + id);
    specs_.emplace(id, std::move(spec));
  }

  const StreamSpec& get(const std::string& id) const {
    auto it = specs_.find(id);
    if (it == specs_.end()) throw DomainError("unknown enumerator: " + id);
    return it->second;
  }

 private:
  std::map<std::string, StreamSpec> specs_;
  unsigned next_ = 0;
};

/// Code for an infinitary sentence: a quantifier-free leaf, or a countable
/// connective (Sigma: inf over the stream; Pi: sup) applied to quantified
/// stream items.  Leaves sit at notation 0 and count as both classes.
struct InfCodeNode {
  enum class Kind { Leaf, Node };
  Kind kind = Kind::Leaf;
  Formula leaf;                    // Leaf
  CodeClass cls = CodeClass::Sigma;  // Node
  Ordinal notation;                // Node; Leaf uses zero
  std::vector<std::string> vars;   // Node: free variables of the code
  std::string enumerator;          // Node
};

inline InfCode make_leaf(Formula f) {
  if (!quantifier_free(f)) throw DomainError("infinitary leaf must be quantifier-free");
  auto n = std::make_shared<InfCodeNode>();
  n->kind = InfCodeNode::Kind::Leaf;
  n->leaf = std::move(f);
  n->notation = ord_zero();
  return n;
}

inline InfCode make_code(CodeClass cls, Ordinal notation, std::vector<std::string> vars,
                         std::string enumerator, const EnumeratorRegistry& reg) {
  if (!ordinal_less(ord_zero(), notation))
    throw DomainError("infinitary code needs a positive notation");
  reg.get(enumerator);
  auto n = std::make_shared<InfCodeNode>();
  n->kind = InfCodeNode::Kind::Node;
  n->cls = cls;
  n->notation = std::move(notation);
  n->vars = std::move(vars);
  n->enumerator = std::move(enumerator);
  return n;
}

inline InfCode make_sigma_code(Ordinal notation, std::vector<std::string> vars,
                               std::string enumerator, const EnumeratorRegistry& reg) {
  return make_code(CodeClass::Sigma, std::move(notation), std::move(vars),
                   std::move(enumerator), reg);
}

inline InfCode make_pi_code(Ordinal notation, std::vector<std::string> vars,
                            std::string enumerator, const EnumeratorRegistry& reg) {
  return make_code(CodeClass::Pi, std::move(notation), std::move(vars),
                   std::move(enumerator), reg);
}

inline Ordinal code_notation(const InfCode& c) {
  return c->kind == InfCodeNode::Kind::Leaf ? ord_zero() : c->notation;
}

/// Stream membership condition: the item's code must be of the dual class
/// (leaves qualify for either), carry a strictly smaller notation, and
/// quantify variables disjoint from the node's free variables.  Items that
/// fail are filtered out of evaluation.
inline bool item_admissible(const InfCodeNode& node, const StreamItem& item) {
  if (!item.code) return false;
  if (item.code->kind == InfCodeNode::Kind::Node && item.code->cls == node.cls)
    return false;
  if (!ordinal_less(code_notation(item.code), node.notation)) return false;
  for (const auto& z : item.vars)
    for (const auto& x : node.vars)
      if (z == x) return false;
  return true;
}

/// Replace a free variable throughout a code.  Nodes are rewritten by
/// registering a mapped enumerator that substitutes into each item lazily.
inline InfCode substitute_code(const InfCode& c, const std::string& var, const Term& t,
                               EnumeratorRegistry& reg) {
  if (c->kind == InfCodeNode::Kind::Leaf) return make_leaf(substitute(c->leaf, var, t));
  const StreamSpec& base = reg.get(c->enumerator);
  StreamSpec mapped;
  EnumeratorRegistry* regp = &reg;
  auto at = base.at;
  mapped.at = [at, var, t, regp](unsigned i) {
    StreamItem item = at(i);
    // Items quantifying the substituted variable shadow it.
    for (const auto& z : item.vars)
      if (z == var) return item;
    item.code = substitute_code(item.code, var, t, *regp);
    return item;
  };
  mapped.length = base.length;
  mapped.closure_after = base.closure_after;
  mapped.tail_slack = base.tail_slack;
  std::string id = reg.add(std::move(mapped), "subst");
  std::vector<std::string> vars;
  for (const auto& x : c->vars)
    if (x != var) vars.push_back(x);
  return make_code(c->cls, c->notation, std::move(vars), std::move(id), reg);
}

/// Pi code sup_{vars} inner, one notation step up; dual for inf.
inline InfCode close_under_sup(const InfCode& inner, std::vector<std::string> vars,
                               EnumeratorRegistry& reg) {
  StreamSpec spec;
  StreamItem item{inner, std::move(vars)};
  spec.at = [item](unsigned) { return item; };
  spec.length = 1;
  spec.closure_after = 0;
  std::string id = reg.add(std::move(spec), "sup");
  return make_pi_code(ord_succ(code_notation(inner)), {}, std::move(id), reg);
}

inline InfCode close_under_inf(const InfCode& inner, std::vector<std::string> vars,
                               EnumeratorRegistry& reg) {
  StreamSpec spec;
  StreamItem item{inner, std::move(vars)};
  spec.at = [item](unsigned) { return item; };
  spec.length = 1;
  spec.closure_after = 0;
  std::string id = reg.add(std::move(spec), "inf");
  return make_sigma_code(ord_succ(code_notation(inner)), {}, std::move(id), reg);
}

inline Enclosure eval_inf(const Presentation& M, const InfCode& code,
                          EnumeratorRegistry& reg, unsigned T, unsigned k);

namespace detail {

/// Value of one stream item under the node's connective: the item's
/// variables are quantified over the structure's rational points (inf for a
/// Sigma node, sup for a Pi node), scanned up to index T with the unscanned
/// side left open.
inline Enclosure eval_item(const Presentation& M, const InfCodeNode& node,
                           const StreamItem& item, EnumeratorRegistry& reg, unsigned T,
                           unsigned k) {
  if (item.vars.empty()) return eval_inf(M, item.code, reg, T, k);
  bool take_inf = node.cls == CodeClass::Sigma;
  std::vector<unsigned> asg(item.vars.size(), 0);
  std::optional<Dyadic> bound;
  while (true) {
    InfCode inst = item.code;
    for (std::size_t i = 0; i < item.vars.size(); ++i)
      inst = substitute_code(inst, item.vars[i], M.rational_point(asg[i]), reg);
    Enclosure e = eval_inf(M, inst, reg, T, k);
    Dyadic side = take_inf ? e.hi() : e.lo();
    bound = bound ? (take_inf ? d_min(*bound, side) : d_max(*bound, side)) : side;
    if (!RelationTable::next_tuple(asg, T)) break;
  }
  return take_inf ? Enclosure(Dyadic(0), *bound) : Enclosure(*bound, Dyadic(1));
}

}  // namespace detail

/// Enclosure of a code's value after consuming stream items 0..T: Sigma
/// nodes take the running inf, Pi nodes the running sup.  The truncated
/// side is closed off when the stream is finite or value-closed within the
/// prefix, tightened by tail_slack when available, and otherwise left at
/// the trivial bound.
inline Enclosure eval_inf(const Presentation& M, const InfCode& code,
                          EnumeratorRegistry& reg, unsigned T, unsigned k) {
  if (code->kind == InfCodeNode::Kind::Leaf) {
    if (!formula_closed(code->leaf))
      throw DomainError("eval_inf: leaf has unsubstituted free variables");
    Dyadic v = eval_qf(M, code->leaf, k);
    if (M.exact()) return Enclosure(v);
    Dyadic err = Dyadic::pow2(-static_cast<int>(k));
    return Enclosure(d_tsub(v, err), d_min(Dyadic(1), v + err));
  }
  const StreamSpec spec = reg.get(code->enumerator);
  bool sigma = code->cls == CodeClass::Sigma;
  bool complete = spec.length && *spec.length <= T + 1;
  if (spec.closure_after && *spec.closure_after <= T) complete = true;
  std::optional<Enclosure> acc;
  for (unsigned i = 0; i <= T; ++i) {
    if (spec.length && i >= *spec.length) break;
    StreamItem item = spec.at(i);
    if (!item_admissible(*code, item)) continue;
    Enclosure e = detail::eval_item(M, *code, item, reg, T, k);
    if (!acc) {
      acc = e;
    } else if (sigma) {
      acc = Enclosure(d_min(acc->lo(), e.lo()), d_min(acc->hi(), e.hi()));
    } else {
      acc = Enclosure(d_max(acc->lo(), e.lo()), d_max(acc->hi(), e.hi()));
    }
  }
  if (!acc) {
    // Empty connective: inf of nothing is 1, sup of nothing is 0.
    if (complete) return Enclosure(Dyadic(sigma ? 1 : 0));
    return Enclosure(Dyadic(0), Dyadic(1));
  }
  if (complete) return *acc;
  if (spec.tail_slack) {
    Dyadic slack = spec.tail_slack(T);
    if (sigma) return Enclosure(d_tsub(acc->lo(), slack), acc->hi());
    return Enclosure(acc->lo(), d_min(Dyadic(1), acc->hi() + slack));
  }
  return sigma ? Enclosure(Dyadic(0), acc->hi()) : Enclosure(acc->lo(), Dyadic(1));
}

/// Membership of q in the right Dedekind cut of the code's value: decides
/// q > value (strict) or q >= value, by refining truncations.
inline Verdict cut_check(const Presentation& M, const InfCode& code,
                         EnumeratorRegistry& reg, const Dyadic& q, bool strict,
                         unsigned T_max, unsigned k = 12) {
  Verdict v;
  for (unsigned t = 0; t <= T_max; ++t) {
    ++v.budget_consumed;
    Enclosure e = eval_inf(M, code, reg, t, k);
    bool verified = strict ? q > e.hi() : q >= e.hi();
    bool refuted = strict ? q <= e.lo() : q < e.lo();
    if (verified || refuted) {
      v.status = verified ? Verdict::Status::Verified : Verdict::Status::Refuted;
      v.witness = Witness{"enclosure", t, {}};
      v.range = t;
      return v;
    }
  }
  v.status = Verdict::Status::Unknown;
  v.range = T_max;
  return v;
}

/// Pointwise average of two codes.  Leaf against leaf folds into the
/// derived avg connective; leaf against node distributes into the stream;
/// node against node of the same class merges into one node over the
/// diagonally paired product stream (avg commutes with like sup/inf).
inline InfCode avg_code(const InfCode& a, const InfCode& b, EnumeratorRegistry& reg);

namespace detail {

inline std::optional<unsigned> effective_cap(const StreamSpec& s) {
  std::optional<unsigned> cap;
  if (s.length) cap = *s.length - 1;
  if (s.closure_after && (!cap || *s.closure_after < *cap)) cap = *s.closure_after;
  return cap;
}

inline InfCode avg_leaf_node(const InfCode& leaf, const InfCode& node,
                             EnumeratorRegistry& reg) {
  const StreamSpec& base = reg.get(node->enumerator);
  StreamSpec mapped;
  EnumeratorRegistry* regp = &reg;
  auto at = base.at;
  mapped.at = [at, leaf, regp](unsigned i) {
    StreamItem item = at(i);
    item.code = avg_code(leaf, item.code, *regp);
    return item;
  };
  mapped.length = base.length;
  mapped.closure_after = base.closure_after;
  if (base.tail_slack) {
    auto slack = base.tail_slack;
    // avg is 1/2-Lipschitz in the stream argument.
    mapped.tail_slack = [slack](unsigned T) { return d_half(slack(T)); };
  }
  std::string id = reg.add(std::move(mapped), "avg");
  return make_code(node->cls, node->notation, node->vars, std::move(id), reg);
}

}  // namespace detail

inline InfCode avg_code(const InfCode& a, const InfCode& b, EnumeratorRegistry& reg) {
  bool la = a->kind == InfCodeNode::Kind::Leaf, lb = b->kind == InfCodeNode::Kind::Leaf;
  if (la && lb) return make_leaf(f_avg(a->leaf, b->leaf));
  if (la) return detail::avg_leaf_node(a, b, reg);
  if (lb) return detail::avg_leaf_node(b, a, reg);
  if (a->cls != b->cls)
    throw DomainError("avg_code: cannot merge a Sigma node with a Pi node");
  const StreamSpec& sa = reg.get(a->enumerator);
  const StreamSpec& sb = reg.get(b->enumerator);
  auto cap_a = detail::effective_cap(sa), cap_b = detail::effective_cap(sb);
  StreamSpec prod;
  EnumeratorRegistry* regp = &reg;
  auto at_a = sa.at, at_b = sb.at;
  auto len_a = sa.length, len_b = sb.length;
  prod.at = [at_a, at_b, len_a, len_b, regp](unsigned t) {
    auto [bi, bj] = godel::unpair(BigInt(t));
    unsigned i = static_cast<unsigned>(bi), j = static_cast<unsigned>(bj);
    if (len_a) i %= *len_a;  // finite streams wrap; repeats are harmless
    if (len_b) j %= *len_b;
    StreamItem ia = at_a(i), ib = at_b(j);
    StreamItem out;
    out.code = avg_code(ia.code, ib.code, *regp);
    out.vars = ia.vars;
    out.vars.insert(out.vars.end(), ib.vars.begin(), ib.vars.end());
    return out;
  };
  if (cap_a && cap_b) {
    // Every pair (i <= cap_a, j <= cap_b) lies on a diagonal of index
    // at most cap_a + cap_b, hence within the first (s+1)(s+2)/2 items.
    unsigned s = *cap_a + *cap_b;
    prod.closure_after = (s + 1) * (s + 2) / 2 - 1;
  }
  std::string id = reg.add(std::move(prod), "avg");
  std::vector<std::string> vars = a->vars;
  vars.insert(vars.end(), b->vars.begin(), b->vars.end());
  Ordinal notation =
      ordinal_less(a->notation, b->notation) ? b->notation : a->notation;
  return make_code(a->cls, std::move(notation), std::move(vars), std::move(id), reg);
}

/// Code for sum_n 2^-(n+1) ops(n) over a stream of Pi codes (or leaves):
/// the partial sums are nested averages, and their sup folds into a single
/// Pi node over the concatenated blocks of the partials' streams.  Each
/// block must be value-closed so that finishing block K pins the K-th
/// partial sum exactly; the remaining gap is then 2^-(K+1).
inline InfCode inner_product_code(std::function<InfCode(unsigned)> ops, Ordinal notation,
                                  EnumeratorRegistry& reg) {
  struct State {
    std::function<InfCode(unsigned)> ops;
    EnumeratorRegistry* reg = nullptr;
    std::map<unsigned, InfCode> partials;
    std::vector<unsigned> block_sizes;

    InfCode build_partial(unsigned s, unsigned len) {
      InfCode op = ops(s);
      if (op->kind == InfCodeNode::Kind::Node && op->cls != CodeClass::Pi)
        throw DomainError("inner_product_code: operands must be Pi codes or leaves");
      Formula zero = f_metric(t_const(q_const_name(Dyadic(0))),
                              t_const(q_const_name(Dyadic(0))));
      InfCode rest = len == 1 ? make_leaf(zero) : build_partial(s + 1, len - 1);
      return avg_code(op, rest, *reg);
    }

    const InfCode& partial(unsigned K) {
      auto it = partials.find(K);
      if (it != partials.end()) return it->second;
      return partials.emplace(K, build_partial(0, K + 1)).first->second;
    }

    unsigned block_size(unsigned K) {
      while (block_sizes.size() <= K) {
        const InfCode& p = partial(static_cast<unsigned>(block_sizes.size()));
        if (p->kind == InfCodeNode::Kind::Leaf) {
          block_sizes.push_back(1);
        } else {
          auto cap = detail::effective_cap(reg->get(p->enumerator));
          if (!cap)
            throw DomainError(
                "inner_product_code: operand streams must be finite or value-closed");
          block_sizes.push_back(*cap + 1);
        }
      }
      return block_sizes[K];
    }

    // Block index and offset for a flat stream position.
    std::pair<unsigned, unsigned> locate(unsigned t) {
      unsigned K = 0, pos = t;
      while (pos >= block_size(K)) {
        pos -= block_size(K);
        ++K;
      }
      return {K, pos};
    }

    // Number of fully consumed blocks after items 0..T.
    unsigned completed_blocks(unsigned T) {
      unsigned K = 0;
      unsigned long long consumed = T + 1ull;
      while (consumed >= block_size(K)) {
        consumed -= block_size(K);
        ++K;
      }
      return K;
    }
  };
  auto st = std::make_shared<State>();
  st->ops = std::move(ops);
  st->reg = &reg;
  StreamSpec spec;
  spec.at = [st](unsigned t) {
    auto [K, pos] = st->locate(t);
    const InfCode& p = st->partial(K);
    if (p->kind == InfCodeNode::Kind::Leaf) return StreamItem{p, {}};
    return st->reg->get(p->enumerator).at(pos);
  };
  spec.tail_slack = [st](unsigned T) {
    unsigned K = st->completed_blocks(T);
    // K completed partial sums leave a series tail of at most 2^-K; no
    // completed block leaves the trivial bound.
    return K == 0 ? Dyadic(1) : tail_weight(K - 1);
  };
  std::string id = reg.add(std::move(spec), "ip");
  return make_pi_code(std::move(notation), {}, std::move(id), reg);
}

/// Sigma code for the set S = { n : (exists x1)(forall x2)... R(x1..xa, n) }
/// with a = the (finite) notation level: leaves compare the indicator
/// constants against q(0), so the code's value is (1 - chi_S(n)) / 2.
/// Level 0 compares rational constants directly.
inline InfCode encode_set_sigma(const RelationTable& R, const Ordinal& alpha, unsigned n,
                                EnumeratorRegistry& reg);
/// Pi counterpart with leaves against q(1): value (1 + chi_S(n)) / 2,
/// i.e. 1 - chi/2 of the complement set.
inline InfCode encode_set_pi(const RelationTable& R, const Ordinal& alpha, unsigned n,
                             EnumeratorRegistry& reg);

namespace detail {

inline unsigned encode_set_level(const RelationTable& R, const Ordinal& alpha) {
  unsigned a;
  try {
    a = ordinal_finite_value(alpha);
  } catch (const DomainError&) {
    throw DomainError("encode_set: limit levels are out of scope");
  }
  if (R.arity() != a + 1)
    throw DomainError("encode_set: level " + std::to_string(a) + " needs arity " +
                      std::to_string(a + 1));
  return a;
}

inline InfCode encode_set_build(const RelationTable& R, unsigned a, unsigned n,
                                bool sigma_root, unsigned depth,
                                std::vector<unsigned> coords, EnumeratorRegistry& reg) {
  if (depth > a) {
    Term c = t_const(c_const_name(a - 1, n, coords));
    Term q = t_const(q_const_name(Dyadic(sigma_root ? 0 : 1)));
    return make_leaf(f_metric(c, q));
  }
  StreamSpec spec;
  EnumeratorRegistry* regp = &reg;
  spec.at = [R, a, n, sigma_root, depth, coords, regp](unsigned x) {
    std::vector<unsigned> next = coords;
    next.push_back(x);
    return StreamItem{encode_set_build(R, a, n, sigma_root, depth + 1,
                                       std::move(next), *regp),
                      {}};
  };
  // Membership is constant once a coordinate passes the table bound.
  spec.closure_after = R.bound() + 1;
  bool odd = depth % 2 == 1;
  CodeClass cls = sigma_root == odd ? CodeClass::Sigma : CodeClass::Pi;
  std::string id = reg.add(std::move(spec), "set");
  return make_code(cls, ord_finite(a - depth + 1), {}, std::move(id), reg);
}

}  // namespace detail

inline InfCode encode_set_sigma(const RelationTable& R, const Ordinal& alpha, unsigned n,
                                EnumeratorRegistry& reg) {
  unsigned a = detail::encode_set_level(R, alpha);
  if (a == 0) {
    Term q0 = t_const(q_const_name(Dyadic(0)));
    Term other = t_const(q_const_name(R.contains({n}) ? Dyadic(0) : d_half(Dyadic(1))));
    return make_leaf(f_metric(q0, other));
  }
  return detail::encode_set_build(R, a, n, true, 1, {}, reg);
}

inline InfCode encode_set_pi(const RelationTable& R, const Ordinal& alpha, unsigned n,
                             EnumeratorRegistry& reg) {
  unsigned a = detail::encode_set_level(R, alpha);
  if (a == 0) {
    Term q0 = t_const(q_const_name(Dyadic(0)));
    Term other = t_const(q_const_name(R.contains({n}) ? Dyadic(1) : d_half(Dyadic(1))));
    return make_leaf(f_metric(q0, other));
  }
  return detail::encode_set_build(R, a, n, false, 1, {}, reg);
}

/// Reference value the Sigma encoding must attain: (1 - chi_S(n)) / 2 where
/// S quantifies exists-first over the non-parameter coordinates.
inline Dyadic encode_set_sigma_value(const RelationTable& R, unsigned n, unsigned range) {
  bool member = R.arity() == 1
                    ? R.contains({n})
                    : brute_prefix_holds(
                          R, QuantPrefix::param_last(Quant::Exists, R.arity()), {n}, range);
  return member ? Dyadic(0) : d_half(Dyadic(1));
}

inline Dyadic encode_set_pi_value(const RelationTable& R, unsigned n, unsigned range) {
  bool member = R.arity() == 1
                    ? R.contains({n})
                    : brute_prefix_holds(
                          R, QuantPrefix::param_last(Quant::Exists, R.arity()), {n}, range);
  return member ? Dyadic(1) : d_half(Dyadic(1));
}

/// Left-c.e. real sequence driven by a stage enumeration: p_n drops to
/// 1/2 - 2^-(s+1) when stage s enumerates n, and stays 1/2 otherwise.
/// approx(n, k) is within 2^-k of p_n because a stage beyond the search
/// horizon max(k, guard) can lower p_n by less than 2^-k.
class CeRealSequence {
 public:
  explicit CeRealSequence(std::function<std::optional<unsigned>(unsigned)> stage,
                          unsigned guard = 8)
      : stage_(std::move(stage)), guard_(guard) {}

  Dyadic approx(unsigned n, unsigned k) const {
    unsigned horizon = k > guard_ ? k : guard_;
    std::set<unsigned> seen;
    for (unsigned s = 0; s <= horizon; ++s) {
      auto c = stage_(s);
      if (!c) continue;
      if (!seen.insert(*c).second)
        throw InconsistencyError("stage enumeration repeated index " +
                                 std::to_string(*c));
      if (*c == n)
        return d_tsub(d_half(Dyadic(1)), Dyadic::pow2(-static_cast<int>(s) - 1));
    }
    return d_half(Dyadic(1));
  }

  bool enumerated_within(unsigned n, unsigned horizon) const {
    for (unsigned s = 0; s <= horizon; ++s) {
      auto c = stage_(s);
      if (c && *c == n) return true;
    }
    return false;
  }

 private:
  std::function<std::optional<unsigned>(unsigned)> stage_;
  unsigned guard_;
};

}  // namespace contdiag

#endif
