#ifndef CONTDIAG_DIAGRAMS_HPP
#define CONTDIAG_DIAGRAMS_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contdiag/gamma.hpp"
#include "contdiag/presentation.hpp"
#include "contdiag/structures.hpp"

namespace contdiag {

struct DiagramQuery {
  Formula sentence;  // closed, prenex
  Dyadic threshold;
  enum class Mode { Closed, Open } mode = Mode::Closed;  // <= q vs < q
};

/// Re-checkable evidence attached to a definite verdict.  `points` are
/// rational-point indices for the leading quantifier block; `kind` names
/// which inequality of the four diagram equivalences the witness satisfies.
struct Witness {
  std::string kind;
  unsigned k = 0;
  std::vector<unsigned> points;
};

struct Verdict {
  enum class Status { Verified, Refuted, Unknown } status = Status::Unknown;
  std::optional<Witness> witness;
  unsigned long long budget_consumed = 0;
  unsigned range = 0;

  bool definite() const { return status != Status::Unknown; }
};

namespace detail {

struct BudgetExhausted {};

inline void spend(unsigned long long& budget) {
  if (budget == 0) throw BudgetExhausted{};
  --budget;
}

/// Exact value of a closed sentence with quantified variables ranging over
/// the first range+1 rational points.  Budget counts quantifier-free
/// evaluations.
inline Dyadic exact_value(const Presentation& M, const Formula& f, unsigned range,
                          unsigned long long& budget) {
  if (!is_quantifier(f)) {
    spend(budget);
    return eval_qf(M, f, 0);
  }
  bool is_sup = f->kind == FormulaNode::Kind::Sup;
  std::optional<Dyadic> acc;
  for (unsigned i = 0; i <= range; ++i) {
    Formula inst = substitute(f->left, f->symbol, M.rational_point(i));
    Dyadic v = exact_value(M, inst, range, budget);
    acc = acc ? (is_sup ? d_max(*acc, v) : d_min(*acc, v)) : v;
  }
  return *acc;
}

/// Maximal run of like quantifiers at the root: (variables, is_sup, matrix).
struct LeadingBlock {
  std::vector<std::string> vars;
  bool is_sup = false;
  Formula rest;
};

inline LeadingBlock leading_block(const Formula& f) {
  LeadingBlock b;
  b.is_sup = f->kind == FormulaNode::Kind::Sup;
  const Formula* cur = &f;
  auto kind = f->kind;
  while ((*cur)->kind == kind) {
    b.vars.push_back((*cur)->symbol);
    cur = &(*cur)->left;
  }
  b.rest = *cur;
  return b;
}

/// Smallest k with 2^-k < diff (strict) or 2^-k <= diff.
inline std::optional<unsigned> witness_k(const Dyadic& diff, bool strict) {
  if (diff <= Dyadic(0)) return std::nullopt;
  for (unsigned k = 0; k <= diff.exponent() + 1; ++k) {
    Dyadic w = Dyadic::pow2(-static_cast<int>(k));
    if (strict ? w < diff : w <= diff) return k;
  }
  return std::nullopt;
}

struct BlockScan {
  Dyadic best;                     // sup or inf over the block
  std::vector<unsigned> arg;      // point indices attaining it
};

inline BlockScan scan_block(const Presentation& M, const LeadingBlock& b,
                            unsigned range, unsigned long long& budget) {
  std::vector<unsigned> tuple(b.vars.size(), 0);
  std::optional<BlockScan> out;
  while (true) {
    Formula inst = b.rest;
    for (std::size_t i = 0; i < b.vars.size(); ++i)
      inst = substitute(inst, b.vars[i], M.rational_point(tuple[i]));
    Dyadic v = exact_value(M, inst, range, budget);
    bool better = !out || (b.is_sup ? v > out->best : v < out->best);
    if (better) out = BlockScan{v, tuple};
    if (!RelationTable::next_tuple(tuple, range)) break;
  }
  return *out;
}

/// Compact-structure path: two-sided enclosures at growing precision.
inline Verdict enclosure_verdict(const Presentation& M, const Formula& f,
                                 const Dyadic& q, bool closed,
                                 unsigned long long budget) {
  Verdict v;
  v.budget_consumed = 0;
  for (unsigned k = 2; k <= 20; ++k) {
    if (v.budget_consumed >= budget) return v;
    ++v.budget_consumed;
    Enclosure e = M.compact()
                      ? compact_eval(M, f, k)
                      : Enclosure(eval_qf(M, f, k), eval_qf(M, f, k));
    bool verified = closed ? e.hi() <= q : e.hi() < q;
    bool refuted = closed ? e.lo() > q : e.lo() >= q;
    if (verified) {
      v.status = Verdict::Status::Verified;
      v.witness = Witness{"enclosure", k, {}};
      return v;
    }
    if (refuted) {
      v.status = Verdict::Status::Refuted;
      v.witness = Witness{"enclosure", k, {}};
      return v;
    }
  }
  return v;
}

}  // namespace detail

/// Sound one-sided enclosure of a closed prenex sentence: a sup block
/// contributes max of the recursive lower bounds over the first P rational
/// points (upper bound 1 unless the structure is compact); dually for inf.
inline Enclosure eval_enclosure(const Presentation& M, const Formula& f, unsigned P,
                                unsigned k) {
  if (P == 0) throw DomainError("eval_enclosure: zero point budget");
  if (!is_quantifier(f)) {
    Dyadic v = eval_qf(M, f, k);
    if (M.exact()) return Enclosure(v);
    Dyadic err = Dyadic::pow2(-static_cast<int>(k));
    return Enclosure(d_tsub(v, err), d_min(Dyadic(1), v + err));
  }
  if (M.compact()) return compact_eval(M, f, k);
  bool is_sup = f->kind == FormulaNode::Kind::Sup;
  std::optional<Dyadic> bound;
  for (unsigned i = 0; i < P; ++i) {
    Formula inst = substitute(f->left, f->symbol, M.rational_point(i));
    Enclosure inner = eval_enclosure(M, inst, P, k);
    Dyadic side = is_sup ? inner.lo() : inner.hi();
    bound = bound ? (is_sup ? d_max(*bound, side) : d_min(*bound, side)) : side;
  }
  return is_sup ? Enclosure(*bound, Dyadic(1)) : Enclosure(Dyadic(0), *bound);
}

/// Semi-decision of phi^M <= q per the diagram equivalences:
///   Pi closed:    refutable by (k, a) with psi(a) > q + 2^-k;
///   Sigma closed: verified when every k has a point with psi(a) < q + 2^-k.
/// On an exact structure the quantifier scans over [0,range] are exhaustive
/// and the verdict is definite; on a compact structure two-sided enclosures
/// decide; budget exhaustion yields Unknown.
inline Verdict closed_check(const Presentation& M, const Formula& f, const Dyadic& q,
                            unsigned range, unsigned long long budget) {
  if (!q.in_unit_interval()) throw DomainError("closed_check: threshold outside [0,1]");
  PrenexClass cls = classify_prenex(f);
  Verdict v;
  v.range = range;
  unsigned long long remaining = budget;
  try {
    if (cls.kind == PrenexClass::Kind::QF) {
      detail::spend(remaining);
      Dyadic val = eval_qf(M, f, 0);
      v.budget_consumed = budget - remaining;
      if (val <= q) {
        v.status = Verdict::Status::Verified;
        v.witness = Witness{"direct", 0, {}};
      } else {
        v.status = Verdict::Status::Refuted;
        v.witness = Witness{"direct", *detail::witness_k(val - q, true), {}};
      }
      return v;
    }
    if (!M.exact() || M.compact())
      return detail::enclosure_verdict(M, f, q, true, budget);
    detail::LeadingBlock b = detail::leading_block(f);
    detail::BlockScan scan = detail::scan_block(M, b, range, remaining);
    v.budget_consumed = budget - remaining;
    if (cls.kind == PrenexClass::Kind::Pi) {
      // sup psi <= q  iff  (forall k)(forall a) psi(a) <= q + 2^-k.
      if (scan.best <= q) {
        v.status = Verdict::Status::Verified;
        v.witness = Witness{"exhaustive-sup", 0, {}};
      } else {
        v.status = Verdict::Status::Refuted;
        v.witness =
            Witness{"refuting-point", *detail::witness_k(scan.best - q, true), scan.arg};
      }
    } else {
      // inf psi <= q  iff  (forall k)(exists a) psi(a) < q + 2^-k.
      if (scan.best <= q) {
        v.status = Verdict::Status::Verified;
        v.witness = Witness{"verifying-point", 0, scan.arg};
      } else {
        v.status = Verdict::Status::Refuted;
        v.witness = Witness{"refuting-k", *detail::witness_k(scan.best - q, false), {}};
      }
    }
  } catch (const detail::BudgetExhausted&) {
    v.status = Verdict::Status::Unknown;
    v.budget_consumed = budget;
  }
  return v;
}

/// Semi-decision of phi^M < q, dual to closed_check:
///   Pi open:    verified by a k with (forall a) psi(a) <= q - 2^-k;
///   Sigma open: verified by (k, a) with psi(a) < q - 2^-k.
inline Verdict open_check(const Presentation& M, const Formula& f, const Dyadic& q,
                          unsigned range, unsigned long long budget) {
  if (!q.in_unit_interval()) throw DomainError("open_check: threshold outside [0,1]");
  PrenexClass cls = classify_prenex(f);
  Verdict v;
  v.range = range;
  unsigned long long remaining = budget;
  try {
    if (cls.kind == PrenexClass::Kind::QF) {
      detail::spend(remaining);
      Dyadic val = eval_qf(M, f, 0);
      v.budget_consumed = budget - remaining;
      if (val < q) {
        v.status = Verdict::Status::Verified;
        v.witness = Witness{"direct", *detail::witness_k(q - val, true), {}};
      } else {
        v.status = Verdict::Status::Refuted;
        v.witness = Witness{"direct", 0, {}};
      }
      return v;
    }
    if (!M.exact() || M.compact())
      return detail::enclosure_verdict(M, f, q, false, budget);
    detail::LeadingBlock b = detail::leading_block(f);
    detail::BlockScan scan = detail::scan_block(M, b, range, remaining);
    v.budget_consumed = budget - remaining;
    if (cls.kind == PrenexClass::Kind::Pi) {
      // sup psi < q  iff  (exists k)(forall a) psi(a) <= q - 2^-k.
      if (scan.best < q) {
        v.status = Verdict::Status::Verified;
        v.witness = Witness{"verifying-k", *detail::witness_k(q - scan.best, false), {}};
      } else {
        v.status = Verdict::Status::Refuted;
        v.witness = Witness{"refuting-point", 0, scan.arg};
      }
    } else {
      // inf psi < q  iff  (exists k)(exists a) psi(a) < q - 2^-k.
      if (scan.best < q) {
        v.status = Verdict::Status::Verified;
        v.witness =
            Witness{"verifying-pair", *detail::witness_k(q - scan.best, true), scan.arg};
      } else {
        v.status = Verdict::Status::Refuted;
        v.witness = Witness{"exhaustive-inf", 0, {}};
      }
    }
  } catch (const detail::BudgetExhausted&) {
    v.status = Verdict::Status::Unknown;
    v.budget_consumed = budget;
  }
  return v;
}

inline Verdict run_check(const Presentation& M, const DiagramQuery& query,
                         unsigned range, unsigned long long budget) {
  return query.mode == DiagramQuery::Mode::Closed
             ? closed_check(M, query.sentence, query.threshold, range, budget)
             : open_check(M, query.sentence, query.threshold, range, budget);
}

/// Independently re-evaluate a definite verdict's evidence.  Returns false
/// when the recorded inequality (or exhaustion claim) fails to re-check.
inline bool reverify(const Presentation& M, const DiagramQuery& query,
                     const Verdict& v) {
  if (!v.definite()) return true;
  if (!v.witness) return false;
  const Witness& w = *v.witness;
  const Dyadic& q = query.threshold;
  unsigned long long budget = ~0ull;
  if (w.kind == "direct") {
    Dyadic val = eval_qf(M, query.sentence, 0);
    if (query.mode == DiagramQuery::Mode::Closed)
      return v.status == Verdict::Status::Verified ? val <= q
                                                   : val > q + Dyadic::pow2(-static_cast<int>(w.k));
    return v.status == Verdict::Status::Verified
               ? val < q - Dyadic::pow2(-static_cast<int>(w.k))
               : val >= q;
  }
  if (w.kind == "enclosure") {
    Enclosure e = M.compact() ? compact_eval(M, query.sentence, w.k)
                              : Enclosure(eval_qf(M, query.sentence, w.k),
                                          eval_qf(M, query.sentence, w.k));
    bool closed = query.mode == DiagramQuery::Mode::Closed;
    if (v.status == Verdict::Status::Verified)
      return closed ? e.hi() <= q : e.hi() < q;
    return closed ? e.lo() > q : e.lo() >= q;
  }
  detail::LeadingBlock b = detail::leading_block(query.sentence);
  auto value_at = [&](const std::vector<unsigned>& pts) {
    Formula inst = b.rest;
    for (std::size_t i = 0; i < b.vars.size(); ++i)
      inst = substitute(inst, b.vars[i], M.rational_point(pts[i]));
    return detail::exact_value(M, inst, v.range, budget);
  };
  Dyadic eps = Dyadic::pow2(-static_cast<int>(w.k));
  if (w.kind == "refuting-point")
    return query.mode == DiagramQuery::Mode::Closed ? value_at(w.points) > q + eps
                                                    : value_at(w.points) >= q;
  if (w.kind == "verifying-point") return value_at(w.points) <= q;
  if (w.kind == "verifying-pair") return value_at(w.points) < q - eps;
  // Scan-based evidence: re-run the exhaustive scan.
  detail::BlockScan scan = detail::scan_block(M, b, v.range, budget);
  if (w.kind == "exhaustive-sup") return scan.best <= q;
  if (w.kind == "exhaustive-inf") return scan.best >= q;
  if (w.kind == "verifying-k") return scan.best <= q - eps;
  if (w.kind == "refuting-k") return scan.best >= q + eps;
  return false;
}

/// phi_n = inf x1 . sup x2 . ... Q xN . P<2N>_<n>(x1..xN)   (Sigma_N)
/// psi_n = sup x1 . inf x2 . ... Q xN . P<2N+1>_<n>(x1..xN) (Pi_N)
inline std::pair<Formula, Formula> build_lower_bound_sentences(unsigned N, unsigned n) {
  if (N == 0) throw DomainError("build_lower_bound_sentences: N must be positive");
  std::vector<Term> vars;
  for (unsigned i = 1; i <= N; ++i) vars.push_back(t_var("x" + std::to_string(i)));
  Formula phi = f_pred("P" + std::to_string(2 * N) + "_" + std::to_string(n), vars);
  Formula psi = f_pred("P" + std::to_string(2 * N + 1) + "_" + std::to_string(n), vars);
  for (unsigned i = N; i >= 1; --i) {
    std::string x = "x" + std::to_string(i);
    // phi alternates inf, sup, inf, ...; psi is the mirror image.
    bool phi_inf = i % 2 == 1;
    phi = phi_inf ? f_inf(x, phi) : f_sup(x, phi);
    psi = phi_inf ? f_sup(x, psi) : f_inf(x, psi);
  }
  return {phi, psi};
}

struct CrossCheckInstance {
  unsigned N = 0;
  unsigned n = 0;
  bool open = false;
  bool diagram_verified = false;
  bool oracle_member = false;
  unsigned range = 0;
  bool match() const { return diagram_verified == oracle_member; }
};

struct CrossCheckReport {
  std::vector<CrossCheckInstance> instances;
  unsigned long long budget_consumed = 0;
  std::vector<CrossCheckInstance> mismatches() const {
    std::vector<CrossCheckInstance> out;
    for (const auto& i : instances)
      if (!i.match()) out.push_back(i);
    return out;
  }
  bool passed() const { return mismatches().empty(); }
};

/// Instance harness for the lower-bound structure: diagram verdicts at
/// threshold 1/2 against brute alternating-quantifier membership, retrying
/// at range+1..range+3 when a biconditional fails at the base range (the
/// star transform's witnesses may exceed the table bound).
inline CrossCheckReport cross_check_lower_bounds(const RelationFamily& fam,
                                                 unsigned N_max, unsigned n_max,
                                                 unsigned range,
                                                 unsigned long long budget = 1ull << 40) {
  auto M = make_lower_bound_structure(fam);
  const Dyadic half = d_half(Dyadic(1));
  CrossCheckReport report;
  auto run = [&](unsigned N, unsigned n, bool open, const Formula& sentence,
                 const RelationTable& R) {
    CrossCheckInstance inst;
    inst.N = N;
    inst.n = n;
    inst.open = open;
    for (unsigned r = range; r <= range + 3; ++r) {
      Verdict v = open ? open_check(*M, sentence, half, r, budget)
                       : closed_check(*M, sentence, half, r, budget);
      report.budget_consumed += v.budget_consumed;
      if (!v.definite())
        throw DomainError("cross check: budget exhausted");
      inst.diagram_verified = v.status == Verdict::Status::Verified;
      inst.oracle_member =
          open ? exists_membership(R, n, r) : forall_membership(R, n, r);
      inst.range = r;
      if (inst.match()) break;
    }
    report.instances.push_back(inst);
  };
  for (unsigned n = 0; n < n_max; ++n) {
    // Quantifier-free base: d(c_2n, zero) <= 1/2 and d(c_2n+1, zero) < 1/2.
    Formula closed_atom =
        f_metric(t_const("c" + std::to_string(2 * n)), t_const("zero"));
    Formula open_atom =
        f_metric(t_const("c" + std::to_string(2 * n + 1)), t_const("zero"));
    run(0, n, false, closed_atom, fam.level(0));
    run(0, n, true, open_atom, fam.level(1));
  }
  for (unsigned N = 1; N <= N_max; ++N) {
    for (unsigned n = 0; n < n_max; ++n) {
      auto [phi, psi] = build_lower_bound_sentences(N, n);
      run(N, n, false, phi, fam.level(2 * N));
      run(N, n, true, psi, fam.level(2 * N + 1));
    }
  }
  return report;
}

}  // namespace contdiag

#endif
