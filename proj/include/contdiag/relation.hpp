#ifndef CONTDIAG_RELATION_HPP
#define CONTDIAG_RELATION_HPP

#include <algorithm>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "contdiag/dyadic.hpp"
#include "contdiag/errors.hpp"

namespace contdiag {

/// Finite truncation of a decidable relation on N^k: an explicit tuple set
/// inside the box [0,B]^k plus one extension value taken by every tuple
/// with a coordinate beyond B.  Membership is thereby decided on all of N^k.
class RelationTable {
 public:
  RelationTable(unsigned arity, unsigned bound, bool extension = false)
      : arity_(arity), bound_(bound), extension_(extension) {}

  unsigned arity() const { return arity_; }
  unsigned bound() const { return bound_; }
  bool extension() const { return extension_; }
  const std::set<std::vector<unsigned>>& tuples() const { return tuples_; }

  void insert(std::vector<unsigned> tuple) {
    check_tuple(tuple);
    tuples_.insert(std::move(tuple));
  }

  bool contains(const std::vector<unsigned>& tuple) const {
    if (tuple.size() != arity_)
      throw DomainError("RelationTable::contains: arity mismatch");
    for (unsigned c : tuple)
      if (c > bound_) return extension_;
    return tuples_.count(tuple) > 0;
  }

  RelationTable complement() const {
    RelationTable out(arity_, bound_, !extension_);
    std::vector<unsigned> t(arity_, 0);
    do {
      if (!tuples_.count(t)) out.tuples_.insert(t);
    } while (next_tuple(t, bound_));
    return out;
  }

  /// Build from a membership predicate on the box.
  template <typename Pred>
  static RelationTable from_predicate(unsigned arity, unsigned bound, bool extension,
                                      Pred pred) {
    RelationTable out(arity, bound, extension);
    std::vector<unsigned> t(arity, 0);
    do {
      if (pred(t)) out.tuples_.insert(t);
    } while (next_tuple(t, bound));
    return out;
  }

  friend bool operator==(const RelationTable& a, const RelationTable& b) {
    return a.arity_ == b.arity_ && a.bound_ == b.bound_ &&
           a.extension_ == b.extension_ && a.tuples_ == b.tuples_;
  }

  /// Odometer step through [0,limit]^k; returns false after the last tuple.
  static bool next_tuple(std::vector<unsigned>& t, unsigned limit) {
    for (std::size_t i = t.size(); i-- > 0;) {
      if (t[i] < limit) {
        ++t[i];
        std::fill(t.begin() + static_cast<long>(i) + 1, t.end(), 0u);
        return true;
      }
    }
    return false;
  }

 private:
  void check_tuple(const std::vector<unsigned>& t) const {
    if (t.size() != arity_) throw DomainError("RelationTable: tuple arity mismatch");
    for (unsigned c : t)
      if (c > bound_)
        throw DomainError("RelationTable: tuple coordinate exceeds bound");
  }

  unsigned arity_;
  unsigned bound_;
  bool extension_;
  std::set<std::vector<unsigned>> tuples_;
};

enum class Quant { Forall, Exists };

inline Quant dual(Quant q) { return q == Quant::Forall ? Quant::Exists : Quant::Forall; }

/// Quantifier prefix over named coordinates of a relation table.  Every
/// coordinate is either quantified (in outermost-first order) or a
/// parameter, exactly once.
struct QuantPrefix {
  std::vector<std::pair<unsigned, Quant>> quants;  // (coordinate, quantifier)
  std::vector<unsigned> params;                    // parameter coordinates, in supply order

  void validate(unsigned arity) const {
    std::vector<bool> seen(arity, false);
    auto mark = [&](unsigned c) {
      if (c >= arity) throw DomainError("QuantPrefix: coordinate out of range");
      if (seen[c]) throw DomainError("QuantPrefix: coordinate used twice");
      seen[c] = true;
    };
    for (auto& [c, q] : quants) mark(c);
    for (unsigned c : params) mark(c);
    if (quants.size() + params.size() != arity)
      throw DomainError("QuantPrefix: coordinates do not cover the arity");
  }

  bool alternating() const {
    for (std::size_t i = 1; i < quants.size(); ++i)
      if (quants[i].second == quants[i - 1].second) return false;
    return true;
  }

  /// Parameter first (coordinate 0), quantifiers on 1..arity-1 alternating
  /// from `first`.  The layout of R(n, x_1, ..., x_N).
  static QuantPrefix param_first(Quant first, unsigned arity) {
    QuantPrefix p;
    p.params = {0};
    Quant q = first;
    for (unsigned c = 1; c < arity; ++c) {
      p.quants.emplace_back(c, q);
      q = dual(q);
    }
    return p;
  }

  /// Parameter last, quantifiers on 0..arity-2 alternating from `first`.
  /// The layout of R(x_0, x_1, ..., x_N, n).
  static QuantPrefix param_last(Quant first, unsigned arity) {
    QuantPrefix p;
    Quant q = first;
    for (unsigned c = 0; c + 1 < arity; ++c) {
      p.quants.emplace_back(c, q);
      q = dual(q);
    }
    p.params = {arity - 1};
    return p;
  }
};

namespace detail {

inline void place_params(std::vector<unsigned>& tuple, const QuantPrefix& prefix,
                         const std::vector<unsigned>& params) {
  if (params.size() != prefix.params.size())
    throw DomainError("parameter count mismatch");
  for (std::size_t i = 0; i < params.size(); ++i)
    tuple[prefix.params[i]] = params[i];
}

inline bool brute_rec(const RelationTable& R, const QuantPrefix& prefix,
                      std::vector<unsigned>& tuple, std::size_t qi, unsigned range) {
  if (qi == prefix.quants.size()) return R.contains(tuple);
  auto [coord, q] = prefix.quants[qi];
  for (unsigned v = 0; v <= range; ++v) {
    tuple[coord] = v;
    bool inner = brute_rec(R, prefix, tuple, qi + 1, range);
    if (q == Quant::Exists && inner) return true;
    if (q == Quant::Forall && !inner) return false;
  }
  return q == Quant::Forall;
}

}  // namespace detail

/// Direct alternating-quantifier evaluation over [0,range]; the oracle that
/// every other check in this module is measured against.
inline bool brute_prefix_holds(const RelationTable& R, const QuantPrefix& prefix,
                               const std::vector<unsigned>& params, unsigned range) {
  prefix.validate(R.arity());
  std::vector<unsigned> tuple(R.arity(), 0);
  detail::place_params(tuple, prefix, params);
  return detail::brute_rec(R, prefix, tuple, 0, range);
}

struct ChiPrefixValue {
  Dyadic chi;     // in {0, 1}
  Dyadic g_form;  // 1 - chi/2, in {1/2, 1}
};

namespace detail {

inline Dyadic chi_rec(const RelationTable& R, const QuantPrefix& prefix,
                      std::vector<unsigned>& tuple, std::size_t qi, unsigned range) {
  if (qi == prefix.quants.size())
    return Dyadic(R.contains(tuple) ? 1 : 0);
  auto [coord, q] = prefix.quants[qi];
  tuple[coord] = 0;
  Dyadic acc = chi_rec(R, prefix, tuple, qi + 1, range);
  for (unsigned v = 1; v <= range; ++v) {
    tuple[coord] = v;
    Dyadic inner = chi_rec(R, prefix, tuple, qi + 1, range);
    acc = q == Quant::Forall ? d_min(acc, inner) : d_max(acc, inner);
  }
  return acc;
}

}  // namespace detail

/// inf/sup alternation of the indicator function (forall -> inf,
/// exists -> sup), folded with the dyadic lattice operations.
inline ChiPrefixValue chi_prefix_value(const RelationTable& R, const QuantPrefix& prefix,
                                       const std::vector<unsigned>& params,
                                       unsigned range) {
  prefix.validate(R.arity());
  std::vector<unsigned> tuple(R.arity(), 0);
  detail::place_params(tuple, prefix, params);
  Dyadic chi = detail::chi_rec(R, prefix, tuple, 0, range);
  return {chi, d_neg(d_half(chi))};
}

namespace detail {

inline bool star_rec(const RelationTable& R, const QuantPrefix& prefix,
                     const std::vector<unsigned>& outer, std::vector<unsigned>& tuple,
                     std::size_t qi) {
  if (qi == prefix.quants.size()) return R.contains(tuple);
  auto [coord, q] = prefix.quants[qi];
  unsigned limit = outer[coord];
  for (unsigned v = 0; v <= limit; ++v) {
    tuple[coord] = v;
    bool inner = star_rec(R, prefix, outer, tuple, qi + 1);
    if (q == Quant::Exists && inner) return true;
    if (q == Quant::Forall && !inner) return false;
  }
  return q == Quant::Forall;
}

}  // namespace detail

/// Membership in the star transform at one tuple: the alternating bounded
/// quantification (forall x1' <= x1)(exists x2' <= x2)... of R, with
/// parameter coordinates passed through.  Exact for any tuple.
inline bool star_contains(const RelationTable& R, const QuantPrefix& prefix,
                          const std::vector<unsigned>& tuple) {
  if (!prefix.alternating() || prefix.quants.empty() ||
      prefix.quants.front().second != Quant::Forall)
    throw DomainError("star: prefix must alternate starting with forall");
  prefix.validate(R.arity());
  std::vector<unsigned> work = tuple;
  return detail::star_rec(R, prefix, tuple, work, 0);
}

/// Materialized star transform on the box [0,bound_out]^k.  Queries inside
/// the box are exact; the extension value is the (exact) star value at the
/// all-(bound_out+1) tuple, which callers must not rely on for mixed
/// beyond-bound tuples.
inline RelationTable star(const RelationTable& R, const QuantPrefix& prefix,
                          unsigned bound_out) {
  std::vector<unsigned> corner(R.arity(), bound_out + 1);
  bool ext = star_contains(R, prefix, corner);
  return RelationTable::from_predicate(
      R.arity(), bound_out, ext,
      [&](const std::vector<unsigned>& t) { return star_contains(R, prefix, t); });
}

inline RelationTable star(const RelationTable& R, const QuantPrefix& prefix) {
  return star(R, prefix, R.bound());
}

}  // namespace contdiag

#endif
