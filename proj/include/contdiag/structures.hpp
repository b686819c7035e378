#ifndef CONTDIAG_STRUCTURES_HPP
#define CONTDIAG_STRUCTURES_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "contdiag/gamma.hpp"
#include "contdiag/presentation.hpp"
#include "contdiag/relation.hpp"

namespace contdiag {

/// Indexed supply of decidable relations, one table per level.  The table
/// at level M has arity floor(M/2) + 2 and coordinate layout
/// (x0, x1, ..., xN, n) with the parameter last.
class RelationFamily {
 public:
  static unsigned level_arity(unsigned level) { return level / 2 + 2; }

  void set_level(unsigned level, RelationTable table) {
    if (table.arity() != level_arity(level))
      throw DomainError("RelationFamily: level " + std::to_string(level) +
                        " needs arity " + std::to_string(level_arity(level)));
    levels_.erase(level);
    levels_.emplace(level, std::move(table));
  }

  bool has_level(unsigned level) const { return levels_.count(level) > 0; }

  const RelationTable& level(unsigned level) const {
    auto it = levels_.find(level);
    if (it == levels_.end())
      throw DomainError("RelationFamily: missing level " + std::to_string(level));
    return it->second;
  }

  unsigned max_level() const {
    if (levels_.empty()) throw DomainError("RelationFamily: empty");
    return levels_.rbegin()->first;
  }

  const std::map<unsigned, RelationTable>& levels() const { return levels_; }

 private:
  std::map<unsigned, RelationTable> levels_;
};

/// The series interpretation behind the lower-bound structure:
///   f_M = Gamma(1 - chi_{R_M*}/2)        for even M (values in [1/2, 1]),
///   f_M = Gamma(chi_{(~R_M)*}/2)         for odd M  (values in [0, 1/2]),
/// evaluated at (x1, ..., xN, n) with the parameter last.
inline Dyadic level_series_value(const RelationFamily& fam, unsigned level,
                                 const std::vector<unsigned>& rest) {
  const RelationTable& R = fam.level(level);
  if (rest.size() + 1 != R.arity())
    throw DomainError("level_series_value: argument count mismatch");
  if (level % 2 == 0) return gamma_g_value(R, rest);
  return gamma_chi_complement_value(R.complement(), rest);
}

namespace detail {

inline std::optional<unsigned> parse_indexed_name(const std::string& name,
                                                  char prefix) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  unsigned v = 0;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (name[i] < '0' || name[i] > '9') return std::nullopt;
    if (i > 1 && v == 0) return std::nullopt;  // no leading zeros
    v = v * 10 + static_cast<unsigned>(name[i] - '0');
  }
  return v;
}

/// "P<M>_<n>" for the discrete structure's predicate family.
inline std::optional<std::pair<unsigned, unsigned>> parse_level_pred_name(
    const std::string& name) {
  auto us = name.find('_');
  if (us == std::string::npos) return std::nullopt;
  auto level = parse_indexed_name(name.substr(0, us), 'P');
  if (!level) return std::nullopt;
  const std::string rest = name.substr(us + 1);
  if (rest.empty()) return std::nullopt;
  unsigned n = 0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] < '0' || rest[i] > '9') return std::nullopt;
    if (i > 0 && n == 0) return std::nullopt;
    n = n * 10 + static_cast<unsigned>(rest[i] - '0');
  }
  return std::make_pair(*level, n);
}

/// "C<N>_<n>_<x1>_..._<xN1>" for the interval structure's extra constants.
inline std::optional<std::vector<unsigned>> parse_c_const_name(const std::string& name) {
  if (name.empty() || name[0] != 'C') return std::nullopt;
  std::vector<unsigned> parts;
  std::size_t i = 1;
  while (i <= name.size()) {
    std::size_t j = name.find('_', i);
    if (j == std::string::npos) j = name.size();
    if (j == i) return std::nullopt;
    unsigned v = 0;
    for (std::size_t p = i; p < j; ++p) {
      if (name[p] < '0' || name[p] > '9') return std::nullopt;
      if (p > i && v == 0) return std::nullopt;
      v = v * 10 + static_cast<unsigned>(name[p] - '0');
    }
    parts.push_back(v);
    if (j == name.size()) break;
    i = j + 1;
  }
  // Layout: N, n, x1..x_{N+1}.
  if (parts.size() < 3 || parts.size() != parts[0] + 3) return std::nullopt;
  return parts;
}

}  // namespace detail

/// The lower-bound structure: the naturals with the discrete metric,
/// extended by one extra point per constant c_n sitting at distance
/// c_n's series value from 0 and at distance 1 from every other natural.
/// Distinguished point i is the natural i (constant "p<i>"); predicates
/// P<M>_<n> are floor(M/2)-ary and interpret f_M(..., n).
class DiscretePresentation final : public Presentation {
 public:
  explicit DiscretePresentation(RelationFamily fam) : fam_(std::move(fam)) {
    sig_.add_constant("zero");
    sig_.add_constant_pattern([](const std::string& s) {
      return detail::parse_indexed_name(s, 'p').has_value();
    });
    sig_.add_constant_pattern([](const std::string& s) {
      return detail::parse_indexed_name(s, 'c').has_value();
    });
    sig_.add_predicate_pattern(
        [](const std::string& s) -> std::optional<unsigned> {
          auto p = detail::parse_level_pred_name(s);
          if (!p) return std::nullopt;
          return p->first / 2;
        },
        constant_modulus(1));
  }

  const Signature& signature() const override { return sig_; }

  Term rational_point(unsigned n) const override {
    return t_const("p" + std::to_string(n));
  }

  Dyadic eval_metric(const Term& a, const Term& b, unsigned) const override {
    Point pa = point_of(a), pb = point_of(b);
    if (!pa.extra && !pb.extra) return Dyadic(pa.index == pb.index ? 0 : 1);
    if (pa.extra && pb.extra) {
      if (pa.index == pb.index) return Dyadic(0);
      return d_min(Dyadic(1), pa.value + pb.value);
    }
    const Point& g = pa.extra ? pa : pb;
    const Point& m = pa.extra ? pb : pa;
    return m.index == 0 ? g.value : Dyadic(1);
  }

  Dyadic eval_predicate(const std::string& symbol, const std::vector<Term>& args,
                        unsigned) const override {
    auto p = detail::parse_level_pred_name(symbol);
    if (!p) throw DomainError("unknown predicate symbol: " + symbol);
    auto [level, n] = *p;
    if (args.size() != level / 2)
      throw DomainError("predicate arity mismatch: " + symbol);
    std::vector<unsigned> rest;
    rest.reserve(args.size() + 1);
    // Extra points project to 0; forced for points within 1/2 of 0 by the
    // constant-1 modulus, and harmless for the rest.
    for (const auto& t : args) {
      Point pt = point_of(t);
      rest.push_back(pt.extra ? 0 : pt.index);
    }
    rest.push_back(n);
    return level_series_value(fam_, level, rest);
  }

  bool exact() const override { return true; }

  Dyadic constant_value(unsigned n) const {
    if (n % 2 == 0) return level_series_value(fam_, 0, {n / 2});
    return level_series_value(fam_, 1, {(n - 1) / 2});
  }

  const RelationFamily& family() const { return fam_; }

 private:
  struct Point {
    bool extra = false;  // one of the c_n points rather than a natural
    unsigned index = 0;
    Dyadic value;  // distance from 0, extra points only
  };

  Point point_of(const Term& t) const {
    if (t->kind != TermNode::Kind::Const)
      throw DomainError("discrete structure: not a closed constant term: " +
                        render_term(t));
    if (t->name == "zero") return {false, 0, Dyadic(0)};
    if (auto i = detail::parse_indexed_name(t->name, 'p'))
      return {false, *i, Dyadic(0)};
    if (auto n = detail::parse_indexed_name(t->name, 'c'))
      return {true, *n, constant_value(*n)};
    throw DomainError("discrete structure: unknown constant " + t->name);
  }

  RelationFamily fam_;
  Signature sig_;
};

/// n-th dyadic in [0,1]: 0, 1, then for each exponent e >= 1 the odd
/// mantissas 1, 3, ..., 2^e - 1.  Total and repetition-free.
inline Dyadic nth_dyadic(unsigned n) {
  if (n == 0) return Dyadic(0);
  if (n == 1) return Dyadic(1);
  unsigned idx = n - 2, e = 1;
  while (idx >= (1u << (e - 1))) {
    idx -= 1u << (e - 1);
    ++e;
  }
  return Dyadic::from_canonical(BigInt(2 * idx + 1), e);
}

/// [0,1] with its usual metric and a constant q(v) for every dyadic v.
/// With a relation family installed it also carries the constants
/// C<N>_<n>_<x1>_..._<xN1> with value (1 - chi_{R_{2N+1}}(n, x1..xN1))/2.
class IntervalPresentation final : public Presentation {
 public:
  explicit IntervalPresentation(std::optional<RelationFamily> fam = std::nullopt)
      : fam_(std::move(fam)) {
    sig_.add_constant_pattern(is_q_const_name);
    if (fam_) {
      sig_.add_constant_pattern([this](const std::string& s) {
        auto parts = detail::parse_c_const_name(s);
        if (!parts) return false;
        return fam_->has_level(2 * (*parts)[0] + 1);
      });
    }
  }

  const Signature& signature() const override { return sig_; }

  Term rational_point(unsigned n) const override {
    return t_const(q_const_name(nth_dyadic(n)));
  }

  Dyadic eval_metric(const Term& a, const Term& b, unsigned) const override {
    Dyadic va = point_value(a), vb = point_value(b);
    return va > vb ? va - vb : vb - va;
  }

  Dyadic eval_predicate(const std::string& symbol, const std::vector<Term>&,
                        unsigned) const override {
    throw DomainError("interval structure has no predicate symbols: " + symbol);
  }

  bool exact() const override { return true; }
  bool compact() const override { return true; }

  Dyadic point_value(const Term& t) const {
    if (t->kind != TermNode::Kind::Const)
      throw DomainError("interval structure: not a closed constant term: " +
                        render_term(t));
    if (is_q_const_name(t->name)) return q_const_value(t->name);
    if (fam_) {
      if (auto parts = detail::parse_c_const_name(t->name)) {
        unsigned N = (*parts)[0], n = (*parts)[1];
        std::vector<unsigned> tuple(parts->begin() + 2, parts->end());
        tuple.push_back(n);
        bool chi = fam_->level(2 * N + 1).contains(tuple);
        return chi ? Dyadic(0) : d_half(Dyadic(1));
      }
    }
    throw DomainError("interval structure: unknown constant " + t->name);
  }

 private:
  std::optional<RelationFamily> fam_;
  Signature sig_;
};

inline std::string c_const_name(unsigned N, unsigned n,
                                const std::vector<unsigned>& xs) {
  if (xs.size() != N + 1)
    throw DomainError("c_const_name: need N+1 coordinates");
  std::string s = "C" + std::to_string(N) + "_" + std::to_string(n);
  for (unsigned x : xs) s += "_" + std::to_string(x);
  return s;
}

inline std::shared_ptr<const DiscretePresentation> make_lower_bound_structure(
    RelationFamily fam) {
  return std::make_shared<DiscretePresentation>(std::move(fam));
}

inline std::shared_ptr<const IntervalPresentation> make_interval_structure(
    std::optional<RelationFamily> fam = std::nullopt) {
  return std::make_shared<IntervalPresentation>(std::move(fam));
}

/// Deterministic mixed-membership family for tests and the CLI: level M
/// holds the tuples whose weighted coordinate sum lands on a residue
/// pattern that varies with the level.
inline RelationFamily make_sample_family(unsigned max_level, unsigned bound = 3) {
  RelationFamily fam;
  for (unsigned M = 0; M <= max_level; ++M) {
    unsigned arity = RelationFamily::level_arity(M);
    bool extension = M % 3 == 1;
    fam.set_level(M, RelationTable::from_predicate(
                         arity, bound, extension,
                         [M](const std::vector<unsigned>& t) {
                           unsigned s = M;
                           for (std::size_t i = 0; i < t.size(); ++i)
                             s += (static_cast<unsigned>(i) + 1) * t[i];
                           return s % 3 == 0 || (s + t[0]) % 7 == M % 7;
                         }));
  }
  return fam;
}

}  // namespace contdiag

#endif
