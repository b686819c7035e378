#ifndef CONTDIAG_GAMMA_HPP
#define CONTDIAG_GAMMA_HPP

#include <functional>
#include <utility>
#include <vector>

#include "contdiag/dyadic.hpp"
#include "contdiag/relation.hpp"

namespace contdiag {

/// Weighted partial sum over the leading coordinate:
///   gamma_K(f) = sum_{x0 = 0..K} 2^-(x0+1) f(x0),  exact.
inline Dyadic gamma_K(const std::function<Dyadic(unsigned)>& f, unsigned K) {
  Dyadic acc(0);
  for (unsigned x0 = 0; x0 <= K; ++x0) {
    Dyadic v = f(x0);
    if (!v.in_unit_interval()) throw DomainError("gamma_K: f value outside [0,1]");
    acc = acc + v * tail_weight(x0);
  }
  return acc;
}

/// Full series for an f that is constant past tail_bound:
///   gamma_total(f) = gamma_{tail_bound}(f) + f(tail_bound+1) * 2^-(tail_bound+1).
/// The eventual constancy is spot-checked one step out.
inline Dyadic gamma_total(const std::function<Dyadic(unsigned)>& f, unsigned tail_bound) {
  Dyadic tail = f(tail_bound + 1);
  if (!(tail == f(tail_bound + 2)))
    throw DomainError("gamma_total: f is not constant past the tail bound");
  return gamma_K(f, tail_bound) + tail * tail_weight(tail_bound);
}

/// Both sides of the carry biconditional for f : [0,K] -> {1/2, 1}:
///   gamma_K(f) <= 1/2  iff  f(m) = 1/2 for all m < K.
/// Returned separately so a failure localizes.
struct CarryCheck {
  bool gamma_at_most_half;
  bool all_half_below_K;
  bool agree() const { return gamma_at_most_half == all_half_below_K; }
};

inline CarryCheck check_carry(const std::vector<Dyadic>& f, unsigned K) {
  if (f.size() != K + 1) throw DomainError("check_carry: need values at 0..K");
  const Dyadic half = d_half(Dyadic(1));
  for (const auto& v : f)
    if (!(v == half || v == Dyadic(1)))
      throw DomainError("check_carry: f must take values in {1/2, 1}");
  Dyadic g = gamma_K([&](unsigned m) { return f[m]; }, K);
  bool lhs = g <= half;
  bool rhs = true;
  for (unsigned m = 0; m < K; ++m)
    if (!(f[m] == half)) rhs = false;
  return {lhs, rhs};
}

namespace detail {

/// sup/inf alternation of a dyadic-valued function of coordinates
/// x_J..x_N over [0,range], outermost quantifier `lead`.
inline Dyadic alternate_eval(const std::function<Dyadic(const std::vector<unsigned>&)>& f,
                             std::vector<unsigned>& coords, std::size_t idx, Quant q,
                             unsigned range) {
  if (idx == coords.size()) return f(coords);
  coords[idx] = 0;
  Dyadic acc = alternate_eval(f, coords, idx + 1, dual(q), range);
  for (unsigned v = 1; v <= range; ++v) {
    coords[idx] = v;
    Dyadic inner = alternate_eval(f, coords, idx + 1, dual(q), range);
    // forall on the relation corresponds to sup of G = 1 - chi/2.
    acc = q == Quant::Forall ? d_max(acc, inner) : d_min(acc, inner);
  }
  return acc;
}

}  // namespace detail

/// G = 1 - chi_{R*}/2 as a function of x0 with the remaining coordinates
/// fixed; the table layout is (x0, x1, ..., xN, n) with n last.
inline std::function<Dyadic(unsigned)> g_of_star(const RelationTable& R,
                                                 const std::vector<unsigned>& rest) {
  if (rest.size() + 1 != R.arity())
    throw DomainError("g_of_star: coordinate count mismatch");
  QuantPrefix starred = QuantPrefix::param_last(Quant::Forall, R.arity());
  return [&R, rest, starred](unsigned x0) {
    std::vector<unsigned> tuple;
    tuple.reserve(rest.size() + 1);
    tuple.push_back(x0);
    tuple.insert(tuple.end(), rest.begin(), rest.end());
    bool in_star = star_contains(R, starred, tuple);
    return in_star ? d_half(Dyadic(1)) : Dyadic(1);
  };
}

/// Full series of G = 1 - chi_{R*}/2 at fixed (x1..xN, n); values in [1/2, 1].
inline Dyadic gamma_g_value(const RelationTable& R, const std::vector<unsigned>& rest) {
  return gamma_total(g_of_star(R, rest), R.bound());
}

/// Full series of chi_{(~R)*}/2 at fixed (x1..xN, n); values in [0, 1/2].
inline Dyadic gamma_chi_complement_value(const RelationTable& notR,
                                         const std::vector<unsigned>& rest) {
  auto g = g_of_star(notR, rest);
  return gamma_total([g](unsigned x0) { return d_neg(g(x0)); }, notR.bound());
}

/// Both sides of each part of the sum/quantifier interchange equivalence,
/// at one instance (J, K, leading coordinates, parameter n).  Coordinates
/// x_J..x_N range over [0,range]; the table layout is (x0,...,xN,n).
struct SwapCheck {
  bool sup_outside, sup_inside;  // part with a leading sup
  bool inf_outside, inf_inside;  // part with a leading inf
  bool agree() const {
    return sup_outside == sup_inside && inf_outside == inf_inside;
  }
};

inline SwapCheck check_swap(const RelationTable& R, unsigned J, unsigned K,
                            const std::vector<unsigned>& leading, unsigned n,
                            unsigned range) {
  if (R.arity() < 3) throw DomainError("check_swap: table arity must be >= 3");
  unsigned N = R.arity() - 2;
  if (J < 1 || J > N) throw DomainError("check_swap: need 1 <= J <= N");
  if (leading.size() != J - 1)
    throw DomainError("check_swap: need values for x_1..x_{J-1}");
  const Dyadic half = d_half(Dyadic(1));

  // rest = (x1..xN, n) with x_J..x_N varying.
  auto g_at = [&](unsigned x0, const std::vector<unsigned>& tail) {
    std::vector<unsigned> rest;
    rest.reserve(N + 1);
    rest.insert(rest.end(), leading.begin(), leading.end());
    rest.insert(rest.end(), tail.begin(), tail.end());
    rest.push_back(n);
    return g_of_star(R, rest)(x0);
  };

  auto run_part = [&](Quant lead) {
    std::vector<unsigned> tail(N - J + 1, 0);
    // Quantifiers outside the sum.
    Dyadic outside = detail::alternate_eval(
        [&](const std::vector<unsigned>& t) {
          return gamma_K([&](unsigned x0) { return g_at(x0, t); }, K);
        },
        tail, 0, lead, range);
    // Quantifiers inside the sum, pointwise in x0.
    Dyadic inside = gamma_K(
        [&](unsigned x0) {
          std::vector<unsigned> t(N - J + 1, 0);
          return detail::alternate_eval(
              [&](const std::vector<unsigned>& tt) { return g_at(x0, tt); }, t, 0,
              lead, range);
        },
        K);
    return std::pair{outside <= half, inside <= half};
  };

  // On the relation side a leading sup of G corresponds to a leading
  // forall, and a leading inf to a leading exists.
  auto [sup_out, sup_in] = run_part(Quant::Forall);
  auto [inf_out, inf_in] = run_part(Quant::Exists);
  return {sup_out, sup_in, inf_out, inf_in};
}

/// Brute membership in the vector-forall / vector-exists sets for a table
/// in the (x0, x1, ..., xN, n) layout: the alternating prefix over
/// x0..xN starting with the given quantifier, evaluated over [0,range].
inline bool forall_membership(const RelationTable& R, unsigned n, unsigned range) {
  return brute_prefix_holds(R, QuantPrefix::param_last(Quant::Forall, R.arity()), {n},
                            range);
}
inline bool exists_membership(const RelationTable& R, unsigned n, unsigned range) {
  return brute_prefix_holds(R, QuantPrefix::param_last(Quant::Exists, R.arity()), {n},
                            range);
}

/// Series criterion for forall-membership:
///   inf_{x1} sup_{x2} ... Q_{xN} Gamma(1 - chi_{R*}/2; x1..xN, n) <= 1/2.
/// Quantified coordinates range over [0,range]; range must reach the table
/// bound so the whole support is visible.
inline bool encode_forall_check(const RelationTable& R, unsigned n, unsigned range) {
  if (R.arity() < 2) throw DomainError("encode check: table arity must be >= 2");
  if (range < R.bound())
    throw DomainError("encode check: range below the table bound");
  unsigned N = R.arity() - 2;
  const Dyadic half = d_half(Dyadic(1));
  auto gamma_at = [&](const std::vector<unsigned>& xs) {
    std::vector<unsigned> rest = xs;
    rest.push_back(n);
    return gamma_g_value(R, rest);
  };
  if (N == 0) return gamma_at({}) <= half;
  std::vector<unsigned> xs(N, 0);
  // A leading exists on the relation (x1 after the Gamma-absorbed x0)
  // corresponds to a leading inf of the Gamma values.
  Dyadic v = detail::alternate_eval(gamma_at, xs, 0, Quant::Exists, range);
  return v <= half;
}

/// Series criterion for exists-membership:
///   sup_{x1} inf_{x2} ... Q_{xN} Gamma(chi_{(~R)*}/2; x1..xN, n) < 1/2.
inline bool encode_exists_check(const RelationTable& R, unsigned n, unsigned range) {
  if (R.arity() < 2) throw DomainError("encode check: table arity must be >= 2");
  if (range < R.bound())
    throw DomainError("encode check: range below the table bound");
  unsigned N = R.arity() - 2;
  RelationTable notR = R.complement();
  const Dyadic half = d_half(Dyadic(1));
  auto gamma_at = [&](const std::vector<unsigned>& xs) {
    std::vector<unsigned> rest = xs;
    rest.push_back(n);
    return gamma_chi_complement_value(notR, rest);
  };
  if (N == 0) return gamma_at({}) < half;
  std::vector<unsigned> xs(N, 0);
  // Here the summand is chi/2, so a leading sup over x1 corresponds to a
  // leading forall in alternate_eval's relation-side convention.
  Dyadic v = detail::alternate_eval(gamma_at, xs, 0, Quant::Forall, range);
  return v < half;
}

}  // namespace contdiag

#endif
