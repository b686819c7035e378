#ifndef CONTDIAG_VERIFY_HPP
#define CONTDIAG_VERIFY_HPP

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "contdiag/gamma.hpp"
#include "contdiag/presentation.hpp"
#include "contdiag/relation.hpp"
#include "contdiag/structures.hpp"

namespace contdiag {

struct VerifyReport {
  VerifyReport() = default;
  explicit VerifyReport(std::string name) : check(std::move(name)) {}

  std::string check;
  unsigned long long instances = 0;
  unsigned long long failures = 0;
  unsigned max_range_used = 0;
  std::vector<std::string> notes;

  bool passed() const { return instances > 0 && failures == 0; }
  void record(bool ok, const std::string& detail) {
    ++instances;
    if (!ok) {
      ++failures;
      if (notes.size() < 20) notes.push_back(detail);
    }
  }
};

namespace detail {

/// Smallest range in [base, base+extra] at which the instance check holds;
/// the retry window absorbs witnesses just past the table bound.
template <typename F>
inline std::optional<unsigned> first_sufficient_range(F check, unsigned base,
                                                      unsigned extra = 3) {
  for (unsigned r = base; r <= base + extra; ++r)
    if (check(r)) return r;
  return std::nullopt;
}

/// Table whose parameter-0 slice is given by a bitmask over the coordinate
/// box; every verdict at parameter 0 depends only on this slice plus the
/// extension value, so slice enumeration is exhaustive over all tables.
inline RelationTable slice_table(unsigned arity, unsigned bound,
                                 unsigned long long mask, bool extension) {
  RelationTable R(arity, bound, extension);
  std::vector<unsigned> x(arity - 1, 0);
  unsigned bit = 0;
  do {
    if (mask >> bit & 1) {
      std::vector<unsigned> t = x;
      t.push_back(0);
      R.insert(std::move(t));
    }
    ++bit;
  } while (RelationTable::next_tuple(x, bound));
  return R;
}

inline RelationTable random_table(unsigned arity, unsigned bound,
                                  std::mt19937_64& rng) {
  bool ext = rng() & 1;
  return RelationTable::from_predicate(arity, bound, ext,
                                       [&](const std::vector<unsigned>&) {
                                         return (rng() & 1) != 0;
                                       });
}

inline std::string instance_tag(const RelationTable& R, unsigned n) {
  return "arity=" + std::to_string(R.arity()) + " bound=" + std::to_string(R.bound()) +
         " ext=" + std::to_string(R.extension()) +
         " tuples=" + std::to_string(R.tuples().size()) + " n=" + std::to_string(n);
}

}  // namespace detail

/// Grid check of the derived average: the formula
/// max{a -. (a -. b)/2, b -. (b -. a)/2} equals (a + b)/2 at every pair on
/// the 1/64 grid, evaluated through the formula machinery on [0,1].
inline VerifyReport verify_avg_grid(unsigned denominator_log = 6) {
  VerifyReport rep{"avg-grid"};
  auto M = make_interval_structure();
  Term q0 = t_const(q_const_name(Dyadic(0)));
  unsigned steps = 1u << denominator_log;
  for (unsigned i = 0; i <= steps; ++i) {
    Dyadic a = Dyadic::from_mantissa_exponent(BigInt(i), denominator_log);
    Formula fa = f_metric(t_const(q_const_name(a)), q0);
    for (unsigned j = 0; j <= steps; ++j) {
      Dyadic b = Dyadic::from_mantissa_exponent(BigInt(j), denominator_log);
      Formula fb = f_metric(t_const(q_const_name(b)), q0);
      Dyadic got = eval_qf(*M, f_avg(fa, fb), 0);
      Dyadic want = d_half(a + b);
      rep.record(got == want, "a=" + a.to_plain_fraction_string() +
                                  " b=" + b.to_plain_fraction_string());
    }
  }
  return rep;
}

/// All 2^{K+1} functions f : [0,K] -> {1/2, 1} at one K: the weighted sum
/// stays at or below 1/2 exactly when every value before K is 1/2.
inline VerifyReport verify_carry_at(unsigned K) {
  VerifyReport rep{"carry"};
  const Dyadic half = d_half(Dyadic(1));
  for (unsigned long long mask = 0; mask < (1ull << (K + 1)); ++mask) {
    std::vector<Dyadic> f;
    for (unsigned m = 0; m <= K; ++m)
      f.push_back(mask >> m & 1 ? Dyadic(1) : half);
    rep.record(check_carry(f, K).agree(),
               "K=" + std::to_string(K) + " mask=" + std::to_string(mask));
  }
  return rep;
}

inline VerifyReport verify_carry(unsigned K_max = 10) {
  VerifyReport rep{"carry"};
  for (unsigned K = 0; K <= K_max; ++K) {
    VerifyReport one = verify_carry_at(K);
    rep.instances += one.instances;
    rep.failures += one.failures;
    for (const auto& n : one.notes)
      if (rep.notes.size() < 20) rep.notes.push_back(n);
  }
  return rep;
}

namespace detail {

/// One instance of the two prefix lemmas at parameter n:
///  - the forall-leading alternating prefix gives the same set over the
///    star transform as over the original table;
///  - the inf/sup fold of the indicator reproduces the brute verdict, with
///    the 1 - chi/2 form alongside, for both leading quantifiers.
inline bool star_and_fold_instance(const RelationTable& R, unsigned n, unsigned range) {
  QuantPrefix starred = QuantPrefix::param_last(Quant::Forall, R.arity());
  bool brute = brute_prefix_holds(R, starred, {n}, range);
  RelationTable S = star(R, starred, range);
  if (brute_prefix_holds(S, starred, {n}, range) != brute) return false;
  for (Quant lead : {Quant::Forall, Quant::Exists}) {
    QuantPrefix p = QuantPrefix::param_last(lead, R.arity());
    bool direct = brute_prefix_holds(R, p, {n}, range);
    ChiPrefixValue cv = chi_prefix_value(R, p, {n}, range);
    if (!(cv.chi == Dyadic(direct ? 1 : 0))) return false;
    if (!(cv.g_form == d_neg(d_half(cv.chi)))) return false;
  }
  return true;
}

}  // namespace detail

/// Every parameter slice at arity <= 3, bound <= 2 (slice enumeration
/// covers all tables up to irrelevant coordinates).
inline VerifyReport verify_star_exhaustive(unsigned max_arity = 3,
                                           unsigned max_bound = 2) {
  VerifyReport rep{"star-exhaustive"};
  for (unsigned arity = 2; arity <= max_arity; ++arity) {
    for (unsigned bound = 0; bound <= max_bound; ++bound) {
      unsigned cells = 1;
      for (unsigned d = 0; d + 1 < arity; ++d) cells *= bound + 1;
      for (unsigned long long mask = 0; mask < (1ull << cells); ++mask) {
        for (bool ext : {false, true}) {
          RelationTable R = detail::slice_table(arity, bound, mask, ext);
          auto ok = detail::first_sufficient_range(
              [&](unsigned r) { return detail::star_and_fold_instance(R, 0, r); },
              bound);
          if (ok && *ok > rep.max_range_used) rep.max_range_used = *ok;
          rep.record(ok.has_value(), detail::instance_tag(R, 0));
        }
      }
    }
  }
  return rep;
}

inline VerifyReport verify_star_sampled(unsigned long long count, unsigned long long seed,
                                        unsigned arity = 3, unsigned bound = 3) {
  VerifyReport rep{"star-sampled"};
  std::mt19937_64 rng(seed);
  for (unsigned long long i = 0; i < count; ++i) {
    RelationTable R = detail::random_table(arity, bound, rng);
    unsigned n = static_cast<unsigned>(rng() % (bound + 2));
    auto ok = detail::first_sufficient_range(
        [&](unsigned r) { return detail::star_and_fold_instance(R, n, r); }, bound);
    if (ok && *ok > rep.max_range_used) rep.max_range_used = *ok;
    rep.record(ok.has_value(), detail::instance_tag(R, n));
  }
  return rep;
}

/// Sum/quantifier interchange at every parameter slice for N = 1,
/// truncations K <= K_max.
inline VerifyReport verify_swap_exhaustive(unsigned max_bound = 2, unsigned K_max = 3) {
  VerifyReport rep{"swap-exhaustive"};
  for (unsigned bound = 0; bound <= max_bound; ++bound) {
    unsigned cells = (bound + 1) * (bound + 1);
    for (unsigned long long mask = 0; mask < (1ull << cells); ++mask) {
      for (bool ext : {false, true}) {
        RelationTable R = detail::slice_table(3, bound, mask, ext);
        for (unsigned K = 0; K <= K_max; ++K) {
          SwapCheck sc = check_swap(R, 1, K, {}, 0, bound + 1);
          rep.record(sc.agree(),
                     detail::instance_tag(R, 0) + " K=" + std::to_string(K));
        }
      }
    }
  }
  rep.max_range_used = max_bound + 1;
  return rep;
}

inline VerifyReport verify_swap_sampled(unsigned long long count, unsigned long long seed,
                                        unsigned bound = 3, unsigned K_max = 4) {
  VerifyReport rep{"swap-sampled"};
  std::mt19937_64 rng(seed);
  for (unsigned long long i = 0; i < count; ++i) {
    RelationTable R = detail::random_table(4, bound, rng);  // N = 2
    unsigned range = bound + 1;
    unsigned J = 1 + static_cast<unsigned>(rng() % 2);
    unsigned K = static_cast<unsigned>(rng() % (K_max + 1));
    std::vector<unsigned> leading;
    for (unsigned j = 1; j < J; ++j)
      leading.push_back(static_cast<unsigned>(rng() % (range + 1)));
    unsigned n = static_cast<unsigned>(rng() % (bound + 2));
    SwapCheck sc = check_swap(R, J, K, leading, n, range);
    rep.record(sc.agree(), detail::instance_tag(R, n) + " J=" + std::to_string(J) +
                               " K=" + std::to_string(K));
  }
  rep.max_range_used = bound + 1;
  return rep;
}

namespace detail {

inline bool encode_instance(const RelationTable& R, unsigned n, unsigned range) {
  return encode_forall_check(R, n, range) == forall_membership(R, n, range) &&
         encode_exists_check(R, n, range) == exists_membership(R, n, range);
}

}  // namespace detail

/// Series-encoding criterion against the brute oracle, all parameter
/// slices for N <= 1 and bounds <= max_bound, with the range-retry window.
inline VerifyReport verify_encode_exhaustive(unsigned max_bound = 3) {
  VerifyReport rep{"encode-exhaustive"};
  for (unsigned arity : {2u, 3u}) {
    for (unsigned bound = 0; bound <= max_bound; ++bound) {
      unsigned cells = 1;
      for (unsigned d = 0; d + 1 < arity; ++d) cells *= bound + 1;
      if (cells > 16) continue;  // arity 3 slices at bound 3 are the 2^16 case
      for (unsigned long long mask = 0; mask < (1ull << cells); ++mask) {
        for (bool ext : {false, true}) {
          RelationTable R = detail::slice_table(arity, bound, mask, ext);
          auto ok = detail::first_sufficient_range(
              [&](unsigned r) { return detail::encode_instance(R, 0, r); }, bound);
          if (ok && *ok > rep.max_range_used) rep.max_range_used = *ok;
          rep.record(ok.has_value(), detail::instance_tag(R, 0));
        }
      }
    }
  }
  return rep;
}

inline VerifyReport verify_encode_sampled(unsigned long long count,
                                          unsigned long long seed, unsigned arity = 4,
                                          unsigned bound = 3) {
  VerifyReport rep{"encode-sampled"};
  std::mt19937_64 rng(seed);
  for (unsigned long long i = 0; i < count; ++i) {
    RelationTable R = detail::random_table(arity, bound, rng);
    unsigned n = static_cast<unsigned>(rng() % (bound + 2));
    auto ok = detail::first_sufficient_range(
        [&](unsigned r) { return detail::encode_instance(R, n, r); }, bound);
    if (ok && *ok > rep.max_range_used) rep.max_range_used = *ok;
    rep.record(ok.has_value(), detail::instance_tag(R, n));
  }
  return rep;
}

}  // namespace contdiag

#endif
