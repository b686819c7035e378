#include <optional>
#include <vector>

#include "doctest.h"

#include "contdiag/infinitary.hpp"
#include "contdiag/structures.hpp"

using namespace contdiag;

namespace {

const Dyadic kHalf = d_half(Dyadic(1));

InfCode const_leaf(const Dyadic& v) {
  // d(q(0), q(v)) = v on the interval structure.
  return make_leaf(f_metric(t_const(q_const_name(Dyadic(0))),
                            t_const(q_const_name(v))));
}

/// Finite stream of parameter-free leaf items.
std::string leaf_stream(EnumeratorRegistry& reg, std::vector<Dyadic> vals) {
  StreamSpec spec;
  spec.at = [vals](unsigned i) { return StreamItem{const_leaf(vals[i]), {}}; };
  spec.length = static_cast<unsigned>(vals.size());
  return reg.add(spec, "leaves");
}

}  // namespace

TEST_CASE("ordinal notations") {
  CHECK(ordinal_equal(ord_finite(0), ord_zero()));
  CHECK(ordinal_less(ord_finite(2), ord_finite(3)));
  CHECK(!ordinal_less(ord_finite(3), ord_finite(3)));
  CHECK(ordinal_to_string(ord_finite(2)) == "2");
  Ordinal w = ord_lim("omega", [](unsigned i) { return ord_finite(i); });
  CHECK(ordinal_is_limit(w));
  CHECK(ordinal_less(ord_finite(40), w));
  CHECK(ordinal_less(w, ord_succ(w)));
  CHECK(ordinal_equal(w, ord_lim("omega", [](unsigned) { return ord_zero(); })));
  CHECK_THROWS_AS(ordinal_finite_value(w), DomainError);
  CHECK(ordinal_finite_value(ord_finite(5)) == 5);
}

TEST_CASE("empty and complete streams") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  StreamSpec empty;
  empty.at = [](unsigned) -> StreamItem { throw DomainError("never called"); };
  empty.length = 0;
  std::string e = reg.add(empty, "empty");
  InfCode sig = make_sigma_code(ord_finite(1), {}, e, reg);
  InfCode pi = make_pi_code(ord_finite(1), {}, e, reg);
  CHECK(eval_inf(*M, sig, reg, 3, 8) == Enclosure(Dyadic(1)));
  CHECK(eval_inf(*M, pi, reg, 3, 8) == Enclosure(Dyadic(0)));
  // An open-ended stream whose prefix is empty stays trivial.
  StreamSpec open;
  open.at = [](unsigned) { return StreamItem{nullptr, {}}; };  // inadmissible
  std::string o = reg.add(open, "open");
  InfCode s2 = make_sigma_code(ord_finite(1), {}, o, reg);
  Enclosure t = eval_inf(*M, s2, reg, 3, 8);
  CHECK(t.lo() == Dyadic(0));
  CHECK(t.hi() == Dyadic(1));
}

TEST_CASE("truncated evaluation converges monotonically") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  std::string s = leaf_stream(reg, {Dyadic(0), kHalf, parse_dyadic("1/4")});
  InfCode pi = make_pi_code(ord_finite(1), {}, s, reg);
  CHECK(eval_inf(*M, pi, reg, 0, 8).lo() == Dyadic(0));
  CHECK(eval_inf(*M, pi, reg, 1, 8).lo() == kHalf);
  // Complete at T = 2: sup of the three values, exactly.
  CHECK(eval_inf(*M, pi, reg, 2, 8) == Enclosure(kHalf));
  CHECK(eval_inf(*M, pi, reg, 2, 8).hi() == kHalf);
  InfCode sig = make_sigma_code(ord_finite(1), {}, s, reg);
  CHECK(eval_inf(*M, sig, reg, 0, 8) == Enclosure(Dyadic(0)));  // inf hits 0 at T=0
  CHECK(eval_inf(*M, sig, reg, 2, 8) == Enclosure(Dyadic(0)));
  // Larger truncations never widen the enclosure.
  for (unsigned t = 0; t + 1 <= 2; ++t) {
    Enclosure a = eval_inf(*M, pi, reg, t, 8), b = eval_inf(*M, pi, reg, t + 1, 8);
    CHECK(b.lo() >= a.lo());
    CHECK(b.hi() <= a.hi());
  }
}

TEST_CASE("items of the wrong shape are filtered") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  std::string inner_s = leaf_stream(reg, {kHalf});
  InfCode sig_inner = make_sigma_code(ord_finite(1), {}, inner_s, reg);  // value 1/2
  StreamSpec spec;
  spec.at = [sig_inner](unsigned i) {
    if (i == 0) return StreamItem{sig_inner, {}};
    return StreamItem{const_leaf(parse_dyadic("1/4")), {}};
  };
  spec.length = 2;
  std::string s = reg.add(spec, "mixed");
  InfCode pi = make_pi_code(ord_finite(1), {}, s, reg);
  // Item 0 carries an equal notation, not a smaller one: skipped.
  CHECK(eval_inf(*M, pi, reg, 1, 8) == Enclosure(parse_dyadic("1/4")));
  InfCode pi2 = make_pi_code(ord_finite(2), {}, s, reg);
  // One level up both items qualify and the sup reaches 1/2.
  CHECK(eval_inf(*M, pi2, reg, 1, 8) == Enclosure(kHalf));
  // A Pi node inside a Pi node is skipped regardless of notation.
  StreamSpec same;
  InfCode pi_inner = make_pi_code(ord_finite(1), {}, inner_s, reg);
  same.at = [pi_inner](unsigned) { return StreamItem{pi_inner, {}}; };
  same.length = 1;
  InfCode pi3 = make_pi_code(ord_finite(2), {}, reg.add(same, "same"), reg);
  CHECK(eval_inf(*M, pi3, reg, 0, 8) == Enclosure(Dyadic(0)));  // empty sup
}

TEST_CASE("stream items quantify their variables") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  InfCode body = make_leaf(f_metric(t_var("x"), t_const(q_const_name(Dyadic(0)))));
  InfCode pi = close_under_sup(body, {"x"}, reg);
  // sup_x d(x, 0) over rational points 0..T; the point scan is one-sided,
  // so only the lower end tightens until the sup is attained.
  Enclosure e0 = eval_inf(*M, pi, reg, 0, 8);
  CHECK(e0.lo() == Dyadic(0));
  CHECK(e0.hi() == Dyadic(1));
  CHECK(eval_inf(*M, pi, reg, 1, 8) == Enclosure(Dyadic(1)));
  InfCode sig = close_under_inf(body, {"x"}, reg);
  CHECK(eval_inf(*M, sig, reg, 2, 8) == Enclosure(Dyadic(0)));
  CHECK(ordinal_equal(code_notation(pi), ord_finite(1)));
}

TEST_CASE("substitution maps through nodes and respects shadowing") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  InfCode body = make_leaf(f_metric(t_var("x"), t_var("y")));
  InfCode pi = close_under_sup(body, {"x"}, reg);  // free variable: y
  InfCode at0 = substitute_code(pi, "y", t_const(q_const_name(Dyadic(0))), reg);
  CHECK(eval_inf(*M, at0, reg, 1, 8) == Enclosure(Dyadic(1)));
  // Substituting the bound variable is a no-op inside the item.
  InfCode atx = substitute_code(pi, "x", t_const(q_const_name(Dyadic(1))), reg);
  InfCode both = substitute_code(atx, "y", t_const(q_const_name(Dyadic(0))), reg);
  CHECK(eval_inf(*M, both, reg, 1, 8) == Enclosure(Dyadic(1)));
  CHECK(make_leaf(f_metric(t_const("q(0)"), t_const("q(0)")))->kind ==
        InfCodeNode::Kind::Leaf);
}

TEST_CASE("cut check decides the right Dedekind cut") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  InfCode zero = const_leaf(Dyadic(0));
  Verdict v = cut_check(*M, zero, reg, kHalf, true, 4);
  CHECK(v.status == Verdict::Status::Verified);  // 1/2 > 0
  v = cut_check(*M, zero, reg, Dyadic(0), true, 4);
  CHECK(v.status == Verdict::Status::Refuted);   // 0 > 0 fails
  v = cut_check(*M, zero, reg, Dyadic(0), false, 4);
  CHECK(v.status == Verdict::Status::Verified);  // 0 >= 0
  std::string s = leaf_stream(reg, {Dyadic(1), kHalf});
  InfCode sig = make_sigma_code(ord_finite(1), {}, s, reg);  // value 1/2
  v = cut_check(*M, sig, reg, parse_dyadic("3/4"), true, 4);
  CHECK(v.status == Verdict::Status::Verified);
  v = cut_check(*M, sig, reg, parse_dyadic("1/4"), false, 4);
  CHECK(v.status == Verdict::Status::Refuted);
  // An open-ended stream with no slack cannot decide: Unknown.
  StreamSpec open;
  open.at = [](unsigned) { return StreamItem{const_leaf(kHalf), {}}; };
  std::string o = reg.add(open, "open");
  InfCode so = make_sigma_code(ord_finite(1), {}, o, reg);
  v = cut_check(*M, so, reg, parse_dyadic("1/4"), true, 3);
  CHECK(v.status == Verdict::Status::Unknown);
}

TEST_CASE("averaging codes") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  InfCode a = const_leaf(parse_dyadic("1/4"));
  InfCode b = const_leaf(parse_dyadic("3/4"));
  CHECK(eval_inf(*M, avg_code(a, b, reg), reg, 0, 8) == Enclosure(kHalf));
  // Leaf against node distributes into the stream.
  std::string s = leaf_stream(reg, {Dyadic(0), Dyadic(1)});
  InfCode pi = make_pi_code(ord_finite(1), {}, s, reg);  // value 1
  InfCode mixed = avg_code(a, pi, reg);
  CHECK(mixed->cls == CodeClass::Pi);
  CHECK(eval_inf(*M, mixed, reg, 1, 8) == Enclosure(parse_dyadic("5/8")));
  // Node against node of the same class merges over the product stream.
  std::string s2 = leaf_stream(reg, {kHalf});
  InfCode pi2 = make_pi_code(ord_finite(1), {}, s2, reg);  // value 1/2
  InfCode merged = avg_code(pi, pi2, reg);
  CHECK(merged->cls == CodeClass::Pi);
  Enclosure e = eval_inf(*M, merged, reg, 5, 8);  // closure index is 2
  CHECK(e == Enclosure(parse_dyadic("3/4")));
  InfCode sig = make_sigma_code(ord_finite(1), {}, s, reg);
  CHECK_THROWS_AS(avg_code(pi, sig, reg), DomainError);
}

TEST_CASE("inner products enclose the partial sums") {
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  // Constant-1/2 operands: value sum 2^-(n+1)/2 = 1/2.
  InfCode ip = inner_product_code([](unsigned) { return const_leaf(kHalf); },
                                  ord_finite(1), reg);
  CHECK(ip->cls == CodeClass::Pi);
  for (unsigned T = 0; T <= 6; ++T) {
    Enclosure e = eval_inf(*M, ip, reg, T, 10);
    CHECK(e.contains(kHalf));
    // Lower bound is the exact T+1-term partial sum of 2^-(n+2).
    Dyadic partial(0);
    for (unsigned n = 0; n <= T; ++n) partial = partial + d_half(tail_weight(n));
    CHECK(e.lo() == partial);
    CHECK(e.width() <= tail_weight(T));
  }
  // Alternating 1/0 operands: the value is sum over even n of 2^-(n+1),
  // a non-dyadic limit squeezed by the partial sums.
  InfCode ip2 = inner_product_code(
      [](unsigned n) { return const_leaf(Dyadic(n % 2 == 0 ? 1 : 0)); },
      ord_finite(1), reg);
  Enclosure e6 = eval_inf(*M, ip2, reg, 6, 10);
  Enclosure e2 = eval_inf(*M, ip2, reg, 2, 10);
  CHECK(e2.contains(e6));
  CHECK(e6.lo() == parse_dyadic("85/128"));  // partial sum through n = 6
  CHECK(e6.hi() == parse_dyadic("43/64"));   // lo + tail 2^-7
}

TEST_CASE("set encodings match the brute values") {
  RelationFamily fam = make_sample_family(5, 3);
  for (unsigned a : {1u, 2u}) {
    RelationTable R = fam.level(2 * a - 1);  // arity a + 1, layout (x.., n)
    auto M = make_interval_structure(fam);
    EnumeratorRegistry reg;
    for (unsigned n = 0; n < 6; ++n) {
      InfCode cs = encode_set_sigma(R, ord_finite(a), n, reg);
      InfCode cp = encode_set_pi(R, ord_finite(a), n, reg);
      CHECK(cs->cls == CodeClass::Sigma);
      CHECK(cp->cls == CodeClass::Pi);
      unsigned T = R.bound() + 1;
      CHECK(eval_inf(*M, cs, reg, T, 8) ==
            Enclosure(encode_set_sigma_value(R, n, T)));
      CHECK(eval_inf(*M, cp, reg, T, 8) == Enclosure(encode_set_pi_value(R, n, T)));
    }
  }
  // Level 0 reads the table directly.
  RelationTable R0(1, 3, false);
  R0.insert({2});
  auto M = make_interval_structure();
  EnumeratorRegistry reg;
  CHECK(eval_inf(*M, encode_set_sigma(R0, ord_zero(), 2, reg), reg, 0, 8) ==
        Enclosure(Dyadic(0)));
  CHECK(eval_inf(*M, encode_set_sigma(R0, ord_zero(), 1, reg), reg, 0, 8) ==
        Enclosure(kHalf));
  CHECK(eval_inf(*M, encode_set_pi(R0, ord_zero(), 2, reg), reg, 0, 8) ==
        Enclosure(Dyadic(1)));
  CHECK_THROWS_AS(encode_set_sigma(R0, ord_finite(2), 0, reg), DomainError);
}

TEST_CASE("stage-enumerated real sequence") {
  // Stage s enumerates 2s.
  CeRealSequence seq([](unsigned s) { return std::optional<unsigned>(2 * s); });
  CHECK(seq.approx(4, 10) == d_tsub(kHalf, Dyadic::pow2(-3)));
  CHECK(seq.approx(3, 10) == kHalf);  // odd: never enumerated
  CHECK(seq.enumerated_within(4, 8));
  CHECK(!seq.enumerated_within(3, 50));
  for (unsigned n = 0; n < 10; ++n)
    CHECK((seq.approx(n, 12) < kHalf) == (n % 2 == 0));
  CeRealSequence bad([](unsigned) { return std::optional<unsigned>(7); });
  CHECK_THROWS_AS(bad.approx(0, 4), InconsistencyError);
}
