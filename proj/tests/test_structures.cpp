#include <set>
#include <string>
#include <vector>

#include "doctest.h"

#include "contdiag/presentation.hpp"
#include "contdiag/structures.hpp"

using namespace contdiag;

TEST_CASE("nth_dyadic enumerates [0,1] without repeats") {
  CHECK(nth_dyadic(0) == Dyadic(0));
  CHECK(nth_dyadic(1) == Dyadic(1));
  CHECK(nth_dyadic(2) == parse_dyadic("1/2"));
  CHECK(nth_dyadic(3) == parse_dyadic("1/4"));
  CHECK(nth_dyadic(4) == parse_dyadic("3/4"));
  CHECK(nth_dyadic(5) == parse_dyadic("1/8"));
  std::set<std::string> seen;
  for (unsigned n = 0; n < 300; ++n) {
    Dyadic d = nth_dyadic(n);
    CHECK(d.in_unit_interval());
    CHECK(seen.insert(d.to_fraction_string()).second);
  }
}

TEST_CASE("family level arity and series values") {
  RelationFamily fam = make_sample_family(5, 3);
  CHECK(fam.max_level() == 5);
  for (unsigned M = 0; M <= 5; ++M)
    CHECK(fam.level(M).arity() == M / 2 + 2);
  const Dyadic half = d_half(Dyadic(1));
  for (unsigned M = 0; M <= 3; ++M) {
    std::vector<unsigned> rest(fam.level(M).arity() - 1, 1);
    Dyadic v = level_series_value(fam, M, rest);
    if (M % 2 == 0)
      CHECK((half <= v && v <= Dyadic(1)));
    else
      CHECK((Dyadic(0) <= v && v <= half));
  }
  CHECK_THROWS_AS(fam.level(9), DomainError);
  CHECK_THROWS_AS(level_series_value(fam, 0, {0, 0, 0}), DomainError);
}

TEST_CASE("discrete metric is a metric") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  std::vector<Term> pts;
  pts.push_back(t_const("zero"));
  for (unsigned i = 1; i <= 3; ++i) pts.push_back(t_const("p" + std::to_string(i)));
  for (unsigned n = 0; n < 4; ++n) pts.push_back(t_const("c" + std::to_string(n)));
  for (const auto& a : pts)
    for (const auto& b : pts) {
      Dyadic dab = M->eval_metric(a, b, 0);
      CHECK(dab.in_unit_interval());
      CHECK(dab == M->eval_metric(b, a, 0));
      if (render_term(a) == render_term(b)) CHECK(dab.is_zero());
      for (const auto& c : pts)
        CHECK(dab <= M->eval_metric(a, c, 0) + M->eval_metric(c, b, 0));
    }
  // p0 is the same point as zero.
  CHECK(M->eval_metric(t_const("p0"), t_const("zero"), 0).is_zero());
  // c_n sits at its series value from zero and at distance 1 from p1.
  CHECK(M->eval_metric(t_const("c2"), t_const("zero"), 0) == M->constant_value(2));
  CHECK(M->eval_metric(t_const("c2"), t_const("p1"), 0) == Dyadic(1));
  CHECK(M->constant_value(0) == level_series_value(M->family(), 0, {0}));
  CHECK(M->constant_value(1) == level_series_value(M->family(), 1, {0}));
}

TEST_CASE("discrete predicates project the extra points to zero") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  // P2_<n> and P3_<n> are unary.
  for (unsigned n = 0; n < 3; ++n) {
    std::string p2 = "P2_" + std::to_string(n), p3 = "P3_" + std::to_string(n);
    CHECK(M->eval_predicate(p2, {t_const("p1")}, 0) ==
          level_series_value(M->family(), 2, {1, n}));
    CHECK(M->eval_predicate(p2, {t_const("c1")}, 0) ==
          M->eval_predicate(p2, {t_const("zero")}, 0));
    CHECK(M->eval_predicate(p3, {t_const("c0")}, 0) ==
          level_series_value(M->family(), 3, {0, n}));
  }
  CHECK_THROWS_AS(M->eval_predicate("P2_0", {t_const("p0"), t_const("p1")}, 0),
                  DomainError);
  CHECK_THROWS_AS(M->eval_predicate("Q", {t_const("p0")}, 0), DomainError);
}

TEST_CASE("discrete structure evaluates closed formulas exactly") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  Formula f = parse_formula("d(p1, p2) -. P0_1()", M->signature());
  CHECK(eval_qf(*M, f, 0) ==
        d_tsub(Dyadic(1), level_series_value(M->family(), 0, {1})));
  CHECK(M->exact());
  CHECK(!M->compact());
}

TEST_CASE("interval metric and constants") {
  auto M = make_interval_structure();
  Term a = t_const(q_const_name(parse_dyadic("1/4")));
  Term b = t_const(q_const_name(parse_dyadic("3/4")));
  CHECK(M->eval_metric(a, b, 0) == parse_dyadic("1/2"));
  CHECK(M->eval_metric(b, a, 0) == parse_dyadic("1/2"));
  CHECK(M->eval_metric(a, a, 0).is_zero());
  CHECK(M->exact());
  CHECK(M->compact());
  CHECK_THROWS_AS(M->eval_predicate("P", {a}, 0), DomainError);
  // rational_point follows nth_dyadic.
  CHECK(M->point_value(M->rational_point(4)) == parse_dyadic("3/4"));
}

TEST_CASE("interval C constants read the odd family levels") {
  RelationFamily fam = make_sample_family(5, 3);
  auto M = make_interval_structure(fam);
  const RelationTable& R1 = fam.level(1);  // arity 2, layout (x1, n)
  for (unsigned x = 0; x <= 3; ++x)
    for (unsigned n = 0; n <= 3; ++n) {
      Term c = t_const(c_const_name(0, n, {x}));
      Dyadic v = M->point_value(c);
      CHECK(v == (R1.contains({x, n}) ? Dyadic(0) : d_half(Dyadic(1))));
    }
  const RelationTable& R3 = fam.level(3);  // arity 3, layout (x1, x2, n)
  Term c = t_const(c_const_name(1, 2, {1, 3}));
  CHECK(M->point_value(c) ==
        (R3.contains({1, 3, 2}) ? Dyadic(0) : d_half(Dyadic(1))));
  CHECK_THROWS_AS(M->point_value(t_const("C0_1")), DomainError);
  CHECK_THROWS_AS(c_const_name(1, 0, {0}), DomainError);
}

TEST_CASE("compact evaluation encloses sup and inf tightly") {
  auto M = make_interval_structure();
  const Signature& sig = M->signature();
  // sup x . d(x, q(0)) = 1, attained at a grid point.
  Enclosure e1 = compact_eval(*M, parse_formula("sup x . d(x, q(0))", sig), 8);
  CHECK(e1.contains(Dyadic(1)));
  CHECK(e1.width() <= Dyadic::pow2(-8));
  // inf x . max(d(x, q(0)), d(x, q(1))) = 1/2.
  Enclosure e2 = compact_eval(
      *M, parse_formula("inf x . max(d(x, q(0)), d(x, q(1)))", sig), 8);
  CHECK(e2.contains(parse_dyadic("1/2")));
  // Nested quantifiers: sup x . inf y . d(x, y) = 0.
  Enclosure e3 = compact_eval(*M, parse_formula("sup x . inf y . d(x, y)", sig), 6);
  CHECK(e3.contains(Dyadic(0)));
  CHECK(e3.width() <= Dyadic::pow2(-6));
  // Higher precision refines the enclosure.
  Enclosure lo = compact_eval(*M, parse_formula("sup x . d(x, q(1/2))", sig), 4);
  Enclosure hi = compact_eval(*M, parse_formula("sup x . d(x, q(1/2))", sig), 9);
  CHECK(lo.lo() <= hi.lo());
  CHECK(hi.hi() <= lo.hi());
  CHECK(hi.contains(parse_dyadic("1/2")));
}
