#include <string>

#include "doctest.h"

#include "contdiag/diagrams.hpp"
#include "contdiag/structures.hpp"

using namespace contdiag;

namespace {

const Dyadic kHalf = d_half(Dyadic(1));

DiagramQuery make_query(const Formula& f, const Dyadic& q, bool open) {
  return {f, q, open ? DiagramQuery::Mode::Open : DiagramQuery::Mode::Closed};
}

}  // namespace

TEST_CASE("quantifier-free verdicts are direct") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  Formula f = parse_formula("d(zero, p1)", M->signature());  // value 1
  Verdict v = closed_check(*M, f, Dyadic(1), 2, 10);
  CHECK(v.status == Verdict::Status::Verified);
  CHECK(v.witness->kind == "direct");
  CHECK(reverify(*M, make_query(f, Dyadic(1), false), v));
  v = closed_check(*M, f, kHalf, 2, 10);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(reverify(*M, make_query(f, kHalf, false), v));
  v = open_check(*M, f, kHalf, 2, 10);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(reverify(*M, make_query(f, kHalf, true), v));
}

TEST_CASE("exhaustive scan verdicts on the exact structure") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  const Signature& sig = M->signature();
  Formula sup_d = parse_formula("sup x . d(x, zero)", sig);       // Pi, value 1
  Formula inf_d = parse_formula("inf x . d(x, zero)", sig);       // Sigma, value 0
  Formula inf_far =
      parse_formula("inf x . max(d(x, zero), d(x, p1))", sig);    // Sigma, value 1

  Verdict v = closed_check(*M, sup_d, kHalf, 3, 1000);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(v.witness->kind == "refuting-point");
  CHECK(v.witness->points.size() == 1);
  CHECK(reverify(*M, make_query(sup_d, kHalf, false), v));

  v = closed_check(*M, sup_d, Dyadic(1), 3, 1000);
  CHECK(v.status == Verdict::Status::Verified);
  CHECK(v.witness->kind == "exhaustive-sup");
  CHECK(reverify(*M, make_query(sup_d, Dyadic(1), false), v));

  v = open_check(*M, sup_d, Dyadic(1), 3, 1000);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(v.witness->kind == "refuting-point");
  CHECK(reverify(*M, make_query(sup_d, Dyadic(1), true), v));

  v = closed_check(*M, inf_d, Dyadic(0), 3, 1000);
  CHECK(v.status == Verdict::Status::Verified);
  CHECK(v.witness->kind == "verifying-point");
  CHECK(v.witness->points == std::vector<unsigned>{0});
  CHECK(reverify(*M, make_query(inf_d, Dyadic(0), false), v));

  v = open_check(*M, inf_d, kHalf, 3, 1000);
  CHECK(v.status == Verdict::Status::Verified);
  CHECK(v.witness->kind == "verifying-pair");
  CHECK(reverify(*M, make_query(inf_d, kHalf, true), v));

  v = closed_check(*M, inf_far, kHalf, 3, 1000);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(v.witness->kind == "refuting-k");
  CHECK(reverify(*M, make_query(inf_far, kHalf, false), v));

  v = open_check(*M, inf_far, kHalf, 3, 1000);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(v.witness->kind == "exhaustive-inf");
  CHECK(reverify(*M, make_query(inf_far, kHalf, true), v));

  // A tampered query must fail reverification.
  v = closed_check(*M, inf_d, Dyadic(0), 3, 1000);
  CHECK(!reverify(*M, make_query(inf_far, Dyadic(0), false), v));
}

TEST_CASE("budget exhaustion yields Unknown") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  Formula f = parse_formula("sup x . sup y . d(x, y)", M->signature());
  Verdict v = closed_check(*M, f, kHalf, 3, 2);
  CHECK(v.status == Verdict::Status::Unknown);
  CHECK(!v.definite());
  CHECK(v.budget_consumed == 2);
  CHECK(reverify(*M, make_query(f, kHalf, false), v));  // nothing to re-check
}

TEST_CASE("enclosure verdicts on the compact structure") {
  auto M = make_interval_structure();
  Formula f = parse_formula("sup x . d(x, q(0))", M->signature());  // value 1
  Verdict v = closed_check(*M, f, kHalf, 0, 100);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(v.witness->kind == "enclosure");
  CHECK(reverify(*M, make_query(f, kHalf, false), v));
  v = closed_check(*M, f, Dyadic(1), 0, 100);
  CHECK(v.status == Verdict::Status::Verified);
  CHECK(reverify(*M, make_query(f, Dyadic(1), false), v));
  v = open_check(*M, f, Dyadic(1), 0, 100);
  CHECK(v.status == Verdict::Status::Refuted);
  CHECK(reverify(*M, make_query(f, Dyadic(1), true), v));
  // A value equal to the threshold stays Unknown under the open reading
  // only when the enclosure cannot separate; here it can (lo reaches 1).
  Formula g = parse_formula("inf x . d(x, q(1/2))", M->signature());  // value 0
  v = open_check(*M, g, kHalf, 0, 100);
  CHECK(v.status == Verdict::Status::Verified);
  CHECK(reverify(*M, make_query(g, kHalf, true), v));
}

TEST_CASE("one-sided enclosures are sound") {
  auto M = make_lower_bound_structure(make_sample_family(3, 2));
  const Signature& sig = M->signature();
  Enclosure e = eval_enclosure(*M, parse_formula("sup x . d(x, zero)", sig), 4, 6);
  CHECK(e.contains(Dyadic(1)));
  e = eval_enclosure(*M, parse_formula("inf x . d(x, zero)", sig), 4, 6);
  CHECK(e.contains(Dyadic(0)));
  CHECK_THROWS_AS(eval_enclosure(*M, parse_formula("d(zero, zero)", sig), 0, 6),
                  DomainError);
}

TEST_CASE("lower-bound sentences have the advertised prenex shape") {
  for (unsigned N = 1; N <= 4; ++N) {
    auto [phi, psi] = build_lower_bound_sentences(N, 2);
    CHECK(formula_closed(phi));
    CHECK(formula_closed(psi));
    PrenexClass cp = classify_prenex(phi);
    CHECK(cp.kind == PrenexClass::Kind::Sigma);
    CHECK(cp.level == N);
    PrenexClass cq = classify_prenex(psi);
    CHECK(cq.kind == PrenexClass::Kind::Pi);
    CHECK(cq.level == N);
  }
  CHECK_THROWS_AS(build_lower_bound_sentences(0, 0), DomainError);
}

TEST_CASE("diagram verdicts agree with brute membership") {
  CrossCheckReport rep = cross_check_lower_bounds(make_sample_family(5, 2), 2, 4, 2);
  CHECK(rep.instances.size() == 24);
  CHECK(rep.passed());
  CHECK(rep.budget_consumed > 0);
}
