// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion re-derives its expected values from the brute
// oracles rather than trusting the code under test.
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "contdiag/contdiag.hpp"

using namespace contdiag;

namespace {

int g_failures = 0;

void report(int num, const std::string& what, bool ok, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", num, what.c_str(),
              detail.c_str());
  if (!ok) ++g_failures;
}

std::string counts(const VerifyReport& r) {
  return std::to_string(r.instances) + " instances, " + std::to_string(r.failures) +
         " failures, max range " + std::to_string(r.max_range_used);
}

constexpr unsigned long long kSeed = 0x5eed;

void criterion1() {
  VerifyReport r = verify_avg_grid(6);
  report(1, "derived average equals the arithmetic mean on the 1/64 grid",
         r.passed() && r.instances == 4225, counts(r));
}

void criterion2() {
  VerifyReport r = verify_carry(10);
  report(2, "weighted-sum carry biconditional for all masks, K <= 10",
         r.passed() && r.instances == 4094, counts(r));
}

void criterion3() {
  VerifyReport a = verify_star_exhaustive(3, 2);
  VerifyReport b = verify_star_sampled(10000, kSeed);
  report(3, "star transform and indicator fold match the brute oracle",
         a.passed() && b.passed(),
         "exhaustive: " + counts(a) + "; sampled: " + counts(b));
}

void criterion4() {
  VerifyReport a = verify_swap_exhaustive(2, 3);
  VerifyReport b = verify_swap_sampled(500, kSeed);
  report(4, "sum/quantifier interchange, both parts",
         a.passed() && b.passed(),
         "exhaustive: " + counts(a) + "; sampled: " + counts(b));
}

void criterion5() {
  VerifyReport a = verify_encode_exhaustive(3);
  VerifyReport b = verify_encode_sampled(1000, kSeed);
  report(5, "series encodings agree with brute quantifier membership",
         a.passed() && b.passed() && a.max_range_used <= 6 && b.max_range_used <= 6,
         "exhaustive: " + counts(a) + "; sampled: " + counts(b));
}

void criterion6() {
  CrossCheckReport r = cross_check_lower_bounds(make_sample_family(5, 3), 2, 8, 3);
  report(6, "diagram verdicts match brute membership on the sample family",
         r.passed() && r.instances.size() == 48,
         std::to_string(r.instances.size()) + " instances, " +
             std::to_string(r.mismatches().size()) + " mismatches");
}

void criterion7() {
  auto M = make_lower_bound_structure(make_sample_family(5, 2));
  const Signature& sig = M->signature();
  std::mt19937_64 rng(kSeed);
  unsigned checked = 0, reverified = 0, stable = 0;
  for (int i = 0; i < 100; ++i) {
    Formula f;
    unsigned pick = static_cast<unsigned>(rng() % 4);
    if (pick == 0) {
      f = parse_formula("d(c" + std::to_string(rng() % 8) + ", zero)", sig);
    } else {
      unsigned N = 1 + static_cast<unsigned>(rng() % 2);
      auto [phi, psi] = build_lower_bound_sentences(N, static_cast<unsigned>(rng() % 8));
      f = rng() & 1 ? phi : psi;
    }
    Dyadic q = Dyadic::from_mantissa_exponent(BigInt(rng() % 17), 4);
    DiagramQuery query{f, q,
                      rng() & 1 ? DiagramQuery::Mode::Open : DiagramQuery::Mode::Closed};
    unsigned long long budget = 1ull << (2 + rng() % 12);
    Verdict v = run_check(*M, query, 3, budget);
    Verdict v4 = run_check(*M, query, 3, 4 * budget);
    ++checked;
    if (reverify(*M, query, v)) ++reverified;
    if (!v.definite() || v4.status == v.status) ++stable;
  }
  report(7, "witnesses re-verify and verdicts are budget-stable",
         checked == 100 && reverified == 100 && stable == 100,
         std::to_string(reverified) + "/100 re-verified, " + std::to_string(stable) +
             "/100 stable under 4x budget");
}

void criterion8() {
  auto M = make_interval_structure();
  const Signature& sig = M->signature();
  const Dyadic half = d_half(Dyadic(1));
  const Dyadic tol = Dyadic::pow2(-10);
  bool ok = true;
  std::string detail;
  for (const std::string& text :
       {std::string("sup x . d(x, q(1/2))"),
        std::string("sup x . min(d(x, q(0)), d(x, q(1)))")}) {
    Enclosure e = compact_eval(*M, parse_formula(text, sig), 10);
    bool this_ok = d_tsub(half, tol) <= e.lo() && e.hi() <= half + tol;
    ok = ok && this_ok;
    if (!detail.empty()) detail += "; ";
    detail += "[" + e.lo().to_plain_fraction_string() + ", " +
              e.hi().to_plain_fraction_string() + "]";
  }
  report(8, "compact sup evaluation encloses 1/2 within 2^-10", ok, detail);
}

void criterion9() {
  auto M = make_interval_structure();
  std::mt19937_64 rng(kSeed);
  unsigned long long instances = 0, failures = 0;
  for (int s = 0; s < 20; ++s) {
    std::vector<Dyadic> vals;
    for (int n = 0; n < 16; ++n)
      vals.push_back(Dyadic::from_mantissa_exponent(BigInt(rng() % 9), 3));
    auto leaf_at = [vals](unsigned n) {
      Dyadic v = vals[n % vals.size()];
      return make_leaf(f_metric(t_const(q_const_name(Dyadic(0))),
                                t_const(q_const_name(v))));
    };
    EnumeratorRegistry reg;
    InfCode ip = inner_product_code(leaf_at, ord_finite(1), reg);
    for (unsigned T = 0; T <= 12; T += 3) {
      Dyadic direct(0);
      for (unsigned n = 0; n <= T; ++n)
        direct = direct + vals[n % vals.size()] * tail_weight(n);
      Enclosure e = eval_inf(*M, ip, reg, T, 14);
      ++instances;
      if (!(e.lo() == direct && e.width() <= tail_weight(T))) ++failures;
    }
  }
  report(9, "inner product truncations track the summed series within 2^-(T+1)",
         failures == 0, std::to_string(instances) + " truncations, " +
                            std::to_string(failures) + " failures");
}

void criterion10() {
  unsigned long long instances = 0, failures = 0;
  for (unsigned a = 0; a <= 2; ++a) {
    for (unsigned variant = 0; variant < 3; ++variant) {
      RelationTable R = RelationTable::from_predicate(
          a + 1, 3, variant == 1, [a, variant](const std::vector<unsigned>& t) {
            unsigned s = variant;
            for (std::size_t i = 0; i < t.size(); ++i)
              s += (static_cast<unsigned>(i) + 2) * t[i];
            return s % (2 + a) == variant % (2 + a);
          });
      std::optional<RelationFamily> fam;
      if (a > 0) {
        fam.emplace();
        fam->set_level(2 * a - 1, R);
      }
      auto M = make_interval_structure(fam);
      unsigned T = R.bound() + 1;
      for (unsigned n = 0; n < 8; ++n) {
        EnumeratorRegistry reg;
        Enclosure es = eval_inf(*M, encode_set_sigma(R, ord_finite(a), n, reg), reg, T, 8);
        Enclosure ep = eval_inf(*M, encode_set_pi(R, ord_finite(a), n, reg), reg, T, 8);
        ++instances;
        if (!(es == Enclosure(encode_set_sigma_value(R, n, T)) &&
              ep == Enclosure(encode_set_pi_value(R, n, T))))
          ++failures;
      }
    }
  }
  report(10, "set encodings take their indicator values exactly at finite levels",
         failures == 0, std::to_string(instances) + " instances, " +
                            std::to_string(failures) + " failures");
}

void criterion11() {
  CeRealSequence seq([](unsigned s) { return std::optional<unsigned>(2 * s); });
  const Dyadic half = d_half(Dyadic(1));
  unsigned long long instances = 0, failures = 0;
  for (unsigned n = 0; n < 16; ++n) {
    Dyadic p = n % 2 == 0 ? d_tsub(half, Dyadic::pow2(-static_cast<int>(n / 2) - 1))
                          : half;
    for (unsigned k = 0; k <= 12; ++k) {
      Dyadic ap = seq.approx(n, k);
      Dyadic diff = ap > p ? ap - p : p - ap;
      ++instances;
      if (diff > Dyadic::pow2(-static_cast<int>(k))) ++failures;
    }
    if ((seq.approx(n, 12) < half) != (n % 2 == 0)) ++failures;
  }
  report(11, "stage-enumerated sequence approximations and parity biconditional",
         failures == 0, std::to_string(instances) + " approximations, " +
                            std::to_string(failures) + " failures");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  criterion11();
  if (g_failures > 0) {
    std::printf("%d criteria failed\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
