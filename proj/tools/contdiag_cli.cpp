// Command-line front end: evaluation, diagram checks, encode checks, the
// lemma-verification suites, infinitary evaluation, and the lower-bound
// cross-check.  Machine-readable JSON goes to stdout, a one-line human
// summary to stderr.  Exit codes: 0 agreement/success, 1 mismatch,
// 2 usage error, 3 budget exhausted.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "contdiag/contdiag.hpp"

namespace {

using namespace contdiag;

constexpr unsigned long long kDefaultSeed = 0x5eed;

void emit(const Json& j, const std::string& summary) {
  std::cout << j.dump(2) << "\n";
  std::cerr << summary << "\n";
}

RelationFamily load_family(const std::string& selector) {
  if (selector == "sample") return make_sample_family(5, 3);
  std::ifstream in(selector);
  if (!in) throw DomainError("cannot open family file: " + selector);
  return family_from_json(Json::parse(in));
}

RelationTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open table file: " + path);
  return table_from_json(Json::parse(in));
}

PresentationPtr build_structure(const std::string& name, const std::string& family) {
  if (name == "interval") return make_interval_structure();
  if (name == "discrete") return make_lower_bound_structure(load_family(family));
  throw DomainError("unknown structure: " + name);
}

int cmd_eval(const std::string& structure, const std::string& family,
             const std::string& formula, unsigned k, unsigned points) {
  PresentationPtr M = build_structure(structure, family);
  Formula f = parse_formula(formula, M->signature());
  Enclosure e = quantifier_free(f) ? Enclosure(eval_qf(*M, f, k))
                : M->compact()     ? compact_eval(*M, f, k)
                                   : eval_enclosure(*M, f, points, k);
  emit(Json{{"formula", render_formula(f)}, {"enclosure", enclosure_to_json(e)}},
       "eval: [" + e.lo().to_plain_fraction_string() + ", " +
           e.hi().to_plain_fraction_string() + "]");
  return 0;
}

int cmd_diagram(const std::string& family, const std::string& formula,
                const std::string& q_text, const std::string& mode, unsigned range,
                unsigned long long budget) {
  auto M = make_lower_bound_structure(load_family(family));
  DiagramQuery query;
  query.sentence = parse_formula(formula, M->signature());
  query.threshold = parse_dyadic(q_text);
  if (mode != "closed" && mode != "open") throw DomainError("mode must be closed|open");
  query.mode = mode == "closed" ? DiagramQuery::Mode::Closed : DiagramQuery::Mode::Open;
  Verdict v = run_check(*M, query, range, budget);
  bool rechecked = v.definite() && reverify(*M, query, v);
  Json j = verdict_to_json(v);
  j["reverified"] = v.definite() ? Json(rechecked) : Json(nullptr);
  std::string status = j["status"].get<std::string>();
  emit(j, "diagram: " + status + " (budget " + std::to_string(v.budget_consumed) + ")");
  if (!v.definite()) return 3;
  return rechecked ? 0 : 1;
}

int cmd_encode_check(const std::string& table_path, const std::string& mode,
                     std::optional<unsigned> range, std::optional<unsigned> n_max) {
  RelationTable R = load_table(table_path);
  if (R.arity() < 2) throw DomainError("encode-check: table arity must be >= 2");
  unsigned base = range.value_or(R.bound());
  unsigned nm = n_max.value_or(R.bound() + 2);
  bool do_forall = mode == "forall" || mode == "both";
  bool do_exists = mode == "exists" || mode == "both";
  if (!do_forall && !do_exists) throw DomainError("mode must be forall|exists|both");
  Json results = Json::array();
  unsigned mismatches = 0, max_range = base;
  for (unsigned n = 0; n < nm; ++n) {
    auto agree_at = [&](unsigned r) {
      bool ok = true;
      if (do_forall) ok = ok && encode_forall_check(R, n, r) == forall_membership(R, n, r);
      if (do_exists) ok = ok && encode_exists_check(R, n, r) == exists_membership(R, n, r);
      return ok;
    };
    auto r = detail::first_sufficient_range(agree_at, base);
    if (r && *r > max_range) max_range = *r;
    if (!r) ++mismatches;
    results.push_back(Json{{"n", n}, {"agree", r.has_value()},
                           {"range", r ? Json(*r) : Json(nullptr)}});
  }
  emit(Json{{"mode", mode},
            {"instances", nm},
            {"mismatches", mismatches},
            {"max_range", max_range},
            {"results", results}},
       "encode-check: " + std::to_string(nm - mismatches) + "/" + std::to_string(nm) +
           " agree");
  return mismatches == 0 ? 0 : 1;
}

int cmd_verify_lemmas(const std::string& lemma, unsigned K, unsigned long long samples,
                      unsigned long long seed) {
  std::vector<VerifyReport> reports;
  if (lemma == "avg" || lemma == "all") reports.push_back(verify_avg_grid());
  if (lemma == "carry" || lemma == "all")
    reports.push_back(lemma == "carry" ? verify_carry_at(K) : verify_carry(K));
  if (lemma == "star" || lemma == "all") {
    reports.push_back(verify_star_exhaustive());
    reports.push_back(verify_star_sampled(samples, seed));
  }
  if (lemma == "swap" || lemma == "all") {
    reports.push_back(verify_swap_exhaustive());
    reports.push_back(verify_swap_sampled(samples > 500 ? 500 : samples, seed));
  }
  if (lemma == "encode" || lemma == "all") {
    reports.push_back(verify_encode_exhaustive());
    reports.push_back(verify_encode_sampled(samples > 1000 ? 1000 : samples, seed));
  }
  if (reports.empty()) throw DomainError("unknown lemma: " + lemma);
  Json arr = Json::array();
  bool all_ok = true;
  unsigned long long total = 0;
  for (const auto& r : reports) {
    arr.push_back(report_to_json(r));
    all_ok = all_ok && r.passed();
    total += r.instances;
  }
  emit(Json{{"reports", arr}, {"passed", all_ok}},
       "verify-lemmas: " + std::to_string(total) + " instances, " +
           (all_ok ? "all passed" : "FAILURES"));
  return all_ok ? 0 : 1;
}

struct CodeSpec {
  std::string table_path;
  unsigned level = 1;
  unsigned n = 0;
  std::string cls = "sigma";
};

std::pair<InfCode, PresentationPtr> build_set_code(const CodeSpec& cs,
                                                   EnumeratorRegistry& reg) {
  RelationTable R = load_table(cs.table_path);
  std::optional<RelationFamily> fam;
  if (cs.level >= 1) {
    RelationFamily f;
    f.set_level(2 * cs.level - 1, R);
    fam = std::move(f);
  }
  auto M = make_interval_structure(std::move(fam));
  InfCode code = cs.cls == "sigma"
                     ? encode_set_sigma(R, ord_finite(cs.level), cs.n, reg)
                 : cs.cls == "pi" ? encode_set_pi(R, ord_finite(cs.level), cs.n, reg)
                                  : throw DomainError("class must be sigma|pi");
  return {code, M};
}

int cmd_inf_eval(const CodeSpec& cs, unsigned T, unsigned k) {
  EnumeratorRegistry reg;
  auto [code, M] = build_set_code(cs, reg);
  Enclosure e = eval_inf(*M, code, reg, T, k);
  emit(Json{{"code", code_to_json(code, reg)}, {"enclosure", enclosure_to_json(e)}},
       "inf-eval: [" + e.lo().to_plain_fraction_string() + ", " +
           e.hi().to_plain_fraction_string() + "]");
  return 0;
}

int cmd_cut_check(const CodeSpec& cs, const std::string& q_text,
                  const std::string& relation, unsigned T, unsigned k) {
  EnumeratorRegistry reg;
  auto [code, M] = build_set_code(cs, reg);
  Dyadic q = parse_dyadic(q_text);
  if (relation != "gt" && relation != "ge") throw DomainError("relation must be gt|ge");
  Verdict v = cut_check(*M, code, reg, q, relation == "gt", T, k);
  Json j = verdict_to_json(v);
  emit(j, "cut-check: " + j["status"].get<std::string>());
  return v.definite() ? 0 : 3;
}

int cmd_cross_check(const std::string& family, unsigned N_max, unsigned n_max,
                    unsigned range, unsigned long long budget) {
  RelationFamily fam = load_family(family);
  CrossCheckReport rep = cross_check_lower_bounds(fam, N_max, n_max, range, budget);
  emit(cross_check_to_json(rep),
       "cross-check: " + std::to_string(rep.instances.size()) + " instances, " +
           std::to_string(rep.mismatches().size()) + " mismatches");
  return rep.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous-logic diagram toolkit"};
  app.require_subcommand(1);

  std::string structure = "interval", family = "sample", formula, q_text = "1/2";
  std::string mode = "closed", lemma = "all", relation = "ge", table_path;
  unsigned k = 10, points = 4, range = 3, K = 10, T = 8, N_max = 2, n_max = 8;
  std::optional<unsigned> opt_range, opt_n_max;
  unsigned long long budget = 1ull << 32, samples = 10000, seed = kDefaultSeed;
  CodeSpec cs;

  auto* eval = app.add_subcommand("eval", "evaluate a sentence to an enclosure");
  eval->add_option("--structure", structure, "interval|discrete");
  eval->add_option("--family", family, "sample or a family JSON path");
  eval->add_option("--formula", formula)->required();
  eval->add_option("--k", k, "precision 2^-k");
  eval->add_option("--points", points, "rational points scanned per quantifier");

  auto* diagram = app.add_subcommand("diagram", "semi-decide phi <= q or phi < q");
  diagram->add_option("--family", family);
  diagram->add_option("--formula", formula)->required();
  diagram->add_option("--q", q_text, "dyadic threshold");
  diagram->add_option("--mode", mode, "closed|open");
  diagram->add_option("--range", range);
  diagram->add_option("--budget", budget);

  auto* encode = app.add_subcommand("encode-check", "series encodings vs brute oracle");
  encode->add_option("--table", table_path)->required();
  encode->add_option("--mode", mode, "forall|exists|both")->required();
  encode->add_option("--range", opt_range);
  encode->add_option("--n-max", opt_n_max);

  auto* verify = app.add_subcommand("verify-lemmas", "run the lemma corpora");
  verify->add_option("--lemma", lemma, "all|avg|carry|star|swap|encode");
  verify->add_option("--K", K, "carry truncation");
  verify->add_option("--samples", samples);
  verify->add_option("--seed", seed);

  auto* inf = app.add_subcommand("inf-eval", "evaluate a set-encoding code");
  inf->add_option("--table", cs.table_path)->required();
  inf->add_option("--level", cs.level);
  inf->add_option("--n", cs.n);
  inf->add_option("--class", cs.cls, "sigma|pi");
  inf->add_option("--T", T, "stream truncation");
  inf->add_option("--k", k);

  auto* cut = app.add_subcommand("cut-check", "right-cut membership of q");
  cut->add_option("--table", cs.table_path)->required();
  cut->add_option("--level", cs.level);
  cut->add_option("--n", cs.n);
  cut->add_option("--class", cs.cls, "sigma|pi");
  cut->add_option("--q", q_text)->required();
  cut->add_option("--relation", relation, "gt|ge");
  cut->add_option("--T", T);
  cut->add_option("--k", k);

  auto* cross = app.add_subcommand("cross-check", "diagram verdicts vs brute membership");
  cross->add_option("--family", family);
  cross->add_option("--N-max", N_max);
  cross->add_option("--n-max", n_max);
  cross->add_option("--range", range);
  cross->add_option("--budget", budget);

  CLI11_PARSE(app, argc, argv);

  try {
    if (eval->parsed()) return cmd_eval(structure, family, formula, k, points);
    if (diagram->parsed())
      return cmd_diagram(family, formula, q_text, mode, range, budget);
    if (encode->parsed()) return cmd_encode_check(table_path, mode, opt_range, opt_n_max);
    if (verify->parsed()) return cmd_verify_lemmas(lemma, K, samples, seed);
    if (inf->parsed()) return cmd_inf_eval(cs, T, k);
    if (cut->parsed()) return cmd_cut_check(cs, q_text, relation, T, k);
    if (cross->parsed()) return cmd_cross_check(family, N_max, n_max, range, budget);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const PrecisionError& e) {
    std::cerr << "precision budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
