#include <string>

#include "doctest.h"

#include "contdiag/io.hpp"

using namespace contdiag;

TEST_CASE("relation tables round trip through JSON") {
  RelationTable R(2, 3, true);
  R.insert({0, 1});
  R.insert({3, 2});
  Json j = table_to_json(R);
  CHECK(j.at("extension") == "true");
  CHECK(table_from_json(j) == R);
  CHECK(table_from_json(Json::parse(j.dump())) == R);
  CHECK_THROWS_AS(table_from_json(Json{{"arity", 2}}), ParseError);
  Json bad = j;
  bad["extension"] = "yes";
  CHECK_THROWS_AS(table_from_json(bad), ParseError);
  Json out_of_box = j;
  out_of_box["tuples"].push_back(std::vector<unsigned>{9, 9});
  CHECK_THROWS_AS(table_from_json(out_of_box), DomainError);
}

TEST_CASE("families round trip through JSON") {
  RelationFamily fam = make_sample_family(4, 2);
  Json j = family_to_json(fam);
  RelationFamily back = family_from_json(j);
  CHECK(back.levels().size() == fam.levels().size());
  for (const auto& [level, table] : fam.levels())
    CHECK(back.level(level) == table);
  CHECK_THROWS_AS(family_from_json(Json::object()), ParseError);
  Json bad = Json{{"levels", Json{{"x1", table_to_json(fam.level(0))}}}};
  CHECK_THROWS_AS(family_from_json(bad), ParseError);
}

TEST_CASE("verdict serialization") {
  Verdict v;
  v.status = Verdict::Status::Refuted;
  v.witness = Witness{"refuting-point", 3, {1, 2}};
  v.budget_consumed = 17;
  v.range = 4;
  Json j = verdict_to_json(v);
  CHECK(j.at("status") == "refuted");
  CHECK(j.at("witness").at("kind") == "refuting-point");
  CHECK(j.at("witness").at("k") == 3);
  CHECK(j.at("witness").at("points") == Json::array({1, 2}));
  CHECK(j.at("budget") == 17);
  Verdict u;
  CHECK(verdict_to_json(u).at("status") == "unknown");
  CHECK(verdict_to_json(u).at("witness").is_null());
}

TEST_CASE("verify report serialization splits lemma and corpus") {
  VerifyReport rep("star-sampled");
  rep.record(true, "");
  rep.record(false, "tuple (1,2)");
  Json j = report_to_json(rep);
  CHECK(j.at("lemma") == "star");
  CHECK(j.at("corpus") == "sampled");
  CHECK(j.at("instances") == 2);
  CHECK(j.at("failures") == 1);
  CHECK(j.at("notes").size() == 1);
  VerifyReport plain("avg");
  CHECK(report_to_json(plain).at("corpus") == "full");
}

TEST_CASE("cross check serialization") {
  CrossCheckReport rep = cross_check_lower_bounds(make_sample_family(3, 2), 1, 2, 2);
  Json j = cross_check_to_json(rep);
  CHECK(j.at("passed") == true);
  CHECK(j.at("instances") == rep.instances.size());
  CHECK(j.at("mismatches").empty());
}

TEST_CASE("code serialization expands streams to their closure") {
  EnumeratorRegistry reg;
  InfCode leaf = make_leaf(f_metric(t_const(q_const_name(Dyadic(0))),
                                    t_const(q_const_name(d_half(Dyadic(1))))));
  CHECK(code_to_json(leaf, reg).contains("leaf"));
  StreamSpec spec;
  spec.at = [leaf](unsigned) { return StreamItem{leaf, {"x"}}; };
  spec.length = 2;
  std::string id = reg.add(spec, "s");
  InfCode node = make_pi_code(ord_finite(1), {"y"}, id, reg);
  Json j = code_to_json(node, reg);
  CHECK(j.at("class") == "Pi");
  CHECK(j.at("notation") == "1");
  CHECK(j.at("vars") == Json::array({"y"}));
  CHECK(j.at("items").size() == 2);
  CHECK(j.at("items_truncated") == false);
  CHECK(j.at("items")[0].at("vars") == Json::array({"x"}));
  CHECK(j.at("items")[0].at("code").contains("leaf"));
  StreamSpec open;
  open.at = [leaf](unsigned) { return StreamItem{leaf, {}}; };
  InfCode node2 = make_pi_code(ord_finite(1), {}, reg.add(open, "o"), reg);
  Json j2 = code_to_json(node2, reg, 3);
  CHECK(j2.at("items").size() == 3);
  CHECK(j2.at("items_truncated") == true);
}

TEST_CASE("enclosure serialization uses plain fractions") {
  Enclosure e(parse_dyadic("1/4"), parse_dyadic("3/8"));
  Json j = enclosure_to_json(e);
  CHECK(j.at("lo") == "1/4");
  CHECK(j.at("hi") == "3/8");
  CHECK(j.at("width") == "1/8");
}

TEST_CASE("serialization is deterministic") {
  Json a = family_to_json(make_sample_family(3, 2));
  Json b = family_to_json(make_sample_family(3, 2));
  CHECK(a.dump() == b.dump());
  VerifyReport r1 = verify_star_sampled(50, 42);
  VerifyReport r2 = verify_star_sampled(50, 42);
  CHECK(report_to_json(r1).dump() == report_to_json(r2).dump());
}
