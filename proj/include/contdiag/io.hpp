#ifndef CONTDIAG_IO_HPP
#define CONTDIAG_IO_HPP

#include <string>
#include <vector>

#include "json.hpp"

#include "contdiag/diagrams.hpp"
#include "contdiag/infinitary.hpp"
#include "contdiag/relation.hpp"
#include "contdiag/structures.hpp"
#include "contdiag/verify.hpp"

namespace contdiag {

using Json = nlohmann::json;

inline Json table_to_json(const RelationTable& R) {
  Json tuples = Json::array();
  for (const auto& t : R.tuples()) tuples.push_back(t);
  return Json{{"arity", R.arity()},
              {"bound", R.bound()},
              {"extension", R.extension() ? "true" : "false"},
              {"tuples", tuples}};
}

inline RelationTable table_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("arity") || !j.contains("bound") ||
      !j.contains("extension") || !j.contains("tuples"))
    throw ParseError("relation table needs arity, bound, extension, tuples", 0);
  std::string ext = j.at("extension").get<std::string>();
  if (ext != "true" && ext != "false")
    throw ParseError("extension must be \"true\" or \"false\"", 0);
  RelationTable R(j.at("arity").get<unsigned>(), j.at("bound").get<unsigned>(),
                  ext == "true");
  for (const auto& t : j.at("tuples"))
    R.insert(t.get<std::vector<unsigned>>());
  return R;
}

inline Json family_to_json(const RelationFamily& fam) {
  Json levels = Json::object();
  for (const auto& [level, table] : fam.levels())
    levels[std::to_string(level)] = table_to_json(table);
  return Json{{"levels", levels}};
}

inline RelationFamily family_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("levels"))
    throw ParseError("relation family needs a levels object", 0);
  RelationFamily fam;
  for (const auto& [key, value] : j.at("levels").items()) {
    std::size_t pos = 0;
    unsigned long level = 0;
    try {
      level = std::stoul(key, &pos);
    } catch (const std::exception&) {
      throw ParseError("bad level key: " + key, 0);
    }
    if (pos != key.size()) throw ParseError("bad level key: " + key, 0);
    fam.set_level(static_cast<unsigned>(level), table_from_json(value));
  }
  return fam;
}

inline Json verdict_to_json(const Verdict& v) {
  Json w = nullptr;
  if (v.witness)
    w = Json{{"kind", v.witness->kind}, {"k", v.witness->k}, {"points", v.witness->points}};
  std::string status = v.status == Verdict::Status::Verified   ? "verified"
                       : v.status == Verdict::Status::Refuted ? "refuted"
                                                              : "unknown";
  return Json{{"status", status},
              {"witness", w},
              {"budget", v.budget_consumed},
              {"range", v.range}};
}

inline Json report_to_json(const VerifyReport& rep) {
  std::string lemma = rep.check, corpus = "full";
  auto dash = rep.check.find('-');
  if (dash != std::string::npos) {
    lemma = rep.check.substr(0, dash);
    corpus = rep.check.substr(dash + 1);
  }
  return Json{{"lemma", lemma},
              {"corpus", corpus},
              {"instances", rep.instances},
              {"failures", rep.failures},
              {"max_range", rep.max_range_used},
              {"notes", rep.notes}};
}

inline Json cross_check_to_json(const CrossCheckReport& rep) {
  Json mism = Json::array();
  for (const auto& m : rep.mismatches())
    mism.push_back(Json{{"N", m.N},
                        {"n", m.n},
                        {"mode", m.open ? "open" : "closed"},
                        {"range", m.range}});
  return Json{{"instances", rep.instances.size()},
              {"mismatches", mism},
              {"budget", rep.budget_consumed},
              {"passed", rep.passed()}};
}

/// Nested code serialization; streams are expanded up to their value
/// closure (or `max_items` for open-ended ones) with the enumerator id kept
/// for resolution against the registry.
inline Json code_to_json(const InfCode& c, const EnumeratorRegistry& reg,
                         unsigned max_items = 8) {
  if (c->kind == InfCodeNode::Kind::Leaf) return Json{{"leaf", render_formula(c->leaf)}};
  const StreamSpec& spec = reg.get(c->enumerator);
  unsigned shown = max_items;
  bool truncated = true;
  if (spec.length && *spec.length <= shown) {
    shown = *spec.length;
    truncated = false;
  } else if (spec.closure_after && *spec.closure_after + 1 <= shown) {
    shown = *spec.closure_after + 1;
    truncated = false;
  }
  Json items = Json::array();
  for (unsigned i = 0; i < shown; ++i) {
    StreamItem item = spec.at(i);
    items.push_back(
        Json{{"vars", item.vars}, {"code", code_to_json(item.code, reg, max_items)}});
  }
  return Json{{"class", to_string(c->cls)},
              {"notation", ordinal_to_string(c->notation)},
              {"vars", c->vars},
              {"enumerator", c->enumerator},
              {"items", items},
              {"items_truncated", truncated}};
}

inline Json enclosure_to_json(const Enclosure& e) {
  return Json{{"lo", e.lo().to_plain_fraction_string()},
              {"hi", e.hi().to_plain_fraction_string()},
              {"width", e.width().to_plain_fraction_string()}};
}

}  // namespace contdiag

#endif
