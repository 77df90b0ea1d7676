#include "lambek/json_io.hpp"

#include <unordered_map>

namespace lambek {

namespace {

Json words(const std::vector<Word>& ws) {
  Json out = Json::array();
  for (const auto& w : ws) out.push_back(render_word(w));
  return out;
}

Json formulas(std::span<const Formula> fs) {
  Json out = Json::array();
  for (auto f : fs) out.push_back(render_formula(f));
  return out;
}

}  // namespace

Json to_json(const Sequent& s) {
  return Json{{"antecedent", formulas(s.antecedent)}, {"succedent", render_formula(s.succedent)}};
}

Sequent sequent_from_json(const Json& j) {
  try {
    Sequent s;
    for (const auto& f : j.at("antecedent")) s.antecedent.push_back(parse_formula(f.get<std::string>()));
    s.succedent = parse_formula(j.at("succedent").get<std::string>());
    return s;
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed sequent record: ") + e.what());
  }
}

Json derivation_to_json(const DerivationPtr& d) {
  Json nodes = Json::array();
  std::unordered_map<const Derivation*, std::size_t> ids;
  // Iterative post-order so deep derivations do not exhaust the stack.
  std::vector<std::pair<const Derivation*, std::size_t>> stack{{d.get(), 0}};
  while (!stack.empty()) {
    auto& [node, next] = stack.back();
    if (ids.count(node)) {
      stack.pop_back();
      continue;
    }
    if (next < node->premises.size()) {
      const Derivation* p = node->premises[next++].get();
      if (!ids.count(p)) stack.push_back({p, 0});
      continue;
    }
    Json prem = Json::array();
    for (const auto& p : node->premises) prem.push_back(ids.at(p.get()));
    ids.emplace(node, nodes.size());
    nodes.push_back(Json{{"id", nodes.size()},
                         {"rule", std::string(rule_label(node->rule))},
                         {"conclusion", to_json(node->conclusion)},
                         {"premises", std::move(prem)}});
    stack.pop_back();
  }
  return Json{{"schema", kSchemaVersion},
              {"kind", "derivation"},
              {"root", ids.at(d.get())},
              {"tree_size", tree_size(d)},
              {"nodes", std::move(nodes)}};
}

DerivationPtr derivation_from_json(const Json& j) {
  try {
    std::vector<DerivationPtr> built;
    for (const auto& n : j.at("nodes")) {
      if (n.at("id").get<std::size_t>() != built.size()) throw std::invalid_argument("node ids out of order");
      auto rule = rule_from_label(n.at("rule").get<std::string>());
      if (!rule) throw std::invalid_argument("unknown rule " + n.at("rule").dump());
      std::vector<DerivationPtr> prem;
      for (const auto& p : n.at("premises")) {
        std::size_t id = p.get<std::size_t>();
        if (id >= built.size()) throw std::invalid_argument("premise refers forward");
        prem.push_back(built[id]);
      }
      built.push_back(make_derivation(*rule, sequent_from_json(n.at("conclusion")), std::move(prem)));
    }
    std::size_t root = j.at("root").get<std::size_t>();
    if (root >= built.size()) throw std::invalid_argument("root out of range");
    return built[root];
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed derivation record: ") + e.what());
  }
}

Json to_json(const ProveResult& r, const Sequent& s, bool with_certificate) {
  Json j{{"schema", kSchemaVersion},
         {"kind", "prove"},
         {"sequent", render_sequent(s)},
         {"verdict", std::string(verdict_name(r.verdict))},
         {"expansions", r.expansions}};
  if (!r.note.empty()) j["note"] = r.note;
  if (with_certificate && r.derivation) j["certificate"] = derivation_to_json(r.derivation);
  return j;
}

Json to_json(const CompiledGrammar& cg) {
  Json lex = Json::object();
  for (const auto& [t, k] : cg.lexicon) lex[t] = render_formula(k);
  Json parts = Json::array();
  for (const auto& p : cg.parts)
    parts.push_back(Json{{"terminal", p.terminal},
                         {"rules", p.rules},
                         {"members", formulas(p.is.members)},
                         {"is", render_formula(p.is.formula)},
                         {"f_join", render_formula(p.is.f.join)},
                         {"f_strategy", p.is.f.strategy},
                         {"g_join", render_formula(p.is.g.join)},
                         {"g_strategy", p.is.g.strategy}});
  return Json{{"schema", kSchemaVersion},
              {"kind", "compiled-grammar"},
              {"method", "unique"},
              {"terminals", cg.terminals},
              {"nonterminals", cg.nonterminals},
              {"goal", render_formula(cg.goal)},
              {"lexicon", std::move(lex)},
              {"sentinels", formulas(cg.sentinels)},
              {"h", formulas(cg.h)},
              {"parts", std::move(parts)}};
}

Json to_json(const LambekGrammar& g) {
  Json lex = Json::object();
  for (const auto& [t, ks] : g.lexicon) lex[t] = formulas(ks);
  return Json{{"schema", kSchemaVersion},
              {"kind", "lambek-grammar"},
              {"goal", render_formula(g.goal)},
              {"lexicon", std::move(lex)}};
}

Json to_json(const EquivalenceReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"word", render_word(row.word)},
                        {"cyk", row.cyk},
                        {"lambek", std::string(verdict_name(row.lambek))},
                        {"expansions", row.expansions}});
  Json j{{"schema", kSchemaVersion},
         {"kind", "equivalence"},
         {"grammar", r.grammar_id},
         {"method", std::string(method_name(r.method))},
         {"max_len", r.max_len},
         {"passed", r.passed()},
         {"mismatches", words(r.mismatches)},
         {"joins_verified", r.joins_verified},
         {"compile_seconds", r.compile_seconds},
         {"check_seconds", r.check_seconds},
         {"rows", std::move(rows)}};
  if (!r.error.empty()) j["error"] = r.error;
  return j;
}

Json to_json(const ApproxReport& r) {
  Json j{{"schema", kSchemaVersion},
         {"kind", "approximations"},
         {"verdict", std::string(bounded_verdict_name(r.verdict))},
         {"levels_checked", r.levels_checked},
         {"note", r.note}};
  j["level"] = r.level ? Json(*r.level) : Json(nullptr);
  return j;
}

Json to_json(const InstanceReport& r) {
  Json j{{"schema", kSchemaVersion},
         {"kind", "instances"},
         {"verdict", std::string(bounded_verdict_name(r.verdict))},
         {"checked", r.checked},
         {"expansions", r.expansions},
         {"note", r.note}};
  j["witness"] = r.witness ? Json(render_sequent(*r.witness)) : Json(nullptr);
  return j;
}

Json to_json(const Alt2Report& r) {
  Json j{{"schema", kSchemaVersion},
         {"kind", "alt2-refutation"},
         {"verdict", std::string(bounded_verdict_name(r.verdict))},
         {"instances_checked", r.instances_checked},
         {"expansions", r.expansions},
         {"consistent_with_cyk", r.consistent},
         {"note", r.note}};
  j["cyk_missing"] = r.cyk_missing ? Json(render_word(*r.cyk_missing)) : Json(nullptr);
  if (r.witness)
    j["witness"] = Json{{"word", render_word(r.witness->word)},
                        {"instance", render_sequent(r.witness->instance)},
                        {"trace", r.witness->trace}};
  else
    j["witness"] = nullptr;
  return j;
}

Json to_json(const ProbeReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back(Json{{"word", render_word(row.word)},
                        {"lhs", std::string(verdict_name(row.lhs_verdict))},
                        {"rhs", std::string(verdict_name(row.rhs_verdict))}});
  Json j{{"schema", kSchemaVersion},
         {"kind", "conjecture-probe"},
         {"status", r.status},
         {"lhs", render_sequent(r.lhs)},
         {"rhs", render_sequent(r.rhs)},
         {"lhs_verdict", std::string(bounded_verdict_name(r.lhs_verdict))},
         {"rhs_verdict", std::string(bounded_verdict_name(r.rhs_verdict))},
         {"agreements", r.agreements},
         {"disagreements", r.disagreements},
         {"rows", std::move(rows)}};
  if (r.rhs_approximations) j["rhs_approximations"] = to_json(*r.rhs_approximations);
  return j;
}

}  // namespace lambek
