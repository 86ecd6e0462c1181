#pragma once

// JSON rendering of formulas and analysis results. Needs nlohmann/json
// (vendor/json.hpp) on the include path.

#include <string>

#include <json.hpp>

#include "lexsem/analysis.hpp"
#include "lexsem/formula.hpp"

namespace lexsem {

inline nlohmann::json to_json(const Formula& f);

inline nlohmann::json to_json(const LTerm& t) {
  using nlohmann::json;
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<LVar>(&v)) return json{{"node", "var"}, {"name", x->name}, {"sort", x->sort}};
  if (const auto* c = std::get_if<LConst>(&v)) return json{{"node", "const"}, {"name", c->name}};
  if (const auto* a = std::get_if<LApp>(&v)) {
    json args = json::array();
    for (const auto& x : a->args) args.push_back(to_json(x));
    return json{{"node", "app"}, {"fn", a->fn}, {"args", args}};
  }
  const auto& e = std::get<Eps>(v);
  const char* mode = e.mode == EpsMode::indefinite ? "indefinite" : e.mode == EpsMode::definite ? "definite" : "universal";
  return json{{"node", "eps"}, {"mode", mode}, {"var", e.var}, {"sort", e.sort}, {"body", to_json(e.body)}};
}

inline nlohmann::json to_json(const Formula& f) {
  using nlohmann::json;
  const auto& v = f.node().v;
  if (const auto* p = std::get_if<Pred>(&v)) {
    json args = json::array();
    for (const auto& a : p->args) args.push_back(to_json(a));
    return json{{"node", "pred"}, {"name", p->name}, {"args", args}};
  }
  if (const auto* b = std::get_if<Binary>(&v)) {
    const char* op = b->op == Connective::conj ? "and" : b->op == Connective::disj ? "or" : "implies";
    return json{{"node", op}, {"lhs", to_json(b->lhs)}, {"rhs", to_json(b->rhs)}};
  }
  if (const auto* n = std::get_if<Not>(&v)) return json{{"node", "not"}, {"operand", to_json(n->operand)}};
  if (const auto* q = std::get_if<Quant>(&v)) {
    return json{{"node", q->q == Quantifier::exists ? "exists" : "forall"},
                {"var", q->var},
                {"sort", q->sort},
                {"body", to_json(q->body)}};
  }
  if (const auto* e = std::get_if<Eq>(&v)) return json{{"node", "eq"}, {"lhs", to_json(e->lhs)}, {"rhs", to_json(e->rhs)}};
  return json{{"node", "truth"}, {"value", std::get<TruthConst>(v).value}};
}

inline nlohmann::json to_json(const AnalysisResult& r) {
  using nlohmann::json;
  json out;
  out["tree"] = to_string(r.tree);
  out["term"] = to_string(r.composed);
  out["type"] = to_string(r.type);
  if (!r.trace.empty()) {
    json trace = json::array();
    for (const auto& t : r.trace) trace.push_back(to_string(t));
    out["trace"] = trace;
  }
  out["normal"] = to_string(r.normal);
  out["steps"] = r.steps;
  out["formula"] = {{"text", print_formula(r.formula)}, {"tree", to_json(r.formula)}};
  json presups = json::array();
  for (const auto& p : r.presuppositions) presups.push_back({{"text", print_formula(p)}, {"tree", to_json(p)}});
  out["presuppositions"] = presups;
  if (r.conjoined) out["conjoined"] = {{"text", print_formula(*r.conjoined)}, {"tree", to_json(*r.conjoined)}};
  if (r.rewritten) out["rewritten"] = {{"text", print_formula(*r.rewritten)}, {"tree", to_json(*r.rewritten)}};
  json coercions = json::array();
  for (const auto& occ : r.report.occurrences)
    for (const auto& use : occ.used)
      coercions.push_back({{"word", occ.occurrence.word},
                           {"position", occ.occurrence.position},
                           {"label", use.label},
                           {"rigidity", std::string(to_string(use.rigidity))}});
  out["coercions"] = coercions;
  out["diagnostics"] = r.diagnostics;
  return out;
}

inline nlohmann::json to_json(const SessionResult& s) {
  using nlohmann::json;
  json sentences = json::array();
  for (const auto& r : s.sentences) sentences.push_back(to_json(r));
  json out{{"sentences", sentences},
           {"discourse", {{"text", print_formula(s.discourse)}, {"tree", to_json(s.discourse)}}}};
  if (s.rewritten) out["rewritten"] = {{"text", print_formula(*s.rewritten)}, {"tree", to_json(*s.rewritten)}};
  return out;
}

}  // namespace lexsem
