#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lexsem/discourse.hpp"
#include "lexsem/error.hpp"
#include "lexsem/formula.hpp"
#include "lexsem/kernel.hpp"

namespace lexsem {

namespace detail {

class Extractor {
 public:
  Formula formula(const Term& t) {
    if (t.as<Lam>() || t.as<TyLam>()) {
      throw error(errc::residual_lambda, "abstraction where a formula is required: " + to_string(t));
    }
    if (const auto* v = t.as<Var>()) {
      throw error(errc::higher_order_residue, "propositional variable '" + v->name + "' in formula");
    }
    if (const auto* c = t.as<Const>()) {
      if (TypingContext::is_builtin_name(c->name))
        throw error(errc::higher_order_residue, "bare logical constant '" + c->name + "'");
      return pred(c->name);
    }
    auto [head, args] = unfold_app(t);
    if (const auto* c = head.as<Const>()) {
      const std::string& name = c->name;
      if ((name == builtin::conj || name == builtin::disj || name == builtin::implies) && args.size() == 2) {
        Connective op = name == builtin::conj   ? Connective::conj
                        : name == builtin::disj ? Connective::disj
                                                : Connective::implies;
        return binary(op, formula(args[0]), formula(args[1]));
      }
      if (name == builtin::neg && args.size() == 1) return negation(formula(args[0]));
      if (TypingContext::is_builtin_name(name))
        throw error(errc::higher_order_residue, "partially applied '" + name + "' in " + to_string(t));
      std::vector<LTerm> lts;
      for (const auto& a : args) lts.push_back(term(a));
      return pred(name, std::move(lts));
    }
    if (const auto* ta = head.as<TyApp>()) {
      const auto* c = ta->fun.as<Const>();
      const auto sort = sort_name(ta->ty);
      if (c && sort && (c->name == builtin::exists || c->name == builtin::forall) && args.size() == 1) {
        auto [var, body] = open_body(args[0], *sort);
        Quantifier q = c->name == builtin::exists ? Quantifier::exists : Quantifier::forall;
        return quant(q, var, *sort, formula(body));
      }
      if (c && sort && c->name == builtin::eq && args.size() == 2) {
        return equality(term(args[0]), term(args[1]));
      }
    }
    if (head.as<Lam>() || head.as<TyLam>()) {
      throw error(errc::not_normal, "redex in " + to_string(t));
    }
    throw error(errc::higher_order_residue, "cannot read " + to_string(t) + " as a formula");
  }

  LTerm term(const Term& t) {
    if (const auto* v = t.as<Var>()) {
      auto sort = sort_name(v->type);
      if (!sort) throw error(errc::higher_order_residue, "variable '" + v->name + "' of type " + lexsem::to_string(v->type));
      return lvar(v->name, *sort);
    }
    if (const auto* c = t.as<Const>()) {
      if (!sort_name(c->type) || TypingContext::is_builtin_name(c->name))
        throw error(errc::higher_order_residue, "constant '" + c->name + "' used as an individual");
      return lconst(c->name);
    }
    if (t.as<Lam>() || t.as<TyLam>()) {
      throw error(errc::residual_lambda, "abstraction where an individual is required: " + to_string(t));
    }
    auto [head, args] = unfold_app(t);
    if (const auto* c = head.as<Const>(); c && !TypingContext::is_builtin_name(c->name)) {
      std::vector<LTerm> lts;
      for (const auto& a : args) lts.push_back(term(a));
      return lapp(c->name, std::move(lts));
    }
    if (const auto* ta = head.as<TyApp>(); ta && args.size() == 1) {
      const auto* c = ta->fun.as<Const>();
      const auto sort = sort_name(ta->ty);
      if (c && sort) {
        std::optional<EpsMode> mode;
        if (c->name == builtin::eps) mode = EpsMode::indefinite;
        if (c->name == builtin::ieps) mode = EpsMode::definite;
        if (c->name == builtin::tau) mode = EpsMode::universal;
        if (mode) {
          auto [var, body] = open_body(args[0], *sort);
          return eps_term(*mode, var, *sort, formula(body));
        }
      }
    }
    throw error(errc::higher_order_residue, "cannot read " + to_string(t) + " as an individual");
  }

 private:
  static std::optional<std::string> sort_name(const Type& ty) {
    if (const auto* b = ty.as<BaseSort>(); b && b->name != kTruthSort) return b->name;
    return std::nullopt;
  }

  // λx.φ gives (x, φ); any other predicate P gives (x, P x) for a fresh x.
  static std::pair<std::string, Term> open_body(const Term& p, const std::string& sort) {
    if (const auto* l = p.as<Lam>()) return {l->var, l->body};
    std::set<std::string> taken = detail_names(p);
    std::string x = fresh_name("x", taken);
    return {x, make_app(p, make_var(x, base_type(sort)))};
  }

  static std::set<std::string> detail_names(const Term& t) {
    std::set<std::string> out;
    detail::collect_names(t, out);
    return out;
  }
};

}  // namespace detail

// Reads a normal term of type t as a many-sorted first-order formula.
inline Formula extract_formula(const Term& t) {
  if (!is_normal(t)) throw error(errc::not_normal, "term is not in normal form: " + to_string(t));
  Type ty = type_of(t);
  if (!ty.is_base(kTruthSort))
    throw error(errc::not_truth_type, "term has type " + to_string(ty) + ", expected t");
  detail::Extractor x;
  return x.formula(t);
}

// For every closed ε-term (ε or unresolved ι-ε) in the term, the claim that
// it satisfies its own restriction, P(ε P). α-equal duplicates are dropped.
inline std::vector<Formula> presuppositions(const Term& t) {
  std::vector<Formula> out;
  std::vector<Term> seen;
  auto visit = [&](auto&& self, const Term& s) -> void {
    if (auto split = split_choice_term(s); split && free_vars(s).empty()) {
      bool dup = false;
      for (const auto& prev : seen) dup = dup || alpha_eq(prev, s);
      if (!dup) {
        seen.push_back(s);
        Term claim = normalize(make_app(split->second, s));
        Formula f = extract_formula(claim);
        bool same = false;
        for (const auto& g : out) same = same || alpha_eq(g, f);
        if (!same) out.push_back(f);
      }
    }
    const auto& v = s.node().v;
    if (const auto* a = std::get_if<App>(&v)) {
      self(self, a->fun);
      self(self, a->arg);
    } else if (const auto* l = std::get_if<Lam>(&v)) {
      self(self, l->body);
    } else if (const auto* ta = std::get_if<TyApp>(&v)) {
      self(self, ta->fun);
    } else if (const auto* tl = std::get_if<TyLam>(&v)) {
      self(self, tl->body);
    }
  };
  visit(visit, t);
  return out;
}

struct RewriteOptions {
  // Also rewrite a conjunction one of whose conjuncts is the restriction of an
  // ε-term occurring in it: B(εB) ∧ C(εB) becomes ∃x.(B(x) ∧ C(x)). This reads
  // conjoined presuppositions existentially; unlike the plain rule it does not
  // preserve truth in every model.
  bool accommodate_presuppositions = false;
};

namespace detail {

class HilbertRewriter {
 public:
  explicit HilbertRewriter(RewriteOptions opts) : opts_(opts) {}

  Formula run(const Formula& f) {
    if (auto r = at_root(f)) return run(*r);
    return descend(f);
  }

 private:
  Formula descend(const Formula& f) {
    const auto& v = f.node().v;
    if (const auto* b = std::get_if<Binary>(&v)) return binary(b->op, run(b->lhs), run(b->rhs));
    if (const auto* n = std::get_if<Not>(&v)) return negation(run(n->operand));
    if (const auto* q = std::get_if<Quant>(&v)) return quant(q->q, q->var, q->sort, run(q->body));
    if (const auto* p = std::get_if<Pred>(&v)) {
      std::vector<LTerm> as;
      for (const auto& a : p->args) as.push_back(term(a));
      return pred(p->name, std::move(as));
    }
    if (const auto* e = std::get_if<Eq>(&v)) return equality(term(e->lhs), term(e->rhs));
    return f;
  }

  LTerm term(const LTerm& t) {
    const auto& v = t.node().v;
    if (const auto* a = std::get_if<LApp>(&v)) {
      std::vector<LTerm> as;
      for (const auto& x : a->args) as.push_back(term(x));
      return lapp(a->fn, std::move(as));
    }
    if (const auto* e = std::get_if<Eps>(&v)) return eps_term(e->mode, e->var, e->sort, run(e->body));
    return t;
  }

  std::optional<Formula> at_root(const Formula& f) {
    std::vector<LTerm> candidates;
    collect_eps(f, candidates);
    const std::set<std::string> taken = all_names(f);
    for (const auto& cand : candidates) {
      const auto& e = *cand.as<Eps>();
      // Open with a placeholder first so the ε-term's own binder name can be
      // reused once it has disappeared from the formula.
      const std::string hole = fresh_name("hole", taken);
      Formula opened = abstract(f, cand, hole, e.sort);
      if (!free_in(opened, hole)) continue;
      std::set<std::string> rest = all_names(opened);
      std::string x = hole;
      if (!rest.count(e.var)) {
        x = e.var;
      } else {
        x = fresh_name(e.var, rest);
      }
      if (x != hole) opened = abstract(f, cand, x, e.sort);
      if (hole_match(opened, x, e.body, e.var)) {
        Quantifier q = e.mode == EpsMode::universal ? Quantifier::forall : Quantifier::exists;
        return quant(q, x, e.sort, opened);
      }
      if (opts_.accommodate_presuppositions && e.mode != EpsMode::universal && f.as<Binary>() &&
          f.as<Binary>()->op == Connective::conj && accommodates(opened, x, e)) {
        return exists(x, e.sort, opened);
      }
    }
    return std::nullopt;
  }

  // Every conjunct of the restriction reappears among the conjuncts of f.
  static bool accommodates(const Formula& opened, const std::string& x, const Eps& e) {
    std::vector<Formula> have, need;
    flatten_conjuncts(opened, have);
    flatten_conjuncts(e.body, need);
    for (const auto& n : need) {
      bool found = false;
      for (const auto& h : have) found = found || hole_match(h, x, n, e.var);
      if (!found) return false;
    }
    return true;
  }

  static bool hole_match(const Formula& a, const std::string& xa, const Formula& b, const std::string& xb) {
    FormulaAlpha eq;
    eq.env_a.push_back(xa);
    eq.env_b.push_back(xb);
    return eq.formula(a, b);
  }

  static bool free_in(const Formula& f, const std::string& x) { return free_vars(f).count(x) > 0; }

  // Closed ε-terms of f in pre-order, without α-duplicates.
  static void collect_eps(const Formula& f, std::vector<LTerm>& out) {
    auto add = [&](const LTerm& t) {
      if (!free_vars(t).empty()) return;
      for (const auto& o : out)
        if (alpha_eq(o, t)) return;
      out.push_back(t);
    };
    auto on_term = [&](auto&& self, const LTerm& t) -> void {
      const auto& v = t.node().v;
      if (const auto* a = std::get_if<LApp>(&v)) {
        for (const auto& x : a->args) self(self, x);
      } else if (const auto* e = std::get_if<Eps>(&v)) {
        add(t);
        collect_eps(e->body, out);
      }
    };
    const auto& v = f.node().v;
    if (const auto* p = std::get_if<Pred>(&v)) {
      for (const auto& a : p->args) on_term(on_term, a);
    } else if (const auto* b = std::get_if<Binary>(&v)) {
      collect_eps(b->lhs, out);
      collect_eps(b->rhs, out);
    } else if (const auto* n = std::get_if<Not>(&v)) {
      collect_eps(n->operand, out);
    } else if (const auto* q = std::get_if<Quant>(&v)) {
      collect_eps(q->body, out);
    } else if (const auto* e = std::get_if<Eq>(&v)) {
      on_term(on_term, e->lhs);
      on_term(on_term, e->rhs);
    }
  }

  // Replaces each occurrence of the closed term `target` by the variable x.
  static Formula abstract(const Formula& f, const LTerm& target, const std::string& x, const std::string& sort) {
    auto on_term = [&](auto&& self, const LTerm& t) -> LTerm {
      if (alpha_eq(t, target)) return lvar(x, sort);
      const auto& v = t.node().v;
      if (const auto* a = std::get_if<LApp>(&v)) {
        std::vector<LTerm> as;
        for (const auto& y : a->args) as.push_back(self(self, y));
        return lapp(a->fn, std::move(as));
      }
      if (const auto* e = std::get_if<Eps>(&v)) {
        return eps_term(e->mode, e->var, e->sort, abstract(e->body, target, x, sort));
      }
      return t;
    };
    const auto& v = f.node().v;
    if (const auto* p = std::get_if<Pred>(&v)) {
      std::vector<LTerm> as;
      for (const auto& a : p->args) as.push_back(on_term(on_term, a));
      return pred(p->name, std::move(as));
    }
    if (const auto* b = std::get_if<Binary>(&v))
      return binary(b->op, abstract(b->lhs, target, x, sort), abstract(b->rhs, target, x, sort));
    if (const auto* n = std::get_if<Not>(&v)) return negation(abstract(n->operand, target, x, sort));
    if (const auto* q = std::get_if<Quant>(&v))
      return quant(q->q, q->var, q->sort, abstract(q->body, target, x, sort));
    if (const auto* e = std::get_if<Eq>(&v)) return equality(on_term(on_term, e->lhs), on_term(on_term, e->rhs));
    return f;
  }

  RewriteOptions opts_;
};

}  // namespace detail

// Rewrites B(ε_x B) to ∃x.B and B(τ_x B) to ∀x.B wherever a subformula has
// exactly that shape, outermost first, until nothing matches. Other ε-terms
// are left alone.
inline Formula rewrite_hilbert(const Formula& f, RewriteOptions opts = {}) {
  detail::HilbertRewriter r(opts);
  return r.run(f);
}

}  // namespace lexsem
