#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexsem/error.hpp"
#include "lexsem/sexpr.hpp"
#include "lexsem/term.hpp"
#include "lexsem/type.hpp"

namespace lexsem {

// Declared sorts plus the types of free variables and constants, in
// declaration order.
class TypingContext {
 public:
  TypingContext() {
    for (auto s : {kTruthSort, kEntitySort, kEventSort}) declare_sort(std::string(s));
  }

  // The always-present logical signature: choice operators, connectives,
  // quantifiers and equality.
  static TypingContext with_builtins() {
    TypingContext ctx;
    const Type t = truth_type();
    for (auto n : {builtin::eps, builtin::ieps, builtin::tau})
      ctx.declare_const(std::string(n), choice_type());
    for (auto n : {builtin::conj, builtin::disj, builtin::implies})
      ctx.declare_const(std::string(n), arrows({t, t, t}));
    ctx.declare_const(std::string(builtin::neg), arrow(t, t));
    for (auto n : {builtin::exists, builtin::forall})
      ctx.declare_const(std::string(n), quantifier_type());
    ctx.declare_const(std::string(builtin::eq),
                      pi_type("a", arrows({type_var("a"), type_var("a"), t})));
    return ctx;
  }

  static bool is_builtin_name(std::string_view name) {
    for (auto n : {builtin::eps, builtin::ieps, builtin::tau, builtin::conj, builtin::disj,
                   builtin::implies, builtin::neg, builtin::exists, builtin::forall, builtin::eq})
      if (n == name) return true;
    return false;
  }

  // Redeclaring a sort is a no-op.
  void declare_sort(const std::string& name) {
    if (sort_set_.insert(name).second) sorts_.push_back(name);
  }
  bool has_sort(const std::string& name) const { return sort_set_.count(name) > 0; }
  const std::vector<std::string>& sorts() const { return sorts_; }

  void declare_const(const std::string& name, Type type) {
    if (const_index_.count(name) || var_index_.count(name))
      throw error(errc::duplicate, "name '" + name + "' is already declared");
    const_index_[name] = consts_.size();
    consts_.emplace_back(name, std::move(type));
  }
  void declare_var(const std::string& name, Type type) {
    if (const_index_.count(name) || var_index_.count(name))
      throw error(errc::duplicate, "name '" + name + "' is already declared");
    var_index_[name] = vars_.size();
    vars_.emplace_back(name, std::move(type));
  }

  const Type* lookup_const(const std::string& name) const {
    auto it = const_index_.find(name);
    return it == const_index_.end() ? nullptr : &consts_[it->second].second;
  }
  const Type* lookup_var(const std::string& name) const {
    auto it = var_index_.find(name);
    return it == var_index_.end() ? nullptr : &vars_[it->second].second;
  }
  const std::vector<std::pair<std::string, Type>>& constants() const { return consts_; }
  const std::vector<std::pair<std::string, Type>>& variables() const { return vars_; }

 private:
  std::vector<std::string> sorts_;
  std::set<std::string> sort_set_;
  std::vector<std::pair<std::string, Type>> consts_;
  std::map<std::string, std::size_t> const_index_;
  std::vector<std::pair<std::string, Type>> vars_;
  std::map<std::string, std::size_t> var_index_;
};

// ---------------------------------------------------------------------------
// Concrete syntax

namespace detail {

inline bool is_reserved(const std::string& s) {
  return s == "lam" || s == "tylam" || s == "tyapp" || s == "->" || s == "pi";
}

inline const std::string& expect_binder(const Sexp& s, const char* what) {
  if (!s.is_symbol() || is_reserved(s.text)) s.fail(errc::syntax, std::string("expected ") + what);
  return s.text;
}

inline Type parse_type_sexp(const Sexp& s, const TypingContext& ctx,
                            std::vector<std::string>& tyvars) {
  if (s.is_atom()) {
    if (!s.is_symbol() || is_reserved(s.text)) s.fail(errc::syntax, "expected a type");
    if (std::find(tyvars.begin(), tyvars.end(), s.text) != tyvars.end()) return type_var(s.text);
    if (!ctx.has_sort(s.text)) s.fail(errc::unknown_sort, "unknown sort '" + s.text + "'");
    return base_type(s.text);
  }
  if (s.is_form("->")) {
    if (s.items.size() < 3) s.fail(errc::syntax, "(-> A B) needs at least two types");
    std::vector<Type> parts;
    for (std::size_t i = 1; i < s.items.size(); ++i)
      parts.push_back(parse_type_sexp(s.items[i], ctx, tyvars));
    return arrows(std::move(parts));
  }
  if (s.is_form("pi")) {
    if (s.items.size() != 3) s.fail(errc::syntax, "expected (pi VAR TYPE)");
    const std::string& v = expect_binder(s.items[1], "a type variable");
    tyvars.push_back(v);
    Type body = parse_type_sexp(s.items[2], ctx, tyvars);
    tyvars.pop_back();
    return pi_type(v, std::move(body));
  }
  s.fail(errc::syntax, "expected a type");
}

struct TermParser {
  const TypingContext& ctx;
  std::vector<std::pair<std::string, Type>> locals;
  std::vector<std::string> tyvars;

  Term parse(const Sexp& s) {
    if (s.is_atom()) {
      if (!s.is_symbol() || is_reserved(s.text)) s.fail(errc::syntax, "expected a term");
      for (auto it = locals.rbegin(); it != locals.rend(); ++it)
        if (it->first == s.text) return make_var(s.text, it->second);
      if (const Type* ty = ctx.lookup_var(s.text)) return make_var(s.text, *ty);
      if (const Type* ty = ctx.lookup_const(s.text)) return make_const(s.text, *ty);
      s.fail(errc::unbound_name, "unbound name '" + s.text + "'");
    }
    if (s.items.empty()) s.fail(errc::syntax, "empty application");
    if (s.is_form("lam")) {
      if (s.items.size() != 4) s.fail(errc::syntax, "expected (lam VAR TYPE TERM)");
      const std::string& v = expect_binder(s.items[1], "a variable name");
      Type ty = parse_type_sexp(s.items[2], ctx, tyvars);
      locals.emplace_back(v, ty);
      Term body = parse(s.items[3]);
      locals.pop_back();
      return make_lam(v, std::move(ty), std::move(body));
    }
    if (s.is_form("tylam")) {
      if (s.items.size() != 3) s.fail(errc::syntax, "expected (tylam TYVAR TERM)");
      const std::string& v = expect_binder(s.items[1], "a type variable");
      tyvars.push_back(v);
      Term body = parse(s.items[2]);
      tyvars.pop_back();
      return make_tylam(v, std::move(body));
    }
    if (s.is_form("tyapp")) {
      if (s.items.size() < 3) s.fail(errc::syntax, "expected (tyapp TERM TYPE+)");
      Term fun = parse(s.items[1]);
      for (std::size_t i = 2; i < s.items.size(); ++i)
        fun = make_tyapp(std::move(fun), parse_type_sexp(s.items[i], ctx, tyvars));
      return fun;
    }
    if (s.items.size() < 2) s.fail(errc::syntax, "application needs a function and an argument");
    Term fun = parse(s.items[0]);
    for (std::size_t i = 1; i < s.items.size(); ++i) fun = make_app(std::move(fun), parse(s.items[i]));
    return fun;
  }
};

}  // namespace detail

inline Type parse_type(const Sexp& s, const TypingContext& ctx) {
  std::vector<std::string> tyvars;
  return detail::parse_type_sexp(s, ctx, tyvars);
}
inline Type parse_type(std::string_view text, const TypingContext& ctx) {
  return parse_type(read_sexp(text), ctx);
}

// Symbols resolve to the innermost lam binder, then context variables, then
// constants.
inline Term parse_term(const Sexp& s, const TypingContext& ctx) {
  detail::TermParser p{ctx, {}, {}};
  return p.parse(s);
}
inline Term parse_term(std::string_view text, const TypingContext& ctx) {
  return parse_term(read_sexp(text), ctx);
}

// ---------------------------------------------------------------------------
// Free variables and substitution

namespace detail {

inline void collect_fv(const Term& t, std::vector<std::string>& bound,
                       std::map<std::string, Type>& out) {
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<Var>(&v)) {
    if (std::find(bound.begin(), bound.end(), x->name) == bound.end()) out.emplace(x->name, x->type);
  } else if (const auto* a = std::get_if<App>(&v)) {
    collect_fv(a->fun, bound, out);
    collect_fv(a->arg, bound, out);
  } else if (const auto* l = std::get_if<Lam>(&v)) {
    bound.push_back(l->var);
    collect_fv(l->body, bound, out);
    bound.pop_back();
  } else if (const auto* ta = std::get_if<TyApp>(&v)) {
    collect_fv(ta->fun, bound, out);
  } else if (const auto* tl = std::get_if<TyLam>(&v)) {
    collect_fv(tl->body, bound, out);
  }
}

inline void collect_ftv_term(const Term& t, std::vector<std::string>& bound,
                             std::set<std::string>& out) {
  auto add = [&](const Type& ty) {
    for (const auto& n : free_type_vars(ty))
      if (std::find(bound.begin(), bound.end(), n) == bound.end()) out.insert(n);
  };
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<Var>(&v)) {
    add(x->type);
  } else if (const auto* c = std::get_if<Const>(&v)) {
    add(c->type);
  } else if (const auto* a = std::get_if<App>(&v)) {
    collect_ftv_term(a->fun, bound, out);
    collect_ftv_term(a->arg, bound, out);
  } else if (const auto* l = std::get_if<Lam>(&v)) {
    add(l->var_type);
    collect_ftv_term(l->body, bound, out);
  } else if (const auto* ta = std::get_if<TyApp>(&v)) {
    add(ta->ty);
    collect_ftv_term(ta->fun, bound, out);
  } else if (const auto* tl = std::get_if<TyLam>(&v)) {
    bound.push_back(tl->tyvar);
    collect_ftv_term(tl->body, bound, out);
    bound.pop_back();
  }
}

inline void collect_names(const Term& t, std::set<std::string>& out) {
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<Var>(&v)) {
    out.insert(x->name);
  } else if (const auto* a = std::get_if<App>(&v)) {
    collect_names(a->fun, out);
    collect_names(a->arg, out);
  } else if (const auto* l = std::get_if<Lam>(&v)) {
    out.insert(l->var);
    collect_names(l->body, out);
  } else if (const auto* ta = std::get_if<TyApp>(&v)) {
    collect_names(ta->fun, out);
  } else if (const auto* tl = std::get_if<TyLam>(&v)) {
    collect_names(tl->body, out);
  }
}

}  // namespace detail

// Free term variables with the type each occurrence is annotated with.
inline std::map<std::string, Type> free_var_types(const Term& t) {
  std::map<std::string, Type> out;
  std::vector<std::string> bound;
  detail::collect_fv(t, bound, out);
  return out;
}

inline std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  for (auto& [name, ty] : free_var_types(t)) out.insert(name);
  return out;
}

inline std::set<std::string> free_type_vars(const Term& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::collect_ftv_term(t, bound, out);
  return out;
}

// Capture-avoiding t[replacement/var] for a type variable.
inline Term subst_type_in_term(const Term& t, const std::string& var, const Type& replacement) {
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<Var>(&v)) {
    return occurs_free(var, x->type) ? make_var(x->name, subst_type(x->type, var, replacement)) : t;
  }
  if (std::holds_alternative<Const>(v)) return t;
  if (const auto* a = std::get_if<App>(&v)) {
    return make_app(subst_type_in_term(a->fun, var, replacement),
                    subst_type_in_term(a->arg, var, replacement));
  }
  if (const auto* l = std::get_if<Lam>(&v)) {
    return make_lam(l->var, subst_type(l->var_type, var, replacement),
                    subst_type_in_term(l->body, var, replacement));
  }
  if (const auto* ta = std::get_if<TyApp>(&v)) {
    return make_tyapp(subst_type_in_term(ta->fun, var, replacement),
                      subst_type(ta->ty, var, replacement));
  }
  const auto& tl = std::get<TyLam>(v);
  if (tl.tyvar == var) return t;
  auto body_ftv = free_type_vars(tl.body);
  if (!body_ftv.count(var)) return t;
  auto repl_ftv = free_type_vars(replacement);
  if (repl_ftv.count(tl.tyvar)) {
    std::set<std::string> taken = repl_ftv;
    taken.insert(body_ftv.begin(), body_ftv.end());
    taken.insert(var);
    std::string renamed = fresh_name(tl.tyvar, taken);
    Term body = subst_type_in_term(tl.body, tl.tyvar, type_var(renamed));
    return make_tylam(renamed, subst_type_in_term(body, var, replacement));
  }
  return make_tylam(tl.tyvar, subst_type_in_term(tl.body, var, replacement));
}

namespace detail {

struct TermSubst {
  const std::string& var;
  const Term& replacement;
  std::set<std::string> repl_fv;
  std::set<std::string> repl_ftv;

  Term apply(const Term& t) const {
    const auto& v = t.node().v;
    if (const auto* x = std::get_if<Var>(&v)) return x->name == var ? replacement : t;
    if (std::holds_alternative<Const>(v)) return t;
    if (const auto* a = std::get_if<App>(&v)) return make_app(apply(a->fun), apply(a->arg));
    if (const auto* ta = std::get_if<TyApp>(&v)) return make_tyapp(apply(ta->fun), ta->ty);
    if (const auto* l = std::get_if<Lam>(&v)) {
      if (l->var == var) return t;
      auto body_fv = free_vars(l->body);
      if (!body_fv.count(var)) return t;
      if (repl_fv.count(l->var)) {
        std::set<std::string> taken = repl_fv;
        taken.insert(body_fv.begin(), body_fv.end());
        taken.insert(var);
        std::string renamed = fresh_name(l->var, taken);
        Term fresh = make_var(renamed, l->var_type);
        TermSubst rename{l->var, fresh, {renamed}, free_type_vars(l->var_type)};
        return make_lam(renamed, l->var_type, apply(rename.apply(l->body)));
      }
      return make_lam(l->var, l->var_type, apply(l->body));
    }
    const auto& tl = std::get<TyLam>(v);
    if (!free_vars(tl.body).count(var)) return t;
    if (repl_ftv.count(tl.tyvar)) {
      std::set<std::string> taken = repl_ftv;
      auto body_ftv = free_type_vars(tl.body);
      taken.insert(body_ftv.begin(), body_ftv.end());
      std::string renamed = fresh_name(tl.tyvar, taken);
      Term body = subst_type_in_term(tl.body, tl.tyvar, type_var(renamed));
      return make_tylam(renamed, apply(body));
    }
    return make_tylam(tl.tyvar, apply(tl.body));
  }
};

}  // namespace detail

// Capture-avoiding t[replacement/var] for a term variable.
inline Term subst(const Term& t, const std::string& var, const Term& replacement) {
  detail::TermSubst s{var, replacement, free_vars(replacement), free_type_vars(replacement)};
  return s.apply(t);
}

// ---------------------------------------------------------------------------
// Alpha-equivalence

namespace detail {

struct AlphaEq {
  std::vector<std::string> vars_a, vars_b;
  std::vector<std::string> tys_a, tys_b;

  bool types(const Type& a, const Type& b) { return type_equal(a, b, tys_a, tys_b); }

  bool terms(const Term& a, const Term& b) {
    const auto& va = a.node().v;
    const auto& vb = b.node().v;
    if (va.index() != vb.index()) return false;
    if (const auto* x = std::get_if<Var>(&va)) {
      const auto& y = std::get<Var>(vb);
      long da = binder_depth(vars_a, x->name);
      long db = binder_depth(vars_b, y.name);
      if (da != db) return false;
      if (da < 0 && x->name != y.name) return false;
      return types(x->type, y.type);
    }
    if (const auto* x = std::get_if<Const>(&va)) {
      const auto& y = std::get<Const>(vb);
      return x->name == y.name && types(x->type, y.type);
    }
    if (const auto* x = std::get_if<App>(&va)) {
      const auto& y = std::get<App>(vb);
      return terms(x->fun, y.fun) && terms(x->arg, y.arg);
    }
    if (const auto* x = std::get_if<Lam>(&va)) {
      const auto& y = std::get<Lam>(vb);
      if (!types(x->var_type, y.var_type)) return false;
      vars_a.push_back(x->var);
      vars_b.push_back(y.var);
      bool eq = terms(x->body, y.body);
      vars_a.pop_back();
      vars_b.pop_back();
      return eq;
    }
    if (const auto* x = std::get_if<TyApp>(&va)) {
      const auto& y = std::get<TyApp>(vb);
      return types(x->ty, y.ty) && terms(x->fun, y.fun);
    }
    const auto& x = std::get<TyLam>(va);
    const auto& y = std::get<TyLam>(vb);
    tys_a.push_back(x.tyvar);
    tys_b.push_back(y.tyvar);
    bool eq = terms(x.body, y.body);
    tys_a.pop_back();
    tys_b.pop_back();
    return eq;
  }
};

}  // namespace detail

// Identity up to consistent renaming of bound term and type variables.
inline bool alpha_eq(const Term& a, const Term& b) {
  detail::AlphaEq eq;
  return eq.terms(a, b);
}

// ---------------------------------------------------------------------------
// Type checking

namespace detail {

class Checker {
 public:
  // ctx == nullptr: trust the annotations on free variables and constants.
  explicit Checker(const TypingContext* ctx) : ctx_(ctx) {}

  Type check(const Term& t) {
    const auto& v = t.node().v;
    if (const auto* x = std::get_if<Var>(&v)) return check_var(*x);
    if (const auto* c = std::get_if<Const>(&v)) return check_const(*c);
    if (const auto* a = std::get_if<App>(&v)) {
      Type fty = check(a->fun);
      Type aty = check(a->arg);
      const auto* arr = fty.as<Arrow>();
      if (!arr) {
        throw error(errc::type_clash, "expected a function type, found " + to_string(fty) +
                                          " in " + to_string(t));
      }
      if (arr->dom != aty) {
        throw error(errc::type_clash, "expected " + to_string(arr->dom) + ", found " +
                                          to_string(aty) + " in argument " + to_string(a->arg) +
                                          " of " + to_string(a->fun));
      }
      return arr->cod;
    }
    if (const auto* l = std::get_if<Lam>(&v)) {
      check_type(l->var_type, t);
      locals_.emplace_back(l->var, l->var_type);
      Type body = check(l->body);
      locals_.pop_back();
      return arrow(l->var_type, body);
    }
    if (const auto* ta = std::get_if<TyApp>(&v)) {
      Type fty = check(ta->fun);
      check_type(ta->ty, t);
      const auto* pi = fty.as<Pi>();
      if (!pi) {
        throw error(errc::type_clash, "expected a polymorphic type, found " + to_string(fty) +
                                          " in " + to_string(t));
      }
      return subst_type(pi->body, pi->var, ta->ty);
    }
    const auto& tl = std::get<TyLam>(v);
    for (const auto& [name, ann] : free_var_types(tl.body)) {
      if (occurs_free(tl.tyvar, ann)) {
        throw error(errc::tylam_escape, "type variable " + tl.tyvar +
                                            " occurs in the type of free variable " + name +
                                            " : " + to_string(ann));
      }
    }
    tyvars_.push_back(tl.tyvar);
    Type body = check(tl.body);
    tyvars_.pop_back();
    return pi_type(tl.tyvar, body);
  }

 private:
  Type check_var(const Var& x) {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (it->first == x.name) {
        if (it->second != x.type) {
          throw error(errc::type_clash, "variable " + x.name + " is bound at " +
                                            to_string(it->second) + " but annotated " +
                                            to_string(x.type));
        }
        return x.type;
      }
    }
    if (!ctx_) return x.type;
    const Type* declared = ctx_->lookup_var(x.name);
    if (!declared) throw error(errc::unbound_name, "unbound variable '" + x.name + "'");
    if (*declared != x.type) {
      throw error(errc::type_clash, "variable " + x.name + " is declared " + to_string(*declared) +
                                        " but annotated " + to_string(x.type));
    }
    return x.type;
  }

  Type check_const(const Const& c) {
    if (!ctx_) return c.type;
    const Type* declared = ctx_->lookup_const(c.name);
    if (!declared) throw error(errc::unbound_name, "unknown constant '" + c.name + "'");
    if (*declared != c.type) {
      throw error(errc::type_clash, "constant " + c.name + " is declared " +
                                        to_string(*declared) + " but annotated " +
                                        to_string(c.type));
    }
    return c.type;
  }

  void check_type(const Type& ty, const Term& where) {
    if (!ctx_) return;
    std::vector<std::string> bound;
    check_type_rec(ty, bound, where);
  }

  void check_type_rec(const Type& ty, std::vector<std::string>& bound, const Term& where) {
    const auto& v = ty.node().v;
    if (const auto* b = std::get_if<BaseSort>(&v)) {
      if (!ctx_->has_sort(b->name))
        throw error(errc::unknown_sort, "unknown sort '" + b->name + "' in " + to_string(where));
    } else if (const auto* tv = std::get_if<TypeVar>(&v)) {
      bool ok = std::find(bound.begin(), bound.end(), tv->name) != bound.end() ||
                std::find(tyvars_.begin(), tyvars_.end(), tv->name) != tyvars_.end();
      if (!ok) {
        throw error(errc::unbound_name,
                    "unbound type variable '" + tv->name + "' in " + to_string(where));
      }
    } else if (const auto* a = std::get_if<Arrow>(&v)) {
      check_type_rec(a->dom, bound, where);
      check_type_rec(a->cod, bound, where);
    } else {
      const auto& p = std::get<Pi>(v);
      bound.push_back(p.var);
      check_type_rec(p.body, bound, where);
      bound.pop_back();
    }
  }

  const TypingContext* ctx_;
  std::vector<std::pair<std::string, Type>> locals_;
  std::vector<std::string> tyvars_;
};

}  // namespace detail

// Checks the term against the context and returns its type.
inline Type type_of(const TypingContext& ctx, const Term& t) {
  detail::Checker c(&ctx);
  return c.check(t);
}

// Same, trusting the annotations carried by free variables and constants.
inline Type type_of(const Term& t) {
  detail::Checker c(nullptr);
  return c.check(t);
}

// ---------------------------------------------------------------------------
// Reduction

enum class Strategy { leftmost_outermost, rightmost_innermost };

struct NormalizeOptions {
  std::size_t step_budget = 100000;
  Strategy strategy = Strategy::leftmost_outermost;
  // Called after every contraction with the step number and the whole term.
  std::function<void(std::size_t, const Term&)> on_step;
};

struct Reduction {
  Term term;
  std::size_t steps = 0;
};

inline bool is_redex(const Term& t) {
  if (const auto* a = t.as<App>()) return a->fun.as<Lam>() != nullptr;
  if (const auto* ta = t.as<TyApp>()) return ta->fun.as<TyLam>() != nullptr;
  return false;
}

// Fires the redex at the root. Precondition: is_redex(t).
inline Term contract(const Term& t) {
  if (const auto* a = t.as<App>()) {
    const auto& lam = *a->fun.as<Lam>();
    return subst(lam.body, lam.var, a->arg);
  }
  const auto& ta = *t.as<TyApp>();
  const auto& tl = *ta.fun.as<TyLam>();
  return subst_type_in_term(tl.body, tl.tyvar, ta.ty);
}

namespace detail {

inline std::optional<Term> step_outermost(const Term& t) {
  if (is_redex(t)) return contract(t);
  const auto& v = t.node().v;
  if (const auto* a = std::get_if<App>(&v)) {
    if (auto f = step_outermost(a->fun)) return make_app(std::move(*f), a->arg);
    if (auto x = step_outermost(a->arg)) return make_app(a->fun, std::move(*x));
  } else if (const auto* l = std::get_if<Lam>(&v)) {
    if (auto b = step_outermost(l->body)) return make_lam(l->var, l->var_type, std::move(*b));
  } else if (const auto* ta = std::get_if<TyApp>(&v)) {
    if (auto f = step_outermost(ta->fun)) return make_tyapp(std::move(*f), ta->ty);
  } else if (const auto* tl = std::get_if<TyLam>(&v)) {
    if (auto b = step_outermost(tl->body)) return make_tylam(tl->tyvar, std::move(*b));
  }
  return std::nullopt;
}

inline std::optional<Term> step_innermost(const Term& t) {
  const auto& v = t.node().v;
  if (const auto* a = std::get_if<App>(&v)) {
    if (auto x = step_innermost(a->arg)) return make_app(a->fun, std::move(*x));
    if (auto f = step_innermost(a->fun)) return make_app(std::move(*f), a->arg);
  } else if (const auto* l = std::get_if<Lam>(&v)) {
    if (auto b = step_innermost(l->body)) return make_lam(l->var, l->var_type, std::move(*b));
  } else if (const auto* ta = std::get_if<TyApp>(&v)) {
    if (auto f = step_innermost(ta->fun)) return make_tyapp(std::move(*f), ta->ty);
  } else if (const auto* tl = std::get_if<TyLam>(&v)) {
    if (auto b = step_innermost(tl->body)) return make_tylam(tl->tyvar, std::move(*b));
  }
  if (is_redex(t)) return contract(t);
  return std::nullopt;
}

}  // namespace detail

inline bool is_normal(const Term& t) {
  if (is_redex(t)) return false;
  const auto& v = t.node().v;
  if (const auto* a = std::get_if<App>(&v)) return is_normal(a->fun) && is_normal(a->arg);
  if (const auto* l = std::get_if<Lam>(&v)) return is_normal(l->body);
  if (const auto* ta = std::get_if<TyApp>(&v)) return is_normal(ta->fun);
  if (const auto* tl = std::get_if<TyLam>(&v)) return is_normal(tl->body);
  return true;
}

// Reduces to beta/type-beta normal form, counting contractions.
inline Reduction reduce(const Term& t, const NormalizeOptions& opts = {}) {
  Reduction r{t, 0};
  for (;;) {
    auto next = opts.strategy == Strategy::leftmost_outermost ? detail::step_outermost(r.term)
                                                              : detail::step_innermost(r.term);
    if (!next) return r;
    if (r.steps == opts.step_budget) {
      throw error(errc::step_budget_exceeded,
                  "no normal form within " + std::to_string(opts.step_budget) + " steps");
    }
    r.term = std::move(*next);
    ++r.steps;
    if (opts.on_step) opts.on_step(r.steps, r.term);
  }
}

inline Term normalize(const Term& t, const NormalizeOptions& opts = {}) {
  return reduce(t, opts).term;
}

}  // namespace lexsem
