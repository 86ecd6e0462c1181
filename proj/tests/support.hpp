#pragma once

// Random generators and independent oracles shared by the property tests and
// the acceptance runner.

#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lexsem/lexsem.hpp"

namespace testsupport {

using namespace lexsem;

inline std::string data_file(const std::string& name) {
  std::ifstream in(std::string(LEXSEM_DATA_DIR) + "/" + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Lexicon data_lexicon(const std::string& name) { return load_lexicon(data_file(name)); }

// ---------------------------------------------------------------------------
// Well-typed terms over sorts a, b, t

class TermGenerator {
 public:
  explicit TermGenerator(unsigned seed) : rng_(seed), ctx_(TypingContext::with_builtins()) {
    ctx_.declare_sort("a");
    ctx_.declare_sort("b");
    ctx_.declare_const("ca", A());
    ctx_.declare_const("cb", B());
    ctx_.declare_const("tt", T());
    ctx_.declare_const("p", arrow(A(), T()));
    ctx_.declare_const("q", arrow(B(), T()));
    ctx_.declare_const("r", arrows({A(), B(), T()}));
    ctx_.declare_const("f", arrow(A(), B()));
  }

  const TypingContext& context() const { return ctx_; }

  // A closed term of the requested type; `depth` bounds the nesting of
  // generator choices.
  Term generate(const Type& ty, int depth) {
    locals_.clear();
    return gen(ty, depth);
  }

  Type random_type() {
    static const std::vector<Type> pool = {A(), B(), T(), arrow(A(), T()), arrow(B(), T()), arrow(A(), B())};
    return pool[pick(pool.size())];
  }

  std::mt19937& rng() { return rng_; }

  static Type A() { return base_type("a"); }
  static Type B() { return base_type("b"); }
  static Type T() { return truth_type(); }
  static Type poly_id() { return pi_type("X", arrow(type_var("X"), type_var("X"))); }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }

  std::string var_name() {
    static const char* names[] = {"x", "y", "z"};
    return names[pick(3)];
  }

  Term constant(const std::string& name) { return make_const(name, *ctx_.lookup_const(name)); }

  // Visible locals of the given type; inner bindings shadow outer ones.
  std::vector<std::string> visible(const Type& ty) const {
    std::vector<std::string> out, seen;
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      bool shadowed = false;
      for (const auto& s : seen) shadowed = shadowed || s == it->first;
      seen.push_back(it->first);
      if (!shadowed && it->second == ty) out.push_back(it->first);
    }
    return out;
  }

  template <class F>
  Term bind(const std::string& name, const Type& ty, F&& body) {
    locals_.emplace_back(name, ty);
    Term t = body();
    locals_.pop_back();
    return t;
  }

  Term poly_identity() {
    switch (pick(3)) {
      case 0: return make_tylam("Y", make_lam("w", type_var("Y"), make_var("w", type_var("Y"))));
      case 1: {
        // Λ Y. λw. (id{Y} w): a type redex under a type binder
        Term inner = make_tylam("X", make_lam("v", type_var("X"), make_var("v", type_var("X"))));
        return make_tylam("Y", make_lam("w", type_var("Y"),
                                        make_app(make_tyapp(inner, type_var("Y")), make_var("w", type_var("Y")))));
      }
      default: return make_tylam("X", make_lam("x", type_var("X"), make_var("x", type_var("X"))));
    }
  }

  Term leaf(const Type& ty, int depth) {
    auto vs = visible(ty);
    if (!vs.empty() && coin(0.7)) return make_var(vs[pick(vs.size())], ty);
    if (ty.is_pi()) return poly_identity();
    if (const auto* ar = ty.as<Arrow>()) {
      std::string x = var_name();
      Type dom = ar->dom, cod = ar->cod;
      return make_lam(x, dom, bind(x, dom, [&] { return leaf(cod, depth); }));
    }
    const std::string& s = ty.as<BaseSort>()->name;
    if (s == "a") return constant("ca");
    if (s == "b") return constant("cb");
    return constant("tt");
  }

  Term gen(const Type& ty, int depth) {
    if (depth <= 1) return leaf(ty, depth);
    const int d = depth - 1;
    for (;;) {
      switch (pick(11)) {
        case 0: return leaf(ty, depth);
        case 1:
          if (const auto* ar = ty.as<Arrow>()) {
            std::string x = var_name();
            Type dom = ar->dom, cod = ar->cod;
            return make_lam(x, dom, bind(x, dom, [&] { return gen(cod, d); }));
          }
          break;
        case 2: {
          Type u = random_type();
          return make_app(gen(arrow(u, ty), d), gen(u, d));
        }
        case 3: {  // β-redex
          Type u = random_type();
          std::string x = var_name();
          Term body = bind(x, u, [&] { return gen(ty, d); });
          return make_app(make_lam(x, u, body), gen(u, d));
        }
        case 4:  // type redex through the polymorphic identity
          if (!ty.is_pi()) return make_app(make_tyapp(poly_identity(), ty), gen(ty, d));
          break;
        case 5:
          if (!ty.is_pi()) {  // K{T}{U} m n
            Type u = random_type();
            Term k = make_tylam(
                "X", make_tylam("Y", make_lam("x", type_var("X"),
                                              make_lam("y", type_var("Y"), make_var("x", type_var("X"))))));
            return make_app(make_app(make_tyapp(make_tyapp(k, ty), u), gen(ty, d)), gen(u, d));
          }
          break;
        case 6:
          if (!ty.is_pi()) {  // a variable of Π type, instantiated in the body
            std::string g = coin() ? "g" : var_name();
            Term body = bind(g, poly_id(), [&] {
              return make_app(make_tyapp(make_var(g, poly_id()), ty), gen(ty, d));
            });
            return make_app(make_lam(g, poly_id(), body), gen(poly_id(), d));
          }
          break;
        case 7:
          if (ty.is_base("a") || ty.is_base("b")) {
            return make_app(make_tyapp(constant("eps"), ty), gen(arrow(ty, T()), d));
          }
          break;
        case 8:
          if (ty.is_base("t")) {
            static const char* ops[] = {"and", "or", "implies"};
            return make_app(make_app(constant(ops[pick(3)]), gen(T(), d)), gen(T(), d));
          }
          break;
        case 9:
          if (ty.is_base("t")) {
            Type s = coin() ? A() : B();
            const char* qn = coin() ? "exists" : "forall";
            return make_app(make_tyapp(constant(qn), s), gen(arrow(s, T()), d));
          }
          break;
        case 10:
          if (ty.is_base("t")) return make_app(constant("p"), gen(A(), d));
          if (ty.is_base("b")) return make_app(constant("f"), gen(A(), d));
          break;
      }
    }
  }

  std::mt19937 rng_;
  TypingContext ctx_;
  std::vector<std::pair<std::string, Type>> locals_;
};

// ---------------------------------------------------------------------------
// Nameless rendering: equal strings iff α-equivalent. Written separately from
// the kernel's comparison so the two can be checked against each other.

class DeBruijn {
 public:
  std::string term(const Term& t) {
    const auto& v = t.node().v;
    if (const auto* x = std::get_if<Var>(&v)) return "v" + index(vars_, x->name) + ":" + type(x->type);
    if (const auto* c = std::get_if<Const>(&v)) return "c:" + c->name + ":" + type(c->type);
    if (const auto* a = std::get_if<App>(&v)) return "(@ " + term(a->fun) + " " + term(a->arg) + ")";
    if (const auto* l = std::get_if<Lam>(&v)) {
      std::string ty = type(l->var_type);
      vars_.push_back(l->var);
      std::string body = term(l->body);
      vars_.pop_back();
      return "(\\" + ty + " " + body + ")";
    }
    if (const auto* ta = std::get_if<TyApp>(&v)) return "(@T " + term(ta->fun) + " " + type(ta->ty) + ")";
    const auto& tl = std::get<TyLam>(v);
    tyvars_.push_back(tl.tyvar);
    std::string body = term(tl.body);
    tyvars_.pop_back();
    return "(/\\ " + body + ")";
  }

  std::string type(const Type& ty) {
    const auto& v = ty.node().v;
    if (const auto* b = std::get_if<BaseSort>(&v)) return b->name;
    if (const auto* tv = std::get_if<TypeVar>(&v)) return "'" + index(tyvars_, tv->name);
    if (const auto* a = std::get_if<Arrow>(&v)) return "(" + type(a->dom) + ">" + type(a->cod) + ")";
    const auto& p = std::get<Pi>(v);
    tyvars_.push_back(p.var);
    std::string body = type(p.body);
    tyvars_.pop_back();
    return "(P " + body + ")";
  }

 private:
  static std::string index(const std::vector<std::string>& stack, const std::string& name) {
    for (std::size_t i = stack.size(); i-- > 0;)
      if (stack[i] == name) return std::to_string(stack.size() - 1 - i);
    return "free:" + name;
  }

  std::vector<std::string> vars_, tyvars_;
};

inline std::string nameless(const Term& t) { return DeBruijn{}.term(t); }

// Renames every binder to a brand-new name.
inline Term rename_binders(const Term& t, int& counter,
                           std::vector<std::pair<std::string, std::string>> vars = {},
                           std::vector<std::pair<std::string, std::string>> tyvars = {}) {
  auto lookup = [](const auto& stack, const std::string& n) {
    for (auto it = stack.rbegin(); it != stack.rend(); ++it)
      if (it->first == n) return it->second;
    return n;
  };
  std::function<Type(const Type&, std::vector<std::pair<std::string, std::string>>&)> ty =
      [&](const Type& x, std::vector<std::pair<std::string, std::string>>& tv) -> Type {
    const auto& v = x.node().v;
    if (std::get_if<BaseSort>(&v)) return x;
    if (const auto* a = std::get_if<TypeVar>(&v)) return type_var(lookup(tv, a->name));
    if (const auto* a = std::get_if<Arrow>(&v)) return arrow(ty(a->dom, tv), ty(a->cod, tv));
    const auto& p = std::get<Pi>(v);
    std::string fresh = "T" + std::to_string(++counter);
    tv.emplace_back(p.var, fresh);
    Type body = ty(p.body, tv);
    tv.pop_back();
    return pi_type(fresh, body);
  };
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<Var>(&v)) return make_var(lookup(vars, x->name), ty(x->type, tyvars));
  if (const auto* c = std::get_if<Const>(&v)) return make_const(c->name, ty(c->type, tyvars));
  if (const auto* a = std::get_if<App>(&v))
    return make_app(rename_binders(a->fun, counter, vars, tyvars), rename_binders(a->arg, counter, vars, tyvars));
  if (const auto* l = std::get_if<Lam>(&v)) {
    std::string fresh = "v" + std::to_string(++counter);
    Type vt = ty(l->var_type, tyvars);
    vars.emplace_back(l->var, fresh);
    return make_lam(fresh, vt, rename_binders(l->body, counter, vars, tyvars));
  }
  if (const auto* ta = std::get_if<TyApp>(&v))
    return make_tyapp(rename_binders(ta->fun, counter, vars, tyvars), ty(ta->ty, tyvars));
  const auto& tl = std::get<TyLam>(v);
  std::string fresh = "T" + std::to_string(++counter);
  tyvars.emplace_back(tl.tyvar, fresh);
  return make_tylam(fresh, rename_binders(tl.body, counter, vars, tyvars));
}

// ---------------------------------------------------------------------------
// Random formulas over sorts s, u: p(s), q(s), r(s,u), nullary z; constants c:s,
// d:u; function g:s→u.

class FormulaGenerator {
 public:
  explicit FormulaGenerator(unsigned seed) : rng_(seed) {}

  Formula generate(int depth) {
    bound_.clear();
    return formula(depth);
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

  std::string sort() { return pick(2) ? "s" : "u"; }
  std::string var_name() {
    static const char* names[] = {"x", "y", "z"};
    return names[pick(3)];
  }

  std::vector<std::string> visible(const std::string& sort) const {
    std::vector<std::string> out, seen;
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it) {
      bool shadowed = false;
      for (const auto& s : seen) shadowed = shadowed || s == it->first;
      seen.push_back(it->first);
      if (!shadowed && it->second == sort) out.push_back(it->first);
    }
    return out;
  }

  LTerm term(const std::string& s, int depth) {
    auto vs = visible(s);
    const std::size_t choice = depth <= 1 ? pick(2) : pick(4);
    if (choice == 0 && !vs.empty()) return lvar(vs[pick(vs.size())], s);
    if (choice == 2 && s == "u") return lapp("g", {term("s", depth - 1)});
    if (choice == 3) {
      static const EpsMode modes[] = {EpsMode::indefinite, EpsMode::definite, EpsMode::universal};
      std::string x = var_name();
      bound_.emplace_back(x, s);
      Formula body = formula(depth - 1);
      bound_.pop_back();
      return eps_term(modes[pick(3)], x, s, body);
    }
    return lconst(s == "s" ? "c" : "d");
  }

  Formula atom(int depth) {
    switch (pick(6)) {
      case 0: return pred("p", {term("s", depth)});
      case 1: return pred("q", {term("s", depth)});
      case 2: return pred("r", {term("s", depth), term("u", depth)});
      case 3: return pred("z");
      case 4: {
        std::string s = sort();
        return equality(term(s, depth), term(s, depth));
      }
      default: return truth(pick(2) == 0);
    }
  }

  Formula formula(int depth) {
    if (depth <= 1) return atom(depth);
    const int d = depth - 1;
    switch (pick(7)) {
      case 0: return atom(d);
      case 1: return negation(formula(d));
      case 2: return conj(formula(d), formula(d));
      case 3: return disj(formula(d), formula(d));
      case 4: return implies(formula(d), formula(d));
      default: {
        std::string x = var_name();
        std::string s = sort();
        bound_.emplace_back(x, s);
        Formula body = formula(d);
        bound_.pop_back();
        return quant(pick(2) ? Quantifier::exists : Quantifier::forall, x, s, body);
      }
    }
  }

  std::mt19937 rng_;
  std::vector<std::pair<std::string, std::string>> bound_;
};

}  // namespace testsupport
