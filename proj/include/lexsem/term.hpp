#pragma once

#include <memory>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "lexsem/type.hpp"

namespace lexsem {

struct TermNode;

// Immutable handle on a term tree of the second-order calculus.
class Term {
 public:
  Term() = default;
  explicit Term(std::shared_ptr<const TermNode> node) : node_(std::move(node)) {}

  const TermNode& node() const { return *node_; }
  explicit operator bool() const { return node_ != nullptr; }
  bool same_node(const Term& other) const { return node_ == other.node_; }

  template <class T>
  const T* as() const;

 private:
  std::shared_ptr<const TermNode> node_;
};

struct Var {
  std::string name;
  Type type;
};
struct Const {
  std::string name;
  Type type;
};
struct App {
  Term fun;
  Term arg;
};
struct Lam {
  std::string var;
  Type var_type;
  Term body;
};
struct TyApp {
  Term fun;
  Type ty;
};
struct TyLam {
  std::string tyvar;
  Term body;
};

struct TermNode {
  std::variant<Var, Const, App, Lam, TyApp, TyLam> v;
};

template <class T>
const T* Term::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}

inline Term make_var(std::string name, Type type) {
  return Term(std::make_shared<const TermNode>(TermNode{Var{std::move(name), std::move(type)}}));
}
inline Term make_const(std::string name, Type type) {
  return Term(std::make_shared<const TermNode>(TermNode{Const{std::move(name), std::move(type)}}));
}
inline Term make_app(Term fun, Term arg) {
  return Term(std::make_shared<const TermNode>(TermNode{App{std::move(fun), std::move(arg)}}));
}
inline Term make_app(Term fun, std::vector<Term> args) {
  for (auto& a : args) fun = make_app(std::move(fun), std::move(a));
  return fun;
}
inline Term make_lam(std::string var, Type var_type, Term body) {
  return Term(std::make_shared<const TermNode>(
      TermNode{Lam{std::move(var), std::move(var_type), std::move(body)}}));
}
inline Term make_tyapp(Term fun, Type ty) {
  return Term(std::make_shared<const TermNode>(TermNode{TyApp{std::move(fun), std::move(ty)}}));
}
inline Term make_tylam(std::string tyvar, Term body) {
  return Term(std::make_shared<const TermNode>(TermNode{TyLam{std::move(tyvar), std::move(body)}}));
}

// Names of the built-in logical constants.
namespace builtin {
inline constexpr std::string_view eps = "eps";
inline constexpr std::string_view ieps = "ieps";
inline constexpr std::string_view tau = "tau";
inline constexpr std::string_view conj = "and";
inline constexpr std::string_view disj = "or";
inline constexpr std::string_view implies = "implies";
inline constexpr std::string_view neg = "not";
inline constexpr std::string_view exists = "exists";
inline constexpr std::string_view forall = "forall";
inline constexpr std::string_view eq = "eq";
}  // namespace builtin

// Πα.(α→t)→α, shared by eps, ieps and tau.
inline Type choice_type() {
  return pi_type("a", arrow(arrow(type_var("a"), truth_type()), type_var("a")));
}
// Πα.(α→t)→t
inline Type quantifier_type() {
  return pi_type("a", arrow(arrow(type_var("a"), truth_type()), truth_type()));
}

inline bool is_const(const Term& t, std::string_view name) {
  const auto* c = t.as<Const>();
  return c && c->name == name;
}

// Splits an application spine f a1 ... an into (f, [a1..an]).
inline std::pair<Term, std::vector<Term>> unfold_app(const Term& t) {
  std::vector<Term> args;
  Term head = t;
  while (const auto* a = head.as<App>()) {
    args.push_back(a->arg);
    head = a->fun;
  }
  return {head, std::vector<Term>(args.rbegin(), args.rend())};
}

// S-expression rendering in the input grammar; application spines are
// flattened, so ((f a) b) prints as (f a b).
inline std::string to_string(const Term& t) {
  if (!t) return "<null>";
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<Var>(&v)) return x->name;
  if (const auto* c = std::get_if<Const>(&v)) return c->name;
  if (std::holds_alternative<App>(v)) {
    auto [head, args] = unfold_app(t);
    std::string out = "(" + to_string(head);
    for (const auto& a : args) out += " " + to_string(a);
    return out + ")";
  }
  if (const auto* l = std::get_if<Lam>(&v)) {
    return "(lam " + l->var + " " + to_string(l->var_type) + " " + to_string(l->body) + ")";
  }
  if (const auto* ta = std::get_if<TyApp>(&v)) {
    return "(tyapp " + to_string(ta->fun) + " " + to_string(ta->ty) + ")";
  }
  const auto& tl = std::get<TyLam>(v);
  return "(tylam " + tl.tyvar + " " + to_string(tl.body) + ")";
}

inline std::size_t term_size(const Term& t) {
  const auto& v = t.node().v;
  if (const auto* a = std::get_if<App>(&v)) return 1 + term_size(a->fun) + term_size(a->arg);
  if (const auto* l = std::get_if<Lam>(&v)) return 1 + term_size(l->body);
  if (const auto* ta = std::get_if<TyApp>(&v)) return 1 + term_size(ta->fun);
  if (const auto* tl = std::get_if<TyLam>(&v)) return 1 + term_size(tl->body);
  return 1;
}

}  // namespace lexsem
