#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace lexsem {

inline constexpr std::string_view kTruthSort = "t";
inline constexpr std::string_view kEntitySort = "e";
inline constexpr std::string_view kEventSort = "event";

struct TypeNode;

// Immutable handle on a type tree. Copies share structure.
class Type {
 public:
  Type() = default;
  explicit Type(std::shared_ptr<const TypeNode> node) : node_(std::move(node)) {}

  const TypeNode& node() const { return *node_; }
  explicit operator bool() const { return node_ != nullptr; }

  template <class T>
  const T* as() const;

  bool is_base() const;
  bool is_var() const;
  bool is_arrow() const;
  bool is_pi() const;
  bool is_base(std::string_view name) const;

 private:
  std::shared_ptr<const TypeNode> node_;
};

struct BaseSort {
  std::string name;
};
struct TypeVar {
  std::string name;
};
struct Arrow {
  Type dom;
  Type cod;
};
struct Pi {
  std::string var;
  Type body;
};

struct TypeNode {
  std::variant<BaseSort, TypeVar, Arrow, Pi> v;
};

template <class T>
const T* Type::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}
inline bool Type::is_base() const { return as<BaseSort>() != nullptr; }
inline bool Type::is_var() const { return as<TypeVar>() != nullptr; }
inline bool Type::is_arrow() const { return as<Arrow>() != nullptr; }
inline bool Type::is_pi() const { return as<Pi>() != nullptr; }
inline bool Type::is_base(std::string_view name) const {
  const auto* b = as<BaseSort>();
  return b && b->name == name;
}

inline Type base_type(std::string name) {
  return Type(std::make_shared<const TypeNode>(TypeNode{BaseSort{std::move(name)}}));
}
inline Type type_var(std::string name) {
  return Type(std::make_shared<const TypeNode>(TypeNode{TypeVar{std::move(name)}}));
}
inline Type arrow(Type dom, Type cod) {
  return Type(std::make_shared<const TypeNode>(TypeNode{Arrow{std::move(dom), std::move(cod)}}));
}
// Right-nested arrow: arrows({a, b, c}) is a -> (b -> c).
inline Type arrows(std::vector<Type> parts) {
  Type out = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) out = arrow(*it, out);
  return out;
}
inline Type pi_type(std::string var, Type body) {
  return Type(std::make_shared<const TypeNode>(TypeNode{Pi{std::move(var), std::move(body)}}));
}

inline Type truth_type() { return base_type(std::string(kTruthSort)); }
inline Type entity_type() { return base_type(std::string(kEntitySort)); }

// Picks base, base1, base2, ... until the name is not in `taken`.
inline std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  if (!taken.count(base)) return base;
  std::string stem = base;
  while (!stem.empty() && stem.back() >= '0' && stem.back() <= '9') stem.pop_back();
  if (stem.empty()) stem = "v";
  for (std::size_t i = 1;; ++i) {
    std::string candidate = stem + std::to_string(i);
    if (!taken.count(candidate)) return candidate;
  }
}

namespace detail {

inline void collect_ftv(const Type& ty, std::vector<std::string>& bound, std::set<std::string>& out) {
  const auto& v = ty.node().v;
  if (const auto* var = std::get_if<TypeVar>(&v)) {
    for (const auto& b : bound)
      if (b == var->name) return;
    out.insert(var->name);
  } else if (const auto* a = std::get_if<Arrow>(&v)) {
    collect_ftv(a->dom, bound, out);
    collect_ftv(a->cod, bound, out);
  } else if (const auto* p = std::get_if<Pi>(&v)) {
    bound.push_back(p->var);
    collect_ftv(p->body, bound, out);
    bound.pop_back();
  }
}

inline void collect_all_tyvar_names(const Type& ty, std::set<std::string>& out) {
  const auto& v = ty.node().v;
  if (const auto* var = std::get_if<TypeVar>(&v)) {
    out.insert(var->name);
  } else if (const auto* a = std::get_if<Arrow>(&v)) {
    collect_all_tyvar_names(a->dom, out);
    collect_all_tyvar_names(a->cod, out);
  } else if (const auto* p = std::get_if<Pi>(&v)) {
    out.insert(p->var);
    collect_all_tyvar_names(p->body, out);
  }
}

// Position of `name` counted from the innermost binder, or -1 when free.
inline long binder_depth(const std::vector<std::string>& stack, const std::string& name) {
  for (std::size_t i = stack.size(); i-- > 0;)
    if (stack[i] == name) return static_cast<long>(stack.size() - 1 - i);
  return -1;
}

}  // namespace detail

inline std::set<std::string> free_type_vars(const Type& ty) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::collect_ftv(ty, bound, out);
  return out;
}

inline bool occurs_free(const std::string& var, const Type& ty) {
  return free_type_vars(ty).count(var) > 0;
}

// Capture-avoiding substitution ty[replacement/var].
inline Type subst_type(const Type& ty, const std::string& var, const Type& replacement) {
  const auto& v = ty.node().v;
  if (const auto* tv = std::get_if<TypeVar>(&v)) {
    return tv->name == var ? replacement : ty;
  }
  if (const auto* a = std::get_if<Arrow>(&v)) {
    Type dom = subst_type(a->dom, var, replacement);
    Type cod = subst_type(a->cod, var, replacement);
    if (&dom.node() == &a->dom.node() && &cod.node() == &a->cod.node()) return ty;
    return arrow(std::move(dom), std::move(cod));
  }
  if (const auto* p = std::get_if<Pi>(&v)) {
    if (p->var == var) return ty;
    auto body_ftv = free_type_vars(p->body);
    if (!body_ftv.count(var)) return ty;
    auto repl_ftv = free_type_vars(replacement);
    if (repl_ftv.count(p->var)) {
      std::set<std::string> taken = repl_ftv;
      taken.insert(body_ftv.begin(), body_ftv.end());
      taken.insert(var);
      std::string renamed = fresh_name(p->var, taken);
      Type body = subst_type(p->body, p->var, type_var(renamed));
      return pi_type(renamed, subst_type(body, var, replacement));
    }
    return pi_type(p->var, subst_type(p->body, var, replacement));
  }
  return ty;
}

// Equality up to renaming of Pi-bound variables, with explicit binder
// stacks so that callers comparing terms can share their type binders.
inline bool type_equal(const Type& a, const Type& b, std::vector<std::string>& env_a,
                       std::vector<std::string>& env_b) {
  const auto& va = a.node().v;
  const auto& vb = b.node().v;
  if (va.index() != vb.index()) return false;
  if (const auto* x = std::get_if<BaseSort>(&va)) return x->name == std::get<BaseSort>(vb).name;
  if (const auto* x = std::get_if<TypeVar>(&va)) {
    const auto& y = std::get<TypeVar>(vb);
    long da = detail::binder_depth(env_a, x->name);
    long db = detail::binder_depth(env_b, y.name);
    if (da != db) return false;
    return da >= 0 || x->name == y.name;
  }
  if (const auto* x = std::get_if<Arrow>(&va)) {
    const auto& y = std::get<Arrow>(vb);
    return type_equal(x->dom, y.dom, env_a, env_b) && type_equal(x->cod, y.cod, env_a, env_b);
  }
  const auto& x = std::get<Pi>(va);
  const auto& y = std::get<Pi>(vb);
  env_a.push_back(x.var);
  env_b.push_back(y.var);
  bool eq = type_equal(x.body, y.body, env_a, env_b);
  env_a.pop_back();
  env_b.pop_back();
  return eq;
}

inline bool operator==(const Type& a, const Type& b) {
  if (!a || !b) return !a && !b;
  std::vector<std::string> ea, eb;
  return type_equal(a, b, ea, eb);
}
inline bool operator!=(const Type& a, const Type& b) { return !(a == b); }

// S-expression rendering: `ani`, `(-> ani t)`, `(pi a (-> a t))`.
inline std::string to_string(const Type& ty) {
  if (!ty) return "<null>";
  const auto& v = ty.node().v;
  if (const auto* b = std::get_if<BaseSort>(&v)) return b->name;
  if (const auto* tv = std::get_if<TypeVar>(&v)) return tv->name;
  if (const auto* a = std::get_if<Arrow>(&v)) {
    return "(-> " + to_string(a->dom) + " " + to_string(a->cod) + ")";
  }
  const auto& p = std::get<Pi>(v);
  return "(pi " + p.var + " " + to_string(p.body) + ")";
}

// Result sort of a curried arrow: the base at the end of the cod chain.
inline Type final_codomain(const Type& ty) {
  Type cur = ty;
  while (const auto* a = cur.as<Arrow>()) cur = a->cod;
  return cur;
}

}  // namespace lexsem
