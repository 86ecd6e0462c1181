#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexsem/error.hpp"
#include "lexsem/formula.hpp"
#include "lexsem/sexpr.hpp"

namespace lexsem {

using ElementId = std::string;
using Tuple = std::vector<ElementId>;

// A finite many-sorted structure. Carrier order is the choice order used by
// ε and τ. Interpretations are sets of tuples: a predicate of arity n holds
// n-tuples, a constant is a single 1-tuple, and a function of arity n holds
// (n+1)-tuples whose last component is the value.
class Model {
 public:
  void set_carrier(const std::string& sort, std::vector<ElementId> elements) {
    if (elements.empty()) throw error(errc::empty_carrier, "carrier of " + sort + " is empty");
    if (!carriers_.count(sort)) sort_order_.push_back(sort);
    carriers_[sort] = std::move(elements);
  }

  bool has_carrier(const std::string& sort) const {
    return carriers_.count(sort) > 0 || (sort == kEntitySort && !carriers_.empty());
  }

  // carrier(e) defaults to the union of the other carriers, in listing order.
  std::vector<ElementId> carrier(const std::string& sort) const {
    if (auto it = carriers_.find(sort); it != carriers_.end()) return it->second;
    if (sort == kEntitySort && !carriers_.empty()) {
      std::vector<ElementId> out;
      for (const auto& s : sort_order_)
        for (const auto& x : carriers_.at(s))
          if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
      return out;
    }
    throw error(errc::empty_carrier, "no carrier for sort " + sort);
  }

  const std::vector<std::string>& sorts() const { return sort_order_; }

  bool is_element(const ElementId& x) const {
    for (const auto& [s, xs] : carriers_)
      if (std::find(xs.begin(), xs.end(), x) != xs.end()) return true;
    return false;
  }

  void interpret(const std::string& name, std::set<Tuple> tuples) {
    for (const auto& tup : tuples)
      for (const auto& x : tup)
        if (!is_element(x))
          throw error(errc::carrier_containment, "'" + x + "' in the interpretation of " + name +
                                                     " is not in any carrier");
    interps_[name] = std::move(tuples);
  }

  const std::set<Tuple>* interpretation(const std::string& name) const {
    auto it = interps_.find(name);
    return it == interps_.end() ? nullptr : &it->second;
  }
  const std::map<std::string, std::set<Tuple>>& interpretations() const { return interps_; }

 private:
  std::map<std::string, std::vector<ElementId>> carriers_;
  std::vector<std::string> sort_order_;
  std::map<std::string, std::set<Tuple>> interps_;
};

// (model (carrier SORT (ID+))+ (interp NAME ((ID*)*))*)
inline Model parse_model(std::string_view text) {
  const Sexp root = read_sexp(text);
  if (!root.is_form("model")) root.fail(errc::syntax, "expected (model ...)");
  Model m;
  bool any_carrier = false;
  for (std::size_t i = 1; i < root.items.size(); ++i) {
    const Sexp& d = root.items[i];
    if (d.is_form("carrier")) {
      if (d.items.size() != 3 || !d.items[1].is_symbol() || !d.items[2].is_list())
        d.fail(errc::syntax, "expected (carrier SORT (ID+))");
      std::vector<ElementId> xs;
      for (const auto& x : d.items[2].items) {
        if (!x.is_atom()) x.fail(errc::syntax, "expected an element id");
        xs.push_back(x.text);
      }
      if (xs.empty()) d.fail(errc::empty_carrier, "carrier of " + d.items[1].text + " is empty");
      m.set_carrier(d.items[1].text, std::move(xs));
      any_carrier = true;
    } else if (d.is_form("interp")) {
      if (d.items.size() != 3 || !d.items[1].is_symbol() || !d.items[2].is_list())
        d.fail(errc::syntax, "expected (interp NAME ((ID*)*))");
      std::set<Tuple> tuples;
      for (const auto& tup : d.items[2].items) {
        if (!tup.is_list()) tup.fail(errc::syntax, "expected a tuple (ID*)");
        Tuple t;
        for (const auto& x : tup.items) {
          if (!x.is_atom()) x.fail(errc::syntax, "expected an element id");
          if (!m.is_element(x.text)) x.fail(errc::carrier_containment, "'" + x.text + "' is not in any carrier");
          t.push_back(x.text);
        }
        tuples.insert(std::move(t));
      }
      m.interpret(d.items[1].text, std::move(tuples));
    } else {
      d.fail(errc::syntax, "expected (carrier ...) or (interp ...)");
    }
  }
  if (!any_carrier) root.fail(errc::empty_carrier, "model declares no carrier");
  return m;
}

inline std::string print_model(const Model& m) {
  std::string out = "(model";
  for (const auto& s : m.sorts()) {
    out += "\n  (carrier " + s + " (";
    const auto xs = m.carrier(s);
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? " " : "") + xs[i];
    out += "))";
  }
  for (const auto& [name, tuples] : m.interpretations()) {
    out += "\n  (interp " + name + " (";
    bool first = true;
    for (const auto& tup : tuples) {
      out += first ? "(" : " (";
      first = false;
      for (std::size_t i = 0; i < tup.size(); ++i) out += (i ? " " : "") + tup[i];
      out += ")";
    }
    out += "))";
  }
  return out + ")";
}

namespace detail {

class Evaluator {
 public:
  explicit Evaluator(const Model& m) : m_(m) {}

  bool formula(const Formula& f) {
    const auto& v = f.node().v;
    if (const auto* p = std::get_if<Pred>(&v)) return predicate(*p);
    if (const auto* b = std::get_if<Binary>(&v)) {
      switch (b->op) {
        case Connective::conj: return formula(b->lhs) && formula(b->rhs);
        case Connective::disj: return formula(b->lhs) || formula(b->rhs);
        case Connective::implies: return !formula(b->lhs) || formula(b->rhs);
      }
    }
    if (const auto* n = std::get_if<Not>(&v)) return !formula(n->operand);
    if (const auto* q = std::get_if<Quant>(&v)) {
      const auto xs = m_.carrier(q->sort);
      for (const auto& x : xs) {
        bool r = with(q->var, x, true, [&] { return formula(q->body); });
        if (q->q == Quantifier::exists && r) return true;
        if (q->q == Quantifier::forall && !r) return false;
      }
      return q->q == Quantifier::forall;
    }
    if (const auto* e = std::get_if<Eq>(&v)) return term(e->lhs) == term(e->rhs);
    return std::get<TruthConst>(v).value;
  }

  ElementId term(const LTerm& t) {
    const auto& v = t.node().v;
    if (const auto* x = std::get_if<LVar>(&v)) {
      for (auto it = env_.rbegin(); it != env_.rend(); ++it)
        if (it->name == x->name) return it->value;
      throw error(errc::uninterpreted_constant, "unbound variable " + x->name);
    }
    if (const auto* c = std::get_if<LConst>(&v)) {
      const auto* tuples = m_.interpretation(c->name);
      if (!tuples || tuples->size() != 1 || tuples->begin()->size() != 1)
        throw error(errc::uninterpreted_constant, c->name + " is not interpreted as an element");
      return tuples->begin()->front();
    }
    if (const auto* a = std::get_if<LApp>(&v)) {
      Tuple args;
      for (const auto& x : a->args) args.push_back(term(x));
      const auto* tuples = m_.interpretation(a->fn);
      if (!tuples) throw error(errc::uninterpreted_constant, a->fn + " is not interpreted");
      for (const auto& tup : *tuples)
        if (tup.size() == args.size() + 1 && std::equal(args.begin(), args.end(), tup.begin()))
          return tup.back();
      throw error(errc::uninterpreted_constant, a->fn + " is undefined on its arguments");
    }
    return choice(std::get<Eps>(v));
  }

 private:
  struct Binding {
    std::string name;
    ElementId value;
    bool quantified;
  };

  template <class F>
  bool with(const std::string& var, const ElementId& x, bool quantified, F&& body) {
    env_.push_back({var, x, quantified});
    bool r = body();
    env_.pop_back();
    return r;
  }

  bool predicate(const Pred& p) {
    Tuple args;
    for (const auto& a : p.args) args.push_back(term(a));
    if (const auto* tuples = m_.interpretation(p.name)) return tuples->count(args) > 0;
    if (p.name.rfind("hat_", 0) == 0 && args.size() == 1) {
      const auto xs = m_.carrier(p.name.substr(4));
      return std::find(xs.begin(), xs.end(), args.front()) != xs.end();
    }
    throw error(errc::uninterpreted_constant, p.name + " is not interpreted");
  }

  // ε and ι-ε pick the first element satisfying the body, τ the first one
  // falsifying it; either falls back to the first element of the carrier.
  ElementId choice(const Eps& e) {
    for (const auto& fv : free_vars(e.body)) {
      if (fv == e.var) continue;
      for (auto it = env_.rbegin(); it != env_.rend(); ++it)
        if (it->name == fv) {
          if (it->quantified)
            throw error(errc::dependent_epsilon,
                        "ε-term depends on the quantified variable " + fv);
          break;
        }
    }
    const auto xs = m_.carrier(e.sort);
    const bool want = e.mode != EpsMode::universal;
    for (const auto& x : xs)
      if (with(e.var, x, false, [&] { return formula(e.body); }) == want) return x;
    return xs.front();
  }

  const Model& m_;
  std::vector<Binding> env_;
};

}  // namespace detail

inline bool eval_formula(const Model& m, const Formula& f) {
  detail::Evaluator ev(m);
  return ev.formula(f);
}

inline ElementId eval_term(const Model& m, const LTerm& t) {
  detail::Evaluator ev(m);
  return ev.term(t);
}

struct PredicateSignature {
  std::string name;
  std::vector<std::string> arg_sorts;
};

struct Verdict {
  bool equivalent = true;
  std::optional<Model> counter_model;
  std::size_t models_checked = 0;
};

// Tries every model whose carriers for the given sorts have 1..max_carrier
// elements and every interpretation of the given predicates, stopping at the
// first model where the two formulas disagree. Elements are named after their
// sort: ani1, ani2, ...
inline Verdict check_equivalence(const Formula& f1, const Formula& f2, const std::vector<std::string>& sorts,
                                 int max_carrier, const std::vector<PredicateSignature>& predicates) {
  if (max_carrier < 1) throw error(errc::empty_carrier, "max carrier size must be at least 1");
  if (sorts.empty()) throw error(errc::empty_carrier, "no sorts in play");
  Verdict verdict;
  std::vector<int> sizes(sorts.size(), 1);
  for (;;) {
    Model base;
    for (std::size_t i = 0; i < sorts.size(); ++i) {
      std::vector<ElementId> xs;
      for (int k = 1; k <= sizes[i]; ++k) xs.push_back(sorts[i] + std::to_string(k));
      base.set_carrier(sorts[i], std::move(xs));
    }
    // All argument tuples of each predicate, in a fixed order.
    std::vector<std::vector<Tuple>> domains;
    for (const auto& p : predicates) {
      std::vector<Tuple> dom{Tuple{}};
      for (const auto& s : p.arg_sorts) {
        std::vector<Tuple> next;
        for (const auto& prefix : dom)
          for (const auto& x : base.carrier(s)) {
            Tuple t = prefix;
            t.push_back(x);
            next.push_back(std::move(t));
          }
        dom = std::move(next);
      }
      if (dom.size() > 20) throw error(errc::empty_carrier, "too many interpretations of " + p.name + " to enumerate");
      domains.push_back(std::move(dom));
    }
    std::vector<std::uint32_t> masks(predicates.size(), 0);
    for (;;) {
      Model m = base;
      for (std::size_t i = 0; i < predicates.size(); ++i) {
        std::set<Tuple> ext;
        for (std::size_t j = 0; j < domains[i].size(); ++j)
          if (masks[i] >> j & 1u) ext.insert(domains[i][j]);
        m.interpret(predicates[i].name, std::move(ext));
      }
      ++verdict.models_checked;
      if (eval_formula(m, f1) != eval_formula(m, f2)) {
        verdict.equivalent = false;
        verdict.counter_model = std::move(m);
        return verdict;
      }
      std::size_t i = 0;
      for (; i < masks.size(); ++i) {
        if (++masks[i] < (std::uint32_t{1} << domains[i].size())) break;
        masks[i] = 0;
      }
      if (i == masks.size()) break;
    }
    std::size_t i = 0;
    for (; i < sizes.size(); ++i) {
      if (++sizes[i] <= max_carrier) break;
      sizes[i] = 1;
    }
    if (i == sizes.size()) break;
  }
  return verdict;
}

namespace detail {

inline std::optional<std::string> known_sort(const LTerm& t) {
  if (const auto* v = t.as<LVar>()) return v->sort;
  if (const auto* e = t.as<Eps>()) return e->sort;
  return std::nullopt;
}

inline void scan_signature(const Formula& f, std::vector<std::string>& sorts,
                           std::vector<PredicateSignature>& preds, std::set<std::string>& unresolved) {
  auto add_sort = [&](const std::string& s) {
    if (std::find(sorts.begin(), sorts.end(), s) == sorts.end()) sorts.push_back(s);
  };
  auto on_term = [&](auto&& self, const LTerm& t) -> void {
    if (const auto* e = t.as<Eps>()) {
      add_sort(e->sort);
      scan_signature(e->body, sorts, preds, unresolved);
    } else if (const auto* a = t.as<LApp>()) {
      for (const auto& x : a->args) self(self, x);
    }
  };
  const auto& v = f.node().v;
  if (const auto* p = std::get_if<Pred>(&v)) {
    for (const auto& a : p->args) on_term(on_term, a);
    if (p->name.rfind("hat_", 0) == 0) return;
    for (const auto& q : preds)
      if (q.name == p->name) return;
    PredicateSignature sig{p->name, {}};
    for (const auto& a : p->args) {
      auto s = known_sort(a);
      if (!s) {
        unresolved.insert(p->name);
        return;
      }
      sig.arg_sorts.push_back(*s);
    }
    unresolved.erase(p->name);
    preds.push_back(std::move(sig));
  } else if (const auto* b = std::get_if<Binary>(&v)) {
    scan_signature(b->lhs, sorts, preds, unresolved);
    scan_signature(b->rhs, sorts, preds, unresolved);
  } else if (const auto* n = std::get_if<Not>(&v)) {
    scan_signature(n->operand, sorts, preds, unresolved);
  } else if (const auto* q = std::get_if<Quant>(&v)) {
    add_sort(q->sort);
    scan_signature(q->body, sorts, preds, unresolved);
  } else if (const auto* e = std::get_if<Eq>(&v)) {
    on_term(on_term, e->lhs);
    on_term(on_term, e->rhs);
  }
}

}  // namespace detail

struct Signature {
  std::vector<std::string> sorts;
  std::vector<PredicateSignature> predicates;
};

// Sorts bound by quantifiers or ε-terms, and predicates whose argument sorts
// can be read off a variable or ε-term argument, in order of appearance.
inline Signature signature_of(const std::vector<Formula>& fs) {
  Signature sig;
  std::set<std::string> unresolved;
  for (const auto& f : fs) detail::scan_signature(f, sig.sorts, sig.predicates, unresolved);
  if (!unresolved.empty())
    throw error(errc::uninterpreted_constant,
                "cannot infer the argument sorts of " + *unresolved.begin());
  return sig;
}

// A unary predicate given by its extension over one sort's carrier.
struct InterpPredicate {
  std::string name;
  std::string domain;
  std::set<ElementId> extension;
};

namespace detail {

inline bool carrier_subset(const Model& m, const std::string& small, const std::string& big) {
  const auto b = m.carrier(big);
  for (const auto& x : m.carrier(small))
    if (std::find(b.begin(), b.end(), x) == b.end()) return false;
  return true;
}

}  // namespace detail

// Same satisfying set over a larger carrier: false everywhere outside.
inline InterpPredicate extend_interp(const Model& m, const InterpPredicate& p, const std::string& to_sort) {
  if (!detail::carrier_subset(m, p.domain, to_sort))
    throw error(errc::carrier_containment, "carrier of " + p.domain + " is not contained in " + to_sort);
  return InterpPredicate{p.name, to_sort, p.extension};
}

// Intersection of the extension with a smaller carrier.
inline InterpPredicate restrict_interp(const Model& m, const InterpPredicate& p, const std::string& to_sort) {
  if (!detail::carrier_subset(m, to_sort, p.domain))
    throw error(errc::carrier_containment, "carrier of " + to_sort + " is not contained in " + p.domain);
  InterpPredicate out{p.name, to_sort, {}};
  for (const auto& x : m.carrier(to_sort))
    if (p.extension.count(x)) out.extension.insert(x);
  return out;
}

}  // namespace lexsem
