#pragma once

#include <cctype>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "lexsem/error.hpp"
#include "lexsem/sexpr.hpp"
#include "lexsem/type.hpp"

namespace lexsem {

struct FormulaNode;
struct LTermNode;

class Formula {
 public:
  Formula() = default;
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  const FormulaNode& node() const { return *node_; }
  explicit operator bool() const { return node_ != nullptr; }
  template <class T>
  const T* as() const;

 private:
  std::shared_ptr<const FormulaNode> node_;
};

class LTerm {
 public:
  LTerm() = default;
  explicit LTerm(std::shared_ptr<const LTermNode> node) : node_(std::move(node)) {}
  const LTermNode& node() const { return *node_; }
  explicit operator bool() const { return node_ != nullptr; }
  template <class T>
  const T* as() const;

 private:
  std::shared_ptr<const LTermNode> node_;
};

// Which choice the ε-term makes: a new witness (ε), the most salient one
// (ι-ε, printed `the`), or the generic counter-example (τ).
enum class EpsMode { indefinite, definite, universal };

struct LVar {
  std::string name;
  std::string sort;
};
struct LConst {
  std::string name;
};
struct LApp {
  std::string fn;
  std::vector<LTerm> args;
};
struct Eps {
  EpsMode mode = EpsMode::indefinite;
  std::string var;  // the hole of the body
  std::string sort;
  Formula body;
};

struct LTermNode {
  std::variant<LVar, LConst, LApp, Eps> v;
};

enum class Connective { conj, disj, implies };
enum class Quantifier { exists, forall };

struct Pred {
  std::string name;
  std::vector<LTerm> args;
};
struct Binary {
  Connective op = Connective::conj;
  Formula lhs;
  Formula rhs;
};
struct Not {
  Formula operand;
};
struct Quant {
  Quantifier q = Quantifier::exists;
  std::string var;
  std::string sort;
  Formula body;
};
struct Eq {
  LTerm lhs;
  LTerm rhs;
};
struct TruthConst {
  bool value = true;
};

struct FormulaNode {
  std::variant<Pred, Binary, Not, Quant, Eq, TruthConst> v;
};

template <class T>
const T* Formula::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}
template <class T>
const T* LTerm::as() const {
  return node_ ? std::get_if<T>(&node_->v) : nullptr;
}

inline LTerm lvar(std::string name, std::string sort) {
  return LTerm(std::make_shared<const LTermNode>(LTermNode{LVar{std::move(name), std::move(sort)}}));
}
inline LTerm lconst(std::string name) {
  return LTerm(std::make_shared<const LTermNode>(LTermNode{LConst{std::move(name)}}));
}
inline LTerm lapp(std::string fn, std::vector<LTerm> args) {
  return LTerm(std::make_shared<const LTermNode>(LTermNode{LApp{std::move(fn), std::move(args)}}));
}
inline LTerm eps_term(EpsMode mode, std::string var, std::string sort, Formula body) {
  return LTerm(std::make_shared<const LTermNode>(
      LTermNode{Eps{mode, std::move(var), std::move(sort), std::move(body)}}));
}

inline Formula pred(std::string name, std::vector<LTerm> args = {}) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Pred{std::move(name), std::move(args)}}));
}
inline Formula binary(Connective op, Formula lhs, Formula rhs) {
  return Formula(
      std::make_shared<const FormulaNode>(FormulaNode{Binary{op, std::move(lhs), std::move(rhs)}}));
}
inline Formula conj(Formula a, Formula b) { return binary(Connective::conj, std::move(a), std::move(b)); }
inline Formula disj(Formula a, Formula b) { return binary(Connective::disj, std::move(a), std::move(b)); }
inline Formula implies(Formula a, Formula b) {
  return binary(Connective::implies, std::move(a), std::move(b));
}
inline Formula negation(Formula f) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Not{std::move(f)}}));
}
inline Formula quant(Quantifier q, std::string var, std::string sort, Formula body) {
  return Formula(std::make_shared<const FormulaNode>(
      FormulaNode{Quant{q, std::move(var), std::move(sort), std::move(body)}}));
}
inline Formula exists(std::string var, std::string sort, Formula body) {
  return quant(Quantifier::exists, std::move(var), std::move(sort), std::move(body));
}
inline Formula forall(std::string var, std::string sort, Formula body) {
  return quant(Quantifier::forall, std::move(var), std::move(sort), std::move(body));
}
inline Formula equality(LTerm a, LTerm b) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{Eq{std::move(a), std::move(b)}}));
}
inline Formula truth(bool value) {
  return Formula(std::make_shared<const FormulaNode>(FormulaNode{TruthConst{value}}));
}

// Left-nested conjunction of the parts; `true` when empty.
inline Formula conjoin(const std::vector<Formula>& parts) {
  if (parts.empty()) return truth(true);
  Formula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = conj(out, parts[i]);
  return out;
}

inline void flatten_conjuncts(const Formula& f, std::vector<Formula>& out) {
  if (const auto* b = f.as<Binary>(); b && b->op == Connective::conj) {
    flatten_conjuncts(b->lhs, out);
    flatten_conjuncts(b->rhs, out);
  } else {
    out.push_back(f);
  }
}

// ---------------------------------------------------------------------------
// Structural equality (names included) and α-equivalence

bool operator==(const Formula& a, const Formula& b);
bool operator==(const LTerm& a, const LTerm& b);

inline bool operator==(const LTerm& a, const LTerm& b) {
  const auto& va = a.node().v;
  const auto& vb = b.node().v;
  if (va.index() != vb.index()) return false;
  if (const auto* x = std::get_if<LVar>(&va)) {
    const auto& y = std::get<LVar>(vb);
    return x->name == y.name && x->sort == y.sort;
  }
  if (const auto* x = std::get_if<LConst>(&va)) return x->name == std::get<LConst>(vb).name;
  if (const auto* x = std::get_if<LApp>(&va)) {
    const auto& y = std::get<LApp>(vb);
    return x->fn == y.fn && x->args == y.args;
  }
  const auto& x = std::get<Eps>(va);
  const auto& y = std::get<Eps>(vb);
  return x.mode == y.mode && x.var == y.var && x.sort == y.sort && x.body == y.body;
}

inline bool operator==(const Formula& a, const Formula& b) {
  const auto& va = a.node().v;
  const auto& vb = b.node().v;
  if (va.index() != vb.index()) return false;
  if (const auto* x = std::get_if<Pred>(&va)) {
    const auto& y = std::get<Pred>(vb);
    return x->name == y.name && x->args == y.args;
  }
  if (const auto* x = std::get_if<Binary>(&va)) {
    const auto& y = std::get<Binary>(vb);
    return x->op == y.op && x->lhs == y.lhs && x->rhs == y.rhs;
  }
  if (const auto* x = std::get_if<Not>(&va)) return x->operand == std::get<Not>(vb).operand;
  if (const auto* x = std::get_if<Quant>(&va)) {
    const auto& y = std::get<Quant>(vb);
    return x->q == y.q && x->var == y.var && x->sort == y.sort && x->body == y.body;
  }
  if (const auto* x = std::get_if<Eq>(&va)) {
    const auto& y = std::get<Eq>(vb);
    return x->lhs == y.lhs && x->rhs == y.rhs;
  }
  return std::get<TruthConst>(va).value == std::get<TruthConst>(vb).value;
}

namespace detail {

struct FormulaAlpha {
  std::vector<std::string> env_a, env_b;

  bool var(const std::string& a, const std::string& b) {
    long da = binder_depth(env_a, a);
    long db = binder_depth(env_b, b);
    return da == db && (da >= 0 || a == b);
  }

  bool term(const LTerm& a, const LTerm& b) {
    const auto& va = a.node().v;
    const auto& vb = b.node().v;
    if (va.index() != vb.index()) return false;
    if (const auto* x = std::get_if<LVar>(&va)) {
      const auto& y = std::get<LVar>(vb);
      return x->sort == y.sort && var(x->name, y.name);
    }
    if (const auto* x = std::get_if<LConst>(&va)) return x->name == std::get<LConst>(vb).name;
    if (const auto* x = std::get_if<LApp>(&va)) {
      const auto& y = std::get<LApp>(vb);
      if (x->fn != y.fn || x->args.size() != y.args.size()) return false;
      for (std::size_t i = 0; i < x->args.size(); ++i)
        if (!term(x->args[i], y.args[i])) return false;
      return true;
    }
    const auto& x = std::get<Eps>(va);
    const auto& y = std::get<Eps>(vb);
    if (x.mode != y.mode || x.sort != y.sort) return false;
    return bind(x.var, y.var, [&] { return formula(x.body, y.body); });
  }

  template <class F>
  bool bind(const std::string& a, const std::string& b, F&& body) {
    env_a.push_back(a);
    env_b.push_back(b);
    bool r = body();
    env_a.pop_back();
    env_b.pop_back();
    return r;
  }

  bool formula(const Formula& a, const Formula& b) {
    const auto& va = a.node().v;
    const auto& vb = b.node().v;
    if (va.index() != vb.index()) return false;
    if (const auto* x = std::get_if<Pred>(&va)) {
      const auto& y = std::get<Pred>(vb);
      if (x->name != y.name || x->args.size() != y.args.size()) return false;
      for (std::size_t i = 0; i < x->args.size(); ++i)
        if (!term(x->args[i], y.args[i])) return false;
      return true;
    }
    if (const auto* x = std::get_if<Binary>(&va)) {
      const auto& y = std::get<Binary>(vb);
      return x->op == y.op && formula(x->lhs, y.lhs) && formula(x->rhs, y.rhs);
    }
    if (const auto* x = std::get_if<Not>(&va)) return formula(x->operand, std::get<Not>(vb).operand);
    if (const auto* x = std::get_if<Quant>(&va)) {
      const auto& y = std::get<Quant>(vb);
      if (x->q != y.q || x->sort != y.sort) return false;
      return bind(x->var, y.var, [&] { return formula(x->body, y.body); });
    }
    if (const auto* x = std::get_if<Eq>(&va)) {
      const auto& y = std::get<Eq>(vb);
      return term(x->lhs, y.lhs) && term(x->rhs, y.rhs);
    }
    return std::get<TruthConst>(va).value == std::get<TruthConst>(vb).value;
  }
};

}  // namespace detail

inline bool alpha_eq(const Formula& a, const Formula& b) {
  detail::FormulaAlpha eq;
  return eq.formula(a, b);
}
inline bool alpha_eq(const LTerm& a, const LTerm& b) {
  detail::FormulaAlpha eq;
  return eq.term(a, b);
}

// ---------------------------------------------------------------------------
// Variables

namespace detail {

inline void formula_names(const Formula& f, std::set<std::string>& out);

inline void term_names(const LTerm& t, std::set<std::string>& out) {
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<LVar>(&v)) {
    out.insert(x->name);
  } else if (const auto* c = std::get_if<LConst>(&v)) {
    out.insert(c->name);
  } else if (const auto* a = std::get_if<LApp>(&v)) {
    out.insert(a->fn);
    for (const auto& arg : a->args) term_names(arg, out);
  } else {
    const auto& e = std::get<Eps>(v);
    out.insert(e.var);
    formula_names(e.body, out);
  }
}

inline void formula_names(const Formula& f, std::set<std::string>& out) {
  const auto& v = f.node().v;
  if (const auto* p = std::get_if<Pred>(&v)) {
    out.insert(p->name);
    for (const auto& a : p->args) term_names(a, out);
  } else if (const auto* b = std::get_if<Binary>(&v)) {
    formula_names(b->lhs, out);
    formula_names(b->rhs, out);
  } else if (const auto* n = std::get_if<Not>(&v)) {
    formula_names(n->operand, out);
  } else if (const auto* q = std::get_if<Quant>(&v)) {
    out.insert(q->var);
    formula_names(q->body, out);
  } else if (const auto* e = std::get_if<Eq>(&v)) {
    term_names(e->lhs, out);
    term_names(e->rhs, out);
  }
}

inline void formula_fv(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out);

inline void term_fv(const LTerm& t, std::vector<std::string>& bound, std::set<std::string>& out) {
  const auto& v = t.node().v;
  if (const auto* x = std::get_if<LVar>(&v)) {
    if (binder_depth(bound, x->name) < 0) out.insert(x->name);
  } else if (const auto* a = std::get_if<LApp>(&v)) {
    for (const auto& arg : a->args) term_fv(arg, bound, out);
  } else if (const auto* e = std::get_if<Eps>(&v)) {
    bound.push_back(e->var);
    formula_fv(e->body, bound, out);
    bound.pop_back();
  }
}

inline void formula_fv(const Formula& f, std::vector<std::string>& bound, std::set<std::string>& out) {
  const auto& v = f.node().v;
  if (const auto* p = std::get_if<Pred>(&v)) {
    for (const auto& a : p->args) term_fv(a, bound, out);
  } else if (const auto* b = std::get_if<Binary>(&v)) {
    formula_fv(b->lhs, bound, out);
    formula_fv(b->rhs, bound, out);
  } else if (const auto* n = std::get_if<Not>(&v)) {
    formula_fv(n->operand, bound, out);
  } else if (const auto* q = std::get_if<Quant>(&v)) {
    bound.push_back(q->var);
    formula_fv(q->body, bound, out);
    bound.pop_back();
  } else if (const auto* e = std::get_if<Eq>(&v)) {
    term_fv(e->lhs, bound, out);
    term_fv(e->rhs, bound, out);
  }
}

}  // namespace detail

// Every symbol occurring in the formula, bound or free, constants included.
inline std::set<std::string> all_names(const Formula& f) {
  std::set<std::string> out;
  detail::formula_names(f, out);
  return out;
}

inline std::set<std::string> free_vars(const Formula& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::formula_fv(f, bound, out);
  return out;
}
inline std::set<std::string> free_vars(const LTerm& t) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  detail::term_fv(t, bound, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing

enum class FormulaStyle { ascii, unicode, sexpr };

namespace detail {

class FormulaPrinter {
 public:
  explicit FormulaPrinter(FormulaStyle style) : style_(style) {}

  std::string formula(const Formula& f) {
    return style_ == FormulaStyle::sexpr ? sexpr(f) : infix(f, 0);
  }
  std::string term(const LTerm& t) { return style_ == FormulaStyle::sexpr ? sexpr(t) : infix(t); }

 private:
  bool uni() const { return style_ == FormulaStyle::unicode; }

  static int precedence(const Formula& f) {
    if (const auto* b = f.as<Binary>()) {
      switch (b->op) {
        case Connective::implies: return 1;
        case Connective::disj: return 2;
        case Connective::conj: return 3;
      }
    }
    return 4;
  }

  // A quantifier's scope runs to the end, so such operands need parentheses.
  static bool open_ended(const Formula& f) {
    if (f.as<Quant>()) return true;
    if (const auto* n = f.as<Not>()) return open_ended(n->operand);
    return false;
  }

  std::string op_text(Connective op) const {
    switch (op) {
      case Connective::conj: return uni() ? " ∧ " : " & ";
      case Connective::disj: return uni() ? " ∨ " : " | ";
      case Connective::implies: return uni() ? " → " : " -> ";
    }
    return " ? ";
  }

  std::string args(const std::vector<LTerm>& as) {
    std::string out = "(";
    for (std::size_t i = 0; i < as.size(); ++i) out += (i ? "," : "") + infix(as[i]);
    return out + ")";
  }

  std::string infix(const LTerm& t) {
    const auto& v = t.node().v;
    if (const auto* x = std::get_if<LVar>(&v)) return x->name;
    if (const auto* c = std::get_if<LConst>(&v)) return c->name;
    if (const auto* a = std::get_if<LApp>(&v)) return a->fn + args(a->args);
    const auto& e = std::get<Eps>(v);
    std::string op;
    switch (e.mode) {
      case EpsMode::indefinite: op = uni() ? "ε" : "eps"; break;
      case EpsMode::definite: op = uni() ? "ιε" : "the"; break;
      case EpsMode::universal: op = uni() ? "τ" : "tau"; break;
    }
    return op + "[" + e.sort + "](" + e.var + ". " + infix(e.body, 0) + ")";
  }

  std::string wrap(const Formula& f, bool parens) {
    std::string s = infix(f, 0);
    return parens ? "(" + s + ")" : s;
  }

  std::string infix(const Formula& f, int) {
    const auto& v = f.node().v;
    if (const auto* p = std::get_if<Pred>(&v)) return p->args.empty() ? p->name : p->name + args(p->args);
    if (const auto* e = std::get_if<Eq>(&v)) return infix(e->lhs) + " = " + infix(e->rhs);
    if (const auto* t = std::get_if<TruthConst>(&v)) {
      if (uni()) return t->value ? "⊤" : "⊥";
      return t->value ? "true" : "false";
    }
    if (const auto* n = std::get_if<Not>(&v)) {
      return std::string(uni() ? "¬" : "~") + wrap(n->operand, precedence(n->operand) < 4);
    }
    if (const auto* q = std::get_if<Quant>(&v)) {
      std::string head = q->q == Quantifier::exists ? (uni() ? "∃" : "exists ") : (uni() ? "∀" : "forall ");
      return head + q->var + ":" + q->sort + ". " + wrap(q->body, precedence(q->body) < 4);
    }
    const auto& b = std::get<Binary>(v);
    const int prec = precedence(f);
    const bool right_assoc = b.op == Connective::implies;
    const int lp = precedence(b.lhs);
    const int rp = precedence(b.rhs);
    bool lparen = open_ended(b.lhs) || (right_assoc ? lp <= prec : lp < prec);
    bool rparen = open_ended(b.rhs) || (right_assoc ? rp < prec : rp <= prec);
    return wrap(b.lhs, lparen) + op_text(b.op) + wrap(b.rhs, rparen);
  }

  std::string sexpr(const LTerm& t) {
    const auto& v = t.node().v;
    if (const auto* x = std::get_if<LVar>(&v)) return x->name;
    if (const auto* c = std::get_if<LConst>(&v)) return c->name;
    if (const auto* a = std::get_if<LApp>(&v)) {
      std::string out = "(" + a->fn;
      for (const auto& arg : a->args) out += " " + sexpr(arg);
      return out + ")";
    }
    const auto& e = std::get<Eps>(v);
    const char* op = e.mode == EpsMode::indefinite ? "eps" : e.mode == EpsMode::definite ? "the" : "tau";
    return std::string("(") + op + " (" + e.var + " " + e.sort + ") " + sexpr(e.body) + ")";
  }

  std::string sexpr(const Formula& f) {
    const auto& v = f.node().v;
    if (const auto* p = std::get_if<Pred>(&v)) {
      if (p->args.empty()) return p->name;
      std::string out = "(" + p->name;
      for (const auto& a : p->args) out += " " + sexpr(a);
      return out + ")";
    }
    if (const auto* e = std::get_if<Eq>(&v)) return "(= " + sexpr(e->lhs) + " " + sexpr(e->rhs) + ")";
    if (const auto* t = std::get_if<TruthConst>(&v)) return t->value ? "true" : "false";
    if (const auto* n = std::get_if<Not>(&v)) return "(not " + sexpr(n->operand) + ")";
    if (const auto* q = std::get_if<Quant>(&v)) {
      return std::string(q->q == Quantifier::exists ? "(exists (" : "(forall (") + q->var + " " +
             q->sort + ") " + sexpr(q->body) + ")";
    }
    const auto& b = std::get<Binary>(v);
    const char* op = b.op == Connective::conj ? "and" : b.op == Connective::disj ? "or" : "implies";
    return std::string("(") + op + " " + sexpr(b.lhs) + " " + sexpr(b.rhs) + ")";
  }

  FormulaStyle style_;
};

}  // namespace detail

// Canonical rendering. ASCII: `exists x:ani. (chat(x) & dort(x))`,
// `eps[ani](x. chat(x))`; `~` binds tighter than `&`, then `|`, then `->`.
inline std::string print_formula(const Formula& f, FormulaStyle style = FormulaStyle::ascii) {
  return detail::FormulaPrinter(style).formula(f);
}
inline std::string print_lterm(const LTerm& t, FormulaStyle style = FormulaStyle::ascii) {
  return detail::FormulaPrinter(style).term(t);
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

inline bool is_formula_keyword(std::string_view s) {
  return s == "exists" || s == "forall" || s == "eps" || s == "tau" || s == "the" || s == "true" ||
         s == "false";
}

class AsciiFormulaParser {
 public:
  explicit AsciiFormulaParser(std::string_view text) : text_(text) { next(); }

  Formula parse() {
    Formula f = implication();
    if (tok_.kind != Tok::end) fail("unexpected '" + tok_.text + "'");
    return f;
  }

 private:
  enum class Tok { ident, punct, end };
  struct Token {
    Tok kind = Tok::end;
    std::string text;
    std::size_t column = 1;
  };

  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
           (static_cast<unsigned char>(c) & 0x80);
  }

  void next() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    tok_ = Token{};
    tok_.column = pos_ + 1;
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (ident_char(c)) {
      tok_.kind = Tok::ident;
      while (pos_ < text_.size() && ident_char(text_[pos_])) tok_.text.push_back(text_[pos_++]);
      return;
    }
    tok_.kind = Tok::punct;
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
      tok_.text = "->";
      pos_ += 2;
      return;
    }
    if (std::string_view("()[],.:~&|=").find(c) == std::string_view::npos) {
      fail(std::string("unexpected character '") + c + "'");
    }
    tok_.text = std::string(1, c);
    ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw error(errc::syntax, msg, 1, tok_.column);
  }

  bool at(std::string_view p) const { return tok_.kind == Tok::punct && tok_.text == p; }
  bool at_ident(std::string_view s) const { return tok_.kind == Tok::ident && tok_.text == s; }

  void expect(std::string_view p) {
    if (!at(p)) fail("expected '" + std::string(p) + "'");
    next();
  }

  std::string ident() {
    if (tok_.kind != Tok::ident) fail("expected a name");
    std::string s = tok_.text;
    next();
    return s;
  }

  Formula implication() {
    Formula lhs = disjunction();
    if (at("->")) {
      next();
      return implies(lhs, implication());
    }
    return lhs;
  }

  Formula disjunction() {
    Formula lhs = conjunction();
    while (at("|")) {
      next();
      lhs = disj(lhs, conjunction());
    }
    return lhs;
  }

  Formula conjunction() {
    Formula lhs = unary();
    while (at("&")) {
      next();
      lhs = conj(lhs, unary());
    }
    return lhs;
  }

  Formula unary() {
    if (at("~")) {
      next();
      return negation(unary());
    }
    if (at_ident("exists") || at_ident("forall")) {
      Quantifier q = tok_.text == "exists" ? Quantifier::exists : Quantifier::forall;
      next();
      std::string var = ident();
      expect(":");
      std::string sort = ident();
      expect(".");
      bound_.emplace_back(var, sort);
      Formula body = implication();
      bound_.pop_back();
      return quant(q, var, sort, body);
    }
    if (at("(")) {
      next();
      Formula f = implication();
      expect(")");
      return f;
    }
    if (at_ident("true") || at_ident("false")) {
      bool v = tok_.text == "true";
      next();
      return truth(v);
    }
    return atom();
  }

  Formula atom() {
    const bool choice = at_ident("eps") || at_ident("tau") || at_ident("the");
    if (tok_.kind != Tok::ident) fail("expected a formula");
    if (!choice && is_formula_keyword(tok_.text)) fail("unexpected keyword '" + tok_.text + "'");
    // In formula position a name is a predicate unless `=` follows, even if
    // a variable of that name is in scope.
    if (!choice) {
      std::string name = ident();
      std::vector<LTerm> as;
      if (at("(")) as = arguments();
      if (!at("=")) return pred(name, std::move(as));
      if (!as.empty() && is_bound(name)) fail("variable '" + name + "' cannot be applied");
      LTerm lhs = !as.empty() ? lapp(name, std::move(as)) : is_bound(name) ? bound_term(name) : lconst(name);
      next();
      return equality(lhs, term());
    }
    LTerm lhs = term();
    expect("=");
    return equality(lhs, term());
  }

  std::vector<LTerm> arguments() {
    expect("(");
    std::vector<LTerm> as;
    if (!at(")")) {
      as.push_back(term());
      while (at(",")) {
        next();
        as.push_back(term());
      }
    }
    expect(")");
    if (as.empty()) fail("empty argument list");
    return as;
  }

  bool is_bound(const std::string& name) const {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->first == name) return true;
    return false;
  }

  LTerm bound_term(const std::string& name) const {
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->first == name) return lvar(name, it->second);
    return lconst(name);
  }

  LTerm term() {
    if (at_ident("eps") || at_ident("tau") || at_ident("the")) {
      EpsMode mode = tok_.text == "eps" ? EpsMode::indefinite
                     : tok_.text == "the" ? EpsMode::definite
                                          : EpsMode::universal;
      next();
      expect("[");
      std::string sort = ident();
      expect("]");
      expect("(");
      std::string var = ident();
      expect(".");
      bound_.emplace_back(var, sort);
      Formula body = implication();
      bound_.pop_back();
      expect(")");
      return eps_term(mode, var, sort, body);
    }
    if (tok_.kind == Tok::ident && is_formula_keyword(tok_.text))
      fail("unexpected keyword '" + tok_.text + "'");
    std::string name = ident();
    for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
      if (it->first == name) {
        if (at("(")) fail("variable '" + name + "' cannot be applied");
        return lvar(name, it->second);
      }
    if (at("(")) return lapp(name, arguments());
    return lconst(name);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  Token tok_;
  std::vector<std::pair<std::string, std::string>> bound_;
};

class SexpFormulaParser {
 public:
  Formula formula(const Sexp& s) {
    if (s.is_atom()) {
      if (s.is_symbol("true")) return truth(true);
      if (s.is_symbol("false")) return truth(false);
      check_name(s);
      return pred(s.text);
    }
    if (s.items.empty()) s.fail(errc::syntax, "empty formula");
    const Sexp& head = s.items.front();
    if (!head.is_atom()) s.fail(errc::syntax, "expected an operator or predicate name");
    auto arity = [&](std::size_t n) {
      if (s.items.size() != n + 1) s.fail(errc::syntax, "'" + head.text + "' takes " + std::to_string(n) + " operands");
    };
    if (head.is_symbol("and") || head.is_symbol("or") || head.is_symbol("implies")) {
      arity(2);
      Connective op = head.text == "and" ? Connective::conj : head.text == "or" ? Connective::disj : Connective::implies;
      return binary(op, formula(s.items[1]), formula(s.items[2]));
    }
    if (head.is_symbol("not")) {
      arity(1);
      return negation(formula(s.items[1]));
    }
    if (head.is_symbol("=")) {
      arity(2);
      return equality(term(s.items[1]), term(s.items[2]));
    }
    if (head.is_symbol("exists") || head.is_symbol("forall")) {
      arity(2);
      auto [var, sort] = binder(s.items[1]);
      bound_.emplace_back(var, sort);
      Formula body = formula(s.items[2]);
      bound_.pop_back();
      return quant(head.text == "exists" ? Quantifier::exists : Quantifier::forall, var, sort, body);
    }
    check_name(head);
    std::vector<LTerm> as;
    for (std::size_t i = 1; i < s.items.size(); ++i) as.push_back(term(s.items[i]));
    return pred(head.text, std::move(as));
  }

  LTerm term(const Sexp& s) {
    if (s.is_atom()) {
      check_name(s);
      for (auto it = bound_.rbegin(); it != bound_.rend(); ++it)
        if (it->first == s.text) return lvar(s.text, it->second);
      return lconst(s.text);
    }
    if (s.items.size() < 2 || !s.items.front().is_atom()) s.fail(errc::syntax, "expected a term");
    const Sexp& head = s.items.front();
    if (head.is_symbol("eps") || head.is_symbol("tau") || head.is_symbol("the")) {
      if (s.items.size() != 3) s.fail(errc::syntax, "expected (eps (VAR SORT) FORMULA)");
      EpsMode mode = head.text == "eps" ? EpsMode::indefinite
                     : head.text == "the" ? EpsMode::definite
                                          : EpsMode::universal;
      auto [var, sort] = binder(s.items[1]);
      bound_.emplace_back(var, sort);
      Formula body = formula(s.items[2]);
      bound_.pop_back();
      return eps_term(mode, var, sort, body);
    }
    check_name(head);
    std::vector<LTerm> as;
    for (std::size_t i = 1; i < s.items.size(); ++i) as.push_back(term(s.items[i]));
    return lapp(head.text, std::move(as));
  }

 private:
  static void check_name(const Sexp& s) {
    if (!s.is_atom() || is_formula_keyword(s.text) || s.text == "and" || s.text == "or" ||
        s.text == "not" || s.text == "implies" || s.text == "=")
      s.fail(errc::syntax, "unexpected '" + s.text + "'");
  }

  static std::pair<std::string, std::string> binder(const Sexp& s) {
    if (!s.is_list() || s.items.size() != 2 || !s.items[0].is_symbol() || !s.items[1].is_symbol())
      s.fail(errc::syntax, "expected (VAR SORT)");
    return {s.items[0].text, s.items[1].text};
  }

  std::vector<std::pair<std::string, std::string>> bound_;
};

}  // namespace detail

// Parses the ASCII or s-expression rendering. Names bound by an enclosing
// quantifier or ε become variables; all other names are constants.
inline Formula parse_formula(std::string_view text, FormulaStyle style = FormulaStyle::ascii) {
  if (style == FormulaStyle::sexpr) {
    detail::SexpFormulaParser p;
    return p.formula(read_sexp(text));
  }
  if (style == FormulaStyle::unicode) throw error(errc::syntax, "the unicode style is output only");
  return detail::AsciiFormulaParser(text).parse();
}

}  // namespace lexsem
