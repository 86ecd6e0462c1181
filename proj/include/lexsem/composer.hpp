#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexsem/discourse.hpp"
#include "lexsem/error.hpp"
#include "lexsem/kernel.hpp"
#include "lexsem/lexicon.hpp"
#include "lexsem/sexpr.hpp"

namespace lexsem {

// Binary syntactic tree, function first: a leaf word or (fun arg).
class SynTree {
 public:
  static SynTree leaf(std::string word) {
    SynTree t;
    t.word_ = std::move(word);
    return t;
  }
  static SynTree node(SynTree fun, SynTree arg) {
    SynTree t;
    t.fun_ = std::make_shared<const SynTree>(std::move(fun));
    t.arg_ = std::make_shared<const SynTree>(std::move(arg));
    return t;
  }

  bool is_leaf() const { return fun_ == nullptr; }
  const std::string& word() const { return word_; }
  const SynTree& fun() const { return *fun_; }
  const SynTree& arg() const { return *arg_; }

 private:
  std::string word_;
  std::shared_ptr<const SynTree> fun_;
  std::shared_ptr<const SynTree> arg_;
};

namespace detail {
inline SynTree tree_from_sexp(const Sexp& s) {
  if (s.is_atom()) return SynTree::leaf(s.text);
  if (s.items.size() < 2) s.fail(errc::syntax, "a tree node needs a function and an argument");
  SynTree t = tree_from_sexp(s.items[0]);
  for (std::size_t i = 1; i < s.items.size(); ++i) t = SynTree::node(std::move(t), tree_from_sexp(s.items[i]));
  return t;
}
}  // namespace detail

// TREE ::= WORD | (TREE TREE+), extra arguments associating to the left.
inline SynTree parse_tree(const Sexp& s) { return detail::tree_from_sexp(s); }
inline SynTree parse_tree(std::string_view text) { return parse_tree(read_sexp(text)); }

inline std::string to_string(const SynTree& t) {
  if (t.is_leaf()) return needs_quoting(t.word()) ? quote_string(t.word()) : t.word();
  std::vector<const SynTree*> args;
  const SynTree* head = &t;
  while (!head->is_leaf()) {
    args.push_back(&head->arg());
    head = &head->fun();
  }
  std::string out = "(" + to_string(*head);
  for (auto it = args.rbegin(); it != args.rend(); ++it) out += " " + to_string(**it);
  return out + ")";
}

// Words of the tree in left-to-right order.
inline std::vector<std::string> leaves(const SynTree& t) {
  if (t.is_leaf()) return {t.word()};
  auto out = leaves(t.fun());
  auto rest = leaves(t.arg());
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

// ---------------------------------------------------------------------------

struct CoercionUse {
  std::string label;
  Rigidity rigidity = Rigidity::flexible;
};

struct OccurrenceCoercions {
  WordOccurrence occurrence;
  std::vector<CoercionUse> used;  // distinct labels, in order of use
};

struct CoercionReport {
  std::vector<OccurrenceCoercions> occurrences;
  std::vector<std::string> violations;

  const OccurrenceCoercions* find(std::size_t position) const {
    for (const auto& o : occurrences)
      if (o.occurrence.position == position) return &o;
    return nullptr;
  }

  OccurrenceCoercions& slot(const WordOccurrence& occ) {
    for (auto& o : occurrences)
      if (o.occurrence.position == occ.position && o.occurrence.sentence == occ.sentence) return o;
    occurrences.push_back({occ, {}});
    return occurrences.back();
  }
};

using TypeSubstitution = std::map<std::string, Type>;

namespace detail {

// One-way first-order matching: binds only variables in `vars`.
inline bool match_type(const Type& pattern, const Type& target, const std::set<std::string>& vars,
                       TypeSubstitution& subst, std::vector<std::string>& bound_p,
                       std::vector<std::string>& bound_t) {
  if (const auto* tv = pattern.as<TypeVar>()) {
    if (binder_depth(bound_p, tv->name) < 0 && vars.count(tv->name)) {
      // the target must not mention variables bound inside the pattern
      for (const auto& n : free_type_vars(target))
        if (binder_depth(bound_t, n) >= 0) return false;
      auto it = subst.find(tv->name);
      if (it != subst.end()) return it->second == target;
      subst.emplace(tv->name, target);
      return true;
    }
  }
  const auto& vp = pattern.node().v;
  const auto& vt = target.node().v;
  if (vp.index() != vt.index()) return false;
  if (std::holds_alternative<BaseSort>(vp) || std::holds_alternative<TypeVar>(vp))
    return type_equal(pattern, target, bound_p, bound_t);
  if (const auto* a = std::get_if<Arrow>(&vp)) {
    const auto& b = std::get<Arrow>(vt);
    return match_type(a->dom, b.dom, vars, subst, bound_p, bound_t) &&
           match_type(a->cod, b.cod, vars, subst, bound_p, bound_t);
  }
  const auto& a = std::get<Pi>(vp);
  const auto& b = std::get<Pi>(vt);
  bound_p.push_back(a.var);
  bound_t.push_back(b.var);
  bool ok = match_type(a.body, b.body, vars, subst, bound_p, bound_t);
  bound_p.pop_back();
  bound_t.pop_back();
  return ok;
}

inline bool match_type(const Type& pattern, const Type& target, const std::set<std::string>& vars,
                       TypeSubstitution& subst) {
  std::vector<std::string> bp, bt;
  TypeSubstitution trial = subst;
  if (!match_type(pattern, target, vars, trial, bp, bt)) return false;
  subst = std::move(trial);
  return true;
}

// Walks Π-binders and arrow domains of `fun_type`, matching successive
// domains against `arg_types`. In lenient mode a domain that fails to match
// is skipped (a coercion may repair it later).
inline TypeSubstitution instantiate(Type fun_type, std::span<const Type> arg_types, bool lenient) {
  std::set<std::string> vars;
  TypeSubstitution subst;
  std::size_t i = 0;
  for (;;) {
    if (const auto* p = fun_type.as<Pi>()) {
      std::string v = p->var;
      Type body = p->body;
      if (vars.count(v)) {
        std::set<std::string> taken = vars;
        auto ftv = free_type_vars(body);
        taken.insert(ftv.begin(), ftv.end());
        std::string renamed = fresh_name(v, taken);
        body = subst_type(body, v, type_var(renamed));
        v = renamed;
      }
      vars.insert(v);
      fun_type = body;
      continue;
    }
    const auto* a = fun_type.as<Arrow>();
    if (!a || i == arg_types.size()) break;
    if (!match_type(a->dom, arg_types[i], vars, subst) && !lenient) {
      throw error(errc::no_match, "cannot match " + to_string(a->dom) + " against " +
                                      to_string(arg_types[i]));
    }
    fun_type = a->cod;
    ++i;
  }
  return subst;
}

}  // namespace detail

// Type arguments for a Π-typed function from the types of its successive
// arguments, e.g. Πα.(α→t)→α against ani→t gives {α := ani}.
inline TypeSubstitution infer_type_instantiation(const Type& fun_type, std::span<const Type> arg_types) {
  return detail::instantiate(fun_type, arg_types, false);
}

inline TypeSubstitution infer_type_instantiation(const Type& fun_type, const Type& arg_type) {
  return infer_type_instantiation(fun_type, std::span<const Type>(&arg_type, 1));
}

// Applies the entry's unique option from `found` to `wanted`. As a
// function argument (the f, g slots of a polymorphic conjunction) the option
// term itself is returned; otherwise it is applied to `arg`. Every use is
// recorded against the occurrence, and a rigid option may not share an
// occurrence with any other option.
inline Term insert_coercions(const Term& arg, const Type& found, const Type& wanted,
                             const LexEntry& entry, CoercionReport& report,
                             const WordOccurrence& occurrence, bool as_function = false) {
  if (found == wanted && !as_function) return arg;
  auto options = entry.options_between(found, wanted);
  if (options.empty()) {
    throw error(errc::no_coercion_path, "no coercion of '" + entry.word + "' from " +
                                            to_string(found) + " to " + to_string(wanted));
  }
  if (options.size() > 1) {
    std::string labels;
    for (const auto* o : options) labels += (labels.empty() ? "" : ", ") + o->label;
    throw error(errc::ambiguous_coercion, "several coercions of '" + entry.word + "' from " +
                                              to_string(found) + " to " + to_string(wanted) +
                                              ": " + labels);
  }
  const Coercion& o = *options.front();
  auto& slot = report.slot(occurrence);
  bool seen = std::any_of(slot.used.begin(), slot.used.end(),
                          [&](const CoercionUse& u) { return u.label == o.label; });
  if (!seen) {
    std::vector<CoercionUse> next = slot.used;
    next.push_back({o.label, o.rigidity});
    bool any_rigid = std::any_of(next.begin(), next.end(),
                                 [](const CoercionUse& u) { return u.rigidity == Rigidity::rigid; });
    if (any_rigid && next.size() > 1) {
      std::string rigid, others;
      for (const auto& u : next) {
        std::string& dst = u.rigidity == Rigidity::rigid ? rigid : others;
        dst += (dst.empty() ? "" : ", ") + u.label;
      }
      std::string msg = "'" + entry.word + "' (word " + std::to_string(occurrence.position) +
                        "): rigid coercion " + rigid + " excludes " + others;
      report.violations.push_back(msg);
      throw error(errc::rigidity_violation, msg);
    }
    slot.used = std::move(next);
  }
  return as_function ? o.term : make_app(o.term, arg);
}

struct Composition {
  Term term;
  Type type;
  CoercionReport report;
};

namespace detail {

class Composer {
 public:
  Composer(const Lexicon& lex, DiscourseState& discourse)
      : lex_(lex), discourse_(discourse), sentence_(discourse.sentences) {}

  struct Piece {
    Term term;
    Type type;
    std::optional<WordOccurrence> occurrence;  // the token coercions are charged to
    std::string entry_word;                    // whose options may coerce the piece
    std::string label;                         // for diagnostics
  };

  Piece compose(const SynTree& tree) {
    std::vector<const SynTree*> arg_trees;
    const SynTree* head_tree = &tree;
    while (!head_tree->is_leaf()) {
      arg_trees.push_back(&head_tree->arg());
      head_tree = &head_tree->fun();
    }
    std::reverse(arg_trees.begin(), arg_trees.end());

    WordOccurrence head_occ{head_tree->word(), sentence_, next_position_++};
    const LexEntry& entry = lex_.lookup_entry(head_tree->word());
    Piece head = leaf_piece(entry, head_occ);

    std::vector<Piece> args;
    for (const auto* t : arg_trees) args.push_back(compose(*t));

    Term term = head.term;
    Type ty = head.type;
    std::size_t i = 0;
    std::vector<const Piece*> consumed;
    for (;;) {
      if (const auto* pi = ty.as<Pi>()) {
        if (i == args.size()) break;
        std::vector<Type> arg_types;
        for (std::size_t j = i; j < args.size(); ++j) arg_types.push_back(args[j].type);
        auto subst = detail::instantiate(ty, arg_types, true);
        auto it = subst.find(pi->var);
        if (it == subst.end()) {
          throw error(errc::no_match, "cannot determine the type argument " + pi->var + " of '" +
                                          head.label + "' (word " +
                                          std::to_string(head_occ.position) + ") from its arguments");
        }
        term = make_tyapp(term, it->second);
        ty = subst_type(pi->body, pi->var, it->second);
        continue;
      }
      const auto* arr = ty.as<Arrow>();
      if (!arr) break;
      if (i < args.size()) {
        const Piece& arg = args[i];
        term = make_app(term, coerce_argument(arg, arr->dom, head, head_occ));
        consumed.push_back(&arg);
        ty = arr->cod;
        ++i;
        continue;
      }
      // Implicit coercion slot S1 -> S2 after the syntactic arguments: filled
      // from the entry of the latest argument of sort S1.
      const auto* slot = arr->dom.as<Arrow>();
      if (!slot || !is_entity(slot->dom) || !is_entity(slot->cod)) break;
      const Piece* source = nullptr;
      for (auto it = consumed.rbegin(); it != consumed.rend(); ++it)
        if ((*it)->type == slot->dom && (*it)->occurrence) {
          source = *it;
          break;
        }
      if (!source) break;
      const LexEntry& src_entry = lex_.lookup_entry(source->entry_word);
      try {
        term = make_app(term, insert_coercions(source->term, slot->dom, slot->cod, src_entry, report_,
                                               *source->occurrence, true));
      } catch (const error& e) {
        if (e.code() != errc::no_coercion_path) throw;
        throw error(errc::type_clash, "'" + head.label + "' (word " +
                                          std::to_string(head_occ.position) + ") needs '" +
                                          source->label + "' as " + to_string(slot->cod) +
                                          " but it has sort " + to_string(slot->dom) +
                                          " and no coercion: " + e.message());
      }
      ty = arr->cod;
    }
    if (i < args.size()) {
      throw error(errc::type_clash, "'" + head.label + "' (word " + std::to_string(head_occ.position) +
                                        ") of type " + to_string(head.type) + " cannot take argument '" +
                                        args[i].label + "'");
    }

    Piece out{term, ty, head.occurrence, head.entry_word, head.label};
    if (is_determiner(entry.mode) && !args.empty()) on_determiner(entry, args.front(), out);
    return out;
  }

  CoercionReport take_report() { return std::move(report_); }

 private:
  static bool is_determiner(DeterminerMode m) {
    return m == DeterminerMode::indefinite || m == DeterminerMode::definite ||
           m == DeterminerMode::universal;
  }

  bool is_entity(const Type& ty) const {
    const auto* b = ty.as<BaseSort>();
    return b && lex_.is_entity_sort(b->name);
  }

  Piece leaf_piece(const LexEntry& entry, const WordOccurrence& occ) {
    if (entry.mode == DeterminerMode::pronoun) {
      std::optional<std::string> hint;
      const auto& hint_sort = entry.principal_type.as<BaseSort>()->name;
      if (hint_sort != kEntitySort) hint = hint_sort;
      const Referent& ref = resolve_pronoun_referent(discourse_, hint);
      return Piece{ref.term, base_type(ref.sort), occ, ref.introduced_by.word, entry.word};
    }
    return Piece{entry.principal, entry.principal_type, occ, entry.word, entry.word};
  }

  Term coerce_argument(const Piece& arg, const Type& wanted, const Piece& fun,
                       const WordOccurrence& fun_occ) {
    if (arg.type == wanted) return arg.term;
    auto clash = [&](const std::string& detail) {
      return error(errc::type_clash,
                   "'" + fun.label + "' (word " + std::to_string(fun_occ.position) + ") expects " +
                       to_string(wanted) + " but '" + arg.label + "'" +
                       (arg.occurrence ? " (word " + std::to_string(arg.occurrence->position) + ")"
                                       : std::string()) +
                       " has type " + to_string(arg.type) + detail);
    };
    if (!is_entity(wanted) || !is_entity(arg.type) || !arg.occurrence) throw clash("");
    const LexEntry* entry = lex_.find_entry(arg.entry_word);
    if (!entry) throw clash("");
    try {
      return insert_coercions(arg.term, arg.type, wanted, *entry, report_, *arg.occurrence);
    } catch (const error& e) {
      if (e.code() == errc::no_coercion_path) throw clash(", and no coercion applies");
      throw;
    }
  }

  void on_determiner(const LexEntry& det, const Piece& noun, Piece& out) {
    auto parts = split_choice_term(out.term);
    if (!parts) return;
    auto& [sort, predicate] = *parts;
    WordOccurrence source = noun.occurrence.value_or(WordOccurrence{noun.entry_word, sentence_, 0});
    source.word = noun.entry_word;
    out.occurrence = noun.occurrence;
    out.entry_word = noun.entry_word;
    out.label = det.word + " " + noun.label;
    if (det.mode == DeterminerMode::definite) {
      if (auto res = resolve_definite(discourse_, sort, predicate, &lex_)) {
        out.term = res->referent.term;
        out.entry_word = res->referent.introduced_by.word;
        if (res->via) {
          const LexEntry& ante = lex_.lookup_entry(res->referent.introduced_by.word);
          out.term = insert_coercions(res->referent.term, base_type(res->referent.sort),
                                      base_type(sort), ante, report_, source);
          out.entry_word = noun.entry_word;
        }
        return;
      }
    }
    if (det.mode == DeterminerMode::indefinite || det.mode == DeterminerMode::definite) {
      discourse_ = register_referent(std::move(discourse_), out.term, sort, predicate, source);
    }
  }

  const Lexicon& lex_;
  DiscourseState& discourse_;
  std::size_t sentence_;
  std::size_t next_position_ = 0;
  CoercionReport report_;
};

}  // namespace detail

// Builds the (unreduced) term of a sentence tree. Determiners register or
// resolve discourse referents in `discourse`, which is left untouched when
// composition fails.
inline Composition compose(const SynTree& tree, const Lexicon& lex, DiscourseState& discourse) {
  DiscourseState working = discourse;
  detail::Composer c(lex, working);
  auto piece = c.compose(tree);
  Composition out{piece.term, piece.type, c.take_report()};
  Type checked = type_of(lex.context(), out.term);
  if (checked != out.type) {
    throw error(errc::type_clash, "composed term has type " + to_string(checked) + ", expected " +
                                      to_string(out.type));
  }
  working.sentences += 1;
  discourse = std::move(working);
  return out;
}

}  // namespace lexsem
