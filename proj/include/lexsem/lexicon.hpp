#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexsem/error.hpp"
#include "lexsem/kernel.hpp"
#include "lexsem/sexpr.hpp"

namespace lexsem {

enum class Rigidity { rigid, flexible };

// `pronoun` marks E-type pronouns: the principal is a constant whose type is
// the pronoun's sort hint (`e` for no hint).
enum class DeterminerMode { none, indefinite, definite, universal, pronoun };

inline std::string_view to_string(Rigidity r) { return r == Rigidity::rigid ? "rigid" : "flexible"; }

inline std::string_view to_string(DeterminerMode m) {
  switch (m) {
    case DeterminerMode::none: return "none";
    case DeterminerMode::indefinite: return "indefinite";
    case DeterminerMode::definite: return "definite";
    case DeterminerMode::universal: return "universal";
    case DeterminerMode::pronoun: return "pronoun";
  }
  return "none";
}

// An optional lambda-term of an entry, turning the word's referent from one
// sort into another.
struct Coercion {
  std::string label;
  Type source;
  Type target;
  Term term;
  Rigidity rigidity = Rigidity::flexible;
  // False when the term is the opaque constant named `label`.
  bool defined = false;
};

struct LexEntry {
  std::string word;
  Term principal;
  Type principal_type;
  std::vector<Coercion> options;
  DeterminerMode mode = DeterminerMode::none;

  // Options from `source` to `target`, in declaration order.
  std::vector<const Coercion*> options_between(const Type& source, const Type& target) const {
    std::vector<const Coercion*> out;
    for (const auto& o : options)
      if (o.source == source && o.target == target) out.push_back(&o);
    return out;
  }
};

struct ConstDecl {
  std::string name;
  Type type;
};

// The sort a word refers to: the principal's own sort for names, the domain
// of a noun predicate `s -> t`.
inline std::optional<Type> referent_sort(const Type& principal_type) {
  if (principal_type.is_base() && !principal_type.is_base(kTruthSort)) return principal_type;
  if (const auto* a = principal_type.as<Arrow>()) {
    if (a->dom.is_base() && a->cod.is_base(kTruthSort)) return a->dom;
  }
  return std::nullopt;
}

class Lexicon {
 public:
  Lexicon() : ctx_(TypingContext::with_builtins()) {}

  // Declared sorts, built-ins (t, e, event) first.
  const std::vector<std::string>& sorts() const { return ctx_.sorts(); }
  bool has_sort(const std::string& s) const { return ctx_.has_sort(s); }

  // Entity sorts: everything except t and event.
  bool is_entity_sort(const std::string& s) const {
    return has_sort(s) && s != kTruthSort && s != kEventSort;
  }

  // Constants declared by the lexicon (built-ins excluded), in order. Option
  // labels without a defining term appear here as well.
  std::vector<ConstDecl> constants() const {
    std::vector<ConstDecl> out;
    for (const auto& [name, ty] : ctx_.constants())
      if (!TypingContext::is_builtin_name(name)) out.push_back({name, ty});
    return out;
  }

  const TypingContext& context() const { return ctx_; }
  const std::vector<LexEntry>& entries() const { return entries_; }

  const LexEntry* find_entry(const std::string& word) const {
    auto it = index_.find(word);
    return it == index_.end() ? nullptr : &entries_[it->second];
  }

  const LexEntry& lookup_entry(const std::string& word) const {
    if (const auto* e = find_entry(word)) return *e;
    throw error(errc::not_found, "word '" + word + "' is not in the lexicon");
  }

  bool is_coercion_label(const std::string& name) const { return coercion_labels_.count(name) > 0; }

  // Mutators used by the loader; each validates its input.
  void add_sort(const std::string& name) { ctx_.declare_sort(name); }

  void add_const(const std::string& name, Type type) {
    check_closed(type, "constant " + name);
    ctx_.declare_const(name, std::move(type));
  }

  void add_entry(LexEntry entry);

 private:
  void check_closed(const Type& ty, const std::string& what) const {
    if (!free_type_vars(ty).empty()) {
      throw error(errc::invalid_lexicon, what + " has free type variables in " + to_string(ty));
    }
  }

  TypingContext ctx_;
  std::vector<LexEntry> entries_;
  std::map<std::string, std::size_t> index_;
  std::set<std::string> coercion_labels_;
};

inline void Lexicon::add_entry(LexEntry entry) {
  if (index_.count(entry.word))
    throw error(errc::duplicate, "duplicate entry for word '" + entry.word + "'");
  if (!free_vars(entry.principal).empty()) {
    throw error(errc::invalid_lexicon, "principal term of '" + entry.word + "' is not closed");
  }
  try {
    entry.principal_type = type_of(ctx_, entry.principal);
  } catch (const error& e) {
    throw error(e.code(), "ill-typed principal term for '" + entry.word + "': " + e.message());
  }
  check_closed(entry.principal_type, "principal term of '" + entry.word + "'");

  switch (entry.mode) {
    case DeterminerMode::none: break;
    case DeterminerMode::indefinite:
    case DeterminerMode::definite:
    case DeterminerMode::universal: {
      const std::string_view want = entry.mode == DeterminerMode::indefinite ? builtin::eps
                                    : entry.mode == DeterminerMode::definite ? builtin::ieps
                                                                             : builtin::tau;
      if (!is_const(entry.principal, want)) {
        throw error(errc::invalid_lexicon,
                    "entry '" + entry.word + "' declares mode " +
                        std::string(to_string(entry.mode)) + " but its principal term is " +
                        to_string(entry.principal) + " : " + to_string(entry.principal_type) +
                        ", not " + std::string(want));
      }
      break;
    }
    case DeterminerMode::pronoun:
      if (!entry.principal.as<Const>() || !entry.principal_type.is_base() ||
          !is_entity_sort(entry.principal_type.as<BaseSort>()->name)) {
        throw error(errc::invalid_lexicon, "pronoun '" + entry.word +
                                               "' must have a constant of an entity sort as principal");
      }
      break;
  }

  auto referent = referent_sort(entry.principal_type);
  for (auto& o : entry.options) {
    for (const Type* ty : {&o.source, &o.target}) {
      if (!ty->is_base() || !is_entity_sort(ty->as<BaseSort>()->name)) {
        throw error(errc::invalid_lexicon, "option " + o.label + " of '" + entry.word +
                                               "' must map between entity sorts, found " +
                                               to_string(*ty));
      }
    }
    if (!referent || *referent != o.source) {
      throw error(errc::invalid_lexicon,
                  "option " + o.label + " of '" + entry.word + "' starts at " +
                      to_string(o.source) + " but the word refers to " +
                      (referent ? to_string(*referent) : std::string("no entity sort")));
    }
    const Type want = arrow(o.source, o.target);
    if (!o.defined) {
      if (const Type* existing = ctx_.lookup_const(o.label)) {
        if (*existing != want) {
          throw error(errc::invalid_lexicon, "option " + o.label + " redeclared at " +
                                                 to_string(want) + ", was " + to_string(*existing));
        }
      } else {
        ctx_.declare_const(o.label, want);
      }
      o.term = make_const(o.label, want);
    } else {
      Type got;
      try {
        got = type_of(ctx_, o.term);
      } catch (const error& e) {
        throw error(e.code(), "ill-typed option " + o.label + " of '" + entry.word + "': " + e.message());
      }
      if (got != want) {
        throw error(errc::type_clash, "option " + o.label + " of '" + entry.word + "' expected " +
                                          to_string(want) + ", found " + to_string(got));
      }
    }
    coercion_labels_.insert(o.label);
  }
  index_[entry.word] = entries_.size();
  entries_.push_back(std::move(entry));
}

namespace detail {

inline const std::string& word_of(const Sexp& s) {
  if (!s.is_atom()) s.fail(errc::syntax, "expected a word");
  return s.text;
}

inline Rigidity parse_rigidity(const Sexp& s) {
  if (s.is_symbol("rigid")) return Rigidity::rigid;
  if (s.is_symbol("flexible")) return Rigidity::flexible;
  s.fail(errc::syntax, "expected rigid or flexible");
}

inline DeterminerMode parse_mode(const Sexp& s) {
  if (s.is_symbol("indefinite")) return DeterminerMode::indefinite;
  if (s.is_symbol("definite")) return DeterminerMode::definite;
  if (s.is_symbol("universal")) return DeterminerMode::universal;
  if (s.is_symbol("pronoun")) return DeterminerMode::pronoun;
  s.fail(errc::syntax, "expected indefinite, definite, universal or pronoun");
}

}  // namespace detail

// Grammar:
//   (sort SYM) | (const SYM TYPE)
//   (entry WORD (principal TERM) (option SYM TYPE RIGIDITY [TERM])* (mode MODE)?)
inline Lexicon load_lexicon(std::string_view text) {
  Lexicon lex;
  for (const Sexp& decl : read_sexps(text)) {
    if (decl.is_form("sort")) {
      if (decl.items.size() != 2 || !decl.items[1].is_symbol())
        decl.fail(errc::syntax, "expected (sort SYM)");
      lex.add_sort(decl.items[1].text);
    } else if (decl.is_form("const")) {
      if (decl.items.size() != 3 || !decl.items[1].is_symbol())
        decl.fail(errc::syntax, "expected (const SYM TYPE)");
      Type ty = parse_type(decl.items[2], lex.context());
      try {
        lex.add_const(decl.items[1].text, std::move(ty));
      } catch (const error& e) {
        decl.fail(e.code(), e.message());
      }
    } else if (decl.is_form("entry")) {
      if (decl.items.size() < 3) decl.fail(errc::syntax, "expected (entry WORD (principal TERM) ...)");
      LexEntry entry;
      entry.word = detail::word_of(decl.items[1]);
      bool have_principal = false;
      bool have_mode = false;
      for (std::size_t i = 2; i < decl.items.size(); ++i) {
        const Sexp& part = decl.items[i];
        if (part.is_form("principal")) {
          if (part.items.size() != 2 || have_principal)
            part.fail(errc::syntax, "expected a single (principal TERM)");
          entry.principal = parse_term(part.items[1], lex.context());
          have_principal = true;
        } else if (part.is_form("option")) {
          if ((part.items.size() != 4 && part.items.size() != 5) || !part.items[1].is_symbol())
            part.fail(errc::syntax, "expected (option SYM TYPE RIGIDITY [TERM])");
          Coercion c;
          c.label = part.items[1].text;
          Type ty = parse_type(part.items[2], lex.context());
          const auto* arr = ty.as<Arrow>();
          if (!arr) part.fail(errc::syntax, "option type must be an arrow SOURCE -> TARGET");
          c.source = arr->dom;
          c.target = arr->cod;
          c.rigidity = detail::parse_rigidity(part.items[3]);
          if (part.items.size() == 5) {
            c.term = parse_term(part.items[4], lex.context());
            c.defined = true;
          }
          entry.options.push_back(std::move(c));
        } else if (part.is_form("mode")) {
          if (part.items.size() != 2 || have_mode) part.fail(errc::syntax, "expected a single (mode MODE)");
          entry.mode = detail::parse_mode(part.items[1]);
          have_mode = true;
        } else {
          part.fail(errc::syntax, "expected principal, option or mode");
        }
      }
      if (!have_principal) decl.fail(errc::syntax, "entry '" + entry.word + "' has no principal term");
      try {
        lex.add_entry(std::move(entry));
      } catch (const error& e) {
        decl.fail(e.code(), e.message());
      }
    } else {
      decl.fail(errc::syntax, "expected sort, const or entry declaration");
    }
  }
  return lex;
}

// Canonical text form, accepted back by load_lexicon.
inline std::string print_lexicon(const Lexicon& lex) {
  std::string out;
  for (const auto& s : lex.sorts()) {
    if (s == kTruthSort || s == kEntitySort || s == kEventSort) continue;
    out += "(sort " + s + ")\n";
  }
  std::set<std::string> implicit;
  for (const auto& e : lex.entries())
    for (const auto& o : e.options)
      if (!o.defined) implicit.insert(o.label);
  for (const auto& c : lex.constants()) {
    if (implicit.count(c.name)) continue;
    out += "(const " + c.name + " " + to_string(c.type) + ")\n";
  }
  for (const auto& e : lex.entries()) {
    out += "(entry " + (needs_quoting(e.word) ? quote_string(e.word) : e.word) + "\n  (principal " +
           to_string(e.principal) + ")";
    for (const auto& o : e.options) {
      out += "\n  (option " + o.label + " " + to_string(arrow(o.source, o.target)) + " " +
             std::string(to_string(o.rigidity));
      if (o.defined) out += " " + to_string(o.term);
      out += ")";
    }
    if (e.mode != DeterminerMode::none) out += "\n  (mode " + std::string(to_string(e.mode)) + ")";
    out += ")\n";
  }
  return out;
}

// Registers hat_<sort> : e -> t, the predicate of being of that sort. Returns
// the extended lexicon and the declaration; repeated calls reuse the constant.
inline std::pair<Lexicon, ConstDecl> type_to_predicate(const Lexicon& lex, const std::string& sort) {
  if (!lex.has_sort(sort)) throw error(errc::unknown_sort, "unknown sort '" + sort + "'");
  if (!lex.is_entity_sort(sort)) {
    throw error(errc::unknown_sort, "'" + sort + "' is not an entity sort");
  }
  ConstDecl decl{"hat_" + sort, arrow(entity_type(), truth_type())};
  Lexicon out = lex;
  if (const Type* existing = out.context().lookup_const(decl.name)) {
    if (*existing != decl.type) {
      throw error(errc::invalid_lexicon, decl.name + " is already declared at " + to_string(*existing));
    }
    return {std::move(out), decl};
  }
  out.add_const(decl.name, decl.type);
  return {std::move(out), decl};
}

}  // namespace lexsem
