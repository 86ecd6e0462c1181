#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lexsem/error.hpp"
#include "lexsem/kernel.hpp"
#include "lexsem/lexicon.hpp"

namespace lexsem {

// A word token: its sentence number within a session and its left-to-right
// leaf position in that sentence's tree.
struct WordOccurrence {
  std::string word;
  std::size_t sentence = 0;
  std::size_t position = 0;
};

struct Referent {
  std::size_t index = 0;
  Term term;  // the ε-term, e.g. ((tyapp eps ani) chat)
  std::string sort;
  Term predicate;  // its restriction, e.g. chat
  WordOccurrence introduced_by;
};

// Referents in order of introduction; the last one is the most salient.
struct DiscourseState {
  std::vector<Referent> referents;
  std::size_t next_index = 0;
  std::size_t sentences = 0;
};

// Matches (tyapp eps|ieps SORT) PRED and returns (sort, predicate).
inline std::optional<std::pair<std::string, Term>> split_choice_term(const Term& t) {
  const auto* app = t.as<App>();
  if (!app) return std::nullopt;
  const auto* ta = app->fun.as<TyApp>();
  if (!ta || !ta->ty.is_base()) return std::nullopt;
  if (!is_const(ta->fun, builtin::eps) && !is_const(ta->fun, builtin::ieps)) return std::nullopt;
  return std::make_pair(ta->ty.as<BaseSort>()->name, app->arg);
}

// Appends a referent. Registration is by token: registering an α-equal term
// twice yields two referents.
inline DiscourseState register_referent(DiscourseState state, Term eps_term, std::string sort,
                                        Term predicate, WordOccurrence source) {
  if (!split_choice_term(eps_term)) {
    throw error(errc::type_clash, "referent term is not an ε-application: " + to_string(eps_term));
  }
  Referent r;
  r.index = state.next_index++;
  r.term = std::move(eps_term);
  r.sort = std::move(sort);
  r.predicate = std::move(predicate);
  r.introduced_by = std::move(source);
  state.referents.push_back(std::move(r));
  return state;
}

enum class MatchTier { predicate, sort, coercion };

struct Resolution {
  Referent referent;
  MatchTier tier = MatchTier::predicate;
  // Set for coercion matches: the option of the antecedent's word used to
  // reach the requested sort.
  std::optional<Coercion> via;
};

// Most salient referent for a definite description: newest first, trying an
// α-equal restriction of the right sort, then any referent of the sort, then
// one whose introducing word has a single coercion into the sort.
inline std::optional<Resolution> resolve_definite(const DiscourseState& state, const std::string& sort,
                                                  const Term& predicate,
                                                  const Lexicon* lex = nullptr) {
  const auto& refs = state.referents;
  for (auto it = refs.rbegin(); it != refs.rend(); ++it)
    if (it->sort == sort && alpha_eq(it->predicate, predicate))
      return Resolution{*it, MatchTier::predicate, std::nullopt};
  for (auto it = refs.rbegin(); it != refs.rend(); ++it)
    if (it->sort == sort) return Resolution{*it, MatchTier::sort, std::nullopt};
  if (lex) {
    const Type want = base_type(sort);
    for (auto it = refs.rbegin(); it != refs.rend(); ++it) {
      const LexEntry* entry = lex->find_entry(it->introduced_by.word);
      if (!entry) continue;
      auto options = entry->options_between(base_type(it->sort), want);
      if (options.size() == 1) return Resolution{*it, MatchTier::coercion, *options.front()};
    }
  }
  return std::nullopt;
}

// The most recent referent compatible with the optional sort hint.
inline const Referent& resolve_pronoun_referent(const DiscourseState& state,
                                                const std::optional<std::string>& sort) {
  for (auto it = state.referents.rbegin(); it != state.referents.rend(); ++it)
    if (!sort || it->sort == *sort) return *it;
  throw error(errc::no_antecedent,
              "no antecedent" + (sort ? " of sort " + *sort : std::string()) + " for pronoun");
}

// E-type reading: the pronoun denotes a copy of its antecedent's term.
inline Term resolve_pronoun(const DiscourseState& state, const std::optional<std::string>& sort) {
  return resolve_pronoun_referent(state, sort).term;
}

}  // namespace lexsem
