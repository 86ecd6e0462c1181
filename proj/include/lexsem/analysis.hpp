#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lexsem/composer.hpp"
#include "lexsem/discourse.hpp"
#include "lexsem/formula.hpp"
#include "lexsem/kernel.hpp"
#include "lexsem/lexicon.hpp"
#include "lexsem/logic.hpp"

namespace lexsem {

enum class PresuppositionMode { separate, conjoin, off };

struct AnalysisOptions {
  PresuppositionMode presuppositions = PresuppositionMode::separate;
  bool rewrite = false;
  bool trace = false;
  std::size_t step_budget = 100000;
};

struct AnalysisResult {
  SynTree tree;
  Term composed;
  Type type;
  std::vector<Term> trace;  // the term after each contraction, when tracing
  Term normal;
  std::size_t steps = 0;
  Formula formula;
  std::vector<Formula> presuppositions;
  std::optional<Formula> conjoined;  // presuppositions ∧ formula
  std::optional<Formula> rewritten;
  CoercionReport report;
  std::vector<std::string> diagnostics;
};

namespace detail {

inline Formula with_presuppositions(const std::vector<Formula>& presups, const Formula& f) {
  std::vector<Formula> parts = presups;
  parts.push_back(f);
  return conjoin(parts);
}

inline void add_unique(std::vector<Formula>& out, const std::vector<Formula>& more) {
  for (const auto& f : more) {
    bool dup = false;
    for (const auto& g : out) dup = dup || alpha_eq(f, g);
    if (!dup) out.push_back(f);
  }
}

}  // namespace detail

// Composes, normalizes and reads off the formula of one sentence. The
// discourse state is updated only if the whole analysis succeeds.
inline AnalysisResult analyze(const SynTree& tree, const Lexicon& lex, DiscourseState& discourse,
                              const AnalysisOptions& opts = {}) {
  AnalysisResult r;
  r.tree = tree;
  DiscourseState working = discourse;
  const std::size_t known = working.referents.size();
  Composition c = compose(tree, lex, working);
  r.composed = c.term;
  r.type = c.type;
  r.report = std::move(c.report);

  NormalizeOptions nopts;
  nopts.step_budget = opts.step_budget;
  if (opts.trace) nopts.on_step = [&](std::size_t, const Term& t) { r.trace.push_back(t); };
  Reduction red = reduce(r.composed, nopts);
  r.normal = red.term;
  r.steps = red.steps;
  r.formula = extract_formula(r.normal);

  if (opts.presuppositions != PresuppositionMode::off) r.presuppositions = presuppositions(r.normal);
  Formula target = r.formula;
  if (opts.presuppositions == PresuppositionMode::conjoin) {
    r.conjoined = detail::with_presuppositions(r.presuppositions, r.formula);
    target = *r.conjoined;
  }
  if (opts.rewrite) {
    RewriteOptions ro;
    ro.accommodate_presuppositions = opts.presuppositions == PresuppositionMode::conjoin;
    r.rewritten = rewrite_hilbert(target, ro);
  }
  for (std::size_t i = known; i < working.referents.size(); ++i) {
    const Referent& ref = working.referents[i];
    r.diagnostics.push_back("referent " + std::to_string(ref.index) + " of sort " + ref.sort +
                            " introduced by " + ref.introduced_by.word);
  }
  discourse = std::move(working);
  return r;
}

inline AnalysisResult analyze(const SynTree& tree, const Lexicon& lex, const AnalysisOptions& opts = {}) {
  DiscourseState fresh;
  return analyze(tree, lex, fresh, opts);
}

struct SessionResult {
  std::vector<AnalysisResult> sentences;
  // Presuppositions of all sentences (in conjoin mode), then every assertion.
  Formula discourse;
  std::optional<Formula> rewritten;
  DiscourseState state;
};

// A session file holds one tree per top-level s-expression; `;` starts a comment.
inline std::vector<SynTree> parse_session(std::string_view text) {
  std::vector<SynTree> out;
  for (const Sexp& s : read_sexps(text)) out.push_back(parse_tree(s));
  return out;
}

inline SessionResult analyze_session(const std::vector<SynTree>& trees, const Lexicon& lex,
                                     const AnalysisOptions& opts = {}) {
  SessionResult out;
  AnalysisOptions per_sentence = opts;
  if (per_sentence.presuppositions == PresuppositionMode::conjoin)
    per_sentence.presuppositions = PresuppositionMode::separate;
  std::vector<Formula> presups;
  std::vector<Formula> assertions;
  for (const auto& tree : trees) {
    out.sentences.push_back(analyze(tree, lex, out.state, per_sentence));
    detail::add_unique(presups, out.sentences.back().presuppositions);
    assertions.push_back(out.sentences.back().formula);
  }
  const bool conjoined = opts.presuppositions == PresuppositionMode::conjoin;
  std::vector<Formula> parts = conjoined ? presups : std::vector<Formula>{};
  parts.insert(parts.end(), assertions.begin(), assertions.end());
  out.discourse = conjoin(parts);
  if (opts.rewrite) {
    RewriteOptions ro;
    ro.accommodate_presuppositions = conjoined;
    out.rewritten = rewrite_hilbert(out.discourse, ro);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering

inline std::string render_coercions(const CoercionReport& report) {
  std::string out;
  for (const auto& occ : report.occurrences)
    for (const auto& use : occ.used)
      out += occ.occurrence.word + "@" + std::to_string(occ.occurrence.position) + " " + use.label + " " +
             std::string(to_string(use.rigidity)) + "\n";
  return out;
}

inline std::string render_text(const AnalysisResult& r) {
  std::string out;
  out += "tree: " + to_string(r.tree) + "\n";
  out += "term: " + to_string(r.composed) + "\n";
  out += "type: " + to_string(r.type) + "\n";
  for (std::size_t i = 0; i < r.trace.size(); ++i)
    out += "step " + std::to_string(i + 1) + ": " + to_string(r.trace[i]) + "\n";
  out += "normal: " + to_string(r.normal) + "\n";
  out += "steps: " + std::to_string(r.steps) + "\n";
  out += "formula: " + print_formula(r.formula) + "\n";
  for (const auto& p : r.presuppositions) out += "presupposition: " + print_formula(p) + "\n";
  if (r.conjoined) out += "conjoined: " + print_formula(*r.conjoined) + "\n";
  if (r.rewritten) out += "rewritten: " + print_formula(*r.rewritten) + "\n";
  std::string co = render_coercions(r.report);
  std::size_t start = 0;
  while (start < co.size()) {
    std::size_t end = co.find('\n', start);
    out += "coercion: " + co.substr(start, end - start) + "\n";
    start = end + 1;
  }
  for (const auto& d : r.diagnostics) out += "note: " + d + "\n";
  return out;
}

inline std::string render_sexpr(const AnalysisResult& r) {
  auto fs = [](const Formula& f) { return print_formula(f, FormulaStyle::sexpr); };
  std::string out = "(analysis\n";
  out += "  (tree " + to_string(r.tree) + ")\n";
  out += "  (term " + to_string(r.composed) + ")\n";
  out += "  (type " + to_string(r.type) + ")\n";
  if (!r.trace.empty()) {
    out += "  (trace";
    for (const auto& t : r.trace) out += "\n    " + to_string(t);
    out += ")\n";
  }
  out += "  (normal " + to_string(r.normal) + ")\n";
  out += "  (steps " + std::to_string(r.steps) + ")\n";
  out += "  (formula " + fs(r.formula) + ")\n";
  out += "  (presuppositions";
  for (const auto& p : r.presuppositions) out += " " + fs(p);
  out += ")\n";
  if (r.conjoined) out += "  (conjoined " + fs(*r.conjoined) + ")\n";
  if (r.rewritten) out += "  (rewritten " + fs(*r.rewritten) + ")\n";
  out += "  (coercions";
  for (const auto& occ : r.report.occurrences)
    for (const auto& use : occ.used)
      out += " (" + occ.occurrence.word + " " + std::to_string(occ.occurrence.position) + " " + use.label +
             " " + std::string(to_string(use.rigidity)) + ")";
  out += "))\n";
  return out;
}

inline std::string render_text(const SessionResult& s) {
  std::string out;
  for (std::size_t i = 0; i < s.sentences.size(); ++i) {
    out += "# sentence " + std::to_string(i + 1) + "\n";
    out += render_text(s.sentences[i]);
  }
  out += "# discourse\n";
  out += "discourse: " + print_formula(s.discourse) + "\n";
  if (s.rewritten) out += "rewritten: " + print_formula(*s.rewritten) + "\n";
  return out;
}

inline std::string render_sexpr(const SessionResult& s) {
  std::string out = "(session\n";
  for (const auto& r : s.sentences) out += render_sexpr(r);
  out += "(discourse " + print_formula(s.discourse, FormulaStyle::sexpr) + ")\n";
  if (s.rewritten) out += "(rewritten " + print_formula(*s.rewritten, FormulaStyle::sexpr) + ")\n";
  return out + ")\n";
}

}  // namespace lexsem
