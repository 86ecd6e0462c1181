#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "lexsem/json.hpp"
#include "lexsem/lexsem.hpp"

namespace {

using namespace lexsem;

std::string read_file(const std::string& path) {
  if (path == "-") return std::string(std::istreambuf_iterator<char>(std::cin), {});
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::io, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int report(const error& e, const std::string& where = {}) {
  std::cerr << "lexsem: " << (where.empty() ? "" : where + ": ") << e.what() << "\n";
  return is_semantic_error(e.code()) ? 2 : 1;
}

struct AnalyzeArgs {
  std::string lexicon;
  std::optional<std::string> tree;
  std::optional<std::string> session;
  std::string format = "text";
  std::string presuppositions = "separate";
  bool rewrite = false;
  bool trace = false;
};

int run_analyze(const AnalyzeArgs& a) {
  std::string where = a.lexicon;
  try {
    Lexicon lex = load_lexicon(read_file(a.lexicon));
    AnalysisOptions opts;
    opts.rewrite = a.rewrite;
    opts.trace = a.trace;
    if (a.presuppositions == "conjoin") opts.presuppositions = PresuppositionMode::conjoin;
    if (a.presuppositions == "off") opts.presuppositions = PresuppositionMode::off;
    if (a.session) {
      where = *a.session;
      SessionResult s = analyze_session(parse_session(read_file(*a.session)), lex, opts);
      where.clear();
      if (a.format == "json") {
        std::cout << to_json(s).dump(2) << "\n";
      } else if (a.format == "sexpr") {
        std::cout << render_sexpr(s);
      } else {
        std::cout << render_text(s);
      }
      return 0;
    }
    where = "tree";
    SynTree tree = parse_tree(*a.tree);
    where.clear();
    AnalysisResult r = analyze(tree, lex, opts);
    if (a.format == "json") {
      std::cout << to_json(r).dump(2) << "\n";
    } else if (a.format == "sexpr") {
      std::cout << render_sexpr(r);
    } else {
      std::cout << render_text(r);
    }
    return 0;
  } catch (const error& e) {
    return report(e, where);
  }
}

struct EvalArgs {
  std::optional<std::string> model;
  std::string formula;
  std::string syntax = "ascii";
  std::optional<std::string> equiv;
  int max_carrier = 4;
};

int run_eval(const EvalArgs& a) {
  const FormulaStyle style = a.syntax == "sexpr" ? FormulaStyle::sexpr : FormulaStyle::ascii;
  try {
    Formula f = parse_formula(a.formula, style);
    if (a.equiv) {
      Formula g = parse_formula(*a.equiv, style);
      Signature sig = signature_of({f, g});
      Verdict v = check_equivalence(f, g, sig.sorts, a.max_carrier, sig.predicates);
      if (v.equivalent) {
        std::cout << "equivalent (" << v.models_checked << " models)\n";
      } else {
        std::cout << "not equivalent (after " << v.models_checked << " models)\n";
        std::cout << "counter-model:\n" << print_model(*v.counter_model) << "\n";
      }
      return 0;
    }
    if (!a.model) throw error(errc::io, "--model is required unless --equiv is given");
    Model m = parse_model(read_file(*a.model));
    std::cout << (eval_formula(m, f) ? "true" : "false") << "\n";
    return 0;
  } catch (const error& e) {
    std::cerr << "lexsem: " << e.what() << "\n";
    return 1;
  }
}

int run_check_lexicon(const std::string& path) {
  try {
    Lexicon lex = load_lexicon(read_file(path));
    std::cout << path << ": " << lex.sorts().size() << " sorts, " << lex.constants().size() << " constants, "
              << lex.entries().size() << " entries\n";
    return 0;
  } catch (const error& e) {
    std::cerr << "lexsem: " << path << ": " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Typed lexical semantics: compose, reduce and evaluate"};
  app.require_subcommand(1);

  AnalyzeArgs an;
  auto* analyze = app.add_subcommand("analyze", "Compose a tree or a session and print its logical form");
  analyze->add_option("--lexicon", an.lexicon, "Lexicon file")->required();
  auto* tree_opt = analyze->add_option("--tree", an.tree, "Function-first tree, e.g. \"(dort (un chat))\"");
  auto* session_opt = analyze->add_option("--session", an.session, "File with one tree per sentence");
  tree_opt->excludes(session_opt);
  analyze->add_option("--format", an.format, "Output format")
      ->check(CLI::IsMember({"text", "sexpr", "json"}));
  analyze->add_option("--presuppositions", an.presuppositions, "How to report presuppositions")
      ->check(CLI::IsMember({"separate", "conjoin", "off"}));
  analyze->add_flag("--rewrite", an.rewrite, "Rewrite Hilbert patterns into quantifiers");
  analyze->add_flag("--trace", an.trace, "Print every reduction step");

  EvalArgs ev;
  auto* eval = app.add_subcommand("eval", "Evaluate a formula in a finite model");
  eval->add_option("--model", ev.model, "Model file");
  eval->add_option("--formula", ev.formula, "Formula text")->required();
  eval->add_option("--syntax", ev.syntax, "Formula syntax")->check(CLI::IsMember({"ascii", "sexpr"}));
  eval->add_option("--equiv", ev.equiv, "Check equivalence with this formula on all small models");
  eval->add_option("--max-carrier", ev.max_carrier, "Largest carrier size to enumerate")
      ->check(CLI::Range(1, 8));

  std::string lexicon_path;
  auto* check = app.add_subcommand("check-lexicon", "Load and validate a lexicon");
  check->add_option("file", lexicon_path, "Lexicon file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*analyze) {
    if (!an.tree && !an.session) {
      std::cerr << "lexsem: analyze needs --tree or --session\n";
      return 1;
    }
    return run_analyze(an);
  }
  if (*eval) return run_eval(ev);
  return run_check_lexicon(lexicon_path);
}
