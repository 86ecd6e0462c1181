#include <gtest/gtest.h>

#include <functional>
#include <random>

#include "lexsem/composer.hpp"
#include "lexsem/logic.hpp"
#include "lexsem/model.hpp"
#include "support.hpp"

using namespace lexsem;
using testsupport::data_file;
using testsupport::data_lexicon;

namespace {

Term normal_sentence(const Lexicon& lex, const std::string& tree) {
  DiscourseState d;
  return normalize(compose(parse_tree(tree), lex, d).term);
}

TypingContext hol_context() {
  TypingContext ctx = TypingContext::with_builtins();
  ctx.declare_sort("ani");
  ctx.declare_const("p", truth_type());
  ctx.declare_const("q", truth_type());
  ctx.declare_const("rex", base_type("ani"));
  ctx.declare_const("chat", arrow(base_type("ani"), truth_type()));
  ctx.declare_const("hp", arrow(arrow(base_type("ani"), truth_type()), truth_type()));
  return ctx;
}

errc extract_error(const Term& t) {
  try {
    extract_formula(t);
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "extracted " << to_string(t);
  return errc::io;
}

LTerm x_ani() { return lvar("x", "ani"); }
Formula chat(LTerm t) { return pred("chat", {std::move(t)}); }
Formula dort(LTerm t) { return pred("dort", {std::move(t)}); }

}  // namespace

TEST(ExtractFormula, ClassicalSentence) {
  Lexicon lex = data_lexicon("fig1.lex");
  Formula f = extract_formula(normal_sentence(lex, "((un club) (a_battu Leeds))"));
  EXPECT_EQ(print_formula(f, FormulaStyle::unicode), "∃x:e. (club(x) ∧ a_battu(x,Leeds))");
}

TEST(ExtractFormula, EpsilonDeterminer) {
  Lexicon lex = data_lexicon("chat.lex");
  Formula f = extract_formula(normal_sentence(lex, "(dort (un chat))"));
  EXPECT_TRUE(alpha_eq(f, dort(eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani())))));
  const auto* p = f.as<Pred>();
  ASSERT_NE(p, nullptr);
  const auto* e = p->args.at(0).as<Eps>();
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->mode, EpsMode::indefinite);
  EXPECT_EQ(e->sort, "ani");
}

TEST(ExtractFormula, ModesAndConnectives) {
  Lexicon lex = data_lexicon("chat.lex");
  Formula f = extract_formula(normal_sentence(lex, "(dort (chaque chat))"));
  EXPECT_EQ(print_formula(f), "dort(tau[ani](x. chat(x)))");
  f = extract_formula(normal_sentence(lex, "(dort (le chat))"));
  EXPECT_EQ(print_formula(f), "dort(the[ani](x. chat(x)))");

  TypingContext ctx = hol_context();
  EXPECT_EQ(extract_formula(parse_term("(and p q)", ctx)), conj(pred("p"), pred("q")));
  EXPECT_EQ(print_formula(extract_formula(parse_term("(implies (not p) (or p q))", ctx))), "~p -> p | q");
  EXPECT_EQ(print_formula(extract_formula(parse_term("((tyapp forall ani) chat)", ctx))),
            "forall x:ani. chat(x)");
  EXPECT_EQ(print_formula(extract_formula(parse_term("((tyapp eq ani) rex rex)", ctx))), "rex = rex");
}

TEST(ExtractFormula, Errors) {
  TypingContext ctx = hol_context();
  EXPECT_EQ(extract_error(parse_term("((lam x ani (chat x)) rex)", ctx)), errc::not_normal);
  EXPECT_EQ(extract_error(parse_term("chat", ctx)), errc::not_truth_type);
  EXPECT_EQ(extract_error(parse_term("rex", ctx)), errc::not_truth_type);
  EXPECT_EQ(extract_error(parse_term("(hp (lam x ani (chat x)))", ctx)), errc::residual_lambda);
  EXPECT_EQ(extract_error(parse_term("(hp chat)", ctx)), errc::higher_order_residue);
}

TEST(ExtractFormula, TotalOnShippedLexica) {
  Lexicon chat_lex = data_lexicon("chat.lex");
  for (const char* tree : {"(dort (un chat))", "(aboie (le chien))", "(dort (chaque chat))", "(a_saute (une panthere))",
                           "(est_entre (un homme))", "(dort (l animal))"}) {
    EXPECT_NO_THROW(extract_formula(normal_sentence(chat_lex, tree))) << tree;
  }
  Lexicon fig2 = data_lexicon("fig2.lex");
  EXPECT_NO_THROW(extract_formula(normal_sentence(fig2, "((et est_vaste a_vote) Liverpool)")));
  EXPECT_NO_THROW(extract_formula(normal_sentence(fig2, "(a_gagne Liverpool)")));
}

TEST(Presuppositions, RestrictionOfTheWitness) {
  Lexicon lex = data_lexicon("chat.lex");
  auto ps = presuppositions(normal_sentence(lex, "(dort (un chat))"));
  ASSERT_EQ(ps.size(), 1u);
  EXPECT_EQ(print_formula(ps[0]), "chat(eps[ani](x. chat(x)))");
  // the composed term, before normalization, gives the same list
  DiscourseState d;
  auto raw = presuppositions(compose(parse_tree("(dort (un chat))"), lex, d).term);
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_TRUE(alpha_eq(raw[0], ps[0]));
}

TEST(Presuppositions, NoChoiceTermNoPresupposition) {
  Lexicon lex = data_lexicon("chat.lex");
  EXPECT_TRUE(presuppositions(parse_term("(est_entre lui)", lex.context())).empty());
  EXPECT_TRUE(presuppositions(normal_sentence(data_lexicon("fig1.lex"), "((un club) (a_battu Leeds))")).empty());
}

TEST(Presuppositions, TwoDeterminers) {
  Lexicon lex = load_lexicon(data_file("chat.lex") +
                             "(const poursuit (-> ani ani t))\n"
                             "(entry poursuit (principal (lam y ani (lam x ani (poursuit x y)))))\n");
  Term t = normal_sentence(lex, "((poursuit (un chien)) (un chat))");
  EXPECT_EQ(print_formula(extract_formula(t)), "poursuit(eps[ani](x. chat(x)),eps[ani](x. chien(x)))");
  auto ps = presuppositions(t);
  ASSERT_EQ(ps.size(), 2u);
  std::set<std::string> texts{print_formula(ps[0]), print_formula(ps[1])};
  EXPECT_EQ(texts, (std::set<std::string>{"chat(eps[ani](x. chat(x)))", "chien(eps[ani](x. chien(x)))"}));
  // the same determiner phrase twice yields one
  EXPECT_EQ(presuppositions(normal_sentence(lex, "((poursuit (un chat)) (un chat))")).size(), 1u);
}

TEST(Presuppositions, UniversalHasNone) {
  Lexicon lex = data_lexicon("chat.lex");
  EXPECT_TRUE(presuppositions(normal_sentence(lex, "(dort (chaque chat))")).empty());
  EXPECT_EQ(presuppositions(normal_sentence(lex, "(dort (le chat))")).size(), 1u);
}

TEST(RewriteHilbert, Equivalences) {
  Formula e = chat(eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani())));
  EXPECT_EQ(print_formula(rewrite_hilbert(e)), "exists x:ani. chat(x)");
  Formula t = dort(eps_term(EpsMode::universal, "x", "ani", dort(x_ani())));
  EXPECT_EQ(print_formula(rewrite_hilbert(t)), "forall x:ani. dort(x)");
  Formula d = chat(eps_term(EpsMode::definite, "y", "ani", chat(lvar("y", "ani"))));
  EXPECT_EQ(print_formula(rewrite_hilbert(d)), "exists y:ani. chat(y)");
}

TEST(RewriteHilbert, MismatchIsLeftAlone) {
  Formula f = dort(eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani())));
  EXPECT_EQ(rewrite_hilbert(f), f);
  EXPECT_EQ(rewrite_hilbert(f, RewriteOptions{true}), f);
}

TEST(RewriteHilbert, NestedAndComplexBodies) {
  Formula body = conj(chat(x_ani()), negation(dort(x_ani())));
  LTerm w = eps_term(EpsMode::indefinite, "x", "ani", body);
  Formula f = implies(pred("z"), conj(chat(w), negation(dort(w))));
  EXPECT_EQ(print_formula(rewrite_hilbert(f)), "z -> (exists x:ani. (chat(x) & ~dort(x)))");
  // the matching instance sits below a non-matching conjunction
  Formula g = conj(chat(eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani()))),
                   dort(eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani()))));
  EXPECT_EQ(print_formula(rewrite_hilbert(g)), "(exists x:ani. chat(x)) & dort(eps[ani](x. chat(x)))");
}

TEST(RewriteHilbert, FreshNameWhenTheBinderIsTaken) {
  Formula f = exists("x", "ani", conj(dort(x_ani()), chat(eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani())))));
  Formula r = rewrite_hilbert(f);
  EXPECT_TRUE(alpha_eq(r, exists("x", "ani", conj(dort(x_ani()), exists("y", "ani", chat(lvar("y", "ani")))))))
      << print_formula(r);
}

TEST(RewriteHilbert, AccommodatingConjoinedPresupposition) {
  LTerm w = eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani()));
  Formula f = conj(chat(w), dort(w));
  EXPECT_EQ(print_formula(rewrite_hilbert(f, RewriteOptions{true})), "exists x:ani. (chat(x) & dort(x))");
}

// Unary predicates p, q over sort s; ε-terms are closed so that evaluation
// never meets a dependent choice.
class PatternGenerator {
 public:
  explicit PatternGenerator(unsigned seed) : rng_(seed) {}

  using Shape = std::function<Formula(const LTerm&)>;

  Shape shape(int depth) {
    switch (depth <= 1 ? pick(2) : pick(6)) {
      case 0: return [](const LTerm& t) { return pred("p", {t}); };
      case 1: return [](const LTerm& t) { return pred("q", {t}); };
      case 2: {
        Shape a = shape(depth - 1);
        return [a](const LTerm& t) { return negation(a(t)); };
      }
      case 3: {
        Shape a = shape(depth - 1), b = shape(depth - 1);
        return [a, b](const LTerm& t) { return conj(a(t), b(t)); };
      }
      case 4: {
        Shape a = shape(depth - 1), b = shape(depth - 1);
        return [a, b](const LTerm& t) { return disj(a(t), b(t)); };
      }
      default: {
        Shape a = shape(depth - 1);
        return [a](const LTerm& t) { return implies(a(t), pred("q", {t})); };
      }
    }
  }

  LTerm choice(const Shape& body) {
    static const EpsMode modes[] = {EpsMode::indefinite, EpsMode::definite, EpsMode::universal};
    return eps_term(modes[pick(3)], "x", "s", body(lvar("x", "s")));
  }

  Formula formula(int depth) {
    switch (depth <= 1 ? pick(3) : pick(7)) {
      case 0: {
        Shape b = shape(3);
        return b(choice(b));  // the pattern
      }
      case 1: {
        Shape b = shape(2);
        return shape(2)(choice(b));  // usually not the pattern
      }
      case 2: return pred("q", {choice(shape(2))});
      case 3: return negation(formula(depth - 1));
      case 4: return conj(formula(depth - 1), formula(depth - 1));
      case 5: return implies(formula(depth - 1), formula(depth - 1));
      default: return forall("y", "s", disj(pred("p", {lvar("y", "s")}), formula(depth - 1)));
    }
  }

 private:
  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }
  std::mt19937 rng_;
};

TEST(RewriteHilbert, PreservesTruthOnSmallModels) {
  PatternGenerator gen(7);
  const std::vector<PredicateSignature> preds{{"p", {"s"}}, {"q", {"s"}}};
  int changed = 0;
  for (int i = 0; i < 60; ++i) {
    Formula f = gen.formula(1 + i % 4);
    Formula r = rewrite_hilbert(f);
    if (!(r == f)) ++changed;
    Verdict v = check_equivalence(f, r, {"s"}, 4, preds);
    ASSERT_TRUE(v.equivalent) << print_formula(f) << "\n  vs " << print_formula(r) << "\n"
                              << print_model(*v.counter_model);
    EXPECT_EQ(v.models_checked, 4u + 16u + 64u + 256u);
  }
  EXPECT_GT(changed, 20);
}

TEST(RewriteHilbert, IsAFixedPoint) {
  PatternGenerator gen(11);
  for (int i = 0; i < 100; ++i) {
    Formula r = rewrite_hilbert(gen.formula(1 + i % 4));
    EXPECT_EQ(rewrite_hilbert(r), r);
  }
}

TEST(RewriteHilbert, AccommodationOnlyEntails) {
  LTerm w = eps_term(EpsMode::indefinite, "x", "ani", chat(x_ani()));
  Formula f = conj(chat(w), dort(w));
  Formula r = rewrite_hilbert(f, RewriteOptions{true});
  const std::vector<PredicateSignature> preds{{"chat", {"ani"}}, {"dort", {"ani"}}};
  EXPECT_TRUE(check_equivalence(implies(f, r), truth(true), {"ani"}, 4, preds).equivalent);
  Verdict v = check_equivalence(f, r, {"ani"}, 4, preds);
  ASSERT_FALSE(v.equivalent);
  // two cats, only the second asleep: the chosen cat is the first
  const Model& m = *v.counter_model;
  EXPECT_FALSE(eval_formula(m, f));
  EXPECT_TRUE(eval_formula(m, r));
}
