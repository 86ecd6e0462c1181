#include <gtest/gtest.h>

#include "lexsem/kernel.hpp"
#include "support.hpp"

using namespace lexsem;

namespace {

TypingContext chat_context() {
  TypingContext ctx = TypingContext::with_builtins();
  ctx.declare_sort("ani");
  ctx.declare_sort("furniture");
  ctx.declare_const("chat", arrow(base_type("ani"), truth_type()));
  ctx.declare_const("dort", arrow(base_type("ani"), truth_type()));
  ctx.declare_const("chaise_obj", base_type("furniture"));
  return ctx;
}

errc code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return errc::io;
}

}  // namespace

TEST(Types, PrintAndParse) {
  TypingContext ctx = chat_context();
  Type ty = parse_type("(pi a (-> (-> a t) a))", ctx);
  EXPECT_EQ(to_string(ty), "(pi a (-> (-> a t) a))");
  EXPECT_EQ(ty, choice_type());
  EXPECT_EQ(parse_type("(-> ani ani t)", ctx), arrows({base_type("ani"), base_type("ani"), truth_type()}));
}

TEST(Types, AlphaEquivalentPi) {
  EXPECT_EQ(pi_type("a", arrow(type_var("a"), type_var("a"))), pi_type("b", arrow(type_var("b"), type_var("b"))));
  EXPECT_NE(pi_type("a", arrow(type_var("a"), type_var("c"))), pi_type("b", arrow(type_var("b"), type_var("b"))));
}

TEST(Types, CaptureAvoidingTypeSubstitution) {
  // (Πb. a→b)[b/a] must rename the binder
  Type ty = pi_type("b", arrow(type_var("a"), type_var("b")));
  Type out = subst_type(ty, "a", type_var("b"));
  const auto* pi = out.as<Pi>();
  ASSERT_NE(pi, nullptr);
  EXPECT_NE(pi->var, "b");
  EXPECT_EQ(out, pi_type("c", arrow(type_var("b"), type_var("c"))));
}

TEST(Types, UnknownSortHasLocation) {
  TypingContext ctx = chat_context();
  try {
    parse_type("(-> ani\n  animal)", ctx);
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::unknown_sort);
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 3u);
  }
}

TEST(ParseTerm, Lambda) {
  TypingContext ctx = chat_context();
  Term t = parse_term("(lam x ani (chat x))", ctx);
  const auto* lam = t.as<Lam>();
  ASSERT_NE(lam, nullptr);
  EXPECT_EQ(lam->var, "x");
  EXPECT_EQ(lam->var_type, base_type("ani"));
  const auto* app = lam->body.as<App>();
  ASSERT_NE(app, nullptr);
  EXPECT_TRUE(is_const(app->fun, "chat"));
  ASSERT_NE(app->arg.as<Var>(), nullptr);
  EXPECT_EQ(to_string(t), "(lam x ani (chat x))");
}

TEST(ParseTerm, ContextVariable) {
  TypingContext ctx = chat_context();
  ctx.declare_var("x", entity_type());
  Term t = parse_term("x", ctx);
  ASSERT_NE(t.as<Var>(), nullptr);
  EXPECT_EQ(t.as<Var>()->type, entity_type());
}

TEST(ParseTerm, Errors) {
  TypingContext ctx = chat_context();
  EXPECT_EQ(code_of([&] { parse_term("(lam x", ctx); }), errc::syntax);
  EXPECT_EQ(code_of([&] { parse_term("(lam x animal x)", ctx); }), errc::unknown_sort);
  EXPECT_EQ(code_of([&] { parse_term("(chat y)", ctx); }), errc::unbound_name);
}

TEST(ParseTerm, MultiArgumentApplicationIsLeftAssociated) {
  TypingContext ctx = chat_context();
  ctx.declare_const("r", arrows({base_type("ani"), base_type("ani"), truth_type()}));
  ctx.declare_const("c", base_type("ani"));
  Term t = parse_term("(r c c)", ctx);
  const auto* outer = t.as<App>();
  ASSERT_NE(outer, nullptr);
  ASSERT_NE(outer->fun.as<App>(), nullptr);
}

TEST(TypeOf, Builtins) {
  TypingContext ctx = chat_context();
  EXPECT_EQ(type_of(ctx, parse_term("eps", ctx)), choice_type());
  EXPECT_EQ(type_of(ctx, parse_term("and", ctx)), arrows({truth_type(), truth_type(), truth_type()}));
  EXPECT_EQ(type_of(ctx, parse_term("exists", ctx)), quantifier_type());
}

TEST(TypeOf, EpsilonDeterminer) {
  TypingContext ctx = chat_context();
  Term t = parse_term("(dort ((tyapp eps ani) chat))", ctx);
  EXPECT_EQ(type_of(ctx, t), truth_type());
}

TEST(TypeOf, SelectionalRestriction) {
  TypingContext ctx = chat_context();
  try {
    type_of(ctx, parse_term("(dort chaise_obj)", ctx));
    FAIL();
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::type_clash);
    EXPECT_NE(e.message().find("ani"), std::string::npos);
    EXPECT_NE(e.message().find("furniture"), std::string::npos);
  }
}

TEST(TypeOf, TyLamSideCondition) {
  TypingContext ctx = chat_context();
  ctx.declare_var("y", base_type("ani"));
  // fine: a does not occur in the type of a free variable
  EXPECT_NO_THROW(type_of(ctx, parse_term("(tylam a (lam x a y))", ctx)));
  // a free variable whose annotation mentions the bound type variable
  Term bad = make_tylam("a", make_var("z", type_var("a")));
  EXPECT_EQ(code_of([&] { type_of(bad); }), errc::tylam_escape);
}

TEST(TypeOf, TyAppInstantiates) {
  TypingContext ctx = chat_context();
  Term t = parse_term("(tyapp eps ani)", ctx);
  EXPECT_EQ(type_of(ctx, t), arrow(arrow(base_type("ani"), truth_type()), base_type("ani")));
  EXPECT_EQ(code_of([&] { type_of(ctx, parse_term("(tyapp chat ani)", ctx)); }), errc::type_clash);
}

TEST(Normalize, GeneralizedQuantifierTerm) {
  Lexicon lex = testsupport::data_lexicon("fig1.lex");
  const TypingContext& ctx = lex.context();
  Term un = lex.lookup_entry("un").principal;
  Term club = lex.lookup_entry("club").principal;
  Term battu = lex.lookup_entry("a_battu").principal;
  Term leeds = lex.lookup_entry("Leeds").principal;
  Term sentence = make_app(make_app(un, club), make_app(battu, leeds));
  Term expected = parse_term("((tyapp exists e) (lam x e (and (club x) (a_battu x Leeds))))", ctx);
  EXPECT_TRUE(alpha_eq(normalize(sentence), expected));
}

TEST(Normalize, VariableIsFixedPoint) {
  Term x = make_var("x", entity_type());
  Reduction r = reduce(x);
  EXPECT_EQ(r.steps, 0u);
  EXPECT_TRUE(alpha_eq(r.term, x));
}

TEST(Normalize, CaptureAvoidance) {
  TypingContext ctx = TypingContext::with_builtins();
  ctx.declare_var("y", entity_type());
  Term t = parse_term("((lam x e (lam y e x)) y)", ctx);
  Term n = normalize(t);
  const auto* lam = n.as<Lam>();
  ASSERT_NE(lam, nullptr);
  EXPECT_NE(lam->var, "y");
  const auto* body = lam->body.as<Var>();
  ASSERT_NE(body, nullptr);
  EXPECT_EQ(body->name, "y");
}

TEST(Normalize, TypeBetaWithCapture) {
  // (Λa. Λb. λx:a. x){b} must not capture the argument's b
  Term k = make_tylam("a", make_tylam("b", make_lam("x", type_var("a"), make_var("x", type_var("a")))));
  Term n = normalize(make_tyapp(k, type_var("b")));
  const auto* tl = n.as<TyLam>();
  ASSERT_NE(tl, nullptr);
  EXPECT_NE(tl->tyvar, "b");
  EXPECT_EQ(tl->body.as<Lam>()->var_type, type_var("b"));
}

TEST(Normalize, StepBudget) {
  Lexicon lex = testsupport::data_lexicon("fig1.lex");
  Term sentence = make_app(make_app(lex.lookup_entry("un").principal, lex.lookup_entry("club").principal),
                           make_app(lex.lookup_entry("a_battu").principal, lex.lookup_entry("Leeds").principal));
  NormalizeOptions opts;
  opts.step_budget = 2;
  EXPECT_EQ(code_of([&] { reduce(sentence, opts); }), errc::step_budget_exceeded);
  opts.step_budget = 5;
  EXPECT_EQ(reduce(sentence, opts).steps, 5u);
}

TEST(Normalize, StrategiesAgreeOnPartialConjunction) {
  Lexicon lex = testsupport::data_lexicon("fig2.lex");
  Term et = lex.lookup_entry("et").principal;
  NormalizeOptions inner;
  inner.strategy = Strategy::rightmost_innermost;
  Term t = make_app(make_tyapp(make_tyapp(et, base_type("Pl")), base_type("P")),
                    parse_term("est_vaste", lex.context()));
  EXPECT_TRUE(alpha_eq(normalize(t), normalize(t, inner)));
}

TEST(AlphaEq, Examples) {
  TypingContext ctx = TypingContext::with_builtins();
  EXPECT_TRUE(alpha_eq(parse_term("(lam x e x)", ctx), parse_term("(lam y e y)", ctx)));
  EXPECT_FALSE(alpha_eq(parse_term("(lam x e x)", ctx), parse_term("(lam x t x)", ctx)));
  Term a = parse_term("(tylam a (lam P (-> a t) P))", ctx);
  Term b = parse_term("(tylam b (lam Q (-> b t) Q))", ctx);
  EXPECT_TRUE(alpha_eq(a, b));
  EXPECT_EQ(testsupport::nameless(a), testsupport::nameless(b));
}

TEST(AlphaEq, BinderStructureMatters) {
  TypingContext ctx = TypingContext::with_builtins();
  EXPECT_FALSE(alpha_eq(parse_term("(lam x e (lam y e x))", ctx), parse_term("(lam x e (lam y e y))", ctx)));
  EXPECT_TRUE(alpha_eq(parse_term("(lam x e (lam x e x))", ctx), parse_term("(lam y e (lam z e z))", ctx)));
}

TEST(FreeVars, AndSubstitution) {
  TypingContext ctx = TypingContext::with_builtins();
  ctx.declare_var("u", entity_type());
  ctx.declare_const("r", arrows({entity_type(), entity_type(), truth_type()}));
  Term t = parse_term("(lam x e (r x u))", ctx);
  EXPECT_EQ(free_vars(t), std::set<std::string>{"u"});
  Term s = subst(t, "u", make_var("x", entity_type()));
  // the bound x must have been renamed so the substituted x stays free
  EXPECT_EQ(free_vars(s), std::set<std::string>{"x"});
  EXPECT_TRUE(alpha_eq(s, parse_term("(lam z e (r z x))", [] {
                         TypingContext c = TypingContext::with_builtins();
                         c.declare_var("x", entity_type());
                         c.declare_const("r", arrows({entity_type(), entity_type(), truth_type()}));
                         return c;
                       }())));
}
