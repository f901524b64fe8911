#include <gtest/gtest.h>

#include "generators.hpp"
#include "mlunify/proofcheck.hpp"
#include "mlunify/proofgen.hpp"

using namespace mlunify;

namespace {

Signature unary() {
  return parse_signature(R"(
sort S
symbol f : S -> S [functional, injective]
symbol g : S -> S [functional, injective]
symbol c : -> S [functional, injective]
)");
}

Justification just(Just rule, std::vector<std::size_t> premises = {}) {
  Justification j;
  j.rule = rule;
  j.premises = std::move(premises);
  return j;
}

TEST(Tautologies, Schemas) {
  Signature sig = unary();
  EXPECT_TRUE(check_tautology(parse_pattern(sig, "f(x) -> (g(y) -> f(x))")));
  EXPECT_TRUE(check_tautology(parse_pattern(sig, "(~g(y) -> ~f(x)) -> (f(x) -> g(y))")));
  EXPECT_TRUE(check_tautology(parse_pattern(sig, "x \\/ ~x")));
  EXPECT_FALSE(check_tautology(parse_pattern(sig, "f(x) -> g(y)")));
  // Atoms are compared as whole subpatterns, so distinct terms stay independent.
  EXPECT_FALSE(check_tautology(parse_pattern(sig, "x = c -> c = x")));
}

TEST(Tautologies, BudgetIsEnforced) {
  Signature sig = unary();
  Pattern p = parse_pattern(sig, "x -> (y -> (z -> (f(x) -> x)))");
  EXPECT_TRUE(check_tautology(p, 4));
  EXPECT_THROW(check_tautology(p, 3), TautologyBudgetExceeded);
}

TEST(Tautologies, EntailmentFromPremises) {
  Signature sig = unary();
  Pattern a = parse_pattern(sig, "f(x)"), b = parse_pattern(sig, "g(y)");
  EXPECT_TRUE(propositionally_entails({conj(a, b)}, conj(b, a), 16));
  EXPECT_TRUE(propositionally_entails({a, implies(a, b)}, b, 16));
  EXPECT_FALSE(propositionally_entails({a}, b, 16));
}

TEST(Verify, GeneratedCertificatesPass) {
  Signature sig = mlunify::testing::worked_signature();
  Pattern t1 = parse_term(sig, "f(x,g(1),g(z))"), t2 = parse_term(sig, "f(g(y),g(y),g(g(x)))");
  auto outcome = unify(t1, t2);
  Substitution sigma = std::get<Solved>(outcome).mgu;
  CheckerConfig cfg = default_config(sig);
  CheckerConfig strict = cfg;
  strict.allow_derived = false;
  EXPECT_TRUE(verify(gen_stage1(sig, t1, t2, outcome), cfg).ok);
  EXPECT_TRUE(verify(gen_stage2(sig, t1, t2, sigma), cfg).ok);
  EXPECT_TRUE(verify(gen_stage1(sig, t1, t2, outcome, GenOptions{true}), strict).ok);
  EXPECT_TRUE(verify(gen_stage2(sig, t1, t2, sigma, GenOptions{true}), strict).ok);

  CheckReport r = verify(gen_stage1(sig, t1, t2, outcome), strict);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_line, 2u);
  EXPECT_NE(r.reason.find("derived rules are disabled"), std::string::npos);
}

TEST(Verify, DecompositionNeedsInjectivity) {
  Signature sig = unary();
  Certificate c = expand_derived_rule(DerivedRule::Decomposition, sig,
                                      RuleInstance{parse_pattern(sig, "c"), parse_term(sig, "f(x)"), parse_term(sig, "f(c)")});
  CheckerConfig cfg = default_config(sig);
  cfg.allow_derived = false;
  EXPECT_TRUE(verify(c, cfg).ok);
  ASSERT_TRUE(cfg.axioms.remove("injectivity(f)"));
  CheckReport r = verify(c, cfg);
  EXPECT_FALSE(r.ok);
  EXPECT_NE(r.reason.find("injectivity(f) is not in the axiom set"), std::string::npos);
}

TEST(Verify, ModusPonensShape) {
  Signature sig = unary();
  Pattern a = parse_pattern(sig, "f(x)"), b = parse_pattern(sig, "g(x)");
  Certificate c;
  c.hypotheses = {a, implies(a, b), conj(a, b)};
  c.add(a, just(Just::Hypothesis));
  c.add(implies(a, b), just(Just::Hypothesis));
  c.add(b, just(Just::ModusPonens, {1, 2}));
  CheckerConfig cfg = default_config(sig);
  EXPECT_TRUE(verify(c, cfg).ok);

  Certificate bad;
  bad.hypotheses = c.hypotheses;
  bad.add(a, just(Just::Hypothesis));
  bad.add(conj(a, b), just(Just::Hypothesis));
  bad.add(b, just(Just::ModusPonens, {1, 2}));
  CheckReport r = verify(bad, cfg);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_line, 3u);
}

TEST(Verify, StructuralErrors) {
  Signature sig = unary();
  Pattern a = parse_pattern(sig, "f(x)");
  CheckerConfig cfg = default_config(sig);

  Certificate forward;
  forward.hypotheses = {a};
  forward.add(a, just(Just::Tautology, {1}));
  EXPECT_NE(verify(forward, cfg).reason.find("not an earlier line"), std::string::npos);

  Certificate numbering;
  numbering.hypotheses = {a};
  numbering.add(a, just(Just::Hypothesis));
  numbering.lines[0].index = 2;
  EXPECT_NE(verify(numbering, cfg).reason.find("consecutive"), std::string::npos);

  Certificate stray;
  stray.add(a, just(Just::Hypothesis));
  EXPECT_NE(verify(stray, cfg).reason.find("not a hypothesis"), std::string::npos);

  Certificate wrong_end;
  wrong_end.hypotheses = {a};
  wrong_end.add(a, just(Just::Hypothesis));
  wrong_end.conclusion = parse_pattern(sig, "g(x)");
  EXPECT_NE(verify(wrong_end, cfg).reason.find("conclusion differs"), std::string::npos);

  EXPECT_FALSE(verify(Certificate{}, cfg).ok);
  cfg.tautology_budget = 0;
  EXPECT_THROW(verify(forward, cfg), Error);
}

TEST(Verify, EqualityRules) {
  Signature sig = unary();
  Sort S{"S"};
  Pattern x = var("x", S), cc = parse_pattern(sig, "c");
  Certificate c;
  c.hypotheses = {equals(x, cc, S), parse_pattern(sig, "f(x)")};
  c.add(equals(x, cc, S), just(Just::Hypothesis));
  c.add(parse_pattern(sig, "f(x)"), just(Just::Hypothesis));
  Justification elim = just(Just::EqualityElim, {1, 2});
  elim.context = parse_pattern(sig, "f(h)");
  elim.hole = Variable{"h", S};
  c.add(parse_pattern(sig, "f(c)"), elim);
  c.add(equals(cc, x, S), just(Just::EqSymmetry, {1}));
  c.add(equals(x, x, S), just(Just::EqualityIntro));
  CheckerConfig cfg = default_config(sig);
  EXPECT_TRUE(verify(c, cfg).ok);

  c.lines[2].formula = parse_pattern(sig, "g(c)");
  c.conclusion = c.lines.back().formula;
  CheckReport r = verify(c, cfg);
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_line, 3u);
}

TEST(Verify, DeltaLineMustMatchRule) {
  Signature sig = mlunify::testing::worked_signature();
  Pattern t1 = parse_term(sig, "f(x,g(1),g(z))"), t2 = parse_term(sig, "f(g(y),g(y),g(g(x)))");
  Certificate c = gen_stage1(sig, t1, t2);
  c.lines[4].why.position = 0;
  CheckReport r = verify(c, default_config(sig));
  EXPECT_FALSE(r.ok);
  EXPECT_EQ(r.failed_line, 5u);
}

TEST(Json, UnknownRuleAndReport) {
  Signature sig = unary();
  Certificate c = gen_stage1(sig, parse_term(sig, "f(x)"), parse_term(sig, "f(c)"));
  nlohmann::json j = to_json(c);
  j["lines"][1]["justification"]["rule"] = "Magic";
  try {
    certificate_from_json(sig, j);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("unsupported rule Magic"), std::string::npos);
  }
  CheckReport bad{false, 3, "why"};
  EXPECT_EQ(to_json(bad).dump(), R"({"failed_line":3,"ok":false,"reason":"why"})");
}

}  // namespace
