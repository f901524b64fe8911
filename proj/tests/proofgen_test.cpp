#include <gtest/gtest.h>

#include "generators.hpp"
#include "mlunify/proofcheck.hpp"
#include "mlunify/proofgen.hpp"

using namespace mlunify;

namespace {

struct WorkedExample {
  Signature sig = mlunify::testing::worked_signature();
  Pattern t1 = parse_term(sig, "f(x,g(1),g(z))");
  Pattern t2 = parse_term(sig, "f(g(y),g(y),g(g(x)))");
  UnificationOutcome outcome = unify(t1, t2);
  const Substitution& sigma() const { return std::get<Solved>(outcome).mgu; }
};

std::vector<std::string> formulas(const Certificate& c) {
  std::vector<std::string> out;
  for (const auto& l : c.lines) out.push_back(to_string(l.formula));
  return out;
}

Signature unary() {
  return parse_signature(R"(
sort S
symbol f : S -> S [functional, injective]
symbol g : S -> S [functional, injective]
symbol c : -> S [functional, injective]
)");
}

TEST(StageOne, WorkedExample) {
  WorkedExample ex;
  Certificate c = gen_stage1(ex.sig, ex.t1, ex.t2, ex.outcome);
  EXPECT_EQ(c.mode, CertMode::Stage1);
  // Leftmost selection eliminates x before y at line vii.
  std::vector<std::string> want{
      "f(x, g(1), g(z)) /\\ f(g(y), g(y), g(g(x)))",
      "f(x, g(1), g(z)) /\\ f(x, g(1), g(z)) = f(g(y), g(y), g(g(x)))",
      "f(x, g(1), g(z)) /\\ x = g(y) /\\ g(1) = g(y) /\\ g(z) = g(g(x))",
      "f(x, g(1), g(z)) /\\ x = g(y) /\\ 1 = y /\\ g(z) = g(g(x))",
      "f(x, g(1), g(z)) /\\ x = g(y) /\\ 1 = y /\\ z = g(x)",
      "f(x, g(1), g(z)) /\\ x = g(y) /\\ y = 1 /\\ z = g(x)",
      "f(x, g(1), g(z)) /\\ x = g(y) /\\ y = 1 /\\ z = g(g(y))",
      "f(x, g(1), g(z)) /\\ x = g(1) /\\ y = 1 /\\ z = g(g(1))",
  };
  EXPECT_EQ(formulas(c), want);
  EXPECT_EQ(c.lines[1].why.rule, Just::PropFpattForward);
  for (std::size_t i = 2; i < 8; ++i) {
    EXPECT_EQ(c.lines[i].why.rule, Just::DerivedDelta);
    EXPECT_EQ(c.lines[i].why.premises, std::vector<std::size_t>{i});
  }
  EXPECT_EQ(*c.conclusion, c.lines.back().formula);
}

TEST(StageTwo, WorkedExample) {
  WorkedExample ex;
  Certificate c = gen_stage2(ex.sig, ex.t1, ex.t2, ex.sigma());
  std::vector<std::string> want{
      "f(x, g(1), g(z)) /\\ x = g(1) /\\ y = 1 /\\ z = g(g(1))",
      "f(x, g(1), g(z))",
      "x = g(1) /\\ y = 1 /\\ z = g(g(1))",
      "x = g(1)",
      "y = 1 /\\ z = g(g(1))",
      "y = 1",
      "z = g(g(1))",
      "f(x, g(1), g(z)) = f(x, g(1), g(z))",
      "f(g(y), g(y), g(g(x))) = f(g(y), g(y), g(g(x)))",
      "f(g(1), g(1), g(z)) = f(x, g(1), g(z))",
      "f(g(1), g(1), g(g(g(1)))) = f(x, g(1), g(z))",
      "f(g(1), g(y), g(g(x))) = f(g(y), g(y), g(g(x)))",
      "f(g(1), g(1), g(g(x))) = f(g(y), g(y), g(g(x)))",
      "f(g(1), g(1), g(g(g(1)))) = f(g(y), g(y), g(g(x)))",
      "f(x, g(1), g(z)) = f(g(y), g(y), g(g(x)))",
      "f(x, g(1), g(z)) /\\ f(x, g(1), g(z)) = f(g(y), g(y), g(g(x)))",
      "f(x, g(1), g(z)) /\\ f(g(y), g(y), g(g(x)))",
  };
  EXPECT_EQ(formulas(c), want);
  EXPECT_EQ(c.lines[16].why.rule, Just::PropFpattBackward);
}

TEST(Stages, ConclusionsFeedEachOther) {
  WorkedExample ex;
  Certificate c1 = gen_stage1(ex.sig, ex.t1, ex.t2, ex.outcome);
  Certificate c2 = gen_stage2(ex.sig, ex.t1, ex.t2, ex.sigma());
  EXPECT_EQ(c2.hypotheses.at(0), *c1.conclusion);
  EXPECT_EQ(*c2.conclusion, c1.hypotheses.at(0));
}

TEST(Stages, IdenticalTerms) {
  Signature sig = unary();
  Pattern t = parse_term(sig, "f(x)");
  Certificate c1 = gen_stage1(sig, t, t);
  ASSERT_EQ(c1.lines.size(), 3u);
  EXPECT_EQ(c1.lines[2].why.delta, static_cast<int>(DerivedRule::Delete));
  EXPECT_EQ(*c1.conclusion, t);
  Certificate c2 = gen_stage2(sig, t, t, Substitution{});
  EXPECT_EQ(c2.lines.size(), 5u);
  EXPECT_EQ(c2.hypotheses.at(0), conj(t, top(t.sort())));
  EXPECT_EQ(*c2.conclusion, conj(t, t));
}

TEST(Stages, SingleDecomposition) {
  Signature sig = unary();
  Pattern t1 = parse_term(sig, "f(x)"), t2 = parse_term(sig, "f(c)");
  Certificate c1 = gen_stage1(sig, t1, t2);
  ASSERT_EQ(c1.lines.size(), 3u);
  EXPECT_EQ(to_string(*c1.conclusion), "f(x) /\\ x = c");
  Substitution sigma = std::get<Solved>(unify(t1, t2)).mgu;
  Certificate c2 = gen_stage2(sig, t1, t2, sigma);
  EXPECT_EQ(c2.lines.size(), 9u);
  CheckerConfig cfg = default_config(sig);
  EXPECT_TRUE(verify(c1, cfg).ok);
  EXPECT_TRUE(verify(c2, cfg).ok);
}

TEST(Stages, StageTwoRejectsNonMgu) {
  Signature sig = unary();
  Pattern t1 = parse_term(sig, "f(x)"), t2 = parse_term(sig, "f(c)");
  Sort S{"S"};
  EXPECT_THROW(gen_stage2(sig, t1, t2, Substitution{{Variable{"x", S}, parse_term(sig, "g(c)")}}), NotMgu);
  // Not idempotent.
  Substitution cyclic{{Variable{"x", S}, parse_term(sig, "c")}, {Variable{"y", S}, parse_term(sig, "f(x)")}};
  EXPECT_THROW(gen_stage2(sig, parse_term(sig, "g(x)"), parse_term(sig, "g(c)"), cyclic), NotMgu);
}

TEST(Stages, StageOneRejectsFailure) {
  Signature sig = unary();
  EXPECT_THROW(gen_stage1(sig, parse_term(sig, "f(x)"), parse_term(sig, "g(x)")), NotSolved);
}

TEST(Expansion, LineCounts) {
  Signature sig = unary();
  Pattern phi = parse_pattern(sig, "g(x)");
  auto count = [&](DerivedRule r, const char* l, const char* rr) {
    return expand_derived_rule(r, sig, RuleInstance{phi, parse_term(sig, l), parse_term(sig, rr)}).lines.size();
  };
  EXPECT_EQ(count(DerivedRule::Delete, "c", "c"), 2u);
  EXPECT_EQ(count(DerivedRule::Decomposition, "f(x)", "f(c)"), 6u);
  EXPECT_EQ(count(DerivedRule::Orient, "c", "y"), 5u);
  EXPECT_EQ(count(DerivedRule::Elimination, "x", "c"), 8u);
  EXPECT_EQ(count(DerivedRule::FpattForward, "f(x)", "f(c)"), 9u);
  EXPECT_EQ(count(DerivedRule::FpattBackward, "f(x)", "f(c)"), 8u);
}

TEST(Expansion, DecompositionBodyEndsWithArgumentEquations) {
  Signature sig = parse_signature("sort S\nsymbol f : S S -> S [functional, injective]\nsymbol c : -> S [functional]\n");
  Certificate c = expand_derived_rule(DerivedRule::Decomposition, sig,
                                      RuleInstance{parse_pattern(sig, "c"), parse_term(sig, "f(x, y)"), parse_term(sig, "f(c, c)")});
  EXPECT_EQ(to_string(*c.conclusion), "c /\\ x = c /\\ y = c");
  bool cites_axiom = false;
  for (const auto& l : c.lines) cites_axiom = cites_axiom || (l.why.rule == Just::Axiom && l.why.tag == "injectivity(f)");
  EXPECT_TRUE(cites_axiom);
}

TEST(Expansion, ExpandedStagesUseBaseRulesOnly) {
  WorkedExample ex;
  for (const Certificate& c : {gen_stage1(ex.sig, ex.t1, ex.t2, ex.outcome, GenOptions{true}),
                               gen_stage2(ex.sig, ex.t1, ex.t2, ex.sigma(), GenOptions{true})}) {
    for (const auto& l : c.lines) {
      EXPECT_NE(l.why.rule, Just::DerivedDelta);
      EXPECT_NE(l.why.rule, Just::PropFpattForward);
      EXPECT_NE(l.why.rule, Just::PropFpattBackward);
      EXPECT_NE(l.why.rule, Just::EqSymmetry);
    }
  }
}

TEST(Certificates, JsonRoundTripAndRendering) {
  WorkedExample ex;
  Certificate c = gen_stage1(ex.sig, ex.t1, ex.t2, ex.outcome, GenOptions{true});
  Certificate back = certificate_from_json(ex.sig, to_json(c));
  EXPECT_EQ(to_json(back), to_json(c));
  std::string text = render_text(gen_stage1(ex.sig, ex.t1, ex.t2, ex.outcome));
  EXPECT_EQ(text.substr(0, text.find('\n')), "# stage1");
  EXPECT_NE(text.find("viii  f(x, g(1), g(z)) /\\ x = g(1) /\\ y = 1 /\\ z = g(g(1))"), std::string::npos);
  nlohmann::json bad = to_json(c);
  bad["lines"][0]["justification"]["rule"] = "Oracle";
  EXPECT_THROW(certificate_from_json(ex.sig, bad), ParseError);
}

TEST(Certificates, RomanNumerals) {
  EXPECT_EQ(roman(1), "i");
  EXPECT_EQ(roman(4), "iv");
  EXPECT_EQ(roman(17), "xvii");
  EXPECT_EQ(roman(49), "xlix");
}

}  // namespace
