#include <gtest/gtest.h>

#include "generators.hpp"
#include "mlunify/syntax.hpp"
#include "mlunify/unifier.hpp"

using namespace mlunify;
using mlunify::testing::Gen;

namespace {

const Sort S{"S"};
const Sort Nat{"Nat"};

Signature fg() {
  return parse_signature(R"(
sort S
symbol f : S S -> S [functional, injective]
symbol g : S S -> S [functional, injective]
symbol c : -> S [functional, injective]
)");
}

Equation eq(const Signature& sig, const char* l, const char* r) { return Equation{parse_term(sig, l), parse_term(sig, r)}; }

std::vector<Rule> rules_of(const std::vector<TraceStep>& trace) {
  std::vector<Rule> out;
  for (const auto& s : trace) out.push_back(s.rule);
  return out;
}

TEST(Problem, RejectsMixedSortsAndNonTerms) {
  Signature sig = parse_signature("sort A B\nsymbol a : -> A [functional]\nsymbol b : -> B [functional]\n");
  EXPECT_THROW(Problem({Equation{app(sig, "a"), app(sig, "b")}}), SortMismatch);
  Pattern x = var("x", Sort{"A"});
  EXPECT_THROW(Problem({Equation{conj(x, x), x}}), NotATerm);
}

TEST(Rules, DecompositionThenOrient) {
  Signature sig = fg();
  Problem p({eq(sig, "f(g(x,c),y)", "f(z,y')")});
  auto s1 = step(p);
  ASSERT_TRUE(s1);
  EXPECT_EQ(s1->rule, Rule::Decomposition);
  EXPECT_EQ(s1->result, Problem({eq(sig, "g(x,c)", "z"), eq(sig, "y", "y'")}));
  auto s2 = step(s1->result);
  ASSERT_TRUE(s2);
  EXPECT_EQ(s2->rule, Rule::Orient);
  EXPECT_EQ(s2->result, Problem({eq(sig, "z", "g(x,c)"), eq(sig, "y", "y'")}));
  EXPECT_FALSE(step(s2->result));
}

TEST(Rules, OccursCheckGivesBottom) {
  Signature sig = parse_signature("sort S\nsymbol f : S -> S [functional, injective]\n");
  auto s = step(Problem({eq(sig, "x", "f(x)")}));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->rule, Rule::OccursCheck);
  EXPECT_TRUE(s->result.is_bottom());
}

TEST(Rules, FailureRulesTakePriority) {
  Signature sig = fg();
  // A clash on the second equation wins over a decomposition on the first.
  auto s = step(Problem({eq(sig, "f(x,y)", "f(c,c)"), eq(sig, "c", "g(x,y)")}));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->rule, Rule::SymbolClash);
  EXPECT_EQ(s->position, 1u);
}

TEST(Rules, DeleteOnIdenticalSides) {
  Signature sig = fg();
  auto s = step(Problem({eq(sig, "c", "c")}));
  ASSERT_TRUE(s);
  EXPECT_EQ(s->rule, Rule::Delete);
  EXPECT_TRUE(s->result.equations().empty());
  EXPECT_TRUE(unifiers_preserved(Problem({eq(sig, "c", "c")}), *s, {Substitution{}}));
}

TEST(Unify, ExampleTwo) {
  Signature sig = fg();
  auto out = unify(parse_term(sig, "f(g(x,c),y)"), parse_term(sig, "f(z,y')"));
  ASSERT_TRUE(std::holds_alternative<Solved>(out));
  const auto& s = std::get<Solved>(out);
  EXPECT_EQ(s.mgu, (Substitution{{Variable{"z", S}, parse_term(sig, "g(x,c)")}, {Variable{"y", S}, var("y'", S)}}));
  EXPECT_EQ(rules_of(s.trace), (std::vector<Rule>{Rule::Decomposition, Rule::Orient}));
}

TEST(Unify, WorkedExample) {
  Signature sig = mlunify::testing::worked_signature();
  auto out = unify(parse_term(sig, "f(x,g(1),g(z))"), parse_term(sig, "f(g(y),g(y),g(g(x)))"));
  ASSERT_TRUE(std::holds_alternative<Solved>(out));
  const auto& s = std::get<Solved>(out);
  EXPECT_EQ(to_string(s.mgu), "{x -> g(1), y -> 1, z -> g(g(1))}");
  EXPECT_EQ(rules_of(s.trace), (std::vector<Rule>{Rule::Decomposition, Rule::Decomposition, Rule::Decomposition,
                                                  Rule::Orient, Rule::Elimination, Rule::Elimination}));
}

TEST(Unify, IdenticalTermsGiveEmptyMgu) {
  Signature sig = fg();
  Pattern t = parse_term(sig, "f(g(x,c),y)");
  auto out = unify(t, t);
  ASSERT_TRUE(std::holds_alternative<Solved>(out));
  EXPECT_TRUE(std::get<Solved>(out).mgu.empty());
  EXPECT_EQ(rules_of(std::get<Solved>(out).trace), std::vector<Rule>{Rule::Delete});
}

TEST(Unify, SymbolClash) {
  Signature sig = fg();
  auto out = unify(parse_term(sig, "f(g(x,c),y)"), parse_term(sig, "g(g(x,c),y)"));
  ASSERT_TRUE(std::holds_alternative<Failed>(out));
  EXPECT_EQ(std::get<Failed>(out).reason, Rule::SymbolClash);
}

TEST(Unify, SortMismatchIsAnError) {
  Signature sig = parse_signature("sort A B\nsymbol a : -> A [functional]\nsymbol b : -> B [functional]\n");
  EXPECT_THROW(unify(app(sig, "a"), app(sig, "b")), SortMismatch);
}

TEST(Unify, StepBudget) {
  Signature sig = mlunify::testing::worked_signature();
  EXPECT_THROW(unify(parse_term(sig, "f(x,g(1),g(z))"), parse_term(sig, "f(g(y),g(y),g(g(x)))"), UnifyOptions{2}),
               StepLimitExceeded);
}

TEST(SolvedForm, Recognizer) {
  Signature sig = fg();
  EXPECT_TRUE(is_solved_form(Problem({eq(sig, "z", "g(x,c)"), eq(sig, "y", "y'")})));
  EXPECT_FALSE(is_solved_form(Problem({Equation{var("x", S), app(sig, "g", {var("x", S), app(sig, "c")})}})));
  EXPECT_TRUE(is_solved_form(Problem(std::vector<Equation>{})));
  EXPECT_FALSE(is_solved_form(Problem({eq(sig, "x", "y"), eq(sig, "y", "c")})));
}

TEST(Preservation, DecompositionStepOfExampleTwo) {
  Signature sig = fg();
  Problem p({eq(sig, "f(g(x,c),y)", "f(z,y')")});
  auto s = step(p);
  ASSERT_TRUE(s);
  Substitution cand{{Variable{"z", S}, parse_term(sig, "g(x,c)")}, {Variable{"y", S}, var("y'", S)}};
  EXPECT_TRUE(unifiers_preserved(p, *s, {cand}));
  EXPECT_TRUE(unifiers_preserved(p, *s, {}));
}

// Independent oracle: every ground unifier found by brute-force enumeration
// over a small pool must be an instance of the computed mgu, and a failed
// problem must have none.
TEST(Properties, MguIsMostGeneralAgainstGroundUnifiers) {
  Signature sig = fg();
  Gen gen(31);
  std::vector<Pattern> ground{parse_term(sig, "c"), parse_term(sig, "f(c,c)"), parse_term(sig, "g(c,c)")};
  int solved = 0;
  for (int i = 0; i < 800; ++i) {
    Pattern t1 = gen.term(sig, S, 2, 2), t2 = gen.term(sig, S, 2, 2);
    auto out = unify(t1, t2);
    auto vars = free_vars(conj(t1, t2));
    std::vector<Variable> vs(vars.begin(), vars.end());
    std::size_t combos = 1;
    for (std::size_t k = 0; k < vs.size(); ++k) combos *= ground.size();
    for (std::size_t code = 0; code < combos; ++code) {
      Substitution theta;
      std::size_t rest = code;
      for (const auto& v : vs) {
        theta.bind(v, ground[rest % ground.size()]);
        rest /= ground.size();
      }
      if (!(apply_subst(t1, theta) == apply_subst(t2, theta))) continue;
      ASSERT_TRUE(std::holds_alternative<Solved>(out)) << to_string(t1) << " =? " << to_string(t2);
      EXPECT_TRUE(more_general(std::get<Solved>(out).mgu, theta, vars));
    }
    if (auto* s = std::get_if<Solved>(&out)) {
      ++solved;
      EXPECT_EQ(apply_subst(t1, s->mgu), apply_subst(t2, s->mgu));
      EXPECT_EQ(compose(s->mgu, s->mgu), s->mgu);
      EXPECT_TRUE(replay(Problem({Equation{t1, t2}}), s->trace));
    }
  }
  EXPECT_GT(solved, 50);
}

TEST(Properties, TraceReplaysAndEndsInSolvedForm) {
  Signature sig = mlunify::testing::property_signature();
  Gen gen(32);
  for (int i = 0; i < 300; ++i) {
    auto [t1, t2] = gen.pair(sig, 4);
    auto out = unify(t1, t2);
    Problem start({Equation{t1, t2}});
    const auto& trace = std::holds_alternative<Solved>(out) ? std::get<Solved>(out).trace : std::get<Failed>(out).trace;
    auto end = replay(start, trace);
    ASSERT_TRUE(end);
    if (std::holds_alternative<Solved>(out)) {
      EXPECT_TRUE(is_solved_form(*end));
      EXPECT_EQ(substitution_of(*end), std::get<Solved>(out).mgu);
    } else {
      EXPECT_TRUE(end->is_bottom());
    }
  }
}

}  // namespace
