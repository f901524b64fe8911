#include <gtest/gtest.h>

#include "generators.hpp"
#include "mlunify/syntax.hpp"

using namespace mlunify;

namespace {

const Sort Nat{"Nat"};

Signature nat() {
  return parse_signature(R"(
# naturals
sort Nat Bool
symbol zero : -> Nat [functional, injective]
symbol succ : Nat -> Nat [functional, injective]
symbol plus : Nat Nat -> Nat [functional]
symbol le : Nat Nat -> Bool
)");
}

TEST(SignatureFile, ParsesDeclarationsAndFlags) {
  Signature sig = nat();
  ASSERT_NE(sig.find("succ"), nullptr);
  EXPECT_TRUE(sig.symbol("succ").injective);
  EXPECT_TRUE(sig.symbol("plus").functional);
  EXPECT_FALSE(sig.symbol("plus").injective);
  EXPECT_TRUE(sig.symbol("zero").arity.empty());
  EXPECT_EQ(sig.symbol("le").result, Sort{"Bool"});
}

TEST(SignatureFile, RoundTrips) {
  Signature sig = nat();
  Signature again = parse_signature(to_string(sig));
  EXPECT_EQ(to_string(again), to_string(sig));
}

TEST(SignatureFile, ReportsLine) {
  try {
    parse_signature("sort A\nsymbol f : A -> B\n");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("2"), std::string::npos);
  }
  EXPECT_THROW(parse_signature("sort A\nfrobnicate\n"), ParseError);
}

TEST(Parser, TermsAndConstants) {
  Signature sig = nat();
  Pattern t = parse_term(sig, "plus(succ(x), zero)");
  EXPECT_EQ(t, app(sig, "plus", {app(sig, "succ", {var("x", Nat)}), app(sig, "zero")}));
  EXPECT_THROW(parse_term(sig, "x /\\ succ(y)"), NotATerm);
  EXPECT_THROW(parse_term(sig, "succ(x"), ParseError);
  EXPECT_THROW(parse_term(sig, "succ(x, y)"), IllSorted);
}

TEST(Parser, PrecedenceAndAssociativity) {
  Signature sig = nat();
  Pattern a = var("a", Nat), b = var("b", Nat), c = var("c", Nat);
  SortEnv env{{"a", Nat}, {"b", Nat}, {"c", Nat}};
  EXPECT_EQ(parse_pattern(sig, "a /\\ b \\/ c", env), disj(conj(a, b), c));
  EXPECT_EQ(parse_pattern(sig, "a -> b -> c", env), implies(a, implies(b, c)));
  EXPECT_EQ(parse_pattern(sig, "~a /\\ b", env), conj(neg(a), b));
  EXPECT_EQ(parse_pattern(sig, "a <-> b", env), iff(a, b));
  EXPECT_EQ(parse_pattern(sig, "exists a . a /\\ b", env), exists(Variable{"a", Nat}, conj(a, b)));
}

TEST(Parser, EqualityAndMembershipSorts) {
  Signature sig = nat();
  Pattern e = parse_pattern(sig, "x = succ(y)", {}, Sort{"Bool"});
  EXPECT_EQ(e, equals(var("x", Nat), app(sig, "succ", {var("y", Nat)}), Sort{"Bool"}));
  Pattern q = parse_pattern(sig, "x ={Bool} zero");
  EXPECT_EQ(q.sort(), Sort{"Bool"});
  Pattern m = parse_pattern(sig, "x in{Nat} succ(x)");
  EXPECT_TRUE(as_member(m));
  EXPECT_TRUE(is_ceil(parse_pattern(sig, "|_ succ(x) _|{Bool}")));
}

TEST(Parser, SortHintsFromArguments) {
  Signature sig = nat();
  Pattern p = parse_pattern(sig, "le(x, y) /\\ z");
  EXPECT_EQ(p.sort(), Sort{"Bool"});
  EXPECT_EQ(at(p, {0, 0}).sort(), Nat);
  EXPECT_EQ(at(p, {1}).sort(), Sort{"Bool"});
}

TEST(Printer, PlainSugar) {
  Signature sig = nat();
  EXPECT_EQ(to_string(parse_pattern(sig, "x = succ(zero)")), "x = succ(zero)");
  EXPECT_EQ(to_string(parse_pattern(sig, "zero \\/ exists x:Nat . succ(x)")), "zero \\/ (exists x . succ(x))");
  EXPECT_EQ(to_string(parse_pattern(sig, "~(x -> zero)")), "~(x -> zero)");
}

TEST(Printer, SubstitutionFormat) {
  Signature sig = nat();
  Substitution s{{Variable{"y", Nat}, app(sig, "zero")}, {Variable{"x", Nat}, parse_term(sig, "succ(zero)")}};
  EXPECT_EQ(to_string(s), "{x -> succ(zero), y -> zero}");
  EXPECT_EQ(to_string(Substitution{}), "{}");
}

TEST(Printer, QualifiedRoundTripOnRandomPatterns) {
  Signature sig = mlunify::testing::property_signature();
  mlunify::testing::Gen gen(21);
  const Sort A{"A"}, B{"B"};
  for (int i = 0; i < 300; ++i) {
    Pattern t1 = gen.term(sig, A, 3), t2 = gen.term(sig, A, 3), u = gen.term(sig, B, 2);
    std::vector<Pattern> forms{equals(t1, t2, B),
                               implies(conj(t1, t2), neg(t1)),
                               exists(Variable{"x", A}, iff(t1, member(t2, t1, A))),
                               disj(bottom(A), conj(t1, top(A))),
                               defined(u, A)};
    for (const auto& p : forms) {
      std::string text = to_string(p, PrintStyle::Qualified);
      EXPECT_EQ(parse_pattern(sig, text), p) << text;
    }
  }
}

}  // namespace
