#include <alsp/logic.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace alsp;

namespace {

Term c(const char* n) { return Term::constant(n); }
Term v(const char* n) { return Term::variable(n); }

} // namespace

TEST(Term, NamesAreValidated) {
    EXPECT_NO_THROW(c("price10"));
    EXPECT_NO_THROW(v("QuoteRequest"));
    EXPECT_THROW(c("Upper"), Error);
    EXPECT_THROW(v("lower"), Error);
    EXPECT_THROW(c(""), Error);
    EXPECT_THROW(Term::compound("f", {}), Error);
    EXPECT_THROW(c("a-b"), Error);
}

TEST(Term, GroundnessAndDepth) {
    Term h = Term::compound("hash", {c("f"), Term::compound("encryptGoods", {v("K"), v("Goods")})});
    EXPECT_FALSE(h.is_ground());
    EXPECT_EQ(h.depth(), 2u);
    EXPECT_EQ(c("a").depth(), 0u);
    Term r = Term::compound("receipt", {Term::compound("sk", {c("t1")}), c("k1"), Term::compound("computedReceipt", {c("r1")})});
    EXPECT_TRUE(r.is_ground());
    EXPECT_EQ(r.depth(), 2u);
}

TEST(Term, OrderingIsTotalAndDeterministic) {
    std::vector<Term> ts = {Term::compound("f", {c("b")}), c("b"), Term::compound("f", {c("a"), c("a")}),
                            c("a"), Term::compound("f", {c("a")}), v("X")};
    std::sort(ts.begin(), ts.end());
    std::vector<std::string> got;
    for (const auto& t : ts) got.push_back(to_string(t));
    EXPECT_EQ(got, (std::vector<std::string>{"X", "a", "b", "f(a)", "f(b)", "f(a, a)"}));
}

TEST(Atom, EqualityNeedsPredicateArityAndArgs) {
    EXPECT_EQ(Atom("p", {c("a")}), Atom("p", {c("a")}));
    EXPECT_NE(Atom("p", {c("a")}), Atom("p", {c("a"), c("a")}));
    EXPECT_NE(Atom("p", {c("a")}), Atom("q", {c("a")}));
    EXPECT_NE(Atom("p", {c("a")}), Atom("p", {c("b")}));
    EXPECT_TRUE(Atom::equality(v("K1"), v("K")).is_equality());
}

TEST(Rule, FactsAndConstraints) {
    Rule f = Rule::fact(Atom("vendor", {c("v1")}));
    EXPECT_TRUE(f.is_fact());
    Rule k;
    k.body.push_back(Literal::naf(Atom("attack", {c("u1")})));
    EXPECT_TRUE(k.is_constraint());
    EXPECT_EQ(to_string(k), ":- not attack(u1).");
    EXPECT_EQ(to_string(f), "vendor(v1).");
}

TEST(Rule, VariablesInFirstOccurrenceOrder) {
    Rule r;
    r.head = Atom("p", {v("Y")});
    r.body = {Literal::pos(Atom("q", {v("X"), v("Y")})), Literal::pos(Atom::equality(v("Z"), v("X")))};
    EXPECT_EQ(rule_variables(r), (std::vector<std::string>{"Y", "X", "Z"}));
    EXPECT_EQ(to_string(r), "p(Y) :- q(X, Y), Z = X.");
}

TEST(Rule, StructuralEqualityIgnoresLocation) {
    Rule a = Rule::fact(Atom("s"));
    Rule b = a;
    b.location = {"file", 3, 4};
    EXPECT_EQ(a, b);
    EXPECT_EQ(b.location.str(), "file:3:4");
}
