#include <gtest/gtest.h>

#include "minmove/pa/normal_form.hpp"
#include "minmove/pa/text.hpp"
#include "support/generators.hpp"

using namespace minmove;
using namespace minmove::pa;

namespace {

const char* kExampleFormula =
    "forall x1 x2 : exists z1 z2 z3 : (x1 + y = z3 and y >= 0) or "
    "(3*x1 + 10*y - 3*z1 <= 13 and 2*x2 + 5*y - z2 <= 11 and x1 + 1*y - z3 >= 9 and z1 - z2 + 2*z3 <= 6)";

LinearAtom atom(std::map<std::string, Int> coeffs, Int bound) { return LinearAtom{std::move(coeffs), bound}; }

bool dnf_holds(const std::vector<ilp::LinearSystem>& dnf, const Assignment& a) {
    for (const auto& sys : dnf) {
        std::vector<Int> point;
        for (const auto& v : sys.vars()) point.push_back(a.at(v));
        bool all = true;
        for (const auto& row : sys.rows()) all = all && row.satisfied_by(point);
        if (all) return true;
    }
    return false;
}

}  // namespace

TEST(ParseFormula, ExistsConjunction) {
    const Formula f = parse_formula("exists x : x <= 0 and -1*x <= 0");
    const Formula want = make_exists({"x"}, make_and({make_atom(atom({{"x", 1}}, 0)), make_atom(atom({{"x", -1}}, 0))}));
    EXPECT_EQ(f, want);
}

TEST(ParseFormula, StrictShift) { EXPECT_EQ(parse_formula("x < 3"), make_atom(atom({{"x", 1}}, 2))); }

TEST(ParseFormula, SurfaceRelations) {
    EXPECT_EQ(parse_formula("x > 3"), make_atom(atom({{"x", -1}}, -4)));
    EXPECT_EQ(parse_formula("2*x >= y + 1"), make_atom(atom({{"x", -2}, {"y", 1}}, -1)));
    EXPECT_EQ(parse_formula("x = 2"), make_and({make_atom(atom({{"x", 1}}, 2)), make_atom(atom({{"x", -1}}, -2))}));
}

TEST(ParseFormula, ExampleShape) {
    const Formula f = parse_formula(kExampleFormula);
    EXPECT_EQ(free_variables(f), (std::set<std::string>{"y"}));
    EXPECT_EQ(measure(f).depth, 2);
}

TEST(ParseFormula, CommentsAndPrecedence) {
    const Formula f = parse_formula("# leading comment\nx <= 1 or y <= 2 and not z <= 3 # trailing");
    ASSERT_EQ(f.kind, Kind::kOr);
    EXPECT_EQ(f.children[1].kind, Kind::kAnd);
    EXPECT_EQ(f.children[1].children[1].kind, Kind::kNot);
}

TEST(ParseFormula, Errors) {
    try {
        parse_formula("x <=\n  y ?");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2);
        EXPECT_EQ(e.column(), 5);
    }
    EXPECT_THROW(parse_formula("exists x x : x <= 0"), ParseError);
    EXPECT_THROW(parse_formula("exists x : forall x : x <= 0"), ParseError);
    EXPECT_THROW(parse_formula("x <= "), ParseError);
    EXPECT_THROW(parse_formula("(x <= 1"), ParseError);
    EXPECT_THROW(parse_formula("x y <= 1"), ParseError);
}

TEST(EvalQf, Examples) {
    EXPECT_TRUE(eval_qf(parse_formula("x <= 0"), {{"x", 0}}));
    EXPECT_FALSE(eval_qf(parse_formula("not x <= 0"), {{"x", 0}}));
    EXPECT_TRUE(eval_qf(parse_formula("2*x + 3*y <= 5 and x >= 0"), {{"x", 1}, {"y", 1}}));
    EXPECT_THROW(eval_qf(parse_formula("x <= 0"), {}), Error);
    EXPECT_THROW(eval_qf(parse_formula("exists x : x <= 0"), {}), Error);
}

TEST(NegateNnf, Examples) {
    EXPECT_EQ(negate_nnf(parse_formula("2*x <= 5")), make_atom(atom({{"x", -2}}, -6)));
    EXPECT_EQ(negate_nnf(parse_formula("x <= 0 and y <= 0")),
              make_or({make_atom(atom({{"x", -1}}, -1)), make_atom(atom({{"y", -1}}, -1))}));
    const Formula twice = negate_nnf(negate_nnf(parse_formula("x <= 0")));
    for (Int x = -5; x <= 5; ++x) EXPECT_EQ(eval_qf(twice, {{"x", x}}), x <= 0);
}

TEST(ToDnf, Distribution) {
    const auto dnf = dnf_conjunctions(parse_formula("(a <= 1 or b <= 2) and (c <= 3 or d <= 4)"));
    ASSERT_EQ(dnf.size(), 4u);
    const std::vector<Conjunction> want{{atom({{"a", 1}}, 1), atom({{"c", 1}}, 3)},
                                        {atom({{"a", 1}}, 1), atom({{"d", 1}}, 4)},
                                        {atom({{"b", 1}}, 2), atom({{"c", 1}}, 3)},
                                        {atom({{"b", 1}}, 2), atom({{"d", 1}}, 4)}};
    EXPECT_EQ(dnf, want);
}

TEST(ToDnf, SingleAtom) {
    const auto dnf = to_dnf(parse_formula("x - y <= 4"));
    ASSERT_EQ(dnf.size(), 1u);
    EXPECT_EQ(dnf[0].num_rows(), 1u);
    EXPECT_EQ(dnf[0].vars(), (std::vector<std::string>{"x", "y"}));
}

TEST(ToDnf, ExampleMatrix) {
    const auto dnf = to_dnf(split_prenex(parse_formula(kExampleFormula)).matrix);
    ASSERT_EQ(dnf.size(), 2u);
    for (const auto& sys : dnf) EXPECT_LE(sys.num_rows(), 4u);
}

TEST(ToDnf, DuplicateDisjunctsMerge) {
    EXPECT_EQ(to_dnf(parse_formula("(x <= 1 and y <= 1) or (y <= 1 and x <= 1)")).size(), 1u);
}

TEST(Measure, Examples) {
    EXPECT_EQ(measure(parse_formula(kExampleFormula)), (FormulaParams{2, {1, 2, 3}, 2, 4, 10, 13}));
    EXPECT_EQ(measure(parse_formula("x <= 0")), (FormulaParams{0, {1}, 1, 1, 1, 0}));
    EXPECT_EQ(measure(parse_formula("exists x : x <= 7")), (FormulaParams{1, {0, 1}, 1, 1, 1, 7}));
    EXPECT_THROW(measure(parse_formula("x <= 0 and (exists y : y <= 0)")), Error);
}

TEST(Substitute, Examples) {
    EXPECT_EQ(substitute(parse_formula("x + s <= 3"), {{"s", 1}}), parse_formula("x <= 2"));
    const Formula f = parse_formula(kExampleFormula);
    EXPECT_EQ(substitute(f, {}), f);
    const Formula closed = substitute(f, {{"y", 0}});
    EXPECT_TRUE(free_variables(closed).empty());
    EXPECT_EQ(measure(closed).dims, (std::vector<int>{0, 2, 3}));
    EXPECT_THROW(substitute(f, {{"z1", 0}}), Error);
}

TEST(SubstituteExpr, RespectsShadowing) {
    const Formula f = parse_formula("s <= 1 and (exists s : s <= 2)");
    const Formula g = substitute_expr(f, {{"s", LinearExpr::var("t") + LinearExpr(1)}});
    EXPECT_EQ(g, parse_formula("t <= 0 and (exists s : s <= 2)"));
}

TEST(PrintFormula, RoundTripsExample) {
    const Formula f = parse_formula(kExampleFormula);
    EXPECT_EQ(parse_formula(print_formula(f)), f);
}

TEST(PrintFormula, Constants) {
    EXPECT_EQ(print_formula(make_atom(atom({}, -3))), "0 <= -3");
    EXPECT_TRUE(eval_qf(parse_formula(print_formula(make_true())), {}));
    EXPECT_FALSE(eval_qf(parse_formula(print_formula(make_false())), {}));
}

TEST(Measure, MaxConstantMatchesDnf) {
    EXPECT_EQ(max_constant(parse_formula("exists x : not (x <= 4) and x >= -2")), 5);
    EXPECT_EQ(max_constant(make_and({parse_formula("x <= 9"), make_false()})), 0);
    support::Rng rng(17);
    const auto vars = support::names("v", 3);
    for (int trial = 0; trial < 300; ++trial) {
        const Formula f = support::random_qf(rng, vars, 3, 6, 3);
        ASSERT_EQ(max_constant(f), measure(f).max_constant) << print_formula(f);
    }
}

TEST(PaProperties, RoundTripRandom) {
    support::Rng rng(11);
    const auto vars = support::names("v", 3);
    for (int trial = 0; trial < 300; ++trial) {
        Formula f = support::random_qf(rng, vars, 3, 3, 3);
        if (trial % 3 == 0) f = make_exists({"q"}, make_and({f, parse_formula("q <= v1")}));
        const Formula once = parse_formula(print_formula(f));
        EXPECT_EQ(parse_formula(print_formula(once)), once);
        if (is_quantifier_free(f)) {
            support::for_each_point(3, -2, 2, [&](const std::vector<Int>& p) {
                const auto a = support::bind(vars, p);
                ASSERT_EQ(eval_qf(once, a), eval_qf(f, a));
            });
        }
    }
}

TEST(PaProperties, DnfAndNegationSoundness) {
    support::Rng rng(5);
    const auto vars = support::names("v", 3);
    for (int trial = 0; trial < 100; ++trial) {
        const Formula f = support::random_qf(rng, vars, 3, 3, 3);
        const auto dnf = to_dnf(f);
        const Formula neg = negate_nnf(f);
        support::for_each_point(3, -3, 3, [&](const std::vector<Int>& p) {
            const auto a = support::bind(vars, p);
            const bool truth = eval_qf(f, a);
            ASSERT_EQ(dnf_holds(dnf, a), truth);
            ASSERT_EQ(eval_qf(neg, a), !truth);
        });
    }
}
