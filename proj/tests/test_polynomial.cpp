#include <random>

#include <gtest/gtest.h>

#include "entrolib/parser.hpp"
#include "entrolib/polynomial.hpp"
#include "test_support.hpp"

using namespace entrolib;
using namespace entrolib::testing;

TEST(Polynomial, ProductsAndFreshmansDream)
{
    auto q = qctx({"x", "y"});
    auto x = PolyQ::variable(q, 0), y = PolyQ::variable(q, 1);
    EXPECT_EQ((x + y) * (x - y), x * x - y * y);

    auto f2 = pctx(2, {"x", "y"});
    auto a = PolyP::variable(f2, 0), b = PolyP::variable(f2, 1);
    EXPECT_EQ((a + b).pow(2), a * a + b * b);

    std::mt19937 rng(3);
    for (int i = 0; i < 20; ++i) {
        auto f = random_poly(q, rng, 5, 4);
        EXPECT_TRUE((PolyQ::zero(q) * f).is_zero());
    }
}

TEST(Polynomial, ContextMismatch)
{
    auto a = qctx({"x", "y"});
    auto b = qctx({"x", "z"});
    try {
        auto r = PolyQ::variable(a, 0) + PolyQ::variable(b, 0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ContextMismatch);
    }
}

TEST(Polynomial, Substitute)
{
    auto q = qctx({"x", "y"});
    auto P = [&](const char *s) { return parse_polynomial<Rationals>(s, q); };
    EXPECT_EQ(substitute(P("x*y"), {P("x^2"), P("y^3")}), P("x^2*y^3"));
    EXPECT_EQ(substitute(P("x + y"), {P("y"), P("x")}), P("x + y"));
    const std::vector<PolyQ> phi{P("x^2"), P("y^3")};
    EXPECT_EQ(substitute(substitute(P("x^2 - y"), phi), phi), P("x^8 - y^9"));
    EXPECT_THROW(substitute(P("x"), {P("x")}), Error);
}

TEST(Polynomial, LeadingTerm)
{
    auto q = qctx({"x", "y"});
    auto P = [&](const char *s) { return parse_polynomial<Rationals>(s, q); };
    EXPECT_EQ(P("x^2 + x*y + y^2").leading_term(MonomialOrder::DegRevLex).first, Monomial({2, 0}));
    EXPECT_EQ(P("x + y^3").leading_term(MonomialOrder::DegLex).first, Monomial({0, 3}));
    auto c = P("5").leading_term();
    EXPECT_EQ(c.first, Monomial({0, 0}));
    EXPECT_EQ(c.second, 5);
    try {
        P("0").leading_term();
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::ZeroPolynomial);
    }
}

TEST(Polynomial, SubstitutionIsAHomomorphism)
{
    std::mt19937 rng(11);
    auto q = qctx({"x", "y", "z"});
    for (int it = 0; it < 30; ++it) {
        auto f = random_poly(q, rng, 4, 3);
        auto g = random_poly(q, rng, 4, 3);
        std::vector<PolyQ> imgs;
        for (int i = 0; i < 3; ++i) {
            imgs.push_back(random_poly(q, rng, 3, 2));
        }
        ASSERT_EQ(substitute(f + g, imgs), substitute(f, imgs) + substitute(g, imgs));
        ASSERT_EQ(substitute(f * g, imgs), substitute(f, imgs) * substitute(g, imgs));
        ASSERT_EQ(substitute(f, variables(q)), f);
    }
    auto p3 = pctx(3, {"x", "y"});
    for (int it = 0; it < 30; ++it) {
        auto f = random_poly(p3, rng, 4, 3);
        auto g = random_poly(p3, rng, 4, 3);
        std::vector<PolyP> imgs{random_poly(p3, rng, 3, 2), random_poly(p3, rng, 3, 2)};
        ASSERT_EQ(substitute(f * g, imgs), substitute(f, imgs) * substitute(g, imgs));
    }
}

TEST(Polynomial, MonomialOrderAxioms)
{
    std::mt19937 rng(23);
    std::uniform_int_distribution<std::uint32_t> e(0, 4);
    auto rand_mono = [&] { return Monomial({e(rng), e(rng), e(rng)}); };
    for (auto ord : {MonomialOrder::DegRevLex, MonomialOrder::DegLex}) {
        for (int it = 0; it < 500; ++it) {
            auto u = rand_mono(), v = rand_mono(), w = rand_mono();
            auto c = compare(u, v, ord);
            ASSERT_EQ(c == 0, u == v);
            ASSERT_TRUE(compare(v, u, ord) == (0 <=> c));
            if (c < 0) {
                ASSERT_TRUE(compare(u * w, v * w, ord) < 0);
            }
            ASSERT_TRUE(compare(Monomial(3), u, ord) <= 0);
            if (u.divides(v)) {
                ASSERT_TRUE(compare(u, v, ord) <= 0);
            }
        }
    }
}

TEST(Polynomial, TermBudget)
{
    auto ctx = VariableContext<Rationals>::make({"x", "y"}, Rationals{}, 50);
    auto f = parse_polynomial<Rationals>("x + y + 1", ctx);
    EXPECT_NO_THROW(f.pow(5));
    try {
        f.pow(12);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::BudgetExceeded);
    }
}
