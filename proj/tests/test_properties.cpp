#include <random>

#include <gtest/gtest.h>

#include "entrolib/properties.hpp"
#include "test_support.hpp"

using namespace entrolib;
using namespace entrolib::testing;

namespace {

PropertyStatus status_of(const VerifyReport &r, std::string_view name)
{
    const auto *p = r.find(name);
    EXPECT_NE(p, nullptr) << name;
    return p ? p->status : PropertyStatus::Fail;
}

std::string dump(const VerifyReport &r)
{
    std::string s;
    for (const auto &p : r.results) {
        s += p.name + ": " + std::string(to_string(p.status)) + " " + p.detail + " " + p.witness.value_or("") + "\n";
    }
    return s + r.stopped;
}

} // namespace

TEST(Properties, SubmultiplicativeChecker)
{
    EXPECT_EQ(detail::check_submultiplicative({4, 16, 64}).status, PropertyStatus::Pass);
    auto bad = detail::check_submultiplicative({2, 4, 9, 16});
    EXPECT_EQ(bad.status, PropertyStatus::Fail);
    EXPECT_EQ(bad.witness, "(1, 2)");
    EXPECT_EQ(detail::check_submultiplicative({3, 9, 27, 82}).witness, "(1, 3)");
}

TEST(Properties, Conjugate)
{
    auto ctx = qctx({"x", "y"});
    auto psi = detail::conjugate(map_on(ctx, {"x*y^2"}, {"x^2", "y^3"}), {1, 0});
    EXPECT_EQ(format_polynomial(psi.images()[0]), "x^3");
    EXPECT_EQ(format_polynomial(psi.images()[1]), "y^2");
    EXPECT_EQ(format_polynomial(psi.ring()->quotient().generators()[0]), "x^2*y");
    EXPECT_EQ(detail::test_permutations(3).size(), 5u);
    EXPECT_EQ(detail::test_permutations(4).size(), 2u);
}

TEST(Properties, FrobeniusAllPass)
{
    auto F2 = pctx(2, {"x", "y"});
    VerifyOptions o;
    o.n_max = 4;
    auto r = verify_properties(map_on(F2, {}, {"x^2", "y^2"}), o);
    EXPECT_TRUE(r.passed()) << dump(r);
    EXPECT_EQ(r.lambda, (std::vector<std::uint64_t>{4, 16, 64, 256}));
    EXPECT_EQ(status_of(r, "degree_equality"), PropertyStatus::Pass);
    EXPECT_EQ(status_of(r, "power_rule"), PropertyStatus::Pass);
    EXPECT_EQ(status_of(r, "components_max_law"), PropertyStatus::Skipped);
    EXPECT_EQ(r.v[1], 4u);
    EXPECT_EQ(r.w[1], 7u);
}

TEST(Properties, ComponentsApplyOnlyWhenPrimesAreInvariant)
{
    auto ctx = qctx({"x", "y"});
    auto xy = verify_properties(map_on(ctx, {"x*y"}, {"x^2", "y^3"}), {4, 512, 2, {}});
    EXPECT_TRUE(xy.passed()) << dump(xy);
    EXPECT_EQ(status_of(xy, "components_max_law"), PropertyStatus::Pass);
    EXPECT_EQ(status_of(xy, "degree_equality"), PropertyStatus::Skipped);
    EXPECT_EQ(status_of(xy, "quotient_inequality"), PropertyStatus::Pass);

    auto swap = verify_properties(map_on(ctx, {"x*y"}, {"y", "x"}), {3, 512, 2, {}});
    EXPECT_TRUE(swap.passed()) << dump(swap);
    EXPECT_EQ(status_of(swap, "components_max_law"), PropertyStatus::Skipped);
}

TEST(Properties, NilpotentAndDimensionZero)
{
    auto ctx = qctx({"x"});
    auto r = verify_properties(map_on(ctx, {"x^3"}, {"x^2"}), {4, 512, 2, {}});
    EXPECT_TRUE(r.passed()) << dump(r);
    EXPECT_EQ(r.v[0], 2u);
    EXPECT_FALSE(r.v[1]);
}

TEST(Properties, FaultInjectionIsCaught)
{
    auto F2 = pctx(2, {"x", "y"});
    VerifyOptions o;
    o.n_max = 4;
    o.length_fault = [](std::uint64_t n, std::uint64_t lam) { return n == 3 ? lam * 100 : lam; };
    auto r = verify_properties(map_on(F2, {}, {"x^2", "y^2"}), o);
    EXPECT_FALSE(r.passed());
    const auto *sub = r.find("submultiplicativity");
    ASSERT_NE(sub, nullptr);
    EXPECT_EQ(sub->status, PropertyStatus::Fail);
    EXPECT_EQ(sub->witness, "(1, 2)");
    EXPECT_EQ(status_of(r, "residue_length"), PropertyStatus::Fail);

    // An off-by-one colength breaks the residue identity first.
    o.length_fault = [](std::uint64_t, std::uint64_t lam) { return lam + 1; };
    auto off = verify_properties(map_on(F2, {}, {"x^2", "y^2"}), o);
    EXPECT_EQ(status_of(off, "residue_length"), PropertyStatus::Fail);
    EXPECT_EQ(off.find("residue_length")->witness, "n = 1");
}

TEST(Properties, RandomCorpus)
{
    std::mt19937 rng(20261016);
    int count = 0;
    auto run = [&](auto ctx, std::uint64_t n_max) {
        for (int i = 0; i < 2; ++i) {
            auto phi = random_binomial_map(ctx, rng, 2);
            auto r = verify_properties(phi, {n_max, 128, 2, {}});
            EXPECT_TRUE(r.passed()) << dump(r);
            EXPECT_GE(r.lambda.size(), 2u) << r.stopped;
            ++count;
        }
    };
    run(qctx({"x", "y"}), 3);
    run(pctx(2, {"x", "y"}), 3);
    run(pctx(3, {"x", "y"}), 3);
    run(pctx(5, {"x", "y"}), 3);
    run(pctx(3, {"x", "y", "z"}), 3);
    EXPECT_EQ(count, 10);
}
