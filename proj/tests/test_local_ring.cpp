#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "entrolib/local_ring.hpp"
#include "test_support.hpp"

using namespace entrolib;
using namespace entrolib::testing;

namespace {

template <CoefficientField F>
std::vector<std::string> formatted(const std::vector<Polynomial<F>> &ps)
{
    std::vector<std::string> out;
    for (const auto &p : ps) {
        out.push_back(format_polynomial(p));
    }
    return out;
}

// Least k such that every monomial of degree k lies in the monomial ideal.
std::uint64_t brute_force_w(const std::vector<Monomial> &gens, std::size_t d)
{
    for (std::uint64_t k = 0;; ++k) {
        const auto below = brute_force_standard_count(gens, d, static_cast<std::uint32_t>(k + 1), k + 1);
        const auto strictly = brute_force_standard_count(gens, d, static_cast<std::uint32_t>(k + 1), k);
        if (below == strictly) {
            return k;
        }
    }
}

ErrorKind kind_of(const std::function<void()> &fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::ParseError;
}

} // namespace

TEST(LocalRing, DimensionOfMonomialQuotients)
{
    auto ctx = qctx({"x", "y", "z"});
    EXPECT_EQ(make_ring(ctx)->dim(), 3u);
    EXPECT_EQ(make_ring(ctx, ideal_from(ctx, {"x*y"}))->dim(), 2u);
    EXPECT_EQ(make_ring(ctx, ideal_from(ctx, {"x*y", "x*z", "y*z"}))->dim(), 1u);
    EXPECT_EQ(make_ring(ctx, ideal_from(ctx, {"x^2", "y", "z^5"}))->dim(), 0u);
    EXPECT_EQ(make_ring(ctx, ideal_from(ctx, {"x*y"}))->dim_source(), DimensionSource::Computed);

    auto r = make_ring(ctx, ideal_from(ctx, {"x^2 - y"}), 2);
    EXPECT_EQ(r->dim(), 2u);
    EXPECT_EQ(r->dim_source(), DimensionSource::Declared);
    EXPECT_EQ(make_ring(ctx, ideal_from(ctx, {"x^2 - y"}))->dim_source(), DimensionSource::Unknown);
    EXPECT_EQ(kind_of([&] { make_ring(ctx, ideal_from(ctx, {"x^2 - y"}))->require_dim(); }),
              ErrorKind::MissingDimension);
    EXPECT_EQ(kind_of([&] { make_ring(ctx, ideal_from(ctx, {"x*y"}), 1); }), ErrorKind::SchemaError);
    EXPECT_EQ(kind_of([&] { make_ring(ctx, ideal_from(ctx, {"x + 1"})); }), ErrorKind::NotLocal);
}

TEST(LocalRing, MinimalVertexCovers)
{
    auto ctx = qctx({"x", "y", "z"});
    auto covers = [&](std::vector<std::string> g) {
        return minimal_vertex_covers(ideal_from(ctx, g).monomial_generators(), 3);
    };
    EXPECT_EQ(covers({"x*y"}), (std::vector<VariableSet>{{0}, {1}}));
    EXPECT_EQ(covers({"x^2", "x*y"}), (std::vector<VariableSet>{{0}}));
    EXPECT_EQ(covers({"x*y", "x*z", "y*z"}), (std::vector<VariableSet>{{0, 1}, {0, 2}, {1, 2}}));
    EXPECT_EQ(covers({}), (std::vector<VariableSet>{{}}));
}

TEST(LocalRing, ValidateEndomorphism)
{
    auto ctx = qctx({"x", "y"});
    auto ring = make_ring(ctx, ideal_from(ctx, {"x*y"}));
    EXPECT_NO_THROW(validate_endomorphism(ring, polys_from(ctx, {"x^2", "y^3"})));
    EXPECT_EQ(kind_of([&] { validate_endomorphism(ring, polys_from(ctx, {"y", "y"})); }),
              ErrorKind::NotWellDefined);
    EXPECT_EQ(kind_of([&] { validate_endomorphism(ring, polys_from(ctx, {"x"})); }), ErrorKind::ContextMismatch);

    auto line = qctx({"x"});
    EXPECT_EQ(kind_of([&] { validate_endomorphism(make_ring(line), polys_from(line, {"x + 1"})); }),
              ErrorKind::NotLocal);

    auto other = qctx({"u", "v"});
    EXPECT_EQ(kind_of([&] { validate_endomorphism(ring, polys_from(other, {"u", "v"})); }),
              ErrorKind::ContextMismatch);
}

TEST(LocalRing, Iterate)
{
    auto ctx = qctx({"x", "y"});
    auto phi = map_on(ctx, {}, {"x^2", "y^3"});
    EXPECT_EQ(formatted(phi.iterate(2)), (std::vector<std::string>{"x^4", "y^9"}));
    EXPECT_EQ(formatted(phi.iterate(1)), (std::vector<std::string>{"x^2", "y^3"}));
    EXPECT_EQ(formatted(phi.iterate(0)), (std::vector<std::string>{"x", "y"}));

    auto swap = map_on(ctx, {}, {"y", "x^2"});
    EXPECT_EQ(formatted(swap.iterate(2)), (std::vector<std::string>{"x^2", "y^2"}));
    EXPECT_EQ(formatted(swap.iterate(3)), (std::vector<std::string>{"y^2", "x^4"}));

    // Images are reduced modulo the quotient.
    auto nil = map_on(qctx({"x"}), {"x^3"}, {"x^2"});
    EXPECT_EQ(formatted(nil.iterate(2)), (std::vector<std::string>{"0"}));
}

TEST(LocalRing, LocalColengthExamples)
{
    auto ctx = qctx({"x", "y"});
    auto R = make_ring(ctx);
    auto l = local_colength(*R, ideal_from(ctx, {"x^2", "y^3"}));
    EXPECT_EQ(l.length, 6u);
    EXPECT_EQ(l.stable_degree, 4u);

    EXPECT_EQ(kind_of([&] { local_colength(*R, ideal_from(ctx, {"x"})); }), ErrorKind::NotFiniteLength);
    EXPECT_EQ(kind_of([&] { local_colength(*R, ideal_from(ctx, {"x"}), 16); }), ErrorKind::NotFiniteLength);

    auto line = qctx({"x"});
    auto L = make_ring(line);
    EXPECT_EQ(local_colength(*L, ideal_from(line, {"x*(x - 1)"})).length, 1u);
    EXPECT_EQ(local_colength(*L, ideal_from(line, {"x^2 + x"})).length, 1u);
    EXPECT_EQ(global_colength(ideal_from(line, {"x^2 + x"})), 2u);
    EXPECT_EQ(local_colength(*L, ideal_from(line, {"x^3*(1 + x)^2"})).length, 3u);

    auto Fp = pctx(5, {"x"});
    EXPECT_EQ(local_colength(*make_ring(Fp), ideal_from(Fp, {"x^2 + x"})).length, 1u);

    // A unit in J gives length 0.
    EXPECT_EQ(local_colength(*R, ideal_from(ctx, {"1 + x"})).length, 0u);
    // The quotient is added internally.
    auto Q = make_ring(ctx, ideal_from(ctx, {"x*y"}));
    EXPECT_EQ(local_colength(*Q, ideal_from(ctx, {"x^4", "y^9"})).length, 12u);
}

TEST(LocalRing, LocalColengthNonHomogeneous)
{
    auto ctx = qctx({"x", "y"});
    auto R = make_ring(ctx);
    // (y - x^2, x^3 + x^4): locally (y - x^2, x^3), length 3; globally also the point x = -1.
    auto J = ideal_from(ctx, {"y - x^2", "x^3 + x^4"});
    EXPECT_EQ(global_colength(J), 4u);
    EXPECT_EQ(local_colength(*R, J).length, 3u);
    // Parabola meeting a line with multiplicity 2 at the origin.
    EXPECT_EQ(local_colength(*R, ideal_from(ctx, {"y - x^2", "y"})).length, 2u);
}

TEST(LocalRing, NakayamaSpotChecks)
{
    std::mt19937 rng(41);
    auto ctx = qctx({"x", "y"});
    auto R = make_ring(ctx);
    int checked = 0;
    for (int trial = 0; trial < 60; ++trial) {
        Ideal<Rationals> J(ctx);
        for (int g = 0; g < 2; ++g) {
            J.add(random_poly(ctx, rng, 3, 3, false));
        }
        LocalLength l;
        try {
            l = local_colength(*R, J, 64);
        } catch (const Error &e) {
            ASSERT_EQ(e.kind(), ErrorKind::NotFiniteLength);
            continue;
        }
        ASSERT_TRUE(l.stable_degree);
        const auto w = std::max<std::uint64_t>(*l.stable_degree, 1);
        EXPECT_EQ(truncated_length(J, 2 * w), l.length);
        EXPECT_EQ(truncated_length(J, 4 * w), l.length);
        if (w > 1) {
            EXPECT_LT(truncated_length(J, w - 1), l.length);
        }
        ++checked;
    }
    EXPECT_GT(checked, 10);
}

TEST(LocalRing, LocalMatchesGlobalForMonomialIdeals)
{
    std::mt19937 rng(5);
    auto ctx = qctx({"x", "y", "z"});
    auto R = make_ring(ctx);
    std::uniform_int_distribution<std::uint32_t> ex(0, 3);
    for (int trial = 0; trial < 40; ++trial) {
        Ideal<Rationals> J(ctx);
        std::vector<Monomial> gens;
        for (std::size_t v = 0; v < 3; ++v) {
            Monomial m(3);
            m.set(v, 1 + ex(rng));
            gens.push_back(m);
        }
        for (int g = 0; g < 3; ++g) {
            Monomial m(3);
            for (std::size_t v = 0; v < 3; ++v) {
                m.set(v, ex(rng));
            }
            if (!m.is_one()) {
                gens.push_back(m);
            }
        }
        for (const auto &m : gens) {
            J.add(Polynomial<Rationals>::from_terms(ctx, {{m, Rationals{}.one()}}));
        }
        const auto l = local_colength(*R, J);
        EXPECT_EQ(l.length, brute_force_standard_count(gens, 3, 5));
        EXPECT_EQ(l.stable_degree, brute_force_w(gens, 3));
    }
}

TEST(LocalRing, LambdaExamples)
{
    auto F2 = pctx(2, {"x", "y"});
    auto frob = map_on(F2, {}, {"x^2", "y^2"});
    EXPECT_EQ(lambda_n(frob, 3), 64u);

    auto ctx = qctx({"x", "y"});
    auto phi = map_on(ctx, {"x*y"}, {"x^2", "y^3"});
    EXPECT_EQ(lambda_n(phi, 2), 12u);
    for (unsigned n = 1; n <= 4; ++n) {
        const auto A = static_cast<std::uint32_t>(std::pow(2, n)), B = static_cast<std::uint32_t>(std::pow(3, n));
        Monomial xy(2), xa(2), yb(2);
        xy.set(0, 1);
        xy.set(1, 1);
        xa.set(0, A);
        yb.set(1, B);
        EXPECT_EQ(lambda_n(phi, n), brute_force_standard_count({xy, xa, yb}, 2, B + 1)) << n;
        EXPECT_EQ(lambda_n(phi, n), xy_lambda_closed_form(2, 3, n));
    }

    auto line = qctx({"x"});
    auto nil = map_on(line, {"x^3"}, {"x^2"});
    EXPECT_EQ(lambda_n(nil, 1), 2u);
    EXPECT_EQ(lambda_n(nil, 2), 3u);
}

TEST(LocalRing, OrderBounds)
{
    auto ctx = qctx({"x", "y"});
    auto phi = map_on(ctx, {}, {"x^2", "y^3"});
    auto b1 = order_bounds(phi, 1);
    EXPECT_EQ(b1.lambda, 6u);
    EXPECT_EQ(b1.v, 2u);
    EXPECT_EQ(b1.w, 4u);
    auto b2 = order_bounds(phi, 2);
    EXPECT_EQ(b2.v, 4u);
    EXPECT_EQ(b2.w, 12u);

    for (std::uint32_t p : {2u, 3u, 5u}) {
        auto F = pctx(p, {"x", "y"});
        auto frob = map_on(F, {}, {"x^" + std::to_string(p), "y^" + std::to_string(p)});
        auto b = order_bounds(frob, 1);
        EXPECT_EQ(b.v, p);
        EXPECT_EQ(b.w, 2 * p - 1);
    }

    auto id = map_on(ctx, {}, {"x", "y"});
    auto bi = order_bounds(id, 3);
    EXPECT_EQ(bi.v, 1u);
    EXPECT_EQ(bi.w, 1u);
    EXPECT_EQ(bi.lambda, 1u);

    // phi^n(m) inside a: v is unbounded.
    auto nil = map_on(qctx({"x"}), {"x^3"}, {"x^2"});
    auto bn = order_bounds(nil, 2);
    EXPECT_FALSE(bn.v);
    EXPECT_EQ(bn.w, 3u);
}

TEST(LocalRing, OrderBoundsAgainstBruteForce)
{
    std::mt19937 rng(9);
    auto ctx = qctx({"x", "y", "z"});
    const std::vector<std::string> names{"x", "y", "z"};
    std::uniform_int_distribution<std::uint32_t> ex(1, 3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::size_t> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::string> images;
        for (std::size_t i = 0; i < 3; ++i) {
            images.push_back(names[perm[i]] + "^" + std::to_string(ex(rng)));
        }
        auto phi = map_on(ctx, {}, images);
        for (std::uint64_t n = 1; n <= 2; ++n) {
            std::vector<Monomial> gens;
            for (const auto &img : phi.iterate(n)) {
                gens.push_back(img.terms()[0].monomial);
            }
            const auto ob = order_bounds(phi, n);
            std::uint32_t v = ~0u;
            for (const auto &g : gens) {
                v = std::min<std::uint32_t>(v, g.degree());
            }
            EXPECT_EQ(ob.v, v);
            EXPECT_EQ(ob.w, brute_force_w(gens, 3));
            EXPECT_LE(*ob.v, ob.w);
        }
    }
}

TEST(LocalRing, EmbeddingDimensionAndContracting)
{
    auto ctx = qctx({"x", "y"});
    EXPECT_EQ(embedding_dimension(*make_ring(ctx)), 2u);
    EXPECT_EQ(embedding_dimension(*make_ring(ctx, ideal_from(ctx, {"x^2 - y"}))), 1u);
    EXPECT_EQ(embedding_dimension(*make_ring(ctx, ideal_from(ctx, {"x*y"}))), 2u);

    EXPECT_TRUE(is_contracting(map_on(ctx, {}, {"x^2", "y^3"})));
    EXPECT_FALSE(is_contracting(map_on(ctx, {}, {"y", "x"})));
    EXPECT_TRUE(is_contracting(map_on(ctx, {}, {"y", "x*y"})));
    EXPECT_FALSE(is_contracting(map_on(ctx, {}, {"x", "y^2"})));
    // Linear part y -> x^2 vanishes modulo m^2 + a.
    EXPECT_TRUE(is_contracting(map_on(ctx, {"y - x^2"}, {"x^2", "x^4"})));
}

TEST(LocalRing, IterateCacheIsSharedAcrossThreads)
{
    auto ctx = qctx({"x", "y"});
    auto phi = map_on(ctx, {}, {"y", "x*y + x^2"});
    const auto expected = formatted(phi.iterate(5));
    auto fresh = map_on(ctx, {}, {"y", "x*y + x^2"});
    std::vector<std::vector<std::string>> got(8);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < got.size(); ++t) {
        pool.emplace_back([&, t] { got[t] = formatted(fresh.iterate(5 - t % 3)); });
    }
    for (auto &t : pool) {
        t.join();
    }
    for (std::size_t t = 0; t < got.size(); ++t) {
        EXPECT_EQ(got[t], formatted(phi.iterate(5 - t % 3)));
    }
    EXPECT_EQ(got[0], expected);
}
