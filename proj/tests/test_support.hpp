#pragma once

// Shared helpers and independent oracles for the test suites.

#include <cstdint>
#include <algorithm>
#include <functional>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "entrolib/local_ring.hpp"
#include "entrolib/monomial.hpp"
#include "entrolib/parser.hpp"
#include "entrolib/polynomial.hpp"

namespace entrolib::testing {

using PolyQ = Polynomial<Rationals>;
using PolyP = Polynomial<PrimeField>;

inline ContextPtr<Rationals> qctx(std::vector<std::string> names)
{
    return VariableContext<Rationals>::make(std::move(names), Rationals{});
}

inline ContextPtr<PrimeField> pctx(std::uint32_t p, std::vector<std::string> names)
{
    return VariableContext<PrimeField>::make(std::move(names), PrimeField(p));
}

template <CoefficientField F>
typename F::value_type random_coeff(const F &f, std::mt19937 &rng)
{
    std::uniform_int_distribution<long> num(-9, 9), den(1, 4);
    if constexpr (std::is_same_v<F, Rationals>) {
        return f.from_fraction(num(rng), den(rng));
    } else {
        return f.from_integer(static_cast<std::int64_t>(num(rng)));
    }
}

template <CoefficientField F>
Polynomial<F> random_poly(const ContextPtr<F> &ctx, std::mt19937 &rng, int max_terms, std::uint32_t max_exp,
                          bool allow_constant = true)
{
    std::uniform_int_distribution<int> nt(0, max_terms);
    std::uniform_int_distribution<std::uint32_t> ex(0, max_exp);
    std::vector<Term<F>> terms;
    const int n = nt(rng);
    for (int i = 0; i < n; ++i) {
        Monomial m(ctx->nvars());
        for (std::size_t v = 0; v < ctx->nvars(); ++v) {
            m.set(v, ex(rng));
        }
        if (!allow_constant && m.is_one()) {
            m.set(0, 1);
        }
        terms.push_back({m, random_coeff(ctx->field(), rng)});
    }
    return Polynomial<F>::from_terms(ctx, std::move(terms));
}

template <CoefficientField F>
Ideal<F> ideal_from(const ContextPtr<F> &ctx, const std::vector<std::string> &gens)
{
    Ideal<F> I(ctx);
    for (const auto &g : gens) {
        I.add(parse_polynomial<F>(g, ctx));
    }
    return I;
}

template <CoefficientField F>
std::vector<Polynomial<F>> polys_from(const ContextPtr<F> &ctx, const std::vector<std::string> &src)
{
    std::vector<Polynomial<F>> out;
    for (const auto &s : src) {
        out.push_back(parse_polynomial<F>(s, ctx));
    }
    return out;
}

template <CoefficientField F>
Endomorphism<F> map_on(const ContextPtr<F> &ctx, const std::vector<std::string> &quotient,
                       const std::vector<std::string> &images)
{
    return validate_endomorphism(make_ring(ctx, ideal_from(ctx, quotient)), polys_from(ctx, images));
}

// Images with one or two terms of degree 1..max_deg, resampled until
// lambda(phi) is finite (then every iterate has finite length) and at least 2.
template <CoefficientField F>
Endomorphism<F> random_binomial_map(const ContextPtr<F> &ctx, std::mt19937 &rng, std::uint32_t max_deg,
                                    std::uint64_t N_budget = 256)
{
    const std::size_t d = ctx->nvars();
    std::uniform_int_distribution<std::uint32_t> deg(1, max_deg);
    std::uniform_int_distribution<std::size_t> var(0, d - 1);
    auto monomial = [&] {
        Monomial m(d);
        for (std::uint32_t k = 0, n = deg(rng); k < n; ++k) {
            const auto v = var(rng);
            m.set(v, m[v] + 1);
        }
        return m;
    };
    for (;;) {
        std::vector<Polynomial<F>> imgs;
        for (std::size_t i = 0; i < d; ++i) {
            std::vector<Term<F>> terms{{monomial(), ctx->field().one()}};
            if (rng() % 2) {
                terms.push_back({monomial(), random_coeff(ctx->field(), rng)});
            }
            imgs.push_back(Polynomial<F>::from_terms(ctx, std::move(terms)));
        }
        if (std::any_of(imgs.begin(), imgs.end(), [](const Polynomial<F> &p) { return p.is_zero(); })) {
            continue;
        }
        auto phi = validate_endomorphism(make_ring(ctx), std::move(imgs));
        try {
            if (lambda_n(phi, 1, N_budget) >= 2) {
                return phi;
            }
        } catch (const Error &) {
        }
    }
}

// Counts exponent vectors in the box [0, bound)^d lying outside the monomial
// ideal, optionally only those of total degree < degree_bound. Independent of
// the staircase recursion.
inline std::uint64_t brute_force_standard_count(const std::vector<Monomial> &gens, std::size_t d, std::uint32_t bound,
                                                std::uint64_t degree_bound = ~std::uint64_t{0})
{
    std::uint64_t count = 0;
    std::vector<std::uint32_t> e(d, 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == d) {
            Monomial m{std::span<const std::uint32_t>(e)};
            if (m.degree() >= degree_bound) {
                return;
            }
            for (const auto &g : gens) {
                if (g.divides(m)) {
                    return;
                }
            }
            ++count;
            return;
        }
        for (std::uint32_t k = 0; k < bound; ++k) {
            e[i] = k;
            rec(i + 1);
        }
        e[i] = 0;
    };
    rec(0);
    return count;
}

// lambda for k[x,y]/(xy) under (x^a, y^b): standard monomials of (xy, x^{a^n}, y^{b^n}).
inline std::uint64_t xy_lambda_closed_form(std::uint64_t a, std::uint64_t b, unsigned n)
{
    std::uint64_t pa = 1, pb = 1;
    for (unsigned i = 0; i < n; ++i) {
        pa *= a;
        pb *= b;
    }
    return pa + pb - 1;
}

// Same count by walking the staircase of (xy, x^A, y^B) along both axes.
inline std::uint64_t xy_lambda_staircase_walk(std::uint64_t A, std::uint64_t B)
{
    std::uint64_t c = 1; // the monomial 1
    for (std::uint64_t i = 1; i < A; ++i) {
        ++c; // x^i; any x^i y^j with i, j >= 1 lies in (xy)
    }
    for (std::uint64_t j = 1; j < B; ++j) {
        ++c;
    }
    return c;
}

} // namespace entrolib::testing
