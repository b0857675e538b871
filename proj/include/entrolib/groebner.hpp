#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "monomial.hpp"
#include "polynomial.hpp"
#include "staircase.hpp"

namespace entrolib {

template <CoefficientField F>
class Ideal
{
public:
    using Poly = Polynomial<F>;

    explicit Ideal(ContextPtr<F> ctx) : m_ctx(std::move(ctx)) {}
    Ideal(ContextPtr<F> ctx, std::vector<Poly> gens) : m_ctx(std::move(ctx))
    {
        for (auto &g : gens) {
            add(std::move(g));
        }
    }

    static Ideal maximal(ContextPtr<F> ctx)
    {
        auto vs = variables(ctx);
        return Ideal(std::move(ctx), std::move(vs));
    }

    void add(Poly g)
    {
        require_same_context(m_ctx, g.context());
        if (!g.is_zero()) {
            m_gens.push_back(std::move(g));
        }
    }

    const ContextPtr<F> &context() const noexcept { return m_ctx; }
    std::span<const Poly> generators() const noexcept { return m_gens; }
    bool is_zero() const noexcept { return m_gens.empty(); }

    bool is_monomial() const noexcept
    {
        return std::all_of(m_gens.begin(), m_gens.end(), [](const Poly &g) { return g.is_monomial(); });
    }

    std::vector<Monomial> monomial_generators() const
    {
        std::vector<Monomial> out;
        for (const auto &g : m_gens) {
            if (!g.is_monomial()) {
                fail(ErrorKind::NotMonomial, "ideal has a non-monomial generator");
            }
            out.push_back(g.terms()[0].monomial);
        }
        return out;
    }

private:
    ContextPtr<F> m_ctx;
    std::vector<Poly> m_gens;
};

template <CoefficientField F>
Ideal<F> ideal_sum(const Ideal<F> &a, const Ideal<F> &b)
{
    require_same_context(a.context(), b.context());
    Ideal<F> r(a.context());
    for (const auto &g : a.generators()) {
        r.add(g);
    }
    for (const auto &g : b.generators()) {
        r.add(g);
    }
    return r;
}

template <CoefficientField F>
Ideal<F> ideal_product(const Ideal<F> &a, const Ideal<F> &b)
{
    require_same_context(a.context(), b.context());
    Ideal<F> r(a.context());
    for (const auto &g : a.generators()) {
        for (const auto &h : b.generators()) {
            r.add(g * h);
        }
    }
    return r;
}

// Monomial ideals keep only minimal generators; otherwise products are kept verbatim.
template <CoefficientField F>
Ideal<F> ideal_power(const Ideal<F> &a, std::uint64_t n)
{
    Ideal<F> r(a.context(), {Polynomial<F>::constant(a.context(), a.context()->field().one())});
    for (std::uint64_t i = 0; i < n; ++i) {
        r = ideal_product(r, a);
        if (r.is_monomial()) {
            Ideal<F> m(a.context());
            for (auto &mono : minimal_monomials(r.monomial_generators())) {
                m.add(Polynomial<F>::term(a.context(), mono, a.context()->field().one()));
            }
            r = std::move(m);
        }
    }
    return r;
}

struct BuchbergerOptions {
    MonomialOrder order = MonomialOrder::DegRevLex;
    // Work modulo m^N: terms of degree >= N are dropped and m^N is added.
    std::optional<std::uint64_t> truncate_degree;
    std::size_t pair_budget = 5'000'000;
};

template <CoefficientField F>
class GroebnerBasis
{
public:
    using Poly = Polynomial<F>;

    GroebnerBasis(ContextPtr<F> ctx, std::vector<Poly> basis, std::vector<Monomial> leading, MonomialOrder ord,
                  std::optional<std::uint64_t> truncation)
        : m_ctx(std::move(ctx)), m_basis(std::move(basis)), m_leading(std::move(leading)), m_order(ord),
          m_truncation(truncation)
    {
    }

    const ContextPtr<F> &context() const noexcept { return m_ctx; }
    std::span<const Poly> basis() const noexcept { return m_basis; }
    std::span<const Monomial> leading_monomials() const noexcept { return m_leading; }
    MonomialOrder order() const noexcept { return m_order; }
    bool reduced() const noexcept { return true; }
    // Set when the basis describes J + m^N rather than J.
    std::optional<std::uint64_t> truncation() const noexcept { return m_truncation; }

    bool is_unit_ideal() const
    {
        return std::any_of(m_leading.begin(), m_leading.end(), [](const Monomial &m) { return m.is_one(); });
    }

    friend bool operator==(const GroebnerBasis &a, const GroebnerBasis &b)
    {
        return a.m_order == b.m_order && a.m_truncation == b.m_truncation && a.m_basis == b.m_basis;
    }

private:
    ContextPtr<F> m_ctx;
    std::vector<Poly> m_basis;
    std::vector<Monomial> m_leading;
    MonomialOrder m_order;
    std::optional<std::uint64_t> m_truncation;
};

namespace detail {

// Terms sorted descending under a chosen order; the working representation
// inside Buchberger, where the order may differ from the canonical one.
template <CoefficientField F>
using TermVec = std::vector<Term<F>>;

template <CoefficientField F>
class Reducer
{
public:
    using value_type = typename F::value_type;

    Reducer(const F &field, MonomialOrder ord, std::optional<std::uint64_t> trunc, std::size_t term_limit)
        : m_f(field), m_gt{ord}, m_trunc(trunc), m_limit(term_limit)
    {
    }

    TermVec<F> from_polynomial(const Polynomial<F> &p) const
    {
        TermVec<F> v;
        for (const auto &t : p.terms()) {
            if (!m_trunc || t.monomial.degree() < *m_trunc) {
                v.push_back(t);
            }
        }
        if (m_gt.ord != MonomialOrder::DegRevLex) {
            std::sort(v.begin(), v.end(), [&](const Term<F> &a, const Term<F> &b) { return m_gt(a.monomial, b.monomial); });
        }
        return v;
    }

    // a - c * u * b, truncated. Both inputs sorted descending.
    TermVec<F> sub_mul(const TermVec<F> &a, const value_type &c, const Monomial &u, const TermVec<F> &b,
                       std::size_t b_from = 0, std::size_t a_from = 0) const
    {
        TermVec<F> out;
        out.reserve(a.size() + b.size());
        auto i = a.begin() + static_cast<std::ptrdiff_t>(a_from);
        auto j = b.begin() + static_cast<std::ptrdiff_t>(b_from);
        std::optional<Term<F>> pending;
        auto next_b = [&]() -> bool {
            while (j != b.end()) {
                Monomial m = j->monomial * u;
                value_type v = m_f.neg(m_f.mul(c, j->coeff));
                ++j;
                if (m_trunc && m.degree() >= *m_trunc) {
                    continue;
                }
                pending = Term<F>{std::move(m), std::move(v)};
                return true;
            }
            pending.reset();
            return false;
        };
        next_b();
        while (i != a.end() || pending) {
            if (!pending || (i != a.end() && m_gt(i->monomial, pending->monomial))) {
                out.push_back(*i++);
            } else if (i == a.end() || m_gt(pending->monomial, i->monomial)) {
                out.push_back(std::move(*pending));
                next_b();
            } else {
                auto s = m_f.add(i->coeff, pending->coeff);
                if (!m_f.is_zero(s)) {
                    out.push_back({i->monomial, std::move(s)});
                }
                ++i;
                next_b();
            }
        }
        if (out.size() > m_limit) {
            fail(ErrorKind::BudgetExceeded, "reduction exceeds the term budget of " + std::to_string(m_limit));
        }
        return out;
    }

    // Full reduction of h by the divisors (skipping flagged ones); first divisor in list order wins.
    template <typename Divisors>
    TermVec<F> reduce(TermVec<F> h, const Divisors &divs) const
    {
        TermVec<F> done;
        std::size_t pos = 0;
        while (pos < h.size()) {
            const auto &lt = h[pos];
            const TermVec<F> *div = nullptr;
            for (const TermVec<F> *g : divs) {
                if (g->front().monomial.divides(lt.monomial)) {
                    div = g;
                    break;
                }
            }
            if (div == nullptr) {
                done.push_back(std::move(h[pos]));
                ++pos;
                continue;
            }
            const auto c = m_f.mul(lt.coeff, m_f.inv(div->front().coeff));
            const Monomial u = lt.monomial / div->front().monomial;
            h = sub_mul(h, c, u, *div, 1, pos + 1);
            pos = 0;
        }
        return done;
    }

    void make_monic(TermVec<F> &v) const
    {
        if (v.empty() || m_f.is_one(v.front().coeff)) {
            return;
        }
        const auto inv = m_f.inv(v.front().coeff);
        for (auto &t : v) {
            t.coeff = m_f.mul(t.coeff, inv);
        }
    }

    const MonomialGreater &greater() const noexcept { return m_gt; }
    const F &field() const noexcept { return m_f; }

private:
    F m_f;
    MonomialGreater m_gt;
    std::optional<std::uint64_t> m_trunc;
    std::size_t m_limit;
};

} // namespace detail

// Buchberger's algorithm with the Gebauer-Moeller criteria and the normal
// selection strategy. Returns the reduced basis (monic, tail-reduced).
template <CoefficientField F>
GroebnerBasis<F> buchberger(const Ideal<F> &I, const BuchbergerOptions &opts = {})
{
    using TV = detail::TermVec<F>;
    const auto &ctx = I.context();
    const auto &fld = ctx->field();
    const std::size_t d = ctx->nvars();
    const auto trunc = opts.truncate_degree;
    if (is_local(opts.order) && !trunc) {
        fail(ErrorKind::InvalidArgument, "a local monomial order needs a truncation degree");
    }
    detail::Reducer<F> red(fld, opts.order, trunc, ctx->term_limit());
    const auto &gt = red.greater();

    struct Element {
        TV terms;
        bool truncation_monomial;
    };
    std::vector<Element> G;
    std::vector<bool> active;

    struct Pair {
        Monomial lcm;
        std::size_t i, j;
    };
    auto pair_less = [&](const Pair &a, const Pair &b) {
        if (a.lcm != b.lcm) {
            return gt(b.lcm, a.lcm);
        }
        return std::pair(a.j, a.i) < std::pair(b.j, b.i);
    };
    std::set<Pair, decltype(pair_less)> B(pair_less);

    auto lm = [&](std::size_t k) -> const Monomial & { return G[k].terms.front().monomial; };
    auto is_mono = [&](std::size_t k) { return G[k].terms.size() == 1; };

    auto divisors = [&]() {
        std::vector<const TV *> out;
        for (std::size_t k = 0; k < G.size(); ++k) {
            if (active[k] && !G[k].truncation_monomial) {
                out.push_back(&G[k].terms);
            }
        }
        return out;
    };
    // Truncated reduction also kills everything of degree >= N, so the
    // m^N generators never need to act as divisors.
    std::vector<const TV *> divs;

    auto update = [&](std::size_t h) {
        const Monomial &lh = lm(h);
        std::vector<Pair> C;
        for (std::size_t g = 0; g < h; ++g) {
            if (active[g] && !(is_mono(g) && is_mono(h))) {
                C.push_back({lcm(lh, lm(g)), g, h});
            }
        }
        std::vector<Pair> D;
        for (std::size_t k = 0; k < C.size(); ++k) {
            const auto &p = C[k];
            bool keep = lh.coprime(lm(p.i));
            if (!keep) {
                keep = true;
                for (std::size_t q = k + 1; q < C.size() && keep; ++q) {
                    if (C[q].lcm.divides(p.lcm)) {
                        keep = false;
                    }
                }
                for (const auto &q : D) {
                    if (!keep) {
                        break;
                    }
                    if (q.lcm.divides(p.lcm)) {
                        keep = false;
                    }
                }
            }
            if (keep) {
                D.push_back(p);
            }
        }
        for (auto it = B.begin(); it != B.end();) {
            if (lh.divides(it->lcm) && lcm(lm(it->i), lh) != it->lcm && lcm(lm(it->j), lh) != it->lcm) {
                it = B.erase(it);
            } else {
                ++it;
            }
        }
        for (auto &p : D) {
            if (!lh.coprime(lm(p.i))) {
                B.insert(std::move(p));
            }
        }
        for (std::size_t g = 0; g < h; ++g) {
            if (active[g] && lh.divides(lm(g))) {
                active[g] = false;
            }
        }
        active[h] = true;
    };

    auto insert = [&](TV terms, bool flagged) {
        red.make_monic(terms);
        G.push_back({std::move(terms), flagged});
        active.push_back(false);
        update(G.size() - 1);
        divs = divisors();
    };

    if (trunc) {
        if (*trunc == 0) {
            return GroebnerBasis<F>(ctx, {Polynomial<F>::constant(ctx, fld.one())}, {Monomial(d)}, opts.order, trunc);
        }
        // All monomials of degree N, in descending order.
        std::vector<Monomial> top;
        Monomial m(d);
        auto rec = [&](auto &&self, std::size_t i, std::uint64_t left) -> void {
            if (i + 1 == d) {
                m.set(i, static_cast<Monomial::exponent_type>(left));
                top.push_back(m);
                m.set(i, 0);
                return;
            }
            for (std::uint64_t e = left + 1; e-- > 0;) {
                m.set(i, static_cast<Monomial::exponent_type>(e));
                self(self, i + 1, left - e);
            }
            m.set(i, 0);
        };
        rec(rec, 0, *trunc);
        // Under a local order every S-polynomial with a degree-N monomial
        // truncates to zero, so those generators are left implicit.
        if (is_local(opts.order)) {
            top.clear();
        }
        for (auto &t : top) {
            insert(TV{{std::move(t), fld.one()}}, true);
        }
    }

    // Monomial generators first: they create no pairs among themselves.
    std::vector<TV> inputs;
    for (const auto &g : I.generators()) {
        inputs.push_back(red.from_polynomial(g));
    }
    std::stable_sort(inputs.begin(), inputs.end(), [](const TV &a, const TV &b) {
        return (a.size() == 1) > (b.size() == 1);
    });
    for (auto &g : inputs) {
        auto r = red.reduce(std::move(g), divs);
        if (!r.empty()) {
            insert(std::move(r), false);
        }
    }

    std::size_t processed = 0;
    while (!B.empty()) {
        if (++processed > opts.pair_budget) {
            fail(ErrorKind::BudgetExceeded, "critical pair budget exhausted");
        }
        Pair p = *B.begin();
        B.erase(B.begin());
        const auto &gi = G[p.i].terms;
        const auto &gj = G[p.j].terms;
        // S = u_i * g_i - u_j * g_j with both leading terms monic.
        const Monomial ui = p.lcm / gi.front().monomial;
        const Monomial uj = p.lcm / gj.front().monomial;
        TV s = red.sub_mul(TV{}, fld.neg(fld.one()), ui, gi, 1);
        s = red.sub_mul(s, fld.one(), uj, gj, 1);
        auto r = red.reduce(std::move(s), divs);
        if (!r.empty()) {
            insert(std::move(r), false);
        }
    }

    // Reduced basis: minimal leading terms, tails reduced, ascending by leading term.
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < G.size(); ++k) {
        if (active[k]) {
            keep.push_back(k);
        }
    }
    std::sort(keep.begin(), keep.end(), [&](std::size_t a, std::size_t b) { return gt(lm(b), lm(a)); });
    std::vector<const TV *> kept_divs;
    for (auto k : keep) {
        if (!G[k].truncation_monomial) {
            kept_divs.push_back(&G[k].terms);
        }
    }
    std::vector<Polynomial<F>> basis;
    std::vector<Monomial> leading;
    for (auto k : keep) {
        auto &g = G[k].terms;
        TV tail(g.begin() + 1, g.end());
        std::vector<const TV *> others;
        for (auto *o : kept_divs) {
            if (o != &g) {
                others.push_back(o);
            }
        }
        TV full{g.front()};
        auto reduced_tail = red.reduce(std::move(tail), others);
        full.insert(full.end(), reduced_tail.begin(), reduced_tail.end());
        leading.push_back(full.front().monomial);
        basis.push_back(Polynomial<F>::from_terms(ctx, std::move(full)));
    }
    return GroebnerBasis<F>(ctx, std::move(basis), std::move(leading), opts.order, trunc);
}

template <CoefficientField F>
Polynomial<F> normal_form(const Polynomial<F> &f, const GroebnerBasis<F> &G)
{
    require_same_context(f.context(), G.context());
    detail::Reducer<F> red(f.field(), G.order(), G.truncation(), f.context()->term_limit());
    std::vector<detail::TermVec<F>> gs;
    for (const auto &g : G.basis()) {
        gs.push_back(red.from_polynomial(g));
    }
    std::vector<const detail::TermVec<F> *> divs;
    for (const auto &g : gs) {
        if (!g.empty()) {
            divs.push_back(&g);
        }
    }
    auto r = red.reduce(red.from_polynomial(f), divs);
    return Polynomial<F>::from_terms(f.context(), std::move(r));
}

template <CoefficientField F>
bool contains(const GroebnerBasis<F> &G, const Polynomial<F> &f)
{
    return normal_form(f, G).is_zero();
}

template <CoefficientField F>
bool contains(const Ideal<F> &I, const Polynomial<F> &f)
{
    return contains(buchberger(I), f);
}

// Infinite colength is reported as nullopt.
template <CoefficientField F>
std::optional<std::uint64_t> colength(const GroebnerBasis<F> &G)
{
    const auto lead = G.leading_monomials();
    return count_standard_monomials(lead, G.context()->nvars(), G.truncation());
}

template <CoefficientField F>
std::optional<std::uint64_t> global_colength(const Ideal<F> &I, MonomialOrder ord = MonomialOrder::DegRevLex)
{
    if (I.is_monomial()) {
        const auto gens = I.monomial_generators();
        return count_standard_monomials(gens, I.context()->nvars());
    }
    BuchbergerOptions opts;
    opts.order = ord;
    return colength(buchberger(I, opts));
}

// Standard basis of I + m^N under the local order. Its leading monomials of
// degree < k count dim_k k[x]/(I + m^k) for every k <= N.
template <CoefficientField F>
GroebnerBasis<F> local_standard_basis(const Ideal<F> &I, std::uint64_t N)
{
    BuchbergerOptions opts;
    opts.order = MonomialOrder::NegDegRevLex;
    opts.truncate_degree = N;
    return buchberger(I, opts);
}

// dim_k k[x]/(I + m^k) read off a basis truncated at N >= k.
template <CoefficientField F>
std::uint64_t truncated_count(const GroebnerBasis<F> &G, std::uint64_t k)
{
    if (!G.truncation() || k > *G.truncation() || (!is_local(G.order()) && k != *G.truncation())) {
        fail(ErrorKind::InvalidArgument, "truncated_count needs a local basis truncated at or above k");
    }
    return *count_standard_monomials(G.leading_monomials(), G.context()->nvars(), k);
}

// dim_k k[x]/(I + m^N).
template <CoefficientField F>
std::uint64_t truncated_colength(const Ideal<F> &I, std::uint64_t N)
{
    if (I.is_monomial()) {
        const auto gens = I.monomial_generators();
        return *count_standard_monomials(gens, I.context()->nvars(), N);
    }
    if (N == 0) {
        return 0;
    }
    return truncated_count(local_standard_basis(I, N), N);
}

} // namespace entrolib
