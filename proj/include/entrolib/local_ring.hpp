#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "groebner.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "staircase.hpp"

namespace entrolib {

inline constexpr std::uint64_t default_N_budget = 512;

using VariableSet = std::vector<std::size_t>;

// Minimal sets of variables meeting every support; these are the minimal
// primes of a monomial ideal. Subsets are enumerated by size, then lexicographically.
inline std::vector<VariableSet> minimal_vertex_covers(const std::vector<Monomial> &gens, std::size_t d)
{
    if (d > 24) {
        fail(ErrorKind::BudgetExceeded, "too many variables for vertex cover enumeration");
    }
    std::vector<std::uint32_t> supports;
    for (const auto &g : gens) {
        std::uint32_t s = 0;
        for (std::size_t i = 0; i < d; ++i) {
            if (g[i] != 0) {
                s |= 1u << i;
            }
        }
        supports.push_back(s);
    }
    std::vector<std::uint32_t> masks;
    for (std::uint32_t s = 0; s < (1u << d); ++s) {
        masks.push_back(s);
    }
    std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
        return __builtin_popcount(a) < __builtin_popcount(b);
    });
    std::vector<std::uint32_t> found;
    for (auto s : masks) {
        const bool covers = std::all_of(supports.begin(), supports.end(), [&](std::uint32_t g) { return (g & s) != 0; });
        if (!covers) {
            continue;
        }
        const bool minimal = std::none_of(found.begin(), found.end(), [&](std::uint32_t f) { return (f & s) == f; });
        if (minimal) {
            found.push_back(s);
        }
    }
    std::vector<VariableSet> out;
    for (auto s : found) {
        VariableSet v;
        for (std::size_t i = 0; i < d; ++i) {
            if (s & (1u << i)) {
                v.push_back(i);
            }
        }
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

enum class DimensionSource { Computed, Declared, Unknown };

inline std::string_view to_string(DimensionSource s)
{
    switch (s) {
    case DimensionSource::Computed: return "computed";
    case DimensionSource::Declared: return "declared";
    case DimensionSource::Unknown: return "unknown";
    }
    return "unknown";
}

// k[x1..xd] localized at m = (x1..xd), modulo a.
template <CoefficientField F>
class LocalRingPresentation
{
public:
    LocalRingPresentation(ContextPtr<F> ctx, Ideal<F> quotient, std::optional<std::size_t> declared_dim = {})
        : m_ctx(std::move(ctx)), m_quotient(std::move(quotient))
    {
        require_same_context(m_ctx, m_quotient.context());
        for (const auto &g : m_quotient.generators()) {
            if (!g.field().is_zero(g.constant_term())) {
                fail(ErrorKind::NotLocal,
                     "quotient generator " + format_polynomial(g) + " has a nonzero constant term");
            }
        }
        if (m_quotient.is_monomial()) {
            const auto covers = minimal_vertex_covers(m_quotient.monomial_generators(), m_ctx->nvars());
            std::size_t smallest = m_ctx->nvars();
            for (const auto &c : covers) {
                smallest = std::min(smallest, c.size());
            }
            m_dim = m_ctx->nvars() - smallest;
            m_dim_source = DimensionSource::Computed;
            if (declared_dim && *declared_dim != *m_dim) {
                fail(ErrorKind::SchemaError, "declared dim " + std::to_string(*declared_dim) +
                                                 " disagrees with the computed Krull dimension " +
                                                 std::to_string(*m_dim));
            }
        } else if (declared_dim) {
            if (*declared_dim > m_ctx->nvars()) {
                fail(ErrorKind::SchemaError, "declared dim exceeds the number of variables");
            }
            m_dim = declared_dim;
            m_dim_source = DimensionSource::Declared;
        }
        if (!m_quotient.is_zero()) {
            m_quotient_gb = std::make_shared<const GroebnerBasis<F>>(buchberger(m_quotient));
        }
    }

    const ContextPtr<F> &context() const noexcept { return m_ctx; }
    const Ideal<F> &quotient() const noexcept { return m_quotient; }
    std::size_t nvars() const noexcept { return m_ctx->nvars(); }
    std::optional<std::size_t> dim() const noexcept { return m_dim; }
    DimensionSource dim_source() const noexcept { return m_dim_source; }
    bool is_polynomial_ring() const noexcept { return m_quotient.is_zero(); }

    std::size_t require_dim() const
    {
        if (!m_dim) {
            fail(ErrorKind::MissingDimension, "the ring's Krull dimension is unknown; declare dim in [ring]");
        }
        return *m_dim;
    }

    // Global basis of a; null for a = 0.
    const GroebnerBasis<F> *quotient_basis() const noexcept { return m_quotient_gb.get(); }

    Polynomial<F> reduce(const Polynomial<F> &f) const { return m_quotient_gb ? normal_form(f, *m_quotient_gb) : f; }

private:
    ContextPtr<F> m_ctx;
    Ideal<F> m_quotient;
    std::optional<std::size_t> m_dim;
    DimensionSource m_dim_source = DimensionSource::Unknown;
    std::shared_ptr<const GroebnerBasis<F>> m_quotient_gb;
};

template <CoefficientField F>
using RingPtr = std::shared_ptr<const LocalRingPresentation<F>>;

template <CoefficientField F>
RingPtr<F> make_ring(ContextPtr<F> ctx, Ideal<F> quotient, std::optional<std::size_t> declared_dim = {})
{
    return std::make_shared<const LocalRingPresentation<F>>(std::move(ctx), std::move(quotient), declared_dim);
}

template <CoefficientField F>
RingPtr<F> make_ring(ContextPtr<F> ctx)
{
    Ideal<F> zero(ctx);
    return make_ring(std::move(ctx), std::move(zero));
}

// Result of a local length computation. stable_degree is the least k with
// m^k inside the ideal locally, when it was determined.
struct LocalLength {
    std::uint64_t length;
    std::optional<std::uint64_t> stable_degree;
};

namespace detail {

template <CoefficientField F>
bool all_homogeneous(const Ideal<F> &I)
{
    return std::all_of(I.generators().begin(), I.generators().end(),
                       [](const Polynomial<F> &g) { return g.is_homogeneous(); });
}

// Least k in [lo, hi] with pred(k), given pred(hi) and pred monotone.
template <typename Pred>
std::uint64_t least_true(std::uint64_t lo, std::uint64_t hi, Pred pred)
{
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (pred(mid)) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return hi;
}

// dim_k k[x]/(I + m^k) for every k up to a fixed cap, from one computation.
template <CoefficientField F>
class TruncatedCounter
{
public:
    TruncatedCounter(const Ideal<F> &I, std::uint64_t cap) : m_d(I.context()->nvars())
    {
        if (I.is_monomial()) {
            m_lead = minimal_monomials(I.monomial_generators());
        } else {
            const auto G = local_standard_basis(I, cap);
            m_lead.assign(G.leading_monomials().begin(), G.leading_monomials().end());
        }
    }
    std::uint64_t operator()(std::uint64_t k) const { return *count_standard_monomials(m_lead, m_d, k); }

private:
    std::size_t m_d;
    std::vector<Monomial> m_lead;
};

} // namespace detail

// dim_k of k[x]/(I + m^k), exact for every I because the sum is m-primary.
template <CoefficientField F>
std::uint64_t truncated_length(const Ideal<F> &I, std::uint64_t k)
{
    return truncated_colength(I, k);
}

// Length of R_m / (J + a)R_m. Monomial and homogeneous ideals are counted
// globally (their global and local colengths agree); otherwise c_N, the
// colength of J + a + m^N, is tracked with N doubling until it stops growing.
template <CoefficientField F>
LocalLength local_colength(const LocalRingPresentation<F> &ring, const Ideal<F> &J,
                           std::uint64_t N_budget = default_N_budget, bool want_stable_degree = true)
{
    const Ideal<F> I = ideal_sum(J, ring.quotient());
    const std::size_t d = ring.nvars();
    if (I.is_monomial() || detail::all_homogeneous(I)) {
        std::optional<std::uint64_t> c;
        std::vector<Monomial> lead;
        if (I.is_monomial()) {
            lead = minimal_monomials(I.monomial_generators());
        } else {
            auto G = buchberger(I);
            lead.assign(G.leading_monomials().begin(), G.leading_monomials().end());
        }
        c = count_standard_monomials(lead, d);
        if (!c) {
            fail(ErrorKind::NotFiniteLength, "the ideal is not m-primary (infinite colength)");
        }
        LocalLength out{*c, std::nullopt};
        if (want_stable_degree) {
            // Truncation by m^k commutes with the leading ideal for homogeneous input.
            auto ck = [&](std::uint64_t k) { return *count_standard_monomials(lead, d, k); };
            std::uint64_t hi = 1;
            while (ck(hi) != *c) {
                hi *= 2;
            }
            out.stable_degree = detail::least_true(hi / 2 + (hi == 1 ? 1 : 0), hi, [&](std::uint64_t k) {
                return ck(k) == *c;
            });
            if (*c == 0) {
                out.stable_degree = 0;
            }
        }
        return out;
    }
    // One standard basis of I + m^D under the local order gives c_k for all
    // k <= D; c_k = c_{k+1} means m^k lies in I + m^{k+1}, hence in I locally.
    std::uint64_t D = 2;
    while (true) {
        const std::uint64_t cap = std::min(D, N_budget + 1);
        const auto G = local_standard_basis(I, cap);
        auto c = [&](std::uint64_t k) { return truncated_count(G, k); };
        if (c(1) == 0) {
            return {0, 0};
        }
        if (c(cap - 1) == c(cap)) {
            const auto w = detail::least_true(1, cap - 1, [&](std::uint64_t k) { return c(k) == c(k + 1); });
            return {c(w), want_stable_degree ? std::optional<std::uint64_t>(w) : std::nullopt};
        }
        if (cap == N_budget + 1) {
            fail(ErrorKind::NotFiniteLength, "truncated colength still growing at N = " + std::to_string(N_budget) +
                                                 " (c_N = " + std::to_string(c(cap - 1)) + ")");
        }
        D *= 2;
    }
}

// A certified local endomorphism of a presented ring.
template <CoefficientField F>
class Endomorphism
{
public:
    using Poly = Polynomial<F>;

    Endomorphism(RingPtr<F> ring, std::vector<Poly> images)
        : m_ring(std::move(ring)), m_images(std::move(images)), m_cache(std::make_shared<Cache>())
    {
        m_cache->powers.push_back(m_images);
    }

    const RingPtr<F> &ring() const noexcept { return m_ring; }
    const std::vector<Poly> &images() const noexcept { return m_images; }
    const ContextPtr<F> &context() const noexcept { return m_ring->context(); }

    // Images of phi^n, computed once and shared between copies; reduced modulo a.
    std::vector<Poly> iterate(std::uint64_t n) const
    {
        if (n == 0) {
            return variables(context());
        }
        std::lock_guard lock(m_cache->mutex);
        auto &pw = m_cache->powers;
        while (pw.size() < n) {
            const auto &prev = pw.back();
            std::vector<Poly> next;
            next.reserve(m_images.size());
            for (const auto &img : m_images) {
                next.push_back(m_ring->reduce(substitute(img, prev)));
            }
            pw.push_back(std::move(next));
        }
        return pw[n - 1];
    }

    bool is_monomial_map() const
    {
        return std::all_of(m_images.begin(), m_images.end(), [](const Poly &p) { return p.is_monomial(); });
    }

private:
    struct Cache {
        std::mutex mutex;
        std::vector<std::vector<Poly>> powers;
    };

    RingPtr<F> m_ring;
    std::vector<Poly> m_images;
    std::shared_ptr<Cache> m_cache;
};

template <CoefficientField F>
Endomorphism<F> validate_endomorphism(const RingPtr<F> &ring, std::vector<Polynomial<F>> images)
{
    const auto &ctx = ring->context();
    if (images.size() != ctx->nvars()) {
        fail(ErrorKind::ContextMismatch, "expected " + std::to_string(ctx->nvars()) + " images, got " +
                                             std::to_string(images.size()));
    }
    for (std::size_t i = 0; i < images.size(); ++i) {
        require_same_context(ctx, images[i].context());
        if (!ctx->field().is_zero(images[i].constant_term())) {
            fail(ErrorKind::NotLocal, "image of " + ctx->name(i) + " = " + format_polynomial(images[i]) +
                                          " has a nonzero constant term, so it does not preserve m");
        }
    }
    if (const auto *G = ring->quotient_basis()) {
        for (const auto &g : ring->quotient().generators()) {
            const auto img = substitute(g, images);
            if (!contains(*G, img)) {
                fail(ErrorKind::NotWellDefined,
                     "phi(" + format_polynomial(g) + ") = " + format_polynomial(img) +
                         " is not in the quotient ideal (global membership test; the map may still be "
                         "well defined after localization)");
            }
        }
    }
    return Endomorphism<F>(ring, std::move(images));
}

template <CoefficientField F>
Ideal<F> image_ideal(const Endomorphism<F> &phi, std::uint64_t n)
{
    return Ideal<F>(phi.context(), phi.iterate(n));
}

template <CoefficientField F>
LocalLength lambda_detail(const Endomorphism<F> &phi, std::uint64_t n, std::uint64_t N_budget = default_N_budget,
                          bool want_stable_degree = false)
{
    return local_colength(*phi.ring(), image_ideal(phi, n), N_budget, want_stable_degree);
}

template <CoefficientField F>
std::uint64_t lambda_n(const Endomorphism<F> &phi, std::uint64_t n, std::uint64_t N_budget = default_N_budget)
{
    return lambda_detail(phi, n, N_budget, false).length;
}

// v = largest k with phi^n(m)R inside m^k (nullopt: inside every power, i.e.
// phi^n(m) lies in a); w = least k with m^k inside phi^n(m)R.
struct OrderBounds {
    std::uint64_t lambda;
    std::optional<std::uint64_t> v;
    std::uint64_t w;
};

template <CoefficientField F>
OrderBounds order_bounds(const Endomorphism<F> &phi, std::uint64_t n, std::uint64_t N_budget = default_N_budget)
{
    const auto &ring = *phi.ring();
    const Ideal<F> J = image_ideal(phi, n);
    const auto len = local_colength(ring, J, N_budget, true);
    const std::uint64_t w = *len.stable_degree;
    const Ideal<F> I = ideal_sum(J, ring.quotient());
    const detail::TruncatedCounter<F> cJ(I, w + 1), ca(ring.quotient(), w + 1);
    // If J sits in m^{w+1} + a while containing m^w, it sits in a itself.
    if (cJ(w + 1) == ca(w + 1)) {
        return {len.length, std::nullopt, w};
    }
    // Largest k in [1, w] with c_k(J) = c_k(a); k = 1 always qualifies since J is inside m.
    std::uint64_t lo = 1, hi = w;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo + 1) / 2;
        if (cJ(mid) == ca(mid)) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    return {len.length, lo, w};
}

// dim_k m / (m^2 + a).
template <CoefficientField F>
std::uint64_t embedding_dimension(const LocalRingPresentation<F> &ring)
{
    return truncated_colength(ring.quotient(), 2) - 1;
}

// phi^edim(m) inside m^2 + a, tested by global membership.
template <CoefficientField F>
bool is_contracting(const Endomorphism<F> &phi)
{
    const auto &ring = *phi.ring();
    const std::uint64_t e = std::max<std::uint64_t>(embedding_dimension(ring), 1);
    BuchbergerOptions opts;
    opts.truncate_degree = 2;
    const auto G = buchberger(ring.quotient(), opts);
    for (const auto &img : phi.iterate(e)) {
        if (!contains(G, img)) {
            return false;
        }
    }
    return true;
}

} // namespace entrolib
