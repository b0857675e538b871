#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <type_traits>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "monomial.hpp"

namespace entrolib {

inline constexpr std::size_t default_term_limit = 2'000'000;

inline bool is_identifier(std::string_view s) noexcept
{
    if (s.empty()) {
        return false;
    }
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(s.front())) {
        return false;
    }
    return std::all_of(s.begin() + 1, s.end(), [&](char c) { return alpha(c) || digit(c); });
}

// Variable names plus the coefficient field of k[x1..xd]. The term limit is the
// budget every polynomial built in this context is held to.
template <CoefficientField F>
class VariableContext
{
public:
    using field_type = F;

    VariableContext(std::vector<std::string> names, F field, std::size_t term_limit = default_term_limit)
        : m_names(std::move(names)), m_field(std::move(field)), m_term_limit(term_limit)
    {
        if (m_names.empty()) {
            fail(ErrorKind::SchemaError, "at least one variable is required");
        }
        std::unordered_set<std::string> seen;
        for (const auto &n : m_names) {
            if (!is_identifier(n)) {
                fail(ErrorKind::SchemaError, "invalid variable name '" + n + "'");
            }
            if (!seen.insert(n).second) {
                fail(ErrorKind::SchemaError, "duplicate variable name '" + n + "'");
            }
        }
    }

    static std::shared_ptr<const VariableContext> make(std::vector<std::string> names, F field,
                                                       std::size_t term_limit = default_term_limit)
    {
        return std::make_shared<const VariableContext>(std::move(names), std::move(field), term_limit);
    }

    std::size_t nvars() const noexcept { return m_names.size(); }
    const std::vector<std::string> &names() const noexcept { return m_names; }
    const std::string &name(std::size_t i) const { return m_names.at(i); }
    const F &field() const noexcept { return m_field; }
    std::size_t term_limit() const noexcept { return m_term_limit; }

    std::optional<std::size_t> index_of(std::string_view name) const noexcept
    {
        for (std::size_t i = 0; i < m_names.size(); ++i) {
            if (m_names[i] == name) {
                return i;
            }
        }
        return std::nullopt;
    }

    friend bool operator==(const VariableContext &a, const VariableContext &b)
    {
        return a.m_names == b.m_names && a.m_field.spec() == b.m_field.spec();
    }

private:
    std::vector<std::string> m_names;
    F m_field;
    std::size_t m_term_limit;
};

template <CoefficientField F>
using ContextPtr = std::shared_ptr<const VariableContext<F>>;

template <CoefficientField F>
bool same_context(const ContextPtr<F> &a, const ContextPtr<F> &b)
{
    return a == b || (a && b && *a == *b);
}

template <CoefficientField F>
void require_same_context(const ContextPtr<F> &a, const ContextPtr<F> &b)
{
    if (!same_context(a, b)) {
        fail(ErrorKind::ContextMismatch, "operands live in different variable contexts");
    }
}

template <CoefficientField F>
typename F::value_type field_pow(const F &f, typename F::value_type base, std::uint64_t e)
{
    auto r = f.one();
    while (e != 0) {
        if (e & 1u) {
            r = f.mul(r, base);
        }
        e >>= 1u;
        if (e != 0) {
            base = f.mul(base, base);
        }
    }
    return r;
}

template <CoefficientField F>
struct Term {
    Monomial monomial;
    typename F::value_type coeff;

    friend bool operator==(const Term &, const Term &) = default;
};

// Sparse polynomial. Terms are stored in strictly descending degrevlex order
// with no zero coefficients, which makes the representation canonical.
template <CoefficientField F>
class Polynomial
{
public:
    using value_type = typename F::value_type;
    using term_type = Term<F>;

    Polynomial() = default;
    explicit Polynomial(ContextPtr<F> ctx) : m_ctx(std::move(ctx)) {}

    static Polynomial zero(ContextPtr<F> ctx) { return Polynomial(std::move(ctx)); }

    static Polynomial constant(ContextPtr<F> ctx, value_type c)
    {
        Polynomial p(std::move(ctx));
        if (!p.field().is_zero(c)) {
            p.m_terms.push_back({Monomial(p.m_ctx->nvars()), std::move(c)});
        }
        return p;
    }

    static Polynomial variable(ContextPtr<F> ctx, std::size_t i, Monomial::exponent_type power = 1)
    {
        const auto n = ctx->nvars();
        auto one = ctx->field().one();
        return term(std::move(ctx), Monomial::variable(n, i, power), std::move(one));
    }

    static Polynomial term(ContextPtr<F> ctx, Monomial m, value_type c)
    {
        Polynomial p(std::move(ctx));
        if (m.size() != p.m_ctx->nvars()) {
            fail(ErrorKind::ContextMismatch, "monomial length does not match the number of variables");
        }
        if (!p.field().is_zero(c)) {
            p.m_terms.push_back({std::move(m), std::move(c)});
        }
        return p;
    }

    // Sorts, merges equal monomials, and drops zeros.
    static Polynomial from_terms(ContextPtr<F> ctx, std::vector<term_type> terms)
    {
        Polynomial p(std::move(ctx));
        const auto &f = p.field();
        for (const auto &t : terms) {
            if (t.monomial.size() != p.m_ctx->nvars()) {
                fail(ErrorKind::ContextMismatch, "monomial length does not match the number of variables");
            }
        }
        MonomialGreater gt;
        std::sort(terms.begin(), terms.end(),
                  [&](const term_type &a, const term_type &b) { return gt(a.monomial, b.monomial); });
        for (auto &t : terms) {
            if (!p.m_terms.empty() && p.m_terms.back().monomial == t.monomial) {
                p.m_terms.back().coeff = f.add(p.m_terms.back().coeff, t.coeff);
                if (f.is_zero(p.m_terms.back().coeff)) {
                    p.m_terms.pop_back();
                }
            } else if (!f.is_zero(t.coeff)) {
                p.m_terms.push_back(std::move(t));
            }
        }
        p.check_budget();
        return p;
    }

    const ContextPtr<F> &context() const noexcept { return m_ctx; }
    const F &field() const noexcept { return m_ctx->field(); }
    std::size_t nvars() const noexcept { return m_ctx->nvars(); }

    bool is_zero() const noexcept { return m_terms.empty(); }
    std::size_t size() const noexcept { return m_terms.size(); }
    std::span<const term_type> terms() const noexcept { return m_terms; }
    bool is_monomial() const noexcept { return m_terms.size() == 1; }
    bool is_constant() const noexcept { return m_terms.empty() || (m_terms.size() == 1 && m_terms[0].monomial.is_one()); }

    value_type constant_term() const
    {
        if (!m_terms.empty() && m_terms.back().monomial.is_one()) {
            return m_terms.back().coeff;
        }
        return field().zero();
    }

    std::uint64_t total_degree() const noexcept { return m_terms.empty() ? 0 : m_terms.front().monomial.degree(); }

    // Lowest total degree of a term; zero polynomial reports nullopt.
    std::optional<std::uint64_t> order() const noexcept
    {
        if (m_terms.empty()) {
            return std::nullopt;
        }
        std::uint64_t o = m_terms.front().monomial.degree();
        for (const auto &t : m_terms) {
            o = std::min(o, t.monomial.degree());
        }
        return o;
    }

    bool is_homogeneous() const noexcept
    {
        return m_terms.empty() || m_terms.front().monomial.degree() == m_terms.back().monomial.degree();
    }

    // Drops every term of total degree >= n (reduction modulo m^n).
    Polynomial truncated(std::uint64_t n) const
    {
        Polynomial p(m_ctx);
        for (const auto &t : m_terms) {
            if (t.monomial.degree() < n) {
                p.m_terms.push_back(t);
            }
        }
        return p;
    }

    Polynomial operator-() const
    {
        Polynomial p(*this);
        for (auto &t : p.m_terms) {
            t.coeff = field().neg(t.coeff);
        }
        return p;
    }

    friend Polynomial operator+(const Polynomial &a, const Polynomial &b) { return combine(a, b, false); }
    friend Polynomial operator-(const Polynomial &a, const Polynomial &b) { return combine(a, b, true); }

    Polynomial &operator+=(const Polynomial &b) { return *this = *this + b; }
    Polynomial &operator-=(const Polynomial &b) { return *this = *this - b; }
    Polynomial &operator*=(const Polynomial &b) { return *this = *this * b; }

    Polynomial scale(const value_type &c) const
    {
        Polynomial p(m_ctx);
        if (field().is_zero(c)) {
            return p;
        }
        p.m_terms.reserve(m_terms.size());
        for (const auto &t : m_terms) {
            p.m_terms.push_back({t.monomial, field().mul(t.coeff, c)});
        }
        return p;
    }

    Polynomial mul_term(const Monomial &m, const value_type &c) const
    {
        Polynomial p(m_ctx);
        if (field().is_zero(c)) {
            return p;
        }
        p.m_terms.reserve(m_terms.size());
        for (const auto &t : m_terms) {
            p.m_terms.push_back({t.monomial * m, field().mul(t.coeff, c)});
        }
        return p;
    }

    friend Polynomial operator*(const Polynomial &a, const Polynomial &b)
    {
        require_same_context(a.m_ctx, b.m_ctx);
        if (a.is_zero() || b.is_zero()) {
            return Polynomial(a.m_ctx);
        }
        if (a.size() == 1) {
            return b.mul_term(a.m_terms[0].monomial, a.m_terms[0].coeff);
        }
        if (b.size() == 1) {
            return a.mul_term(b.m_terms[0].monomial, b.m_terms[0].coeff);
        }
        const auto &f = a.field();
        const std::size_t limit = a.m_ctx->term_limit();
        std::unordered_map<Monomial, value_type, MonomialHash> acc;
        acc.reserve(std::min(a.size() * b.size(), limit));
        for (const auto &s : a.m_terms) {
            for (const auto &t : b.m_terms) {
                auto m = s.monomial * t.monomial;
                auto c = f.mul(s.coeff, t.coeff);
                auto [it, inserted] = acc.try_emplace(std::move(m), c);
                if (!inserted) {
                    it->second = f.add(it->second, c);
                } else if (acc.size() > limit) {
                    fail(ErrorKind::BudgetExceeded,
                         "polynomial product exceeds the term budget of " + std::to_string(limit));
                }
            }
        }
        std::vector<term_type> terms;
        terms.reserve(acc.size());
        for (auto &[m, c] : acc) {
            if (!f.is_zero(c)) {
                terms.push_back({m, std::move(c)});
            }
        }
        return from_terms(a.m_ctx, std::move(terms));
    }

    Polynomial pow(std::uint64_t k) const
    {
        if (is_monomial()) {
            if constexpr (std::is_same_v<value_type, mpq_class>) {
                const auto &c = m_terms[0].coeff;
                const std::uint64_t bits =
                    mpz_sizeinbase(c.get_num_mpz_t(), 2) + mpz_sizeinbase(c.get_den_mpz_t(), 2);
                if (bits > 2 && k > (std::uint64_t{1} << 26) / bits) {
                    fail(ErrorKind::BudgetExceeded, "coefficient power is too large");
                }
            }
            return term(m_ctx, m_terms[0].monomial.pow(k), field_pow(field(), m_terms[0].coeff, k));
        }
        Polynomial result = constant(m_ctx, field().one());
        Polynomial base = *this;
        while (k != 0) {
            if (k & 1u) {
                result = result * base;
            }
            k >>= 1u;
            if (k != 0) {
                base = base * base;
            }
        }
        return result;
    }

    // Maximal term under ord.
    std::pair<Monomial, value_type> leading_term(MonomialOrder ord = MonomialOrder::DegRevLex) const
    {
        if (m_terms.empty()) {
            fail(ErrorKind::ZeroPolynomial, "leading term of the zero polynomial");
        }
        if (ord == MonomialOrder::DegRevLex) {
            return {m_terms.front().monomial, m_terms.front().coeff};
        }
        const term_type *best = &m_terms.front();
        for (const auto &t : m_terms) {
            if (compare(t.monomial, best->monomial, ord) > 0) {
                best = &t;
            }
        }
        return {best->monomial, best->coeff};
    }

    friend bool operator==(const Polynomial &a, const Polynomial &b)
    {
        return same_context(a.m_ctx, b.m_ctx) && a.m_terms == b.m_terms;
    }

private:
    static Polynomial combine(const Polynomial &a, const Polynomial &b, bool subtract)
    {
        require_same_context(a.m_ctx, b.m_ctx);
        const auto &f = a.field();
        Polynomial p(a.m_ctx);
        p.m_terms.reserve(a.size() + b.size());
        MonomialGreater gt;
        auto i = a.m_terms.begin();
        auto j = b.m_terms.begin();
        while (i != a.m_terms.end() || j != b.m_terms.end()) {
            if (j == b.m_terms.end() || (i != a.m_terms.end() && gt(i->monomial, j->monomial))) {
                p.m_terms.push_back(*i++);
            } else if (i == a.m_terms.end() || gt(j->monomial, i->monomial)) {
                p.m_terms.push_back({j->monomial, subtract ? f.neg(j->coeff) : j->coeff});
                ++j;
            } else {
                auto c = subtract ? f.sub(i->coeff, j->coeff) : f.add(i->coeff, j->coeff);
                if (!f.is_zero(c)) {
                    p.m_terms.push_back({i->monomial, std::move(c)});
                }
                ++i;
                ++j;
            }
        }
        p.check_budget();
        return p;
    }

    void check_budget() const
    {
        if (m_terms.size() > m_ctx->term_limit()) {
            fail(ErrorKind::BudgetExceeded,
                 "polynomial exceeds the term budget of " + std::to_string(m_ctx->term_limit()));
        }
    }

    ContextPtr<F> m_ctx;
    std::vector<term_type> m_terms;
};

// f(images[0], ..., images[d-1]). The images may live in another context
// (over the same field); the result lives in theirs.
template <CoefficientField F>
Polynomial<F> substitute(const Polynomial<F> &f, std::span<const Polynomial<F>> images)
{
    if (images.size() != f.nvars()) {
        fail(ErrorKind::ContextMismatch, "substitution needs exactly one image per variable");
    }
    const ContextPtr<F> &target = images.front().context();
    for (const auto &img : images) {
        require_same_context(target, img.context());
    }
    if (!(f.field().spec() == target->field().spec())) {
        fail(ErrorKind::FieldMismatch, "substitution across different coefficient fields");
    }
    const auto &fld = target->field();
    // Powers of each image, computed on demand.
    std::vector<std::map<std::uint64_t, Polynomial<F>>> powers(images.size());
    auto power = [&](std::size_t i, std::uint64_t e) -> const Polynomial<F> & {
        auto &cache = powers[i];
        if (auto it = cache.find(e); it != cache.end()) {
            return it->second;
        }
        Polynomial<F> r;
        if (images[i].is_monomial() || e == 1) {
            r = images[i].pow(e);
        } else if (auto below = cache.lower_bound(e); below != cache.begin()) {
            // Reuse the largest cached power below e.
            --below;
            r = below->second * images[i].pow(e - below->first);
        } else {
            r = images[i].pow(e);
        }
        return cache.emplace(e, std::move(r)).first->second;
    };

    std::unordered_map<Monomial, typename F::value_type, MonomialHash> acc;
    for (const auto &t : f.terms()) {
        auto prod = Polynomial<F>::constant(target, t.coeff);
        for (std::size_t i = 0; i < images.size() && !prod.is_zero(); ++i) {
            if (t.monomial[i] != 0) {
                prod = prod * power(i, t.monomial[i]);
            }
        }
        for (const auto &s : prod.terms()) {
            auto [it, inserted] = acc.try_emplace(s.monomial, s.coeff);
            if (!inserted) {
                it->second = fld.add(it->second, s.coeff);
            } else if (acc.size() > target->term_limit()) {
                fail(ErrorKind::BudgetExceeded,
                     "substitution exceeds the term budget of " + std::to_string(target->term_limit()));
            }
        }
    }
    std::vector<Term<F>> terms;
    terms.reserve(acc.size());
    for (auto &[m, c] : acc) {
        terms.push_back({m, std::move(c)});
    }
    return Polynomial<F>::from_terms(target, std::move(terms));
}

template <CoefficientField F>
Polynomial<F> substitute(const Polynomial<F> &f, const std::vector<Polynomial<F>> &images)
{
    return substitute(f, std::span<const Polynomial<F>>(images));
}

template <CoefficientField F>
std::vector<Polynomial<F>> variables(const ContextPtr<F> &ctx)
{
    std::vector<Polynomial<F>> vs;
    for (std::size_t i = 0; i < ctx->nvars(); ++i) {
        vs.push_back(Polynomial<F>::variable(ctx, i));
    }
    return vs;
}

} // namespace entrolib
