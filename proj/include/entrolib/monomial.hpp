#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string_view>

#include <boost/container/small_vector.hpp>
#include <boost/container_hash/hash.hpp>

#include "error.hpp"

namespace entrolib {

// Exponent vector over a fixed variable list. Degrees are kept below 2^31 so
// that products of two monomials never wrap.
class Monomial
{
public:
    using exponent_type = std::uint32_t;
    static constexpr std::uint64_t max_degree = (std::uint64_t{1} << 31) - 1;

    Monomial() = default;
    explicit Monomial(std::size_t nvars) : m_exp(nvars, 0) {}
    Monomial(std::initializer_list<exponent_type> e) : m_exp(e.begin(), e.end()) { recompute_degree(); }
    explicit Monomial(std::span<const exponent_type> e) : m_exp(e.begin(), e.end()) { recompute_degree(); }

    static Monomial variable(std::size_t nvars, std::size_t i, exponent_type power = 1)
    {
        Monomial m(nvars);
        m.m_exp[i] = power;
        m.m_degree = power;
        return m;
    }

    std::size_t size() const noexcept { return m_exp.size(); }
    exponent_type operator[](std::size_t i) const noexcept { return m_exp[i]; }
    std::span<const exponent_type> exponents() const noexcept { return {m_exp.data(), m_exp.size()}; }
    std::uint64_t degree() const noexcept { return m_degree; }
    bool is_one() const noexcept { return m_degree == 0; }

    void set(std::size_t i, exponent_type e)
    {
        m_degree = m_degree - m_exp[i] + e;
        m_exp[i] = e;
        check_degree();
    }

    bool divides(const Monomial &other) const noexcept
    {
        if (m_degree > other.m_degree) {
            return false;
        }
        for (std::size_t i = 0; i < m_exp.size(); ++i) {
            if (m_exp[i] > other.m_exp[i]) {
                return false;
            }
        }
        return true;
    }

    // True when the supports are disjoint (lcm equals product).
    bool coprime(const Monomial &other) const noexcept
    {
        for (std::size_t i = 0; i < m_exp.size(); ++i) {
            if (m_exp[i] != 0 && other.m_exp[i] != 0) {
                return false;
            }
        }
        return true;
    }

    friend Monomial operator*(const Monomial &a, const Monomial &b)
    {
        Monomial r(a);
        for (std::size_t i = 0; i < r.m_exp.size(); ++i) {
            r.m_exp[i] += b.m_exp[i];
        }
        r.m_degree = a.m_degree + b.m_degree;
        r.check_degree();
        return r;
    }

    // Requires b | a.
    friend Monomial operator/(const Monomial &a, const Monomial &b) noexcept
    {
        Monomial r(a);
        for (std::size_t i = 0; i < r.m_exp.size(); ++i) {
            r.m_exp[i] -= b.m_exp[i];
        }
        r.m_degree = a.m_degree - b.m_degree;
        return r;
    }

    Monomial pow(std::uint64_t k) const
    {
        Monomial r(*this);
        if (m_degree * k > max_degree && m_degree != 0) {
            fail(ErrorKind::BudgetExceeded, "monomial degree overflow");
        }
        for (auto &e : r.m_exp) {
            e = static_cast<exponent_type>(e * k);
        }
        r.m_degree = m_degree * k;
        return r;
    }

    friend Monomial lcm(const Monomial &a, const Monomial &b)
    {
        Monomial r(a);
        for (std::size_t i = 0; i < r.m_exp.size(); ++i) {
            r.m_exp[i] = std::max(a.m_exp[i], b.m_exp[i]);
        }
        r.recompute_degree();
        return r;
    }

    friend Monomial gcd(const Monomial &a, const Monomial &b)
    {
        Monomial r(a);
        for (std::size_t i = 0; i < r.m_exp.size(); ++i) {
            r.m_exp[i] = std::min(a.m_exp[i], b.m_exp[i]);
        }
        r.recompute_degree();
        return r;
    }

    friend bool operator==(const Monomial &a, const Monomial &b) noexcept
    {
        return a.m_degree == b.m_degree && std::equal(a.m_exp.begin(), a.m_exp.end(), b.m_exp.begin(), b.m_exp.end());
    }

    friend std::size_t hash_value(const Monomial &m) noexcept
    {
        return boost::hash_range(m.m_exp.begin(), m.m_exp.end());
    }

private:
    void recompute_degree()
    {
        m_degree = 0;
        for (auto e : m_exp) {
            m_degree += e;
        }
        check_degree();
    }
    void check_degree() const
    {
        if (m_degree > max_degree) {
            fail(ErrorKind::BudgetExceeded, "monomial degree exceeds 2^31 - 1");
        }
    }

    boost::container::small_vector<exponent_type, 6> m_exp;
    std::uint64_t m_degree = 0;
};

struct MonomialHash {
    std::size_t operator()(const Monomial &m) const noexcept { return hash_value(m); }
};

// Variables are ranked in declaration order (x1 > x2 > ...). NegDegRevLex is a
// local order (lower degree is larger); it is only used modulo a power of m.
enum class MonomialOrder { DegRevLex, DegLex, NegDegRevLex };

constexpr std::string_view to_string(MonomialOrder o) noexcept
{
    switch (o) {
    case MonomialOrder::DegRevLex: return "degrevlex";
    case MonomialOrder::DegLex: return "deglex";
    case MonomialOrder::NegDegRevLex: return "negdegrevlex";
    }
    return "?";
}

constexpr bool is_local(MonomialOrder o) noexcept { return o == MonomialOrder::NegDegRevLex; }

inline std::strong_ordering compare(const Monomial &a, const Monomial &b, MonomialOrder ord) noexcept
{
    if (a.degree() != b.degree()) {
        return is_local(ord) ? b.degree() <=> a.degree() : a.degree() <=> b.degree();
    }
    const std::size_t n = a.size();
    if (ord == MonomialOrder::DegLex) {
        for (std::size_t i = 0; i < n; ++i) {
            if (a[i] != b[i]) {
                return a[i] <=> b[i];
            }
        }
        return std::strong_ordering::equal;
    }
    for (std::size_t i = n; i-- > 0;) {
        if (a[i] != b[i]) {
            // Smaller power of the last differing variable wins.
            return b[i] <=> a[i];
        }
    }
    return std::strong_ordering::equal;
}

// Strict "greater than" comparator, used to keep term lists in descending order.
struct MonomialGreater {
    MonomialOrder ord = MonomialOrder::DegRevLex;
    bool operator()(const Monomial &a, const Monomial &b) const noexcept { return compare(a, b, ord) > 0; }
};

} // namespace entrolib
