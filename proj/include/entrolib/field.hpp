#pragma once

#include <concepts>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

#include <gmpxx.h>

#include "error.hpp"

namespace entrolib {

// Trial division; p is capped below 2^31 so this stays cheap.
constexpr bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2) {
        return false;
    }
    for (std::uint64_t q = 2; q * q <= n; ++q) {
        if (n % q == 0) {
            return false;
        }
    }
    return true;
}

class FieldSpec
{
public:
    enum class Kind { Rationals, PrimeField };

    static constexpr std::uint64_t max_prime = (std::uint64_t{1} << 31);

    static FieldSpec rationals() noexcept { return FieldSpec(Kind::Rationals, 0); }

    static FieldSpec prime_field(std::uint64_t p)
    {
        if (p >= max_prime) {
            fail(ErrorKind::InvalidField, "prime fields are limited to p < 2^31, got " + std::to_string(p));
        }
        if (!is_prime(p)) {
            fail(ErrorKind::InvalidField, std::to_string(p) + " is not prime");
        }
        return FieldSpec(Kind::PrimeField, static_cast<std::uint32_t>(p));
    }

    Kind kind() const noexcept { return m_kind; }
    // Zero for the rationals.
    std::uint32_t characteristic() const noexcept { return m_p; }

    std::string to_string() const { return m_kind == Kind::Rationals ? "Q" : "F_" + std::to_string(m_p); }

    friend bool operator==(const FieldSpec &, const FieldSpec &) = default;

private:
    FieldSpec(Kind k, std::uint32_t p) noexcept : m_kind(k), m_p(p) {}

    Kind m_kind;
    std::uint32_t m_p;
};

// The operations the polynomial engine needs from a coefficient domain.
template <typename F>
concept CoefficientField = requires(const F f, const typename F::value_type &a, const typename F::value_type &b,
                                    const mpz_class &z) {
    typename F::value_type;
    { f.spec() } -> std::same_as<FieldSpec>;
    { f.zero() } -> std::same_as<typename F::value_type>;
    { f.one() } -> std::same_as<typename F::value_type>;
    { f.from_integer(z) } -> std::same_as<typename F::value_type>;
    { f.add(a, b) } -> std::same_as<typename F::value_type>;
    { f.sub(a, b) } -> std::same_as<typename F::value_type>;
    { f.mul(a, b) } -> std::same_as<typename F::value_type>;
    { f.neg(a) } -> std::same_as<typename F::value_type>;
    { f.inv(a) } -> std::same_as<typename F::value_type>;
    { f.is_zero(a) } -> std::same_as<bool>;
    { f.is_one(a) } -> std::same_as<bool>;
    { f.to_string(a) } -> std::same_as<std::string>;
};

// Q with GMP rationals; values are kept canonical (lowest terms, positive denominator).
class Rationals
{
public:
    using value_type = mpq_class;

    FieldSpec spec() const noexcept { return FieldSpec::rationals(); }

    value_type zero() const { return value_type(0); }
    value_type one() const { return value_type(1); }
    value_type from_integer(const mpz_class &z) const { return value_type(z); }
    value_type from_fraction(const mpz_class &num, const mpz_class &den) const
    {
        if (den == 0) {
            fail(ErrorKind::DivisionByZero, "zero denominator");
        }
        value_type q(num, den);
        q.canonicalize();
        return q;
    }

    value_type add(const value_type &a, const value_type &b) const { return a + b; }
    value_type sub(const value_type &a, const value_type &b) const { return a - b; }
    value_type mul(const value_type &a, const value_type &b) const { return a * b; }
    value_type neg(const value_type &a) const { return -a; }
    value_type inv(const value_type &a) const
    {
        if (a == 0) {
            fail(ErrorKind::DivisionByZero, "inverse of zero");
        }
        return 1 / a;
    }

    bool is_zero(const value_type &a) const { return sgn(a) == 0; }
    bool is_one(const value_type &a) const { return a == 1; }
    bool is_negative(const value_type &a) const { return sgn(a) < 0; }
    std::string to_string(const value_type &a) const { return a.get_str(); }

    friend bool operator==(const Rationals &, const Rationals &) noexcept { return true; }
};

// F_p with least nonnegative residues; products go through 64-bit intermediates.
class PrimeField
{
public:
    using value_type = std::uint32_t;

    explicit PrimeField(std::uint64_t p) : m_spec(FieldSpec::prime_field(p)), m_p(m_spec.characteristic()) {}
    explicit PrimeField(const FieldSpec &spec) : m_spec(spec), m_p(spec.characteristic())
    {
        if (spec.kind() != FieldSpec::Kind::PrimeField) {
            fail(ErrorKind::FieldMismatch, "expected a prime field");
        }
    }

    FieldSpec spec() const noexcept { return m_spec; }
    std::uint32_t characteristic() const noexcept { return m_p; }

    value_type zero() const noexcept { return 0; }
    value_type one() const noexcept { return m_p == 1 ? 0 : 1; }
    value_type from_integer(const mpz_class &z) const
    {
        mpz_class r = z % m_p;
        if (r < 0) {
            r += m_p;
        }
        return static_cast<value_type>(r.get_ui());
    }
    value_type from_integer(std::int64_t z) const noexcept
    {
        auto r = z % static_cast<std::int64_t>(m_p);
        return static_cast<value_type>(r < 0 ? r + m_p : r);
    }
    value_type from_fraction(const mpz_class &num, const mpz_class &den) const
    {
        return mul(from_integer(num), inv(from_integer(den)));
    }

    value_type add(value_type a, value_type b) const noexcept
    {
        std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<value_type>(s >= m_p ? s - m_p : s);
    }
    value_type sub(value_type a, value_type b) const noexcept
    {
        return a >= b ? a - b : static_cast<value_type>(std::uint64_t{a} + m_p - b);
    }
    value_type mul(value_type a, value_type b) const noexcept
    {
        return static_cast<value_type>((std::uint64_t{a} * b) % m_p);
    }
    value_type neg(value_type a) const noexcept { return a == 0 ? 0 : m_p - a; }
    value_type inv(value_type a) const
    {
        if (a == 0) {
            fail(ErrorKind::DivisionByZero, "inverse of zero in " + m_spec.to_string());
        }
        // Extended Euclid on (a, p).
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = m_p, new_r = a;
        while (new_r != 0) {
            const std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        return static_cast<value_type>(t < 0 ? t + m_p : t);
    }

    bool is_zero(value_type a) const noexcept { return a == 0; }
    bool is_one(value_type a) const noexcept { return a == 1; }
    bool is_negative(value_type) const noexcept { return false; }
    std::string to_string(value_type a) const { return std::to_string(a); }

    friend bool operator==(const PrimeField &a, const PrimeField &b) noexcept { return a.m_p == b.m_p; }

private:
    FieldSpec m_spec;
    std::uint32_t m_p;
};

static_assert(CoefficientField<Rationals>);
static_assert(CoefficientField<PrimeField>);

// Runtime-typed scalar: used at API boundaries where the field is data, not a template parameter.
class FieldElement
{
public:
    static FieldElement rational(const mpq_class &q)
    {
        mpq_class c(q);
        c.canonicalize();
        return FieldElement(FieldSpec::rationals(), std::move(c));
    }
    static FieldElement residue(const FieldSpec &spec, std::int64_t v)
    {
        PrimeField f(spec);
        return FieldElement(spec, f.from_integer(v));
    }

    const FieldSpec &spec() const noexcept { return m_spec; }
    bool is_zero() const
    {
        return std::visit([](const auto &v) { return v == 0; }, m_value);
    }
    const mpq_class &as_rational() const { return std::get<mpq_class>(m_value); }
    std::uint32_t as_residue() const { return std::get<std::uint32_t>(m_value); }
    std::string to_string() const
    {
        return std::visit(
            [](const auto &v) {
                if constexpr (std::is_same_v<std::decay_t<decltype(v)>, mpq_class>) {
                    return v.get_str();
                } else {
                    return std::to_string(v);
                }
            },
            m_value);
    }

    friend bool operator==(const FieldElement &a, const FieldElement &b)
    {
        return a.m_spec == b.m_spec && a.m_value == b.m_value;
    }

    friend FieldElement field_add(const FieldElement &a, const FieldElement &b)
    {
        return binary(a, b, [](const auto &f, const auto &x, const auto &y) { return f.add(x, y); });
    }
    friend FieldElement field_mul(const FieldElement &a, const FieldElement &b)
    {
        return binary(a, b, [](const auto &f, const auto &x, const auto &y) { return f.mul(x, y); });
    }
    friend FieldElement field_neg(const FieldElement &a)
    {
        return binary(a, a, [](const auto &f, const auto &x, const auto &) { return f.neg(x); });
    }
    friend FieldElement field_inv(const FieldElement &a)
    {
        return binary(a, a, [](const auto &f, const auto &x, const auto &) { return f.inv(x); });
    }

private:
    using storage = std::variant<mpq_class, std::uint32_t>;

    FieldElement(const FieldSpec &spec, storage v) : m_spec(spec), m_value(std::move(v)) {}

    template <typename Op>
    static FieldElement binary(const FieldElement &a, const FieldElement &b, Op op)
    {
        if (!(a.m_spec == b.m_spec)) {
            fail(ErrorKind::FieldMismatch, a.m_spec.to_string() + " vs " + b.m_spec.to_string());
        }
        if (a.m_spec.kind() == FieldSpec::Kind::Rationals) {
            return FieldElement(a.m_spec, op(Rationals{}, a.as_rational(), b.as_rational()));
        }
        PrimeField f(a.m_spec);
        return FieldElement(a.m_spec, op(f, a.as_residue(), b.as_residue()));
    }

    FieldSpec m_spec;
    storage m_value;
};

// Calls fn with the concrete field object described by spec.
template <typename Fn>
decltype(auto) with_field(const FieldSpec &spec, Fn &&fn)
{
    if (spec.kind() == FieldSpec::Kind::Rationals) {
        return std::forward<Fn>(fn)(Rationals{});
    }
    return std::forward<Fn>(fn)(PrimeField(spec));
}

} // namespace entrolib
