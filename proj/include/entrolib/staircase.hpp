#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "error.hpp"
#include "monomial.hpp"

namespace entrolib {

// Drops generators divisible by another one; keeps the first of equal pairs.
inline std::vector<Monomial> minimal_monomials(std::span<const Monomial> gens)
{
    std::vector<Monomial> sorted(gens.begin(), gens.end());
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Monomial &a, const Monomial &b) { return a.degree() < b.degree(); });
    std::vector<Monomial> out;
    for (const auto &g : sorted) {
        bool redundant = false;
        for (const auto &h : out) {
            if (h.divides(g)) {
                redundant = true;
                break;
            }
        }
        if (!redundant) {
            out.push_back(g);
        }
    }
    return out;
}

namespace detail {

using u128 = unsigned __int128;

class StaircaseCounter
{
public:
    static constexpr std::uint64_t unbounded = std::numeric_limits<std::uint64_t>::max();
    static constexpr u128 infinite = ~u128{0};

    explicit StaircaseCounter(std::vector<Monomial> gens) : m_gens(std::move(gens)) {}

    // Standard monomials in variables 0..k (k + 1 of them) of degree < budget.
    u128 count(const std::vector<std::size_t> &active, std::size_t k1, std::uint64_t budget) const
    {
        if (budget == 0) {
            return 0;
        }
        for (auto g : active) {
            if (zero_below(m_gens[g], k1)) {
                return 0;
            }
        }
        if (k1 == 0) {
            return 1;
        }
        const std::size_t k = k1 - 1;
        std::vector<std::uint32_t> cuts;
        for (auto g : active) {
            cuts.push_back(m_gens[g][k]);
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

        // Exponents j of x_k are grouped in intervals on which the set of
        // generators with e_k <= j is constant.
        u128 total = 0;
        std::vector<std::size_t> below;
        std::size_t next_cut = 0;
        std::uint64_t j = 0;
        while (j < budget) {
            while (next_cut < cuts.size() && cuts[next_cut] <= j) {
                ++next_cut;
            }
            below.clear();
            for (auto g : active) {
                if (m_gens[g][k] <= j) {
                    below.push_back(g);
                }
            }
            const std::uint64_t end =
                next_cut < cuts.size() ? std::min<std::uint64_t>(cuts[next_cut], budget) : budget;
            if (budget == unbounded) {
                const u128 inner = count(below, k, unbounded);
                if (inner == infinite) {
                    return infinite;
                }
                if (next_cut == cuts.size()) {
                    if (inner != 0) {
                        return infinite;
                    }
                    break;
                }
                total = add(total, mul(inner, end - j));
                j = end;
            } else {
                for (; j < end; ++j) {
                    const u128 inner = count(below, k, budget - j);
                    if (inner == 0) {
                        // Fewer budget left only shrinks the count.
                        j = budget;
                        break;
                    }
                    total = add(total, inner);
                }
            }
        }
        return total;
    }

private:
    static bool zero_below(const Monomial &m, std::size_t k1)
    {
        for (std::size_t i = 0; i < k1; ++i) {
            if (m[i] != 0) {
                return false;
            }
        }
        return true;
    }
    static u128 add(u128 a, u128 b)
    {
        if (a > infinite - 1 - b) {
            fail(ErrorKind::BudgetExceeded, "standard monomial count overflow");
        }
        return a + b;
    }
    static u128 mul(u128 a, std::uint64_t b)
    {
        if (b != 0 && a > (infinite - 1) / b) {
            fail(ErrorKind::BudgetExceeded, "standard monomial count overflow");
        }
        return a * b;
    }

    std::vector<Monomial> m_gens;
};

} // namespace detail

// Number of monomials in nvars variables outside the ideal generated by gens,
// restricted to total degree < degree_bound when one is given. nullopt means
// infinitely many.
inline std::optional<std::uint64_t> count_standard_monomials(std::span<const Monomial> gens, std::size_t nvars,
                                                             std::optional<std::uint64_t> degree_bound = std::nullopt)
{
    for (const auto &g : gens) {
        if (g.size() != nvars) {
            fail(ErrorKind::ContextMismatch, "monomial length does not match the number of variables");
        }
    }
    auto mins = minimal_monomials(gens);
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < mins.size(); ++i) {
        all.push_back(i);
    }
    detail::StaircaseCounter counter(std::move(mins));
    const auto budget = degree_bound.value_or(detail::StaircaseCounter::unbounded);
    const auto c = counter.count(all, nvars, budget);
    if (c == detail::StaircaseCounter::infinite) {
        return std::nullopt;
    }
    if (c > std::numeric_limits<std::uint64_t>::max() - 1) {
        fail(ErrorKind::BudgetExceeded, "standard monomial count exceeds 64 bits");
    }
    return static_cast<std::uint64_t>(c);
}

} // namespace entrolib
