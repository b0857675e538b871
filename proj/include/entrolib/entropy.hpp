#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"
#include "groebner.hpp"
#include "local_ring.hpp"
#include "parallel.hpp"

namespace entrolib {

enum class EntryStatus { Ok, BudgetExceeded, NotFiniteLength };

inline std::string_view to_string(EntryStatus s)
{
    switch (s) {
    case EntryStatus::Ok: return "ok";
    case EntryStatus::BudgetExceeded: return "budget_exceeded";
    case EntryStatus::NotFiniteLength: return "not_finite_length";
    }
    return "?";
}

struct SequenceEntry {
    std::uint64_t n;
    std::optional<std::uint64_t> value;
    EntryStatus status = EntryStatus::Ok;
    std::string message;
};

// lambda(phi^1..phi^n_max), or another length sequence indexed the same way.
struct LambdaSequence {
    std::uint64_t n_max = 0;
    std::vector<SequenceEntry> entries;

    // Values up to the first failed entry.
    std::vector<std::uint64_t> prefix() const
    {
        std::vector<std::uint64_t> out;
        for (const auto &e : entries) {
            if (!e.value) {
                break;
            }
            out.push_back(*e.value);
        }
        return out;
    }
    bool complete() const { return prefix().size() == entries.size(); }
    bool budget_exhausted() const
    {
        return std::any_of(entries.begin(), entries.end(),
                           [](const SequenceEntry &e) { return e.status == EntryStatus::BudgetExceeded; });
    }
};

struct LengthOptions {
    std::uint64_t N_budget = default_N_budget;
};

namespace detail {

template <typename Compute>
LambdaSequence compute_sequence(std::uint64_t n_max, Compute compute)
{
    LambdaSequence seq;
    seq.n_max = n_max;
    seq.entries.resize(n_max);
    parallel_for(n_max, [&](std::size_t i) {
        auto &e = seq.entries[i];
        e.n = i + 1;
        try {
            e.value = compute(i + 1);
        } catch (const Error &err) {
            e.status = err.kind() == ErrorKind::NotFiniteLength ? EntryStatus::NotFiniteLength
                                                                : EntryStatus::BudgetExceeded;
            e.message = err.what();
        } catch (const std::bad_alloc &) {
            e.status = EntryStatus::BudgetExceeded;
            e.message = "out of memory";
        }
    });
    // Finite length at n = 1 carries over to every iterate, so a later
    // NotFiniteLength only means the N budget ran out.
    if (!seq.entries.empty() && seq.entries[0].value) {
        for (auto &e : seq.entries) {
            if (e.status == EntryStatus::NotFiniteLength) {
                e.status = EntryStatus::BudgetExceeded;
                e.message += " (finite length is known from n = 1; raise the N budget)";
            }
        }
    }
    return seq;
}

} // namespace detail

template <CoefficientField F>
LambdaSequence lambda_sequence(const Endomorphism<F> &phi, std::uint64_t n_max, const LengthOptions &opts = {})
{
    return detail::compute_sequence(n_max, [&](std::uint64_t n) { return lambda_n(phi, n, opts.N_budget); });
}

// The ideal phi^n(q)R, generated by the images of q's generators.
template <CoefficientField F>
Ideal<F> image_of_ideal(const Endomorphism<F> &phi, const Ideal<F> &q, std::uint64_t n)
{
    const auto imgs = phi.iterate(n);
    Ideal<F> out(phi.context());
    for (const auto &g : q.generators()) {
        out.add(phi.ring()->reduce(substitute(g, imgs)));
    }
    return out;
}

// l(R / phi^n(q)R) for n = 1..n_max.
template <CoefficientField F>
LambdaSequence ideal_length_sequence(const Endomorphism<F> &phi, const Ideal<F> &q, std::uint64_t n_max,
                                     const LengthOptions &opts = {})
{
    return detail::compute_sequence(n_max, [&](std::uint64_t n) {
        return local_colength(*phi.ring(), image_of_ideal(phi, q, n), opts.N_budget, false).length;
    });
}

// The limit of log(lambda_n)/n is the infimum of the sequence, so the
// running minimum is a certified upper bound; diff_estimate is heuristic.
struct EntropyReport {
    std::uint64_t n_max = 0;
    std::vector<double> per_n;
    std::vector<double> running_min;
    double upper_bound = std::numeric_limits<double>::infinity();
    std::optional<double> diff_estimate;
};

inline EntropyReport entropy_estimate(const std::vector<std::uint64_t> &values)
{
    if (values.empty()) {
        fail(ErrorKind::Unstabilized, "entropy needs at least one finite length");
    }
    EntropyReport r;
    r.n_max = values.size();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0) {
            fail(ErrorKind::NotFiniteLength, "length 0 means the ideal is the unit ideal");
        }
        const double h = std::log(static_cast<double>(values[i])) / static_cast<double>(i + 1);
        r.per_n.push_back(h);
        r.upper_bound = std::min(r.upper_bound, h);
        r.running_min.push_back(r.upper_bound);
    }
    if (values.size() >= 2) {
        r.diff_estimate = std::log(static_cast<double>(values.back())) -
                          std::log(static_cast<double>(values[values.size() - 2]));
    }
    return r;
}

inline EntropyReport entropy_estimate(const LambdaSequence &seq) { return entropy_estimate(seq.prefix()); }

struct PowerRuleReport {
    std::uint64_t k = 1;
    std::vector<std::uint64_t> lambda_power;  // lambda((phi^k)^n)
    std::vector<std::uint64_t> lambda_direct; // lambda(phi^{kn})
    bool exact_match = false;
    EntropyReport power;
    EntropyReport base;
    double upper_bound_ratio = 0;
};

template <CoefficientField F>
PowerRuleReport power_rule_check(const Endomorphism<F> &phi, std::uint64_t k, std::uint64_t n_max,
                                 const LengthOptions &opts = {})
{
    if (k == 0) {
        fail(ErrorKind::SchemaError, "power rule needs k >= 1");
    }
    Endomorphism<F> psi(phi.ring(), phi.iterate(k));
    PowerRuleReport r;
    r.k = k;
    r.lambda_power = lambda_sequence(psi, n_max, opts).prefix();
    const auto base = lambda_sequence(phi, n_max * k, opts).prefix();
    for (std::uint64_t n = 1; n <= n_max && n * k <= base.size(); ++n) {
        r.lambda_direct.push_back(base[n * k - 1]);
    }
    r.exact_match = !r.lambda_power.empty() && r.lambda_power.size() == n_max && r.lambda_direct == r.lambda_power;
    r.power = entropy_estimate(r.lambda_power);
    r.base = entropy_estimate(std::vector<std::uint64_t>(base.begin(), base.begin() + std::min<std::size_t>(base.size(), n_max)));
    r.upper_bound_ratio = r.base.upper_bound > 0 ? r.power.upper_bound / r.base.upper_bound
                                                 : std::numeric_limits<double>::quiet_NaN();
    return r;
}

enum class HSource { GeometricBase, Supplied, EntropyUpperBound };

inline std::string_view to_string(HSource s)
{
    switch (s) {
    case HSource::GeometricBase: return "exact_geometric_base";
    case HSource::Supplied: return "supplied";
    case HSource::EntropyUpperBound: return "entropy_upper_bound";
    }
    return "?";
}

struct HKReport {
    std::vector<std::uint64_t> lengths;
    double h_used = 0;
    HSource h_source = HSource::EntropyUpperBound;
    bool geometric = false;
    std::optional<mpq_class> base;             // exact ratio lambda_{n+1}/lambda_n when geometric
    std::vector<double> ratios;                // lambda_n / exp(n h)
    std::vector<mpq_class> exact_ratios;       // lambda_n / base^n when geometric
    std::optional<mpq_class> limit;            // only when geometric
    std::optional<std::size_t> dim_used;
    DimensionSource dim_source = DimensionSource::Unknown;
    std::optional<double> p_root;              // exp(h / dim)
};

// lambda_{n+1} lambda_{n-1} = lambda_n^2 over the whole prefix (at least three terms).
inline bool is_geometric(const std::vector<std::uint64_t> &v)
{
    if (v.size() < 3) {
        return false;
    }
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
        if (mpz_class(v[i + 1]) * v[i - 1] != mpz_class(v[i]) * v[i]) {
            return false;
        }
    }
    return true;
}

inline HKReport hk_from_lengths(std::vector<std::uint64_t> lengths, std::optional<double> h_supplied,
                                std::optional<std::size_t> dim, DimensionSource dim_source, bool require_root)
{
    HKReport r;
    r.lengths = std::move(lengths);
    if (r.lengths.empty()) {
        fail(ErrorKind::Unstabilized, "no finite lengths to form Hilbert-Kunz ratios");
    }
    r.geometric = is_geometric(r.lengths);
    if (r.geometric) {
        r.base = mpq_class(mpz_class(r.lengths[1]), mpz_class(r.lengths[0]));
        r.base->canonicalize();
        mpq_class pw(1);
        for (std::size_t i = 0; i < r.lengths.size(); ++i) {
            pw *= *r.base;
            mpq_class q = mpq_class(mpz_class(r.lengths[i])) / pw;
            q.canonicalize();
            r.exact_ratios.push_back(q);
        }
        r.limit = r.exact_ratios.back();
    }
    if (h_supplied) {
        r.h_used = *h_supplied;
        r.h_source = HSource::Supplied;
    } else if (r.geometric) {
        r.h_used = std::log(r.base->get_d());
        r.h_source = HSource::GeometricBase;
    } else {
        r.h_used = entropy_estimate(r.lengths).upper_bound;
        r.h_source = HSource::EntropyUpperBound;
    }
    for (std::size_t i = 0; i < r.lengths.size(); ++i) {
        if (r.geometric && r.h_source == HSource::GeometricBase) {
            r.ratios.push_back(r.exact_ratios[i].get_d());
        } else {
            const double n = static_cast<double>(i + 1);
            r.ratios.push_back(std::exp(std::log(static_cast<double>(r.lengths[i])) - n * r.h_used));
        }
    }
    if (r.h_source == HSource::Supplied) {
        // A limit is only claimed for the exact geometric case.
        r.limit.reset();
        if (r.geometric && std::abs(std::log(r.base->get_d()) - r.h_used) < 1e-12) {
            r.limit = r.exact_ratios.back();
        }
    }
    r.dim_used = dim;
    r.dim_source = dim_source;
    if (dim && *dim > 0) {
        r.p_root = std::exp(r.h_used / static_cast<double>(*dim));
    } else if (require_root) {
        fail(ErrorKind::MissingDimension, "p(phi, R) needs a positive Krull dimension");
    }
    return r;
}

// q defaults to m. h defaults to the exact base when lambda is geometric,
// else to the entropy upper bound.
template <CoefficientField F>
HKReport hk_sequence(const Endomorphism<F> &phi, std::uint64_t n_max, std::optional<double> h = {},
                     const std::optional<std::type_identity_t<Ideal<F>>> &q = {}, const LengthOptions &opts = {},
                     bool require_root = false)
{
    const auto &ring = *phi.ring();
    auto seq = q ? ideal_length_sequence(phi, *q, n_max, opts) : lambda_sequence(phi, n_max, opts);
    return hk_from_lengths(seq.prefix(), h, ring.dim(), ring.dim_source(), require_root);
}

struct PrimaryEntropyReport {
    LambdaSequence lengths;
    EntropyReport entropy;
    bool contracting = false;
    std::optional<std::string> warning;
};

template <CoefficientField F>
PrimaryEntropyReport primary_ideal_entropy(const Endomorphism<F> &phi, const Ideal<F> &q, std::uint64_t n_max,
                                           const LengthOptions &opts = {})
{
    try {
        local_colength(*phi.ring(), q, opts.N_budget, false);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NotFiniteLength) {
            fail(ErrorKind::NotMPrimary, "q is not m-primary: " + e.message());
        }
        throw;
    }
    PrimaryEntropyReport r;
    r.contracting = is_contracting(phi);
    if (!r.contracting) {
        r.warning = "the map is not contracting, so this sequence need not converge to the entropy";
    }
    r.lengths = ideal_length_sequence(phi, q, n_max, opts);
    r.entropy = entropy_estimate(r.lengths);
    return r;
}

struct BoundsEntry {
    std::uint64_t n;
    std::uint64_t lambda;
    std::optional<std::uint64_t> v; // nullopt: unbounded
    std::uint64_t w;
    std::optional<double> log_v_over_n;
    double log_w_over_n;
    bool lower_ok;  // d log(v_n)/n <= entropy upper bound
    bool upper_ok;  // diff_estimate <= d log(w_n)/n + tolerance
};

struct BoundsReport {
    std::size_t dim = 0;
    DimensionSource dim_source = DimensionSource::Unknown;
    std::vector<BoundsEntry> entries;
    EntropyReport entropy;
    std::optional<double> v_h_lower; // running max of log v_n / n
    double w_h_upper = std::numeric_limits<double>::infinity(); // running min of log w_n / n
    bool sandwich_ok = true;
    std::string status;
};

inline constexpr double sandwich_tolerance = 1e-6;

template <CoefficientField F>
BoundsReport bounds_analysis(const Endomorphism<F> &phi, std::uint64_t n_max, const LengthOptions &opts = {})
{
    const auto &ring = *phi.ring();
    BoundsReport r;
    r.dim = ring.require_dim();
    r.dim_source = ring.dim_source();
    std::vector<std::optional<OrderBounds>> ob(n_max);
    std::vector<std::string> errors(n_max);
    parallel_for(n_max, [&](std::size_t i) {
        try {
            ob[i] = order_bounds(phi, i + 1, opts.N_budget);
        } catch (const Error &e) {
            errors[i] = e.what();
        }
    });
    std::vector<std::uint64_t> lambdas;
    for (std::size_t i = 0; i < n_max && ob[i]; ++i) {
        lambdas.push_back(ob[i]->lambda);
    }
    if (lambdas.empty()) {
        fail(ErrorKind::NotFiniteLength, errors[0]);
    }
    if (lambdas.size() < n_max) {
        r.status = errors[lambdas.size()];
    }
    r.entropy = entropy_estimate(lambdas);
    const double d = static_cast<double>(r.dim);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const auto &b = *ob[i];
        const double n = static_cast<double>(i + 1);
        BoundsEntry e{i + 1, b.lambda, b.v, b.w, std::nullopt, std::log(static_cast<double>(b.w)) / n, true, true};
        if (b.v) {
            e.log_v_over_n = std::log(static_cast<double>(*b.v)) / n;
            r.v_h_lower = std::max(r.v_h_lower.value_or(0.0), *e.log_v_over_n);
            e.lower_ok = d * *e.log_v_over_n <= r.entropy.upper_bound + sandwich_tolerance;
        } else {
            // phi^n(m) inside a: only possible in dimension zero, where both sides vanish.
            e.lower_ok = r.dim == 0;
        }
        r.w_h_upper = std::min(r.w_h_upper, e.log_w_over_n);
        const double diff = r.entropy.diff_estimate.value_or(r.entropy.upper_bound);
        e.upper_ok = diff <= d * e.log_w_over_n + sandwich_tolerance;
        r.sandwich_ok = r.sandwich_ok && e.lower_ok && e.upper_ok;
        r.entries.push_back(e);
    }
    return r;
}

template <CoefficientField F>
std::vector<VariableSet> minimal_primes_monomial(const Ideal<F> &a)
{
    if (!a.is_monomial()) {
        fail(ErrorKind::NotMonomial, "minimal primes are only computed for monomial ideals");
    }
    return minimal_vertex_covers(a.monomial_generators(), a.context()->nvars());
}

template <CoefficientField F>
std::string format_prime(const VariableSet &p, const VariableContext<F> &ctx)
{
    std::string s = "(";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += (i ? ", " : "") + ctx.name(p[i]);
    }
    return s + ")";
}

// phi(P) inside P for a prime generated by variables: every term of each
// image of a variable in P must involve a variable of P.
template <CoefficientField F>
std::optional<std::size_t> invariance_violation(const Endomorphism<F> &phi, const VariableSet &P)
{
    for (auto i : P) {
        for (const auto &t : phi.images()[i].terms()) {
            const bool inside = std::any_of(P.begin(), P.end(), [&](std::size_t j) { return t.monomial[j] != 0; });
            if (!inside) {
                return i;
            }
        }
    }
    return std::nullopt;
}

struct ComponentReport {
    std::string prime;
    std::vector<std::string> remaining_vars;
    std::vector<std::string> images;
    LambdaSequence lambda;
    EntropyReport entropy;
};

struct ComponentsReport {
    LambdaSequence whole_lambda;
    EntropyReport whole;
    std::vector<ComponentReport> components;
    double max_upper_bound = 0;
    std::optional<double> max_diff_estimate;
    std::optional<double> diff_gap; // |whole diff_estimate - max component diff_estimate|
};

template <CoefficientField F>
ComponentReport component_of(const Endomorphism<F> &phi, const VariableSet &P, std::uint64_t n_max,
                             const LengthOptions &opts)
{
    const auto &ctx = *phi.context();
    ComponentReport c;
    c.prime = format_prime(P, ctx);
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < ctx.nvars(); ++i) {
        if (std::find(P.begin(), P.end(), i) == P.end()) {
            keep.push_back(i);
            c.remaining_vars.push_back(ctx.name(i));
        }
    }
    if (keep.empty()) {
        // R/P is the residue field: every length is 1.
        c.lambda.n_max = n_max;
        for (std::uint64_t n = 1; n <= n_max; ++n) {
            c.lambda.entries.push_back({n, 1, EntryStatus::Ok, {}});
        }
        c.entropy = entropy_estimate(c.lambda);
        return c;
    }
    auto sub = VariableContext<F>::make(c.remaining_vars, ctx.field(), ctx.term_limit());
    // x_i -> 0 for i in P, x_keep[j] -> j-th variable of the subring.
    std::vector<Polynomial<F>> proj;
    for (std::size_t i = 0, j = 0; i < ctx.nvars(); ++i) {
        if (j < keep.size() && keep[j] == i) {
            proj.push_back(Polynomial<F>::variable(sub, j++));
        } else {
            proj.push_back(Polynomial<F>::zero(sub));
        }
    }
    std::vector<Polynomial<F>> imgs;
    for (auto i : keep) {
        imgs.push_back(substitute(phi.images()[i], proj));
        c.images.push_back(format_polynomial(imgs.back()));
    }
    auto induced = validate_endomorphism(make_ring(sub), std::move(imgs));
    c.lambda = lambda_sequence(induced, n_max, opts);
    c.entropy = entropy_estimate(c.lambda);
    return c;
}

template <CoefficientField F>
ComponentsReport components_analysis(const Endomorphism<F> &phi, std::uint64_t n_max, const LengthOptions &opts = {})
{
    const auto &ring = *phi.ring();
    const auto primes = minimal_primes_monomial(ring.quotient());
    for (const auto &P : primes) {
        if (auto bad = invariance_violation(phi, P)) {
            fail(ErrorKind::InvarianceFailure, "phi(" + phi.context()->name(*bad) + ") = " +
                                                   format_polynomial(phi.images()[*bad]) + " is not in the prime " +
                                                   format_prime(P, *phi.context()));
        }
    }
    ComponentsReport r;
    r.whole_lambda = lambda_sequence(phi, n_max, opts);
    r.whole = entropy_estimate(r.whole_lambda);
    for (const auto &P : primes) {
        r.components.push_back(component_of(phi, P, n_max, opts));
        const auto &e = r.components.back().entropy;
        r.max_upper_bound = std::max(r.max_upper_bound, e.upper_bound);
        if (e.diff_estimate) {
            r.max_diff_estimate = std::max(r.max_diff_estimate.value_or(0.0), *e.diff_estimate);
        }
    }
    if (r.whole.diff_estimate && r.max_diff_estimate) {
        r.diff_gap = std::abs(*r.whole.diff_estimate - *r.max_diff_estimate);
    }
    return r;
}

// |det| of an integer matrix by fraction-free (Bareiss) elimination.
inline mpz_class abs_determinant(std::vector<std::vector<mpz_class>> a)
{
    const std::size_t n = a.size();
    if (n == 0) {
        return 1;
    }
    mpz_class prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            std::size_t r = k + 1;
            while (r < n && a[r][k] == 0) {
                ++r;
            }
            if (r == n) {
                return 0;
            }
            std::swap(a[k], a[r]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    return abs(a[n - 1][n - 1]);
}

// Lattice index |det A| of a monomial substitution map on a polynomial ring;
// column i of A is the exponent vector of phi(x_i).
template <CoefficientField F>
mpz_class degree_monomial(const Endomorphism<F> &phi)
{
    if (!phi.ring()->is_polynomial_ring()) {
        fail(ErrorKind::NotMonomialMap, "the degree is only computed on polynomial rings (empty quotient)");
    }
    const std::size_t d = phi.context()->nvars();
    std::vector<std::vector<mpz_class>> A(d, std::vector<mpz_class>(d));
    for (std::size_t i = 0; i < d; ++i) {
        const auto &img = phi.images()[i];
        if (!img.is_monomial()) {
            fail(ErrorKind::NotMonomialMap,
                 "phi(" + phi.context()->name(i) + ") = " + format_polynomial(img) + " is not a single monomial");
        }
        for (std::size_t r = 0; r < d; ++r) {
            A[r][i] = img.terms()[0].monomial[r];
        }
    }
    auto det = abs_determinant(std::move(A));
    if (det == 0) {
        fail(ErrorKind::SingularExponentMatrix, "the exponent matrix is singular, so the map is not finite");
    }
    // A nonzero determinant alone does not make the map finite: x -> xy, y -> y has det 1.
    std::vector<Monomial> lead;
    for (const auto &img : phi.images()) {
        lead.push_back(img.terms()[0].monomial);
    }
    if (!count_standard_monomials(lead, d)) {
        fail(ErrorKind::NotFiniteLength, "phi(m) is not m-primary, so the map is not finite");
    }
    return det;
}

struct MultiplicityReport {
    std::size_t dim = 0;
    std::vector<std::uint64_t> lengths; // l(R/q^s), s = 1..s_max
    std::size_t tail = 0;
    std::vector<mpz_class> differences; // d-th differences over the tail
    mpz_class multiplicity;
};

// Hilbert-Samuel multiplicity from finite differences of l(R/q^s).
template <CoefficientField F>
MultiplicityReport multiplicity(const LocalRingPresentation<F> &ring, const Ideal<F> &q, std::uint64_t s_max,
                                const LengthOptions &opts = {})
{
    MultiplicityReport r;
    r.dim = ring.require_dim();
    try {
        local_colength(ring, q, opts.N_budget, false);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NotFiniteLength) {
            fail(ErrorKind::NotMPrimary, "q is not m-primary: " + e.message());
        }
        throw;
    }
    const std::size_t d = r.dim;
    r.tail = std::max<std::size_t>(d + 2, s_max / 2);
    if (s_max < r.tail) {
        fail(ErrorKind::Unstabilized, "s_max = " + std::to_string(s_max) + " is too small; need at least " +
                                          std::to_string(r.tail) + " samples");
    }
    r.lengths.resize(s_max);
    std::vector<std::string> errors(s_max);
    parallel_for(s_max, [&](std::size_t i) {
        try {
            r.lengths[i] = local_colength(ring, ideal_power(q, i + 1), opts.N_budget, false).length;
        } catch (const Error &e) {
            errors[i] = e.what();
        }
    });
    for (const auto &e : errors) {
        if (!e.empty()) {
            fail(ErrorKind::BudgetExceeded, e);
        }
    }
    std::vector<mpz_class> diff;
    for (std::size_t i = s_max - r.tail; i < s_max; ++i) {
        diff.push_back(mpz_class(r.lengths[i]));
    }
    for (std::size_t k = 0; k < d; ++k) {
        std::vector<mpz_class> next;
        for (std::size_t i = 0; i + 1 < diff.size(); ++i) {
            next.push_back(diff[i + 1] - diff[i]);
        }
        diff = std::move(next);
    }
    r.differences = diff;
    for (const auto &x : diff) {
        if (x != diff.front()) {
            fail(ErrorKind::Unstabilized, "the d-th finite difference is not constant over the tail; increase s_max");
        }
    }
    r.multiplicity = diff.front();
    return r;
}

} // namespace entrolib
