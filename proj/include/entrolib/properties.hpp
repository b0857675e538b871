#pragma once

// Executable versions of the structural facts about length sequences. Each
// check reports pass, fail (with a witness) or skipped (hypothesis not met).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "entropy.hpp"
#include "groebner.hpp"
#include "local_ring.hpp"
#include "parallel.hpp"

namespace entrolib {

enum class PropertyStatus { Pass, Fail, Skipped };

inline std::string_view to_string(PropertyStatus s)
{
    switch (s) {
    case PropertyStatus::Pass: return "pass";
    case PropertyStatus::Fail: return "fail";
    case PropertyStatus::Skipped: return "skipped";
    }
    return "?";
}

struct PropertyResult {
    std::string name;
    std::string statement;
    PropertyStatus status = PropertyStatus::Pass;
    std::string detail;
    std::optional<std::string> witness;
};

struct VerifyOptions {
    std::uint64_t n_max = 4;
    std::uint64_t N_budget = default_N_budget;
    std::uint64_t power_k = 2;
    // Test hook: rewrites lambda(phi^n) before any check sees it.
    std::function<std::uint64_t(std::uint64_t n, std::uint64_t lambda)> length_fault;
};

struct VerifyReport {
    std::uint64_t n_max = 0;
    std::vector<std::uint64_t> lambda;
    std::vector<std::optional<std::uint64_t>> v;
    std::vector<std::uint64_t> w;
    std::string stopped; // why the prefix is shorter than n_max, if it is
    std::vector<PropertyResult> results;

    bool passed() const
    {
        return std::none_of(results.begin(), results.end(),
                            [](const PropertyResult &r) { return r.status == PropertyStatus::Fail; });
    }
    const PropertyResult *find(std::string_view name) const
    {
        for (const auto &r : results) {
            if (r.name == name) {
                return &r;
            }
        }
        return nullptr;
    }
};

namespace detail {

inline std::string pair_str(std::uint64_t a, std::uint64_t b)
{
    return "(" + std::to_string(a) + ", " + std::to_string(b) + ")";
}

inline PropertyResult skipped(std::string name, std::string statement, std::string why)
{
    return {std::move(name), std::move(statement), PropertyStatus::Skipped, std::move(why), std::nullopt};
}

inline void fail_with(PropertyResult &r, std::string witness, std::string detail)
{
    if (r.status != PropertyStatus::Fail) {
        r.status = PropertyStatus::Fail;
        r.witness = std::move(witness);
        r.detail = std::move(detail);
    }
}

// lambda(phi^m + n) <= lambda(phi^m) lambda(phi^n)
inline PropertyResult check_submultiplicative(const std::vector<std::uint64_t> &lam)
{
    PropertyResult r{"submultiplicativity", "lambda(phi^(m+n)) <= lambda(phi^m) * lambda(phi^n)", {}, {}, {}};
    for (std::size_t m = 1; m <= lam.size(); ++m) {
        for (std::size_t n = m; m + n <= lam.size(); ++n) {
            const auto lhs = lam[m + n - 1];
            const unsigned __int128 rhs = static_cast<unsigned __int128>(lam[m - 1]) * lam[n - 1];
            if (lhs > rhs) {
                fail_with(r, pair_str(m, n),
                          std::to_string(lhs) + " > " + std::to_string(lam[m - 1]) + " * " + std::to_string(lam[n - 1]));
            }
        }
    }
    return r;
}

template <CoefficientField F>
Endomorphism<F> conjugate(const Endomorphism<F> &phi, const std::vector<std::size_t> &perm)
{
    const auto &ctx = phi.context();
    const auto &ring = *phi.ring();
    const std::size_t d = ctx->nvars();
    // sigma(x_i) = x_perm[i]; psi = sigma phi sigma^-1.
    std::vector<Polynomial<F>> sigma;
    for (std::size_t i = 0; i < d; ++i) {
        sigma.push_back(Polynomial<F>::variable(ctx, perm[i]));
    }
    Ideal<F> quotient(ctx);
    for (const auto &g : ring.quotient().generators()) {
        quotient.add(substitute(g, sigma));
    }
    std::vector<Polynomial<F>> imgs(d, Polynomial<F>::zero(ctx));
    for (std::size_t i = 0; i < d; ++i) {
        imgs[perm[i]] = substitute(phi.images()[i], sigma);
    }
    std::optional<std::size_t> dim;
    if (ring.dim_source() == DimensionSource::Declared) {
        dim = ring.dim();
    }
    return validate_endomorphism(make_ring(ctx, std::move(quotient), dim), std::move(imgs));
}

inline std::vector<std::vector<std::size_t>> test_permutations(std::size_t d)
{
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> p(d);
    std::iota(p.begin(), p.end(), 0);
    if (d <= 3) {
        while (std::next_permutation(p.begin(), p.end())) {
            out.push_back(p);
        }
        return out;
    }
    auto swap01 = p;
    std::swap(swap01[0], swap01[1]);
    std::rotate(p.begin(), p.begin() + 1, p.end());
    out.push_back(swap01);
    out.push_back(p);
    return out;
}

inline std::string perm_str(const std::vector<std::size_t> &p)
{
    std::string s = "[";
    for (std::size_t i = 0; i < p.size(); ++i) {
        s += (i ? " " : "") + std::to_string(p[i]);
    }
    return s + "]";
}

} // namespace detail

template <CoefficientField F>
VerifyReport verify_properties(const Endomorphism<F> &phi, const VerifyOptions &opts = {})
{
    using namespace detail;
    const auto &ring = *phi.ring();
    const auto &ctx = phi.context();
    const std::uint64_t n_max = opts.n_max;
    VerifyReport rep;
    rep.n_max = n_max;

    std::vector<std::optional<OrderBounds>> ob(n_max);
    std::vector<std::string> errors(n_max);
    parallel_for(n_max, [&](std::size_t i) {
        try {
            ob[i] = order_bounds(phi, i + 1, opts.N_budget);
        } catch (const Error &e) {
            errors[i] = e.what();
        } catch (const std::bad_alloc &) {
            errors[i] = "out of memory";
        }
    });
    for (std::uint64_t i = 0; i < n_max; ++i) {
        if (!ob[i]) {
            rep.stopped = "n = " + std::to_string(i + 1) + ": " + errors[i];
            break;
        }
        auto lam = ob[i]->lambda;
        if (opts.length_fault) {
            lam = opts.length_fault(i + 1, lam);
        }
        rep.lambda.push_back(lam);
        rep.v.push_back(ob[i]->v);
        rep.w.push_back(ob[i]->w);
    }
    const auto &lam = rep.lambda;
    const std::uint64_t len = lam.size();
    auto &out = rep.results;

    out.push_back(check_submultiplicative(lam));

    {
        // l(m/J) from the m-adic filtration of R/J: the graded pieces between
        // degree 1 and w + 1 add up to c(w + 1) - c(1), with c(1) = 1 for J
        // inside m and c(w) = c(w + 1) once m^w lies in J.
        PropertyResult r{"residue_length", "l(m / phi^n(m)R) = lambda(phi^n) - 1", {}, {}, {}};
        std::vector<std::optional<std::uint64_t>> filt(len);
        parallel_for(len, [&](std::size_t i) {
            try {
                const auto I = ideal_sum(image_ideal(phi, i + 1), ring.quotient());
                const detail::TruncatedCounter<F> c(I, rep.w[i] + 1);
                const auto top = c(rep.w[i] + 1);
                if (c(1) == 1 && c(rep.w[i]) == top) {
                    filt[i] = top - 1;
                }
            } catch (const Error &) {
            }
        });
        for (std::uint64_t i = 0; i < len; ++i) {
            if (!filt[i] || *filt[i] + 1 != lam[i]) {
                fail_with(r, "n = " + std::to_string(i + 1),
                          "l(m/J) = " + (filt[i] ? std::to_string(*filt[i]) : std::string("?")) +
                              ", lambda = " + std::to_string(lam[i]));
            }
        }
        out.push_back(std::move(r));
    }

    {
        PropertyResult r{"v_le_w", "v(phi^n) <= w(phi^n)", {}, {}, {}};
        std::size_t infinite = 0;
        for (std::uint64_t i = 0; i < len; ++i) {
            if (!rep.v[i]) {
                ++infinite;
            } else if (*rep.v[i] > rep.w[i] || *rep.v[i] < 1) {
                fail_with(r, "n = " + std::to_string(i + 1),
                          "v = " + std::to_string(*rep.v[i]) + ", w = " + std::to_string(rep.w[i]));
            }
        }
        if (infinite) {
            r.detail = std::to_string(infinite) + " iterate(s) map m into a (v unbounded)";
        }
        out.push_back(std::move(r));
    }

    {
        PropertyResult v{"v_supermultiplicative", "v(phi^(m+n)) >= v(phi^m) * v(phi^n)", {}, {}, {}};
        PropertyResult w{"w_submultiplicative", "w(phi^(m+n)) <= w(phi^m) * w(phi^n)", {}, {}, {}};
        for (std::size_t m = 1; m <= len; ++m) {
            for (std::size_t n = m; m + n <= len; ++n) {
                const auto &vm = rep.v[m - 1], &vn = rep.v[n - 1], &vs = rep.v[m + n - 1];
                if (vm && vn && (!vs ? false : *vs < *vm * *vn)) {
                    fail_with(v, pair_str(m, n),
                              std::to_string(*vs) + " < " + std::to_string(*vm) + " * " + std::to_string(*vn));
                }
                if (vs && (!vm || !vn)) {
                    fail_with(v, pair_str(m, n), "v is unbounded for a factor but finite for the composite");
                }
                const auto wm = rep.w[m - 1], wn = rep.w[n - 1], ws = rep.w[m + n - 1];
                if (ws > wm * wn) {
                    fail_with(w, pair_str(m, n),
                              std::to_string(ws) + " > " + std::to_string(wm) + " * " + std::to_string(wn));
                }
            }
        }
        out.push_back(std::move(v));
        out.push_back(std::move(w));
    }

    {
        const std::string name = "sandwich_lower", st = "d * log(v_n)/n <= running min of log(lambda_n)/n";
        if (!ring.dim()) {
            out.push_back(skipped(name, st, "dim R unknown"));
        } else {
            PropertyResult r{name, st, {}, {}, {}};
            const auto est = entropy_estimate(lam);
            const double d = static_cast<double>(*ring.dim());
            for (std::uint64_t i = 0; i < len; ++i) {
                if (!rep.v[i]) {
                    continue;
                }
                const double lower = d * std::log(static_cast<double>(*rep.v[i])) / static_cast<double>(i + 1);
                if (lower > est.upper_bound + sandwich_tolerance) {
                    fail_with(r, "n = " + std::to_string(i + 1),
                              std::to_string(lower) + " > " + std::to_string(est.upper_bound));
                }
            }
            out.push_back(std::move(r));
        }
    }

    {
        PropertyResult r{"conjugation_invariance", "lambda(sigma phi sigma^-1) = lambda(phi) for variable permutations",
                         {}, {}, {}};
        const auto perms = test_permutations(ctx->nvars());
        if (perms.empty() || len == 0) {
            r = skipped(r.name, r.statement, "no nontrivial permutation or empty prefix");
        }
        for (const auto &p : perms) {
            if (r.status != PropertyStatus::Pass) {
                break;
            }
            const auto psi = conjugate(phi, p);
            const auto seq = lambda_sequence(psi, len, {opts.N_budget}).prefix();
            for (std::uint64_t i = 0; i < seq.size(); ++i) {
                if (seq[i] != lam[i]) {
                    fail_with(r, "sigma = " + perm_str(p) + ", n = " + std::to_string(i + 1),
                              std::to_string(seq[i]) + " != " + std::to_string(lam[i]));
                }
            }
        }
        out.push_back(std::move(r));
    }

    {
        const std::uint64_t k = opts.power_k;
        PropertyResult r{"power_rule", "lambda((phi^k)^n) = lambda(phi^(kn))", {}, {}, {}};
        if (k < 2 || len < k) {
            r = skipped(r.name, r.statement, "prefix shorter than k = " + std::to_string(k));
        } else {
            Endomorphism<F> psi(phi.ring(), phi.iterate(k));
            const auto seq = lambda_sequence(psi, len / k, {opts.N_budget}).prefix();
            for (std::uint64_t n = 1; n <= seq.size(); ++n) {
                if (seq[n - 1] != lam[k * n - 1]) {
                    fail_with(r, pair_str(k, n), std::to_string(seq[n - 1]) + " != " + std::to_string(lam[k * n - 1]));
                }
            }
            r.detail = "k = " + std::to_string(k) + ", n = 1.." + std::to_string(seq.size());
        }
        out.push_back(std::move(r));
    }

    {
        const std::string name = "degree_equality", st = "lambda(phi^n) = deg(phi)^n for monomial maps of k[x]";
        std::optional<mpz_class> deg;
        std::string why;
        try {
            deg = degree_monomial(phi);
        } catch (const Error &e) {
            why = e.message();
        }
        if (!deg) {
            out.push_back(skipped(name, st, why));
        } else {
            PropertyResult r{name, st, {}, "deg = " + deg->get_str(), {}};
            mpz_class pw = 1;
            for (std::uint64_t i = 0; i < len; ++i) {
                pw *= *deg;
                if (pw != mpz_class(std::to_string(lam[i]))) {
                    fail_with(r, "n = " + std::to_string(i + 1),
                              "deg^n = " + pw.get_str() + ", lambda = " + std::to_string(lam[i]));
                }
            }
            out.push_back(std::move(r));
        }
    }

    {
        // a' = a + (x_i) and a + m^2, kept when phi(a') lies in a'.
        PropertyResult r{"quotient_inequality", "l(R/(J + a')) <= l(R/J) for invariant a' containing a", {}, {}, {}};
        std::vector<std::pair<std::string, Ideal<F>>> cands;
        for (std::size_t i = 0; i < ctx->nvars(); ++i) {
            cands.emplace_back("(" + ctx->name(i) + ")", Ideal<F>(ctx, {Polynomial<F>::variable(ctx, i)}));
        }
        cands.emplace_back("m^2", ideal_power(Ideal<F>::maximal(ctx), 2));
        std::size_t used = 0;
        for (auto &[label, extra] : cands) {
            const auto ap = ideal_sum(ring.quotient(), extra);
            const auto G = buchberger(ap);
            bool invariant = true;
            for (const auto &g : ap.generators()) {
                invariant = invariant && contains(G, substitute(g, phi.images()));
            }
            if (!invariant) {
                continue;
            }
            ++used;
            for (std::uint64_t i = 0; i < len; ++i) {
                const auto small = local_colength(ring, ideal_sum(image_ideal(phi, i + 1), ap), opts.N_budget).length;
                if (small > lam[i]) {
                    fail_with(r, "a' = a + " + label + ", n = " + std::to_string(i + 1),
                              std::to_string(small) + " > " + std::to_string(lam[i]));
                }
            }
        }
        if (used == 0) {
            r = skipped(r.name, r.statement, "no invariant candidate ideal");
        } else if (r.status == PropertyStatus::Pass) {
            r.detail = std::to_string(used) + " invariant ideal(s) tested";
        }
        out.push_back(std::move(r));
    }

    {
        const std::string name = "components_max_law",
                          st = "lambda on R/P <= lambda on R for each minimal prime P; entropy gap reported";
        if (ring.is_polynomial_ring() || !ring.quotient().is_monomial()) {
            out.push_back(skipped(name, st, "needs a nonzero monomial quotient ideal"));
        } else {
            try {
                const auto comp = components_analysis(phi, len, {opts.N_budget});
                PropertyResult r{name, st, {}, {}, {}};
                const auto whole = comp.whole_lambda.prefix();
                for (const auto &c : comp.components) {
                    const auto part = c.lambda.prefix();
                    for (std::size_t i = 0; i < std::min(part.size(), whole.size()); ++i) {
                        if (part[i] > whole[i]) {
                            fail_with(r, c.prime + ", n = " + std::to_string(i + 1),
                                      std::to_string(part[i]) + " > " + std::to_string(whole[i]));
                        }
                    }
                }
                if (r.status == PropertyStatus::Pass && comp.diff_gap) {
                    r.detail = "diff gap " + std::to_string(*comp.diff_gap);
                }
                out.push_back(std::move(r));
            } catch (const Error &e) {
                if (e.kind() != ErrorKind::InvarianceFailure) {
                    throw;
                }
                out.push_back(skipped(name, st, e.message()));
            }
        }
    }
    return rep;
}

} // namespace entrolib
