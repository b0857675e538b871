#pragma once

// Subcommand execution and deterministic JSON/CSV rendering for the CLI.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "entropy.hpp"
#include "problem.hpp"
#include "properties.hpp"

namespace entrolib {

using Json = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

enum ExitCode : int {
    exit_ok = 0,
    exit_usage = 1,
    exit_validation = 2,
    exit_budget = 3,
    exit_verify = 4,
};

inline const std::vector<std::string> &command_names()
{
    static const std::vector<std::string> names{"check", "lambda", "entropy", "bounds", "hk",
                                                "components", "degree", "multiplicity", "verify"};
    return names;
}

struct CommandOptions {
    std::string command;
    std::string file_label;
    std::optional<std::uint64_t> n;
    std::optional<std::uint64_t> budget_N;
    std::optional<std::uint64_t> budget_terms;
    // Passed to verify; not reachable from the command line.
    std::function<std::uint64_t(std::uint64_t, std::uint64_t)> length_fault;
};

struct CommandResult {
    int exit_code = exit_ok;
    Json report;
    std::string csv;
};

inline std::uint64_t fnv1a64(std::string_view s)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string hex64(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

// 12 significant digits, as text.
inline std::string fmt_real(double x)
{
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

// JSON number carrying at most 12 significant digits; null when not finite.
inline Json real(double x)
{
    if (!std::isfinite(x)) {
        return nullptr;
    }
    return std::stod(fmt_real(x));
}

inline Json real(const std::optional<double> &x) { return x ? real(*x) : Json(nullptr); }

inline std::string fmt_rational(const mpq_class &q)
{
    mpq_class c(q);
    c.canonicalize();
    return c.get_den() == 1 ? c.get_num().get_str() : c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline Json integer(const mpz_class &z)
{
    if (z.fits_slong_p()) {
        return static_cast<std::int64_t>(z.get_si());
    }
    return z.get_str();
}

template <typename T>
Json opt(const std::optional<T> &v)
{
    return v ? Json(*v) : Json(nullptr);
}

inline Json error_json(const Error &e)
{
    Json j;
    j["kind"] = std::string(to_string(e.kind()));
    j["message"] = e.message();
    if (const auto *pe = dynamic_cast<const ParseError *>(&e)) {
        j["line"] = pe->line();
        j["column"] = pe->column();
        if (!pe->offender().empty()) {
            j["offender"] = pe->offender();
        }
    }
    return j;
}

namespace detail {

struct Context {
    const CommandOptions &opts;
    CommandResult &res;
    Json &out;
    std::optional<std::uint32_t> p;
};

inline Json sequence_json(const LambdaSequence &seq)
{
    Json a = Json::array();
    for (const auto &e : seq.entries) {
        Json j;
        j["n"] = e.n;
        j["value"] = opt(e.value);
        j["status"] = std::string(to_string(e.status));
        if (!e.message.empty()) {
            j["message"] = e.message;
        }
        a.push_back(j);
    }
    return a;
}

inline Json entropy_json(const EntropyReport &r, std::optional<std::uint32_t> p)
{
    Json j;
    Json per = Json::array(), mins = Json::array();
    for (double h : r.per_n) {
        per.push_back(real(h));
    }
    for (double h : r.running_min) {
        mins.push_back(real(h));
    }
    j["per_n"] = per;
    j["running_min"] = mins;
    j["upper_bound"] = real(r.upper_bound);
    j["diff_estimate"] = real(r.diff_estimate);
    j["upper_bound_bits"] = real(r.upper_bound / std::log(2.0));
    j["diff_estimate_bits"] =
        r.diff_estimate ? real(*r.diff_estimate / std::log(2.0)) : Json(nullptr);
    if (p) {
        const double lp = std::log(static_cast<double>(*p));
        j["upper_bound_log_p"] = real(r.upper_bound / lp);
        j["diff_estimate_log_p"] = r.diff_estimate ? real(*r.diff_estimate / lp) : Json(nullptr);
    }
    return j;
}

// n, lambda, h_n, running_min; blank cells past the computed prefix.
inline std::string sequence_csv(const LambdaSequence &seq)
{
    std::string s = "n,lambda,h_n,running_min\n";
    const auto prefix = seq.prefix();
    std::optional<EntropyReport> est;
    if (!prefix.empty() && std::find(prefix.begin(), prefix.end(), 0) == prefix.end()) {
        est = entropy_estimate(prefix);
    }
    for (const auto &e : seq.entries) {
        s += std::to_string(e.n) + ",";
        if (e.n <= prefix.size()) {
            s += std::to_string(*e.value);
            if (est) {
                s += "," + fmt_real(est->per_n[e.n - 1]) + "," + fmt_real(est->running_min[e.n - 1]);
            } else {
                s += ",,";
            }
        } else {
            s += ",,";
        }
        s += "\n";
    }
    return s;
}

inline LambdaSequence as_sequence(const std::vector<std::uint64_t> &v, std::uint64_t n_max)
{
    LambdaSequence seq;
    seq.n_max = n_max;
    for (std::uint64_t i = 0; i < n_max; ++i) {
        SequenceEntry e{i + 1, std::nullopt, EntryStatus::BudgetExceeded, {}};
        if (i < v.size()) {
            e.value = v[i];
            e.status = EntryStatus::Ok;
        }
        seq.entries.push_back(e);
    }
    return seq;
}

// Budget exhaustion gives exit 3 with the partial sequence; a NotFiniteLength entry is a validation failure.
inline int sequence_exit(const LambdaSequence &seq)
{
    for (const auto &e : seq.entries) {
        if (e.status == EntryStatus::NotFiniteLength) {
            return exit_validation;
        }
    }
    return seq.budget_exhausted() ? exit_budget : exit_ok;
}

inline std::string status_of_exit(int code)
{
    switch (code) {
    case exit_ok: return "ok";
    case exit_validation: return "validation_error";
    case exit_budget: return "budget_exceeded";
    case exit_verify: return "verify_failed";
    }
    return "error";
}

inline void emit_sequence(Context &c, const LambdaSequence &seq, const char *key = "lambda")
{
    c.out[key] = sequence_json(seq);
    c.res.csv = sequence_csv(seq);
    const auto prefix = seq.prefix();
    if (!prefix.empty()) {
        c.out["entropy"] = entropy_json(entropy_estimate(prefix), c.p);
    }
    c.res.exit_code = std::max(c.res.exit_code, sequence_exit(seq));
}

template <CoefficientField F>
void run_check(Context &c, const Problem<F> &pr)
{
    auto &o = c.out;
    o["local"] = nullptr;
    o["well_defined"] = nullptr;
    o["finite_length"] = nullptr;
    o["lambda_1"] = nullptr;
    o["edim"] = nullptr;
    o["contracting"] = nullptr;
    o["dim"] = nullptr;
    o["dim_source"] = nullptr;
    RingPtr<F> ring;
    try {
        ring = pr.ring();
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NotLocal) {
            o["local"] = false;
        }
        throw;
    }
    o["dim"] = opt(ring->dim());
    o["dim_source"] = std::string(to_string(ring->dim_source()));
    o["edim"] = embedding_dimension(*ring);
    std::optional<Endomorphism<F>> phi;
    try {
        phi = validate_endomorphism(ring, pr.images);
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NotLocal) {
            o["local"] = false;
        } else if (e.kind() == ErrorKind::NotWellDefined) {
            o["local"] = true;
            o["well_defined"] = false;
        }
        throw;
    }
    o["local"] = true;
    o["well_defined"] = true;
    o["contracting"] = is_contracting(*phi);
    try {
        o["lambda_1"] = lambda_n(*phi, 1, pr.options.N_budget);
        o["finite_length"] = true;
    } catch (const Error &e) {
        if (e.kind() == ErrorKind::NotFiniteLength) {
            o["finite_length"] = false;
        }
        throw;
    }
    c.res.csv = sequence_csv(as_sequence({o["lambda_1"].get<std::uint64_t>()}, 1));
}

template <CoefficientField F>
void run_hk(Context &c, const Problem<F> &pr, const Endomorphism<F> &phi)
{
    const LengthOptions lo{pr.options.N_budget};
    auto seq = pr.q ? ideal_length_sequence(phi, *pr.q, pr.options.n_max, lo)
                    : lambda_sequence(phi, pr.options.n_max, lo);
    c.out["q"] = pr.q ? "given" : "m";
    emit_sequence(c, seq, "lengths");
    const auto &ring = *phi.ring();
    const auto r = hk_from_lengths(seq.prefix(), pr.options.h, ring.dim(), ring.dim_source(), false);
    Json j;
    j["h_used"] = real(r.h_used);
    j["h_source"] = std::string(to_string(r.h_source));
    j["geometric"] = r.geometric;
    j["base"] = r.base ? Json(fmt_rational(*r.base)) : Json(nullptr);
    Json ratios = Json::array(), exact = Json::array();
    for (double x : r.ratios) {
        ratios.push_back(real(x));
    }
    for (const auto &q : r.exact_ratios) {
        exact.push_back(fmt_rational(q));
    }
    j["ratios"] = ratios;
    j["exact_ratios"] = exact;
    j["limit"] = r.limit ? Json(fmt_rational(*r.limit)) : Json(nullptr);
    j["dim"] = opt(r.dim_used);
    j["p_root"] = real(r.p_root);
    c.out["hk"] = j;
}

template <CoefficientField F>
void run_bounds(Context &c, const Problem<F> &pr, const Endomorphism<F> &phi)
{
    const auto r = bounds_analysis(phi, pr.options.n_max, {pr.options.N_budget});
    auto &o = c.out;
    o["dim"] = r.dim;
    o["dim_source"] = std::string(to_string(r.dim_source));
    Json rows = Json::array();
    std::vector<std::uint64_t> lam;
    for (const auto &e : r.entries) {
        Json j;
        j["n"] = e.n;
        j["lambda"] = e.lambda;
        j["v"] = opt(e.v);
        j["w"] = e.w;
        j["log_v_over_n"] = real(e.log_v_over_n);
        j["log_w_over_n"] = real(e.log_w_over_n);
        j["lower_ok"] = e.lower_ok;
        j["upper_ok"] = e.upper_ok;
        rows.push_back(j);
        lam.push_back(e.lambda);
    }
    o["entries"] = rows;
    o["entropy"] = entropy_json(r.entropy, c.p);
    o["v_h_lower"] = real(r.v_h_lower);
    o["w_h_upper"] = real(r.w_h_upper);
    o["sandwich_ok"] = r.sandwich_ok;
    if (!r.status.empty()) {
        o["stopped"] = r.status;
        c.res.exit_code = exit_budget;
    }
    c.res.csv = sequence_csv(as_sequence(lam, pr.options.n_max));
}

template <CoefficientField F>
void run_components(Context &c, const Problem<F> &pr, const Endomorphism<F> &phi)
{
    const auto r = components_analysis(phi, pr.options.n_max, {pr.options.N_budget});
    emit_sequence(c, r.whole_lambda);
    Json comps = Json::array();
    for (const auto &comp : r.components) {
        Json j;
        j["prime"] = comp.prime;
        j["remaining_vars"] = comp.remaining_vars;
        j["images"] = comp.images;
        j["lambda"] = sequence_json(comp.lambda);
        if (!comp.lambda.prefix().empty()) {
            j["entropy"] = entropy_json(comp.entropy, c.p);
        }
        c.res.exit_code = std::max(c.res.exit_code, sequence_exit(comp.lambda));
        comps.push_back(j);
    }
    c.out["components"] = comps;
    c.out["max_upper_bound"] = real(r.max_upper_bound);
    c.out["max_diff_estimate"] = real(r.max_diff_estimate);
    c.out["diff_gap"] = real(r.diff_gap);
}

template <CoefficientField F>
void run_degree(Context &c, const Problem<F> &pr, const Endomorphism<F> &phi)
{
    const auto deg = degree_monomial(phi);
    c.out["degree"] = integer(deg);
    c.out["residue_degree"] = 1;
    const auto seq = lambda_sequence(phi, pr.options.n_max, {pr.options.N_budget});
    emit_sequence(c, seq);
    Json match = Json::array();
    mpz_class pw = 1;
    bool all = true;
    for (const auto v : seq.prefix()) {
        pw *= deg;
        const bool eq = pw == mpz_class(std::to_string(v));
        match.push_back(eq);
        all = all && eq;
    }
    c.out["lambda_equals_degree_power"] = match;
    c.out["identity_holds"] = all;
}

template <CoefficientField F>
void run_multiplicity(Context &c, const Problem<F> &pr, const Endomorphism<F> &phi)
{
    const auto &ring = *phi.ring();
    const Ideal<F> q = pr.q ? *pr.q : Ideal<F>::maximal(pr.ctx);
    const LengthOptions lo{pr.options.N_budget};
    const auto r = multiplicity(ring, q, pr.options.s_max, lo);
    auto &o = c.out;
    o["q"] = pr.q ? "given" : "m";
    o["dim"] = r.dim;
    o["s_max"] = pr.options.s_max;
    o["lengths"] = r.lengths;
    o["tail"] = r.tail;
    Json diffs = Json::array();
    for (const auto &d : r.differences) {
        diffs.push_back(integer(d));
    }
    o["differences"] = diffs;
    o["multiplicity"] = integer(r.multiplicity);
    std::optional<mpz_class> deg;
    try {
        deg = degree_monomial(phi);
    } catch (const Error &) {
    }
    o["degree"] = deg ? integer(*deg) : Json(nullptr);
    // e(phi^n(q)R) against e(q) deg^n.
    Json tr = Json::array();
    const std::uint64_t n_tr = std::min<std::uint64_t>(2, pr.options.n_max);
    mpz_class pw = 1;
    for (std::uint64_t n = 1; n <= n_tr; ++n) {
        Json j;
        j["n"] = n;
        try {
            const auto e = multiplicity(ring, image_of_ideal(phi, q, n), pr.options.s_max, lo).multiplicity;
            j["multiplicity"] = integer(e);
            if (deg) {
                pw *= *deg;
                j["expected"] = integer(r.multiplicity * pw);
                j["match"] = e == r.multiplicity * pw;
            }
        } catch (const Error &e) {
            j["error"] = error_json(e);
            if (e.kind() == ErrorKind::BudgetExceeded) {
                c.res.exit_code = std::max<int>(c.res.exit_code, exit_budget);
            }
        }
        tr.push_back(j);
    }
    o["transform"] = tr;
    std::string csv = "s,length\n";
    for (std::size_t i = 0; i < r.lengths.size(); ++i) {
        csv += std::to_string(i + 1) + "," + std::to_string(r.lengths[i]) + "\n";
    }
    c.res.csv = csv;
}

template <CoefficientField F>
void run_verify(Context &c, const Problem<F> &pr, const Endomorphism<F> &phi)
{
    VerifyOptions vo;
    vo.n_max = pr.options.n_max;
    vo.N_budget = pr.options.N_budget;
    vo.power_k = pr.options.power_k;
    vo.length_fault = c.opts.length_fault;
    const auto r = verify_properties(phi, vo);
    auto &o = c.out;
    o["lambda"] = r.lambda;
    Json v = Json::array();
    for (const auto &x : r.v) {
        v.push_back(opt(x));
    }
    o["v"] = v;
    o["w"] = r.w;
    Json props = Json::array();
    for (const auto &p : r.results) {
        Json j;
        j["name"] = p.name;
        j["statement"] = p.statement;
        j["status"] = std::string(to_string(p.status));
        j["detail"] = p.detail;
        j["witness"] = opt(p.witness);
        props.push_back(j);
    }
    o["properties"] = props;
    o["passed"] = r.passed();
    c.res.csv = sequence_csv(as_sequence(r.lambda, pr.options.n_max));
    if (!r.stopped.empty()) {
        o["stopped"] = r.stopped;
        c.res.exit_code = exit_budget;
    }
    if (!r.passed()) {
        c.res.exit_code = exit_verify;
    }
}

template <CoefficientField F>
void run_typed(Context &c, const std::string &cmd, const Problem<F> &pr)
{
    if (cmd == "check") {
        run_check(c, pr);
        return;
    }
    const auto phi = pr.endomorphism();
    const LengthOptions lo{pr.options.N_budget};
    if (cmd == "lambda") {
        emit_sequence(c, lambda_sequence(phi, pr.options.n_max, lo));
        c.out.erase("entropy");
    } else if (cmd == "entropy") {
        emit_sequence(c, lambda_sequence(phi, pr.options.n_max, lo));
    } else if (cmd == "bounds") {
        run_bounds(c, pr, phi);
    } else if (cmd == "hk") {
        run_hk(c, pr, phi);
    } else if (cmd == "components") {
        run_components(c, pr, phi);
    } else if (cmd == "degree") {
        run_degree(c, pr, phi);
    } else if (cmd == "multiplicity") {
        run_multiplicity(c, pr, phi);
    } else if (cmd == "verify") {
        run_verify(c, pr, phi);
    }
}

} // namespace detail

inline CommandResult run_command(const CommandOptions &opts, std::string_view source)
{
    CommandResult res;
    Json &rep = res.report;
    rep["schema_version"] = schema_version;
    rep["command"] = opts.command;
    rep["input"] = {{"file", opts.file_label}, {"fnv1a64", hex64(fnv1a64(source))}};
    rep["status"] = "ok";
    Json out = Json::object();
    try {
        if (std::find(command_names().begin(), command_names().end(), opts.command) == command_names().end()) {
            fail(ErrorKind::InvalidArgument, "unknown command '" + opts.command + "'");
        }
        const auto any = parse_problem(source, {opts.n, opts.budget_N, opts.budget_terms});
        std::visit(
            [&](const auto &pr) {
                using F = typename std::decay_t<decltype(*pr.ctx)>::field_type;
                Json field;
                std::optional<std::uint32_t> p;
                if constexpr (std::is_same_v<F, PrimeField>) {
                    p = pr.ctx->field().characteristic();
                    field = {{"field", "Fp"}, {"p", *p}};
                } else {
                    field = {{"field", "Q"}};
                }
                field["vars"] = pr.ctx->names();
                rep["ring"] = field;
                rep["options"] = {{"n_max", pr.options.n_max},
                                  {"N_budget", pr.options.N_budget},
                                  {"term_budget", pr.options.term_budget}};
                detail::Context c{opts, res, out, p};
                detail::run_typed(c, opts.command, pr);
            },
            any);
    } catch (const Error &e) {
        res.exit_code = e.kind() == ErrorKind::BudgetExceeded ? exit_budget : exit_validation;
        rep["error"] = error_json(e);
    } catch (const std::bad_alloc &) {
        res.exit_code = exit_budget;
        rep["error"] = {{"kind", "BudgetExceeded"}, {"message", "out of memory"}};
    }
    rep["status"] = detail::status_of_exit(res.exit_code);
    rep["result"] = out;
    return res;
}

} // namespace entrolib
