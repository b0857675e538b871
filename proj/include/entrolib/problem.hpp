#pragma once

// Problem files: a TOML document with [ring], [map] and optional [options].
//
//   [ring]
//   field = "Fp"          # or "Q"
//   p = 2                 # only with Fp
//   vars = ["x", "y"]
//   quotient = ["xy"]     # optional
//   dim = 1               # optional
//
//   [map]
//   x = "x^2"
//   y = "y^3"
//
//   [options]             # all optional
//   n_max = 6
//   N_budget = 512
//   term_budget = 2000000
//   q = ["x^2", "xy", "y^2"]
//   s_max = 12
//   power_k = 2
//   h = 1.3862943611198906

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"
#include "field.hpp"
#include "groebner.hpp"
#include "local_ring.hpp"
#include "parser.hpp"
#include "polynomial.hpp"
#include "toml.hpp"

namespace entrolib {

struct ProblemOptions {
    std::uint64_t n_max = 6;
    std::uint64_t N_budget = default_N_budget;
    std::uint64_t term_budget = default_term_limit;
    std::uint64_t s_max = 12;
    std::uint64_t power_k = 2;
    std::optional<double> h;
};

// Command-line values that take precedence over [options].
struct ProblemOverrides {
    std::optional<std::uint64_t> n_max;
    std::optional<std::uint64_t> N_budget;
    std::optional<std::uint64_t> term_budget;
};

template <CoefficientField F>
struct Problem {
    ContextPtr<F> ctx;
    Ideal<F> quotient;
    std::optional<std::size_t> declared_dim;
    std::vector<Polynomial<F>> images;
    std::optional<Ideal<F>> q;
    ProblemOptions options;

    // May fail with NotLocal or SchemaError (declared dim contradicts the computed one).
    RingPtr<F> ring() const { return make_ring(ctx, quotient, declared_dim); }
    // May fail with NotLocal, NotWellDefined or ContextMismatch.
    Endomorphism<F> endomorphism() const { return validate_endomorphism(ring(), images); }
};

using AnyProblem = std::variant<Problem<Rationals>, Problem<PrimeField>>;

namespace detail {

[[noreturn]] inline void schema_error(std::size_t line, std::size_t col, const std::string &msg)
{
    throw ParseError(line, col, msg, {}, ErrorKind::SchemaError);
}

inline void check_keys(const toml::Table &t, std::initializer_list<std::string_view> allowed)
{
    for (const auto &e : t.entries) {
        if (std::find(allowed.begin(), allowed.end(), e.key) == allowed.end()) {
            schema_error(e.line, e.column, "unknown key '" + e.key + "' in [" + t.name + "]");
        }
    }
}

inline const toml::Entry &require(const toml::Table &t, std::string_view key)
{
    if (const auto *e = t.find(key)) {
        return *e;
    }
    schema_error(t.line, 1, "[" + t.name + "] is missing required key '" + std::string(key) + "'");
}

inline const std::string &as_string(const toml::Entry &e)
{
    if (!e.value.is_string()) {
        schema_error(e.value.line, e.value.column, "'" + e.key + "' must be a string, got " + e.value.type_name());
    }
    return e.value.as_string();
}

inline std::uint64_t as_natural(const toml::Entry &e, std::uint64_t min)
{
    if (!e.value.is_integer()) {
        schema_error(e.value.line, e.value.column, "'" + e.key + "' must be an integer, got " + e.value.type_name());
    }
    const auto v = e.value.as_integer();
    if (v < 0 || static_cast<std::uint64_t>(v) < min) {
        schema_error(e.value.line, e.value.column, "'" + e.key + "' must be at least " + std::to_string(min));
    }
    return static_cast<std::uint64_t>(v);
}

inline std::vector<const toml::Value *> as_string_array(const toml::Entry &e)
{
    if (!e.value.is_array()) {
        schema_error(e.value.line, e.value.column, "'" + e.key + "' must be an array of strings");
    }
    std::vector<const toml::Value *> out;
    for (const auto &v : e.value.as_array()) {
        if (!v.is_string()) {
            schema_error(v.line, v.column, "'" + e.key + "' must contain only strings, got " + v.type_name());
        }
        out.push_back(&v);
    }
    return out;
}

template <CoefficientField F>
Polynomial<F> parse_value(const toml::Value &v, const ContextPtr<F> &ctx)
{
    return parse_polynomial<F>(v.as_string(), ctx, SourcePosition{v.content_line, v.content_column});
}

template <CoefficientField F>
Problem<F> build_problem(const toml::Table &ring, const toml::Table &map, const toml::Table *options, F field,
                         const ProblemOverrides &overrides)
{
    Problem<F> pr{nullptr, Ideal<F>(nullptr), std::nullopt, {}, std::nullopt, {}};
    if (options) {
        check_keys(*options, {"n_max", "N_budget", "term_budget", "q", "s_max", "power_k", "h"});
        auto &o = pr.options;
        if (const auto *e = options->find("n_max")) {
            o.n_max = as_natural(*e, 1);
        }
        if (const auto *e = options->find("N_budget")) {
            o.N_budget = as_natural(*e, 1);
        }
        if (const auto *e = options->find("term_budget")) {
            o.term_budget = as_natural(*e, 1);
        }
        if (const auto *e = options->find("s_max")) {
            o.s_max = as_natural(*e, 1);
        }
        if (const auto *e = options->find("power_k")) {
            o.power_k = as_natural(*e, 1);
        }
        if (const auto *e = options->find("h")) {
            if (e->value.is_float()) {
                o.h = e->value.as_float();
            } else if (e->value.is_integer()) {
                o.h = static_cast<double>(e->value.as_integer());
            } else {
                schema_error(e->value.line, e->value.column, "'h' must be a number");
            }
            if (!(*o.h >= 0)) {
                schema_error(e->value.line, e->value.column, "'h' must be nonnegative");
            }
        }
    }
    if (overrides.n_max) {
        pr.options.n_max = *overrides.n_max;
    }
    if (overrides.N_budget) {
        pr.options.N_budget = *overrides.N_budget;
    }
    if (overrides.term_budget) {
        pr.options.term_budget = *overrides.term_budget;
    }

    const auto &vars_entry = require(ring, "vars");
    std::vector<std::string> names;
    for (const auto *v : as_string_array(vars_entry)) {
        names.push_back(v->as_string());
    }
    try {
        pr.ctx = VariableContext<F>::make(names, field, pr.options.term_budget);
    } catch (const Error &e) {
        schema_error(vars_entry.value.line, vars_entry.value.column, e.message());
    }

    pr.quotient = Ideal<F>(pr.ctx);
    if (const auto *e = ring.find("quotient")) {
        for (const auto *v : as_string_array(*e)) {
            pr.quotient.add(parse_value(*v, pr.ctx));
        }
    }
    if (const auto *e = ring.find("dim")) {
        pr.declared_dim = as_natural(*e, 0);
    }

    for (const auto &e : map.entries) {
        if (!pr.ctx->index_of(e.key)) {
            schema_error(e.line, e.column, "[map] key '" + e.key + "' is not a ring variable");
        }
    }
    for (const auto &name : names) {
        const auto *e = map.find(name);
        if (!e) {
            schema_error(map.line, 1, "[map] is missing an image for '" + name + "'");
        }
        as_string(*e);
        pr.images.push_back(parse_value(e->value, pr.ctx));
    }

    if (options) {
        if (const auto *e = options->find("q")) {
            Ideal<F> q(pr.ctx);
            for (const auto *v : as_string_array(*e)) {
                q.add(parse_value(*v, pr.ctx));
            }
            pr.q = std::move(q);
        }
    }
    return pr;
}

} // namespace detail

inline AnyProblem parse_problem(std::string_view src, const ProblemOverrides &overrides = {})
{
    const auto doc = toml::parse(src);
    const auto &root = doc.tables.front();
    if (!root.entries.empty()) {
        const auto &e = root.entries.front();
        detail::schema_error(e.line, e.column, "key '" + e.key + "' must be inside a table");
    }
    for (std::size_t i = 1; i < doc.tables.size(); ++i) {
        const auto &t = doc.tables[i];
        if (t.name != "ring" && t.name != "map" && t.name != "options") {
            detail::schema_error(t.line, 1, "unknown table [" + t.name + "]");
        }
    }
    const toml::Table *ring = nullptr, *map = nullptr, *options = nullptr;
    for (std::size_t i = 1; i < doc.tables.size(); ++i) {
        const auto &t = doc.tables[i];
        (t.name == "ring" ? ring : t.name == "map" ? map : options) = &t;
    }
    if (!ring) {
        detail::schema_error(1, 1, "missing [ring] table");
    }
    if (!map) {
        detail::schema_error(1, 1, "missing [map] table");
    }
    detail::check_keys(*ring, {"field", "p", "vars", "quotient", "dim"});

    const auto &field_entry = detail::require(*ring, "field");
    const auto &field = detail::as_string(field_entry);
    const auto *p = ring->find("p");
    if (field == "Q") {
        if (p) {
            throw ParseError(p->line, p->column, "p is only allowed with field = \"Fp\"", {}, ErrorKind::FieldMismatch);
        }
        return detail::build_problem(*ring, *map, options, Rationals{}, overrides);
    }
    if (field == "Fp") {
        if (!p) {
            detail::schema_error(ring->line, 1, "field = \"Fp\" needs p");
        }
        const auto pv = detail::as_natural(*p, 0);
        if (!is_prime(pv)) {
            detail::schema_error(p->value.line, p->value.column, "p = " + std::to_string(pv) + " is not prime");
        }
        if (pv >= FieldSpec::max_prime) {
            detail::schema_error(p->value.line, p->value.column, "p must be below 2^31");
        }
        return detail::build_problem(*ring, *map, options, PrimeField(pv), overrides);
    }
    detail::schema_error(field_entry.value.line, field_entry.value.column,
                         "field must be \"Q\" or \"Fp\", got \"" + field + "\"");
}

inline std::string read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorKind::InvalidArgument, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace entrolib
