#pragma once

// Polynomial expressions:
//
//   expr   := ('-' | '+')? term (('+' | '-') term)*
//   term   := factor ('*'? factor)*
//   factor := integer ('/' integer)?
//           | variable ('^' natural)?
//           | '(' expr ')' ('^' natural)?
//
// Juxtaposition multiplies ("3y", "x^2y"), and '^' binds tighter than
// juxtaposition. An identifier that is not itself a variable name is split
// into a run of variable names, so "xy" reads as x*y. Over F_p integer
// literals are reduced mod p and a/b means a * b^-1.

#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "error.hpp"
#include "field.hpp"
#include "polynomial.hpp"

namespace entrolib {

// Where an embedded expression starts inside a larger document.
struct SourcePosition {
    std::size_t line = 1;
    std::size_t column = 1;
};

namespace detail {

enum class TokenKind { Integer, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };

inline std::string token_name(TokenKind k)
{
    switch (k) {
    case TokenKind::Integer: return "integer";
    case TokenKind::Identifier: return "variable";
    case TokenKind::Plus: return "'+'";
    case TokenKind::Minus: return "'-'";
    case TokenKind::Star: return "'*'";
    case TokenKind::Slash: return "'/'";
    case TokenKind::Caret: return "'^'";
    case TokenKind::LParen: return "'('";
    case TokenKind::RParen: return "')'";
    case TokenKind::End: return "end of input";
    }
    return "?";
}

struct Token {
    TokenKind kind;
    std::string text;
    std::size_t line;
    std::size_t column;
};

class Tokenizer
{
public:
    Tokenizer(std::string_view src, SourcePosition origin) : m_src(src), m_line(origin.line), m_col(origin.column) {}

    std::vector<Token> run()
    {
        std::vector<Token> out;
        while (true) {
            skip_space();
            const auto line = m_line, col = m_col;
            if (m_pos == m_src.size()) {
                out.push_back({TokenKind::End, "", line, col});
                return out;
            }
            const char c = m_src[m_pos];
            if (is_digit(c)) {
                std::size_t start = m_pos;
                while (m_pos < m_src.size() && is_digit(m_src[m_pos])) {
                    advance();
                }
                out.push_back({TokenKind::Integer, std::string(m_src.substr(start, m_pos - start)), line, col});
            } else if (is_alpha(c)) {
                std::size_t start = m_pos;
                while (m_pos < m_src.size() && (is_alpha(m_src[m_pos]) || is_digit(m_src[m_pos]))) {
                    advance();
                }
                out.push_back({TokenKind::Identifier, std::string(m_src.substr(start, m_pos - start)), line, col});
            } else {
                TokenKind k;
                switch (c) {
                case '+': k = TokenKind::Plus; break;
                case '-': k = TokenKind::Minus; break;
                case '*': k = TokenKind::Star; break;
                case '/': k = TokenKind::Slash; break;
                case '^': k = TokenKind::Caret; break;
                case '(': k = TokenKind::LParen; break;
                case ')': k = TokenKind::RParen; break;
                default:
                    throw ParseError(line, col, std::string("unexpected character '") + printable(c) + "'");
                }
                advance();
                out.push_back({k, std::string(1, c), line, col});
            }
        }
    }

private:
    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    static bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
    static std::string printable(char c)
    {
        if (static_cast<unsigned char>(c) < 0x20 || static_cast<unsigned char>(c) >= 0x7f) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\x%02x", static_cast<unsigned char>(c));
            return buf;
        }
        return std::string(1, c);
    }

    void advance()
    {
        if (m_src[m_pos] == '\n') {
            ++m_line;
            m_col = 1;
        } else {
            ++m_col;
        }
        ++m_pos;
    }
    void skip_space()
    {
        while (m_pos < m_src.size() && (m_src[m_pos] == ' ' || m_src[m_pos] == '\t' || m_src[m_pos] == '\n' ||
                                        m_src[m_pos] == '\r')) {
            advance();
        }
    }

    std::string_view m_src;
    std::size_t m_pos = 0;
    std::size_t m_line;
    std::size_t m_col;
};

template <CoefficientField F>
class ExpressionParser
{
public:
    using Poly = Polynomial<F>;

    ExpressionParser(std::vector<Token> tokens, ContextPtr<F> ctx) : m_tokens(std::move(tokens)), m_ctx(std::move(ctx))
    {
    }

    Poly parse()
    {
        Poly p = expr();
        if (peek().kind != TokenKind::End) {
            error_expected({TokenKind::Plus, TokenKind::Minus, TokenKind::Star, TokenKind::End});
        }
        return p;
    }

private:
    const Token &peek() const { return m_tokens[m_pos]; }
    const Token &take() { return m_tokens[m_pos++]; }

    [[noreturn]] void error_expected(std::initializer_list<TokenKind> kinds) const
    {
        const auto &t = peek();
        std::vector<std::string> names;
        std::string msg = "expected ";
        for (auto k : kinds) {
            if (!names.empty()) {
                msg += ", ";
            }
            names.push_back(token_name(k));
            msg += names.back();
        }
        msg += " but found " + (t.kind == TokenKind::End ? token_name(t.kind) : "'" + t.text + "'");
        throw ParseError(t.line, t.column, msg, std::move(names));
    }

    static bool starts_factor(TokenKind k)
    {
        return k == TokenKind::Integer || k == TokenKind::Identifier || k == TokenKind::LParen;
    }

    Poly expr()
    {
        bool negate = false;
        if (peek().kind == TokenKind::Minus || peek().kind == TokenKind::Plus) {
            negate = take().kind == TokenKind::Minus;
        }
        Poly acc = term();
        if (negate) {
            acc = -acc;
        }
        while (peek().kind == TokenKind::Plus || peek().kind == TokenKind::Minus) {
            const bool minus = take().kind == TokenKind::Minus;
            Poly rhs = term();
            acc = minus ? acc - rhs : acc + rhs;
        }
        return acc;
    }

    Poly term()
    {
        Poly acc = factor();
        while (true) {
            if (peek().kind == TokenKind::Star) {
                take();
                acc = acc * factor();
            } else if (starts_factor(peek().kind)) {
                acc = acc * factor();
            } else {
                return acc;
            }
        }
    }

    std::uint64_t natural_exponent()
    {
        if (peek().kind != TokenKind::Integer) {
            error_expected({TokenKind::Integer});
        }
        const auto &t = take();
        if (t.text.size() > 10 || std::stoull(t.text) > Monomial::max_degree) {
            throw ParseError(t.line, t.column, "exponent " + t.text + " is too large");
        }
        return std::stoull(t.text);
    }

    Poly factor()
    {
        const auto &f = m_ctx->field();
        switch (peek().kind) {
        case TokenKind::Integer: {
            const Token num = take();
            mpz_class n(num.text, 10);
            if (peek().kind == TokenKind::Slash) {
                take();
                if (peek().kind != TokenKind::Integer) {
                    error_expected({TokenKind::Integer});
                }
                const Token den = take();
                mpz_class d(den.text, 10);
                try {
                    return Poly::constant(m_ctx, f.from_fraction(n, d));
                } catch (const Error &e) {
                    throw ParseError(den.line, den.column, "denominator " + den.text + " is not invertible in " +
                                                               f.spec().to_string());
                }
            }
            return Poly::constant(m_ctx, f.from_integer(n));
        }
        case TokenKind::Identifier: {
            const Token id = take();
            auto vars = resolve(id);
            Poly acc = Poly::constant(m_ctx, f.one());
            for (std::size_t k = 0; k + 1 < vars.size(); ++k) {
                acc = acc * Poly::variable(m_ctx, vars[k]);
            }
            std::uint64_t power = 1;
            if (peek().kind == TokenKind::Caret) {
                take();
                power = natural_exponent();
            }
            return acc * Poly::variable(m_ctx, vars.back(), static_cast<Monomial::exponent_type>(power));
        }
        case TokenKind::LParen: {
            take();
            Poly inner = expr();
            if (peek().kind != TokenKind::RParen) {
                error_expected({TokenKind::RParen});
            }
            take();
            if (peek().kind == TokenKind::Caret) {
                take();
                inner = inner.pow(natural_exponent());
            }
            return inner;
        }
        default:
            error_expected({TokenKind::Integer, TokenKind::Identifier, TokenKind::LParen});
        }
    }

    // Splits an identifier into variable names, preferring the longest name at each step.
    std::vector<std::size_t> resolve(const Token &id) const
    {
        if (auto i = m_ctx->index_of(id.text)) {
            return {*i};
        }
        const std::string &s = id.text;
        const std::size_t n = s.size();
        // next[i]: variable chosen at position i on a successful split of s[i..].
        std::vector<std::ptrdiff_t> next(n + 1, -1);
        std::vector<bool> ok(n + 1, false);
        ok[n] = true;
        std::size_t furthest_fail = n;
        for (std::size_t i = n; i-- > 0;) {
            std::size_t best_len = 0;
            for (std::size_t v = 0; v < m_ctx->nvars(); ++v) {
                const auto &name = m_ctx->name(v);
                if (name.size() > best_len && s.compare(i, name.size(), name) == 0 && ok[i + name.size()]) {
                    best_len = name.size();
                    next[i] = static_cast<std::ptrdiff_t>(v);
                }
            }
            ok[i] = best_len != 0;
        }
        if (!ok[0]) {
            // Report from the first position a valid prefix cannot get past.
            std::size_t pos = 0;
            bool progressed = true;
            while (progressed && pos < n) {
                progressed = false;
                std::size_t best = 0;
                for (std::size_t v = 0; v < m_ctx->nvars(); ++v) {
                    const auto &name = m_ctx->name(v);
                    if (name.size() > best && s.compare(pos, name.size(), name) == 0) {
                        best = name.size();
                    }
                }
                if (best != 0) {
                    pos += best;
                    progressed = true;
                }
            }
            furthest_fail = std::min(pos, n - 1);
            std::string offender = s.substr(furthest_fail);
            throw ParseError(id.line, id.column + furthest_fail, "unknown variable '" + offender + "'", {"variable"},
                             ErrorKind::UnknownVariable, offender);
        }
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < n;) {
            const auto v = static_cast<std::size_t>(next[i]);
            out.push_back(v);
            i += m_ctx->name(v).size();
        }
        return out;
    }

    std::vector<Token> m_tokens;
    std::size_t m_pos = 0;
    ContextPtr<F> m_ctx;
};

} // namespace detail

template <CoefficientField F>
Polynomial<F> parse_polynomial(std::string_view src, const ContextPtr<F> &ctx, SourcePosition origin = {})
{
    detail::Tokenizer lexer(src, origin);
    detail::ExpressionParser<F> parser(lexer.run(), ctx);
    return parser.parse();
}

template <CoefficientField F>
std::string format_monomial(const Monomial &m, const VariableContext<F> &ctx)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) {
            continue;
        }
        if (!out.empty()) {
            out += '*';
        }
        out += ctx.name(i);
        if (m[i] != 1) {
            out += '^' + std::to_string(m[i]);
        }
    }
    return out.empty() ? "1" : out;
}

// Canonical text form; parse_polynomial reads it back to an equal polynomial.
template <CoefficientField F>
std::string format_polynomial(const Polynomial<F> &p)
{
    if (p.is_zero()) {
        return "0";
    }
    const auto &f = p.field();
    const auto &ctx = *p.context();
    std::string out;
    bool first = true;
    for (const auto &t : p.terms()) {
        auto c = t.coeff;
        const bool negative = f.is_negative(c);
        if (negative) {
            c = f.neg(c);
        }
        if (first) {
            out += negative ? "-" : "";
        } else {
            out += negative ? " - " : " + ";
        }
        first = false;
        if (t.monomial.is_one()) {
            out += f.to_string(c);
        } else if (f.is_one(c)) {
            out += format_monomial(t.monomial, ctx);
        } else {
            out += f.to_string(c) + "*" + format_monomial(t.monomial, ctx);
        }
    }
    return out;
}

} // namespace entrolib
