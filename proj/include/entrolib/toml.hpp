#pragma once

// The TOML subset used by problem files: tables, bare or quoted keys, basic
// and literal strings, integers, floats, booleans, and (possibly multi-line)
// arrays. Inline tables, dotted keys, dates and multi-line strings are not
// supported and are reported as parse errors.

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "error.hpp"

namespace entrolib::toml {

struct Value;
using Array = std::vector<Value>;

struct Value {
    std::variant<std::string, std::int64_t, double, bool, Array> data;
    std::size_t line = 1;
    std::size_t column = 1;
    // For strings: position of the first character inside the quotes.
    std::size_t content_line = 1;
    std::size_t content_column = 1;

    bool is_string() const { return std::holds_alternative<std::string>(data); }
    bool is_integer() const { return std::holds_alternative<std::int64_t>(data); }
    bool is_float() const { return std::holds_alternative<double>(data); }
    bool is_bool() const { return std::holds_alternative<bool>(data); }
    bool is_array() const { return std::holds_alternative<Array>(data); }
    const std::string &as_string() const { return std::get<std::string>(data); }
    std::int64_t as_integer() const { return std::get<std::int64_t>(data); }
    double as_float() const { return std::get<double>(data); }
    bool as_bool() const { return std::get<bool>(data); }
    const Array &as_array() const { return std::get<Array>(data); }

    std::string type_name() const
    {
        static const char *names[] = {"string", "integer", "float", "boolean", "array"};
        return names[data.index()];
    }
};

struct Entry {
    std::string key;
    std::size_t line;
    std::size_t column;
    Value value;
};

struct Table {
    std::string name; // empty for the root
    std::size_t line = 1;
    std::vector<Entry> entries;

    const Entry *find(std::string_view key) const
    {
        for (const auto &e : entries) {
            if (e.key == key) {
                return &e;
            }
        }
        return nullptr;
    }
};

struct Document {
    std::vector<Table> tables; // tables[0] is the root

    const Table *find(std::string_view name) const
    {
        for (const auto &t : tables) {
            if (t.name == name && !(name.empty() && &t != &tables.front())) {
                return &t;
            }
        }
        return nullptr;
    }
};

namespace detail {

class Reader
{
public:
    explicit Reader(std::string_view src) : m_src(src) {}

    Document run()
    {
        Document doc;
        doc.tables.push_back({"", 1, {}});
        while (true) {
            skip_ws_comments_newlines();
            if (eof()) {
                return doc;
            }
            if (peek() == '[') {
                const auto line = m_line, col = m_col;
                advance();
                skip_inline_ws();
                if (peek() == '[') {
                    error(line, col, "arrays of tables are not supported");
                }
                std::string name = read_key();
                skip_inline_ws();
                if (peek() == '.') {
                    error(m_line, m_col, "dotted table names are not supported");
                }
                expect(']');
                end_of_line();
                for (const auto &t : doc.tables) {
                    if (t.name == name) {
                        throw ParseError(line, col, "duplicate table [" + name + "]", {}, ErrorKind::SchemaError);
                    }
                }
                doc.tables.push_back({name, line, {}});
                continue;
            }
            const auto line = m_line, col = m_col;
            std::string key = read_key();
            skip_inline_ws();
            if (peek() == '.') {
                error(m_line, m_col, "dotted keys are not supported");
            }
            expect('=');
            skip_inline_ws();
            Value v = read_value();
            end_of_line();
            auto &table = doc.tables.back();
            if (table.find(key)) {
                throw ParseError(line, col, "duplicate key '" + key + "'", {}, ErrorKind::SchemaError);
            }
            table.entries.push_back({std::move(key), line, col, std::move(v)});
        }
    }

private:
    [[noreturn]] void error(std::size_t line, std::size_t col, const std::string &msg) const
    {
        throw ParseError(line, col, msg);
    }

    bool eof() const { return m_pos >= m_src.size(); }
    char peek() const { return eof() ? '\0' : m_src[m_pos]; }
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
    void expect(char c)
    {
        if (peek() != c) {
            error(m_line, m_col, std::string("expected '") + c + "'" + found());
        }
        advance();
    }
    std::string found() const
    {
        if (eof()) {
            return " but found end of input";
        }
        if (peek() == '\n') {
            return " but found end of line";
        }
        return std::string(" but found '") + peek() + "'";
    }

    void skip_inline_ws()
    {
        while (!eof() && (peek() == ' ' || peek() == '\t')) {
            advance();
        }
    }
    void skip_comment()
    {
        if (peek() == '#') {
            while (!eof() && peek() != '\n') {
                advance();
            }
        }
    }
    void skip_ws_comments_newlines()
    {
        while (!eof()) {
            skip_inline_ws();
            skip_comment();
            if (peek() == '\r' || peek() == '\n') {
                advance();
            } else {
                return;
            }
        }
    }
    void end_of_line()
    {
        skip_inline_ws();
        skip_comment();
        if (peek() == '\r') {
            advance();
        }
        if (!eof() && peek() != '\n') {
            error(m_line, m_col, "expected end of line" + found());
        }
    }

    static bool bare_key_char(char c)
    {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    }

    std::string read_key()
    {
        if (peek() == '"' || peek() == '\'') {
            return read_string().as_string();
        }
        std::string key;
        while (!eof() && bare_key_char(peek())) {
            key += peek();
            advance();
        }
        if (key.empty()) {
            error(m_line, m_col, "expected a key" + found());
        }
        return key;
    }

    Value read_string()
    {
        Value v;
        v.line = m_line;
        v.column = m_col;
        const char quote = peek();
        advance();
        if (peek() == quote && m_pos + 1 < m_src.size() && m_src[m_pos + 1] == quote) {
            error(v.line, v.column, "multi-line strings are not supported");
        }
        v.content_line = m_line;
        v.content_column = m_col;
        std::string s;
        while (true) {
            if (eof() || peek() == '\n') {
                error(v.line, v.column, "unterminated string");
            }
            const char c = peek();
            if (c == quote) {
                advance();
                break;
            }
            if (c == '\\' && quote == '"') {
                advance();
                const char e = peek();
                switch (e) {
                case 'n': s += '\n'; break;
                case 't': s += '\t'; break;
                case 'r': s += '\r'; break;
                case '"': s += '"'; break;
                case '\\': s += '\\'; break;
                default: error(m_line, m_col, std::string("unsupported escape '\\") + e + "'");
                }
                advance();
                continue;
            }
            s += c;
            advance();
        }
        v.data = std::move(s);
        return v;
    }

    Value read_number_or_bool()
    {
        Value v;
        v.line = m_line;
        v.column = m_col;
        std::string tok;
        while (!eof() && (bare_key_char(peek()) || peek() == '+' || peek() == '.')) {
            tok += peek();
            advance();
        }
        if (tok == "true" || tok == "false") {
            v.data = tok == "true";
            return v;
        }
        std::string digits;
        for (char c : tok) {
            if (c != '_') {
                digits += c;
            }
        }
        const bool is_float = digits.find_first_of(".eE") != std::string::npos &&
                              digits.find_first_of("xob") == std::string::npos;
        try {
            std::size_t used = 0;
            if (is_float) {
                const double d = std::stod(digits, &used);
                if (used == digits.size() && !digits.empty()) {
                    v.data = d;
                    return v;
                }
            } else {
                const long long i = std::stoll(digits, &used, 10);
                if (used == digits.size() && !digits.empty()) {
                    v.data = static_cast<std::int64_t>(i);
                    return v;
                }
            }
        } catch (const std::out_of_range &) {
            error(v.line, v.column, "number '" + tok + "' is out of range");
        } catch (const std::invalid_argument &) {
        }
        error(v.line, v.column, tok.empty() ? "expected a value" + found() : "invalid value '" + tok + "'");
    }

    Value read_value()
    {
        const char c = peek();
        if (c == '"' || c == '\'') {
            return read_string();
        }
        if (c == '[') {
            Value v;
            v.line = m_line;
            v.column = m_col;
            advance();
            Array items;
            while (true) {
                skip_ws_comments_newlines();
                if (peek() == ']') {
                    advance();
                    break;
                }
                items.push_back(read_value());
                skip_ws_comments_newlines();
                if (peek() == ',') {
                    advance();
                    continue;
                }
                if (peek() == ']') {
                    advance();
                    break;
                }
                error(m_line, m_col, "expected ',' or ']' in array" + found());
            }
            v.data = std::move(items);
            return v;
        }
        if (c == '{') {
            error(m_line, m_col, "inline tables are not supported");
        }
        return read_number_or_bool();
    }

    std::string_view m_src;
    std::size_t m_pos = 0;
    std::size_t m_line = 1;
    std::size_t m_col = 1;
};

} // namespace detail

inline Document parse(std::string_view src) { return detail::Reader(src).run(); }

} // namespace entrolib::toml
