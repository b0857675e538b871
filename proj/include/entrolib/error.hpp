#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace entrolib {

enum class ErrorKind {
    DivisionByZero,
    FieldMismatch,
    InvalidField,
    ContextMismatch,
    ZeroPolynomial,
    BudgetExceeded,
    ParseError,
    UnknownVariable,
    SchemaError,
    NotLocal,
    NotWellDefined,
    NotFiniteLength,
    NotMPrimary,
    MissingDimension,
    NotMonomial,
    InvarianceFailure,
    NotMonomialMap,
    SingularExponentMatrix,
    Unstabilized,
    InvalidArgument,
};

constexpr std::string_view to_string(ErrorKind k) noexcept
{
    switch (k) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::InvalidField: return "InvalidField";
    case ErrorKind::ContextMismatch: return "ContextMismatch";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::BudgetExceeded: return "BudgetExceeded";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::SchemaError: return "SchemaError";
    case ErrorKind::NotLocal: return "NotLocal";
    case ErrorKind::NotWellDefined: return "NotWellDefined";
    case ErrorKind::NotFiniteLength: return "NotFiniteLength";
    case ErrorKind::NotMPrimary: return "NotMPrimary";
    case ErrorKind::MissingDimension: return "MissingDimension";
    case ErrorKind::NotMonomial: return "NotMonomial";
    case ErrorKind::InvarianceFailure: return "InvarianceFailure";
    case ErrorKind::NotMonomialMap: return "NotMonomialMap";
    case ErrorKind::SingularExponentMatrix: return "SingularExponentMatrix";
    case ErrorKind::Unstabilized: return "Unstabilized";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

// Every failure the library reports carries a machine-readable kind.
class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string &message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), m_kind(kind), m_message(message)
    {
    }

    ErrorKind kind() const noexcept { return m_kind; }
    const std::string &message() const noexcept { return m_message; }

private:
    ErrorKind m_kind;
    std::string m_message;
};

// Positions are 1-based.
class ParseError : public Error
{
public:
    ParseError(std::size_t line, std::size_t column, const std::string &message,
               std::vector<std::string> expected = {}, ErrorKind kind = ErrorKind::ParseError,
               std::string offender = {})
        : Error(kind, std::to_string(line) + ":" + std::to_string(column) + ": " + message), m_line(line),
          m_column(column), m_expected(std::move(expected)), m_offender(std::move(offender))
    {
    }

    std::size_t line() const noexcept { return m_line; }
    std::size_t column() const noexcept { return m_column; }
    const std::vector<std::string> &expected() const noexcept { return m_expected; }
    // Set for UnknownVariable.
    const std::string &offender() const noexcept { return m_offender; }

private:
    std::size_t m_line;
    std::size_t m_column;
    std::vector<std::string> m_expected;
    std::string m_offender;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string &message)
{
    throw Error(kind, message);
}

} // namespace entrolib
