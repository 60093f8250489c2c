#pragma once

#include <stdexcept>
#include <string>

namespace weilmot {

/// Error categories surfaced by the library. The CLI maps these onto its
/// documented exit codes.
enum class errc {
    not_prime,
    degree_cap_exceeded,
    division_by_zero,
    field_mismatch,
    field_cap_exceeded,
    base_mismatch,
    factorization_cap_exceeded,
    not_integral,
    non_integral_sharp,
    root_finding_diverged,
    insufficient_data,
    no_rational_fit,
    parse_error,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::not_prime: return "NotPrime";
        case errc::degree_cap_exceeded: return "DegreeCapExceeded";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::field_mismatch: return "FieldMismatch";
        case errc::field_cap_exceeded: return "FieldCapExceeded";
        case errc::base_mismatch: return "BaseMismatch";
        case errc::factorization_cap_exceeded: return "FactorizationCapExceeded";
        case errc::not_integral: return "NotIntegral";
        case errc::non_integral_sharp: return "NonIntegralSharp";
        case errc::root_finding_diverged: return "RootFindingDiverged";
        case errc::insufficient_data: return "InsufficientData";
        case errc::no_rational_fit: return "NoRationalFit";
        case errc::parse_error: return "ParseError";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// Parse failure with a position. line/column are 1-based; 0 means unknown.
class ParseError : public Error {
public:
    ParseError(const std::string& what, int line = 0, int column = 0)
        : Error(errc::parse_error, make_what(what, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string make_what(const std::string& what, int line, int column) {
        if (line > 0 || column > 0)
            return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what;
        return what;
    }
    int line_;
    int column_;
};

}  // namespace weilmot
