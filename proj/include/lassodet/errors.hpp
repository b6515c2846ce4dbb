#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace lassodet {

// Argument violates a shape constraint (n, p, index ranges).
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class ZeroVarianceColumn : public std::invalid_argument {
public:
    explicit ZeroVarianceColumn(std::size_t column)
        : std::invalid_argument("zero-variance column " + std::to_string(column) +
                                " cannot be standardized"),
          column_(column) {}
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t column_;
};

class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(double lambda, long sweeps, double max_change)
        : std::runtime_error("coordinate descent did not converge at lambda=" +
                             std::to_string(lambda) + " after " + std::to_string(sweeps) +
                             " sweeps (largest weighted update " +
                             std::to_string(max_change) + ")"),
          lambda_(lambda), sweeps_(sweeps), max_change_(max_change) {}

    double lambda() const noexcept { return lambda_; }
    long sweeps() const noexcept { return sweeps_; }
    double max_change() const noexcept { return max_change_; }

private:
    double lambda_;
    long sweeps_;
    double max_change_;
};

// Malformed text input. line/column are 1-based; 0 means "not applicable".
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column = 0)
        : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    static std::string format(const std::string& what, std::size_t line, std::size_t column) {
        std::string out = "line " + std::to_string(line);
        if (column != 0) out += ", column " + std::to_string(column);
        return out + ": " + what;
    }

    std::size_t line_;
    std::size_t column_;
};

}  // namespace lassodet
