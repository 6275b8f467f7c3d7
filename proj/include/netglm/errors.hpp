#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace netglm {

// Error categories map onto CLI exit codes (see tools/netglm.cpp).
enum class ErrorKind { Config, Numerical, Data };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error(ErrorKind::Config, what) {}
};

class DataError : public Error {
public:
    explicit DataError(const std::string& what) : Error(ErrorKind::Data, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorKind::Numerical, what) {}
};

/// Argument outside the domain of a family function (non-finite predictor,
/// negative Poisson count, ...).
class DomainError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DegenerateDesignError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EmptyNetworkError : public DataError {
public:
    using DataError::DataError;
};

class IoError : public DataError {
public:
    using DataError::DataError;
};

class ParseError : public DataError {
public:
    ParseError(const std::string& what, long line) : DataError(what), line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

class InfeasibleDensityError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class OverflowError : public NumericalError {
public:
    OverflowError(const std::string& what, long row) : NumericalError(what), row_(row) {}
    long row() const noexcept { return row_; }

private:
    long row_;
};

/// Wald functional whose projected design vanishes; the test is not meaningful.
class DegenerateFunctionalError : public NumericalError {
public:
    DegenerateFunctionalError(const std::string& what, double condition_value)
        : NumericalError(what), condition_value_(condition_value) {}
    double condition_value() const noexcept { return condition_value_; }

private:
    double condition_value_;
};

class CollinearityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

struct IterateRecord {
    int iteration = 0;
    double score_norm = 0.0;
    double step_norm = 0.0;
    double log_likelihood = 0.0;
};

class ConvergenceError : public NumericalError {
public:
    ConvergenceError(const std::string& what, std::vector<IterateRecord> history)
        : NumericalError(what), history_(std::move(history)) {}
    const std::vector<IterateRecord>& history() const noexcept { return history_; }

private:
    std::vector<IterateRecord> history_;
};

}  // namespace netglm
