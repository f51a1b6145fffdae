#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace abcpred {

/// Caller passed arguments that violate an operation's preconditions.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A weighted sample carries no mass (all weights zero).
class DegenerateSampleError : public std::runtime_error {
public:
    DegenerateSampleError(const std::string& what, double min_discrepancy)
        : std::runtime_error(what), min_discrepancy_(min_discrepancy) {}
    double min_discrepancy() const noexcept { return min_discrepancy_; }

private:
    double min_discrepancy_;
};

/// No admissible starting state for a chain was found within the budget.
class InitError : public std::runtime_error {
public:
    InitError(const std::string& what, std::vector<double> min_discrepancy)
        : std::runtime_error(what), min_discrepancy_(std::move(min_discrepancy)) {}
    const std::vector<double>& min_discrepancy() const noexcept { return min_discrepancy_; }

private:
    std::vector<double> min_discrepancy_;
};

/// Pilot runs produced a summary component with no spread.
class CalibrationError : public std::runtime_error {
public:
    CalibrationError(const std::string& what, std::size_t component)
        : std::runtime_error(what), component_(component) {}
    std::size_t component() const noexcept { return component_; }

private:
    std::size_t component_;
};

/// Experiment configuration failed validation; every problem is listed.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(std::vector<std::string> problems);
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    std::vector<std::string> problems_;
};

}  // namespace abcpred
