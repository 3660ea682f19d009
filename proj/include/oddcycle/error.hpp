#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace oddcycle {

// Invalid arguments: infeasible generator parameters, out-of-range constants,
// overlapping sets passed where disjoint ones are required.
class ParameterError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Malformed edge-list or report input. `line` is 1-based, 0 when the error
// is not tied to a specific line.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

// The iterative eigensolver ran out of its iteration budget.
class ConvergenceError : public std::runtime_error {
public:
    ConvergenceError(const std::string& what, double residual)
        : std::runtime_error(what + " (residual " + std::to_string(residual) + ")"),
          residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

// Cleanup produced an empty vertex set. `trace` holds |W|, |X_1|, ..., |X_t|.
class DegenerateError : public std::runtime_error {
public:
    DegenerateError(const std::string& what, std::vector<std::size_t> trace)
        : std::runtime_error(what), trace_(std::move(trace)) {}

    const std::vector<std::size_t>& trace() const noexcept { return trace_; }

private:
    std::vector<std::size_t> trace_;
};

struct ExtractionStats {
    std::size_t attempts = 0;
    std::size_t best_bad_vertices = 0;
    std::size_t cleanup_rounds = 0;
    double failure_bound = 1.0;
};

// Blow-up extraction failed at a named stage ("precondition", "cleanup",
// "size", "partition").
class ExtractionError : public std::runtime_error {
public:
    using Stats = ExtractionStats;

    ExtractionError(std::string stage, const std::string& what, Stats stats = {})
        : std::runtime_error(stage + ": " + what), stage_(std::move(stage)), stats_(stats) {}

    const std::string& stage() const noexcept { return stage_; }
    const Stats& stats() const noexcept { return stats_; }

private:
    std::string stage_;
    Stats stats_;
};

}  // namespace oddcycle
