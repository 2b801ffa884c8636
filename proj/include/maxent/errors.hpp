#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxent {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// No forward price supplied and none recoverable from a K = 0 quote.
class MissingForward : public Error {
public:
    MissingForward() : Error("no forward given and no K=0 quote present") {}
};

/// Call-spread digital requested at a strike lacking a neighbour on one side.
class BoundaryStrike : public Error {
public:
    explicit BoundaryStrike(double strike)
        : Error("no call-spread neighbour on both sides of strike " + std::to_string(strike)),
          strike_(strike) {}
    double strike() const noexcept { return strike_; }

private:
    double strike_;
};

/// Option price outside its static no-arbitrage bounds.
class OutOfRange : public Error {
public:
    using Error::Error;
};

/// One violated slice invariant. `bucket` is the bucket (or strike) index it refers to.
struct Violation {
    std::size_t bucket = 0;
    std::string what;
};

class ValidationError : public Error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Bucket inputs admit no density (mean ratio outside the bucket, non-positive tail prices).
class ArbitrageError : public Error {
public:
    ArbitrageError(std::size_t bucket, const std::string& what)
        : Error("bucket " + std::to_string(bucket) + ": " + what), bucket_(bucket) {}
    std::size_t bucket() const noexcept { return bucket_; }

private:
    std::size_t bucket_;
};

/// Exponential family with a non-decaying tail.
class IntegrabilityError : public Error {
public:
    using Error::Error;
};

/// Iterative solver stopped without meeting its tolerance.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double best_residual)
        : Error(what + " (best residual " + std::to_string(best_residual) + ")"),
          best_residual_(best_residual) {}
    double best_residual() const noexcept { return best_residual_; }

private:
    double best_residual_;
};

} // namespace maxent
