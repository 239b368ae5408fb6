#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace tzitzeica {

// Bad argument to a pure function (pole, singular point, out of range).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ODE integration broke down at a given spectral parameter.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double lambda)
        : std::runtime_error(what), lambda_(lambda) {}
    double lambda() const noexcept { return lambda_; }

private:
    double lambda_;
};

// |s11| fell below the soliton tolerance; the no-soliton assumption is violated.
class SolitonSuspicion : public std::runtime_error {
public:
    SolitonSuspicion(const std::string& what, double lambda, double s11_abs)
        : std::runtime_error(what), lambda_(lambda), s11_abs_(s11_abs) {}
    double lambda() const noexcept { return lambda_; }
    double s11_abs() const noexcept { return s11_abs_; }

private:
    double lambda_;
    double s11_abs_;
};

// Grid sweep failure; carries every offending lambda.
class SweepError : public std::runtime_error {
public:
    SweepError(const std::string& what, std::vector<double> lambdas)
        : std::runtime_error(what), lambdas_(std::move(lambdas)) {}
    const std::vector<double>& lambdas() const noexcept { return lambdas_; }

private:
    std::vector<double> lambdas_;
};

class ConsistencyError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// PDE solver: CFL violation, blowup, undersized domain.
class StabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Asymptotic amplitude too large for log(1 + ...).
class ValidityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

} // namespace tzitzeica
