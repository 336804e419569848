#pragma once

#include <stdexcept>
#include <string>

namespace circlt {

/// Invalid or off-grid time arguments.
class grid_error : public std::invalid_argument {
public:
    explicit grid_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Enumeration or sampling work would exceed the configured budget.
class budget_error : public std::runtime_error {
public:
    budget_error(const std::string& what, double required, double budget)
        : std::runtime_error(what), required_iterations(required), budget_iterations(budget) {}
    double required_iterations;
    double budget_iterations;
};

/// Two series that must share an ensemble (paired replicas) do not.
class pairing_error : public std::invalid_argument {
public:
    explicit pairing_error(const std::string& what) : std::invalid_argument(what) {}
};

/// Config file missing, malformed, or holding invalid field values.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace circlt
