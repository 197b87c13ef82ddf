#ifndef GARLAND_ERRORS_HPP
#define GARLAND_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace garland {

/// Input does not match the expected JSON/config schema.
struct SchemaError : std::runtime_error {
    explicit SchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Mathematically invalid request (even q, non-unit eigenvalue, negative radius, ...).
struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical solver failed to converge where a solution should exist.
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace garland

#endif
