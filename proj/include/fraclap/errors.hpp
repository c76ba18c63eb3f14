#pragma once

#include <stdexcept>
#include <string>

namespace fraclap {

/// Base class for all library errors.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameter or argument outside its mathematical domain.
class domain_error : public error {
public:
    using error::error;
};

/// Problem size exceeds a configured memory/time budget.
class resource_error : public error {
public:
    using error::error;
};

/// Eigenfunction extension requested at (or too close to) a forbidden eigenvalue.
class extension_error : public error {
public:
    using error::error;
};

/// An internal cross-check failed (counting identity, decimation/oracle mismatch, ...).
class consistency_error : public error {
public:
    using error::error;
};

/// A numerical routine failed to converge or lost too much accuracy.
class numerical_error : public error {
public:
    using error::error;
};

/// Violated precondition (bad parity, malformed genealogy, ...).
class precondition_error : public error {
public:
    using error::error;
};

} // namespace fraclap
