#pragma once

#include <stdexcept>
#include <string>

namespace irg {

// Invalid or inconsistent configuration (bad parameters, malformed files).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the domain on which an operation is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The request is well-formed but exceeds what the chosen method supports.
class CapabilityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class CalibrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace irg
