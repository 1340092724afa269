#pragma once

#include <stdexcept>
#include <string>

namespace cmg {

/// Malformed or inconsistent input data.
struct StructuralError : std::runtime_error {
    explicit StructuralError(const std::string& m) : std::runtime_error(m) {}
};

/// Parameter outside its documented validity range.
struct ParameterError : std::invalid_argument {
    explicit ParameterError(const std::string& m) : std::invalid_argument(m) {}
};

/// Instance exceeds a configured resource cap.
struct ResourceError : std::runtime_error {
    explicit ResourceError(const std::string& m) : std::runtime_error(m) {}
};

/// A constructed object failed one of its required conditions; the message
/// names the violating witness.
struct BuildError : std::runtime_error {
    explicit BuildError(const std::string& m) : std::runtime_error(m) {}
};

} // namespace cmg
