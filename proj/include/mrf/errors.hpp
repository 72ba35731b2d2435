#pragma once

#include <stdexcept>
#include <string>

namespace mrf {

// Malformed input: broken invariants, unmet preconditions, schema violations.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// An enumeration guard tripped: the instance is too large for desk-scale
// exhaustive treatment. Never silently truncated.
class ResourceLimitError : public std::runtime_error {
public:
    explicit ResourceLimitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mrf
