#ifndef QBFCS_ERRORS_HPP
#define QBFCS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbfcs {

// Fock-space cutoff cannot represent the requested state at the requested
// tail tolerance (or a caller supplied a cutoff below the feasible one).
class TruncationError : public std::runtime_error {
public:
    explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed run configuration (file, key, or value).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace qbfcs

#endif
