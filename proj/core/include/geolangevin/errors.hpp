#pragma once

#include <stdexcept>
#include <string>

namespace geolangevin {

/// Input outside an operation's domain (puncture violation, too-short grid, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration. `key()` names the offending dotted key
/// when one is known.
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what, std::string key = {})
        : std::invalid_argument(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

/// A numerical procedure could not deliver a trustworthy answer
/// (ill-conditioned fit, aliased phase increment, aborted path, ...).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace geolangevin
