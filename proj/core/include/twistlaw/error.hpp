#pragma once

#include <stdexcept>
#include <string>

namespace twistlaw {

// Violated precondition on an argument (bad matrix, bad parameter range, ...).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Input outside the domain of a closed-form formula.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The ray runs to the tangency point of a horoball; the excursion never ends.
class UnboundedExcursion : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class PrecisionExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed origami text record or config value. `token` names the offending piece.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::string token)
        : std::runtime_error(what + " (at '" + token + "')"), token_(std::move(token)) {}
    const std::string& token() const noexcept { return token_; }

private:
    std::string token_;
};

} // namespace twistlaw
