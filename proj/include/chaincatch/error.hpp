#pragma once

#include <stdexcept>
#include <string>

namespace chaincatch {

// A configuration or state violates a domain invariant (CLI exit code 1).
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input text: config files, position files, traces.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, int line)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    int line() const noexcept { return line_; }

private:
    int line_;
};

// Calling an operation outside its contract, e.g. stepping a finished game.
class ContractError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

// No escapees remain when one is required.
class GameOverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace chaincatch
