#pragma once

#include <stdexcept>
#include <string>

namespace treealign {

// Bad caller input: malformed files, invalid ids, violated preconditions.
// The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
public:
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

// A quantity is mathematically undefined for the given input (e.g. a
// 2-depth-level tree over a node carrying no mass, F-beta with one class).
class DegenerateError : public std::domain_error {
public:
    explicit DegenerateError(const std::string& what) : std::domain_error(what) {}
};

[[noreturn]] void throw_input(const std::string& what);

}  // namespace treealign
