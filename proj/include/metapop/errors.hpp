#pragma once

#include <stdexcept>
#include <string>

namespace metapop {

// Violated regime assumption or operation precondition. The CLI maps this
// to exit code 2.
class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical failure: lost bracket, non-convergent relaxation, singular
// linear solve. The CLI maps this to exit code 3.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace metapop
