#pragma once

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace phs3 {

using complexd = std::complex<double>;
using std::numbers::pi;

// invalid user input or violated precondition; CLI maps this to exit code 2
struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// a numerical process failed its own quality gate; CLI maps this to exit code 3
struct numerical_error : std::runtime_error {
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// request exceeds a documented resource cap
struct resource_error : std::runtime_error {
    explicit resource_error(const std::string& msg) : std::runtime_error(msg) {}
};

inline double sq(double x) { return x * x; }

}  // namespace phs3
