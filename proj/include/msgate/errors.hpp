#pragma once

#include <stdexcept>
#include <string>

namespace msgate {

// Bad or inconsistent input data (maps to CLI exit code 2).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical gate failed: norm drift, non-convergence, ill-posed solve
// (maps to CLI exit code 3).
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace msgate
