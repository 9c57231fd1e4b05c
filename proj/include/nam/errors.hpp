#pragma once

#include <stdexcept>
#include <string>

namespace nam {

// Not enough valid digits to answer the question exactly.
struct precision_error : std::runtime_error {
    explicit precision_error(const std::string& what) : std::runtime_error(what) {}
};

// A query reached into the analytically folded tail of a windowed object.
struct coverage_error : std::runtime_error {
    explicit coverage_error(const std::string& what) : std::runtime_error(what) {}
};

// An integral or series has no convergent value for the given parameters.
struct divergence_error : std::runtime_error {
    explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nam
