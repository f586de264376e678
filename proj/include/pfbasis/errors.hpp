#pragma once

#include <stdexcept>
#include <string>

namespace pfb {

// Malformed digit or index: a value outside its declared alphabet.
struct RangeError : std::out_of_range {
    explicit RangeError(const std::string& what) : std::out_of_range(what) {}
};

// Structurally incompatible arguments (party counts, table lengths, dims).
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& what) : std::invalid_argument(what) {}
};

// A search space exceeded the configured cap.
struct SizeError : std::runtime_error {
    explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

// A fixed-point equation had no solution or several; the candidate process
// is logically inconsistent under the requested wiring.
struct ConsistencyError : std::runtime_error {
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

// Missing or contradictory user-supplied annotations (labels, unitaries).
struct InputError : std::invalid_argument {
    explicit InputError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace pfb
