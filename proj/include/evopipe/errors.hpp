#pragma once

#include <stdexcept>
#include <string>

namespace evopipe {

// Bad user input: unknown primitive, invalid flag combination, malformed file.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A single pipeline evaluation ran past its wall-clock allowance. Caught at
// the evaluation boundary and turned into a failed(timeout) outcome.
struct EvalTimeout : std::runtime_error {
    EvalTimeout() : std::runtime_error("evaluation timeout") {}
};

} // namespace evopipe
