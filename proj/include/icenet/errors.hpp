#pragma once

#include <stdexcept>
#include <string>

namespace icenet {

struct DimensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Violated precondition of an operation (empty batch, non-scalar loss, ...).
struct ContractError : std::logic_error {
    using std::logic_error::logic_error;
};

struct SamplingError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MissingWordError : std::runtime_error {
    explicit MissingWordError(const std::string& w)
        : std::runtime_error("word not in embedding table: " + w), word(w) {}
    std::string word;
};

}  // namespace icenet
