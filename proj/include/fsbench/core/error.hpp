#pragma once

#include <stdexcept>
#include <string>

namespace fsbench {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration, manifest, or CLI arguments. Exit code 2.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Malformed or degenerate input data. Exit code 3.
class DataError : public Error {
public:
    using Error::Error;
};

/// LLM provider transport, payload, or validation failure. Exit code 4.
class ProviderError : public Error {
public:
    using Error::Error;
};

/// Model fitting or evaluation failure. Exit code 5.
class EvalError : public Error {
public:
    using Error::Error;
};

inline int exit_code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return 2;
    if (dynamic_cast<const DataError*>(&e)) return 3;
    if (dynamic_cast<const ProviderError*>(&e)) return 4;
    if (dynamic_cast<const EvalError*>(&e)) return 5;
    return 1;
}

} // namespace fsbench
