#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace camg {

using index_t = std::int64_t;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

class SingularMatrixError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class SetupError : public Error {
public:
    using Error::Error;
};

class UnsupportedConfigurationError : public Error {
public:
    using Error::Error;
};

class AssemblyError : public Error {
public:
    using Error::Error;
};

[[noreturn]] inline void throw_dimension(const std::string& what) { throw DimensionError(what); }

inline void require_dims(bool ok, const char* what) {
    if (!ok) throw_dimension(what);
}

}  // namespace camg
