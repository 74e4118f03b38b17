#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace plap {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised when a derivative is requested at a point where it is unbounded.
class SingularPointError : public Error {
public:
    using Error::Error;
};

/// Two objects live on meshes that are not the same or not nested.
class MeshMismatchError : public Error {
public:
    using Error::Error;
};

/// An iterative method exhausted its iteration budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

/// Shapes or sizes of arguments disagree (time grids, modes, ratios).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// A Monte Carlo sample failed; carries the sample index.
class SampleError : public Error {
public:
    SampleError(std::size_t index, const std::string& what)
        : Error("sample " + std::to_string(index) + ": " + what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Configuration text could not be parsed or failed validation.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0, std::string key = {})
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line),
          key_(std::move(key)) {}

    int line() const noexcept { return line_; }
    const std::string& key() const noexcept { return key_; }

private:
    int line_;
    std::string key_;
};

}  // namespace plap
