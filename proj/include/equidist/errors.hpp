#pragma once

#include <stdexcept>
#include <string>

namespace equidist {

// Base of every error raised by the library. The CLI maps the concrete
// subclasses onto process exit codes.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An argument lies outside the mathematical domain of an operation
// (non-positive time, point off the manifold, degenerate input, ...).
class DomainError : public Error {
public:
  using Error::Error;
};

// The requested method cannot run at this scale; the message names the cap.
class InfeasibleError : public Error {
public:
  using Error::Error;
};

// A computed result violated an invariant that holds mathematically.
class DataCorruption : public Error {
public:
  using Error::Error;
};

class InputError : public Error {
public:
  using Error::Error;
};

class ConfigError : public Error {
public:
  using Error::Error;
};

namespace detail {

[[noreturn]] inline void domain_fail(const std::string& where, const std::string& what) {
  throw DomainError(where + ": " + what);
}

} // namespace detail
} // namespace equidist
