#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace parastep {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction of a domain object (point off the half-plane,
/// negative mass, inconsistent measure metadata...).
class DomainError : public Error {
 public:
  using Error::Error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, std::size_t offset)
      : Error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

class EvalError : public Error {
 public:
  using Error::Error;
};

/// The adaptive quadrature could not meet its tolerance within the budget.
class QuadratureFailure : public Error {
 public:
  using Error::Error;
};

class NotL1 : public Error {
 public:
  using Error::Error;
};

class NotHalfLine : public Error {
 public:
  using Error::Error;
};

class SearchFailure : public Error {
 public:
  using Error::Error;
};

class InvalidTrace : public Error {
 public:
  using Error::Error;
};

class DegenerateStep : public Error {
 public:
  using Error::Error;
};

class IdentityMap : public Error {
 public:
  using Error::Error;
};

/// Malformed map-spec file; `path()` is the JSON field path of the offender.
class SpecError : public Error {
 public:
  SpecError(const std::string& path, const std::string& what) : Error(path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace parastep
