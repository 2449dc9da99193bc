#pragma once

#include <stdexcept>
#include <string>

namespace spherebl {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NotMaximal : public Error {
 public:
  using Error::Error;
};

class EmptySymmetry : public Error {
 public:
  using Error::Error;
};

class EmptyFamily : public Error {
 public:
  using Error::Error;
};

/// Every function of the family is constant: some complement is empty.
class DegenerateFamily : public Error {
 public:
  using Error::Error;
};

class InvalidType : public Error {
 public:
  using Error::Error;
};

class CapExceeded : public Error {
 public:
  CapExceeded(const std::string& what, std::string count)
      : Error(what), count_(std::move(count)) {}
  /// Exact family size that tripped the cap, in decimal.
  const std::string& count() const noexcept { return count_; }

 private:
  std::string count_;
};

class NonPositiveDelta : public Error {
 public:
  using Error::Error;
};

class NonFiniteSample : public Error {
 public:
  using Error::Error;
};

/// Malformed user input; `path` points into the offending JSON field.
class InputError : public Error {
 public:
  InputError(std::string path, const std::string& message)
      : Error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

}  // namespace spherebl
