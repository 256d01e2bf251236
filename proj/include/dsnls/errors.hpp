#pragma once

#include <stdexcept>
#include <string>

namespace ds {

enum class ErrorKind { Config, Argument, Numerical, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& w) : Error(ErrorKind::Config, w) {}
};
struct ArgumentError : Error {
  explicit ArgumentError(const std::string& w) : Error(ErrorKind::Argument, w) {}
};
struct NumericalError : Error {
  explicit NumericalError(const std::string& w) : Error(ErrorKind::Numerical, w) {}
};
struct IoError : Error {
  explicit IoError(const std::string& w) : Error(ErrorKind::Io, w) {}
};

// Process exit code used by the CLI: 2 config/usage, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind) noexcept;
const char* kind_name(ErrorKind kind) noexcept;

}  // namespace ds
