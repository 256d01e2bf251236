#include "dsnls/errors.hpp"

namespace ds {

int exit_code(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config:
    case ErrorKind::Argument:
      return 2;
    case ErrorKind::Numerical:
      return 3;
    case ErrorKind::Io:
      return 4;
  }
  return 1;
}

const char* kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Argument: return "argument";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

}  // namespace ds
