#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sosgap {

enum class ErrorKind {
  InvalidParams,
  InvalidSupport,
  RademacherWithSignal,
  TooLarge,
  MissingValue,
  NotBinary,
  CertificateUndefined,
  Overflow,
  EigFailure,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace sosgap
