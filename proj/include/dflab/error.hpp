#pragma once

#include <stdexcept>
#include <string>

namespace dflab {

enum class ErrorCode {
  InvalidDomain,
  EmptyInterior,
  InvalidMeasure,
  AsymmetricForm,
  DomainMismatch,
  InvalidTime,
  InvalidArgument,
  Parse,
  Internal,
};

const char* to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above; the C
/// API maps them one-to-one onto dflab_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dflab
