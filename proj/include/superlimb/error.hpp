#pragma once

#include <stdexcept>
#include <string>

namespace superlimb {

enum class ErrorCode {
  // validation / configuration
  DimensionMismatch,
  BadModel,
  BadLevel,
  BadBand,
  BadWindow,
  ParseError,
  MissingFile,
  // numeric failures
  RankDeficient,
  SingularWeight,
  NonFinite,
  NotSymmetric,
  Singular,
  SingularStiffness,
  IkFailure,
  Unachievable,
  NumericBlowup,
};

const char* to_string(ErrorCode code);

/// True for errors caused by bad input rather than by the numerics.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised by kinematics when the coupled Jacobian is too ill-conditioned.
class SingularError : public Error {
 public:
  SingularError(double cond, const std::string& what)
      : Error(ErrorCode::Singular, what), cond_(cond) {}
  double condition_number() const noexcept { return cond_; }

 private:
  double cond_;
};

/// Scenario validation failure; `key()` is the dotted path of the offending entry.
class ParseError : public Error {
 public:
  ParseError(std::string key, const std::string& reason)
      : Error(ErrorCode::ParseError, key + ": " + reason), key_(std::move(key)), reason_(reason) {}
  const std::string& key() const noexcept { return key_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string key_;
  std::string reason_;
};

}  // namespace superlimb
