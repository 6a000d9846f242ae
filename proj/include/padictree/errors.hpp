#pragma once

#include <stdexcept>
#include <string>

namespace padictree {

/// Machine-readable failure category. The CLI maps these onto exit codes.
enum class ErrorKind {
  input,            // malformed or invariant-violating input
  precision,        // truncation made a decision indeterminate
  field_too_small,  // residue field cannot host the requested branching
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string reason, const std::string& message)
      : std::runtime_error(message), kind_(kind), reason_(std::move(reason)) {}

  ErrorKind kind() const noexcept { return kind_; }
  /// Short snake_case tag naming the violated invariant.
  const std::string& reason() const noexcept { return reason_; }

 private:
  ErrorKind kind_;
  std::string reason_;
};

class InputError : public Error {
 public:
  InputError(std::string reason, const std::string& message)
      : Error(ErrorKind::input, std::move(reason), message) {}
};

class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& message)
      : Error(ErrorKind::precision, "precision_indeterminate", message) {}
};

class FieldTooSmallError : public Error {
 public:
  FieldTooSmallError(int required_branching, int suggested_degree,
                     const std::string& message)
      : Error(ErrorKind::field_too_small, "field_too_small", message),
        required_branching_(required_branching),
        suggested_degree_(suggested_degree) {}

  int required_branching() const noexcept { return required_branching_; }
  /// Minimal residue degree m' with p^m' >= required branching.
  int suggested_degree() const noexcept { return suggested_degree_; }

 private:
  int required_branching_;
  int suggested_degree_;
};

}  // namespace padictree
