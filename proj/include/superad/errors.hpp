#pragma once

#include <stdexcept>
#include <string>

namespace superad {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  /// Short machine-readable category, e.g. "bound_violation".
  virtual const char* kind() const noexcept { return "error"; }
  /// True for failed numerical assertions (bounds, accuracy, consistency);
  /// false for rejected inputs and configuration problems.
  virtual bool is_assertion() const noexcept { return false; }
};

class InvalidInput : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "invalid_input"; }
};

class CapacityError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "capacity"; }
};

class NonIntegrable : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "non_integrable"; }
};

class TruncationOrderZero : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "truncation_order_zero"; }
};

class ConfigRejected : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "config_rejected"; }
};

class InternalConsistency : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "internal_consistency"; }
  bool is_assertion() const noexcept override { return true; }
};

class BoundViolation : public Error {
 public:
  BoundViolation(int order, std::string bound, const std::string& detail)
      : Error("bound '" + bound + "' violated at n=" + std::to_string(order) + ": " + detail),
        order_(order),
        bound_(std::move(bound)) {}
  const char* kind() const noexcept override { return "bound_violation"; }
  bool is_assertion() const noexcept override { return true; }
  int order() const noexcept { return order_; }
  const std::string& bound() const noexcept { return bound_; }

 private:
  int order_;
  std::string bound_;
};

class AccuracyFailure : public Error {
 public:
  AccuracyFailure(const std::string& what, double achieved)
      : Error(what), achieved_(achieved) {}
  const char* kind() const noexcept override { return "accuracy_failure"; }
  bool is_assertion() const noexcept override { return true; }
  double achieved() const noexcept { return achieved_; }

 private:
  double achieved_;
};

class StiffnessError : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "stiffness"; }
  bool is_assertion() const noexcept override { return true; }
};

}  // namespace superad
