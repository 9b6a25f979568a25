#ifndef VETO_ERRORS_HPP
#define VETO_ERRORS_HPP

#include <optional>
#include <stdexcept>
#include <string>

namespace veto {

class error : public std::runtime_error {
public:
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Bad argument or malformed record.
class validation_error : public error {
public:
  using error::error;
};

// Violation of the veto schedule or availability. Carries the step at which
// the offending decision was attempted.
class veto_error : public error {
public:
  veto_error(const std::string& what, int step) : error(what), step_(step) {}
  int step() const noexcept { return step_; }

private:
  int step_;
};

class turn_order_error : public veto_error {
public:
  using veto_error::veto_error;
};

class unavailable_map_error : public veto_error {
public:
  using veto_error::veto_error;
};

class incomplete_veto_error : public veto_error {
public:
  using veto_error::veto_error;
};

// An estimator has no defined value, e.g. all importance weights are zero.
class estimation_error : public error {
public:
  using error::error;
};

class training_error : public error {
public:
  using error::error;
};

}  // namespace veto

#endif  // VETO_ERRORS_HPP
