#pragma once

#include <stdexcept>
#include <string>

namespace geomech {

// Base for every failure raised by the library. Callers that only need to
// distinguish "bad input" from "solver gave up" can catch the two
// intermediate classes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class NotSkew : public InputError {
 public:
  using InputError::InputError;
};

class InvalidRotation : public InputError {
 public:
  using InputError::InputError;
};

class InvalidInertia : public InputError {
 public:
  using InputError::InputError;
};

class SingularInput : public InputError {
 public:
  using InputError::InputError;
};

class DegenerateMean : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class NoConvergence : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class AntipodalError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class DegenerateHeading : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class ZeroForce : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ZeroRotorSpeed : public InputError {
 public:
  using InputError::InputError;
};

/// A numerical failure tagged with the step at which a time loop stopped.
class StepFailure : public NumericalError {
 public:
  StepFailure(const std::string& what, long step, double time)
      : NumericalError(what + " (step " + std::to_string(step) + ", t = " + std::to_string(time) + " s)"),
        step_(step),
        time_(time) {}

  long step() const { return step_; }
  double time() const { return time_; }

 private:
  long step_;
  double time_;
};

}  // namespace geomech
