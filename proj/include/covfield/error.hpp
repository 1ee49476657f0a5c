#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace covfield {

enum class ErrorKind {
  AntipodalPoint,
  CoincidentPoint,
  NotPositiveDefinite,
  DimensionMismatch,
  FrameMismatch,
  ObservationMismatch,
  NotHemispheric,
  IterationLimit,
  TooFewPairs,
  SampleSizeMismatch,
  InvalidArgument,
  IoError,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Input/data problems versus numerical breakdowns; the CLI maps these to exit codes.
inline bool is_numerical(ErrorKind kind) {
  return kind == ErrorKind::NotPositiveDefinite || kind == ErrorKind::IterationLimit;
}

}  // namespace covfield
